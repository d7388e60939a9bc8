"""JSON payloads for operators, vectors and maps."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from fermikit.algebra import Operator
from fermikit.core.config import get_settings
from fermikit.core.errors import InputError
from fermikit.core.results import significant
from fermikit.modes import ModeSet
from fermikit.parity import StateVector
from fermikit.states import DensityMatrix
from fermikit.superop import SuperOp


class _MatrixPayload(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    modes: list[int]
    re: list[list[float]]
    im: list[list[float]] | None = None
    density: bool = False
    is_super: bool = Field(default=False, alias="super")
    target: list[int] | None = None

    def values(self) -> npt.NDArray[np.complex128]:
        real = np.array(self.re, dtype=np.float64)
        if self.im is None:
            return real.astype(np.complex128)
        imag = np.array(self.im, dtype=np.float64)
        if imag.shape != real.shape:
            raise InputError(f"'re' has shape {real.shape} but 'im' has shape {imag.shape}.")
        return real + 1j * imag


class _VectorPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    modes: list[int]
    re: list[float]
    im: list[float] | None = None

    def values(self) -> npt.NDArray[np.complex128]:
        real = np.array(self.re, dtype=np.float64)
        imag = np.zeros_like(real) if self.im is None else np.array(self.im, dtype=np.float64)
        if imag.shape != real.shape:
            raise InputError(f"'re' has {real.size} entries but 'im' has {imag.size}.")
        return real + 1j * imag


def read_text(path: str | Path | None) -> str:
    """Read a file, or stdin for None and ``-``."""
    if path is None or str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"Cannot read {path}: {exc.strerror}.", cause=exc) from exc


def _load_json(text: str) -> dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"Input is not valid JSON: {exc.msg} at line {exc.lineno}.", cause=exc) from exc
    if not isinstance(data, dict):
        raise InputError("Input JSON must be an object.")
    return data


def _validate(model: type[BaseModel], data: dict[str, Any]) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InputError(f"Payload failed validation with {exc.error_count()} error(s).", cause=exc) from exc


def _is_vector(data: dict[str, Any]) -> bool:
    re = data.get("re")
    return isinstance(re, list) and not any(isinstance(row, list) for row in re)


def load_payload(text: str) -> Operator | DensityMatrix | StateVector | SuperOp:
    """Decode any payload; the ``density`` and ``super`` flags and the shape of ``re`` pick the type."""
    data = _load_json(text)
    if _is_vector(data):
        vector = _validate(_VectorPayload, data)
        return StateVector(ModeSet.of(vector.modes), vector.values())
    payload: _MatrixPayload = _validate(_MatrixPayload, data)
    modes = ModeSet.of(payload.modes)
    if payload.is_super:
        target = modes if payload.target is None else ModeSet.of(payload.target)
        return SuperOp(modes, target, payload.values())
    op = Operator(modes, payload.values())
    return DensityMatrix(op) if payload.density else op


def load_operator(text: str) -> Operator:
    value = load_payload(text)
    if isinstance(value, DensityMatrix):
        return value.op
    if not isinstance(value, Operator):
        raise InputError(f"Expected an operator payload, got a {type(value).__name__}.")
    return value


def load_state(text: str) -> DensityMatrix:
    """Decode an operator payload and validate it as a density matrix."""
    value = load_payload(text)
    if isinstance(value, DensityMatrix):
        return value
    if isinstance(value, Operator):
        return DensityMatrix(value)
    if isinstance(value, StateVector):
        return DensityMatrix.from_vector(value)
    raise InputError("Expected a state payload, got a map.")


def load_superop(text: str) -> SuperOp:
    value = load_payload(text)
    if not isinstance(value, SuperOp):
        raise InputError(f"Expected a map payload with \"super\": true, got a {type(value).__name__}.")
    return value


def _digits(digits: int | None) -> int:
    return get_settings().significant_digits if digits is None else digits


def _round(values: npt.NDArray[np.float64], digits: int) -> Any:
    # +0.0 instead of -0.0 keeps reports byte-stable
    return np.vectorize(lambda value: significant(float(value), digits) + 0.0, otypes=[float])(values).tolist()


def operator_payload(op: Operator, *, density: bool = False, digits: int | None = None) -> dict[str, Any]:
    digits = _digits(digits)
    payload: dict[str, Any] = {
        "modes": list(op.modes.labels),
        "re": _round(op.matrix.real, digits),
        "im": _round(op.matrix.imag, digits),
    }
    if density:
        payload["density"] = True
    return payload


def vector_payload(vector: StateVector, *, digits: int | None = None) -> dict[str, Any]:
    digits = _digits(digits)
    return {
        "modes": list(vector.modes.labels),
        "re": _round(vector.amplitudes.real, digits),
        "im": _round(vector.amplitudes.imag, digits),
    }


def superop_payload(omega: SuperOp, *, digits: int | None = None) -> dict[str, Any]:
    digits = _digits(digits)
    payload: dict[str, Any] = {
        "modes": list(omega.source.labels),
        "re": _round(omega.matrix.real, digits),
        "im": _round(omega.matrix.imag, digits),
        "super": True,
    }
    if omega.target != omega.source:
        payload["target"] = list(omega.target.labels)
    return payload


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2) + "\n"


def array_payload(matrix: npt.NDArray[np.complex128], *, digits: int | None = None) -> dict[str, Any]:
    """Bare ``re``/``im`` lists for matrices that carry no mode set of their own."""
    digits = _digits(digits)
    return {"re": _round(matrix.real, digits), "im": _round(matrix.imag, digits)}
