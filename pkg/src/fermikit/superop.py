"""Superoperators acting on vectorized operators.

``vec(A)`` is row-major: the entry ``A[row, col]`` sits at ``row * D + col``.
A superoperator from the algebra of ``source`` to that of ``target`` is a
``4**|target| x 4**|source|`` matrix.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from fermikit.algebra import Operator
from fermikit.core.config import get_settings, resolve_tol
from fermikit.core.errors import DomainError, ShapeError
from fermikit.modes import ModeSet


def vec(op: Operator) -> npt.NDArray[np.complex128]:
    return op.matrix.reshape(-1)


def unvec(modes: ModeSet, vector: npt.NDArray[np.complex128]) -> Operator:
    return Operator(modes, np.asarray(vector).reshape(modes.dim, modes.dim))


def _check_map_cap(*mode_sets: ModeSet) -> None:
    cap = get_settings().max_map_modes
    for modes in mode_sets:
        if len(modes) > cap:
            raise DomainError(f"Maps on {len(modes)} modes exceed the map-level cap of {cap} modes.")


@dataclass(frozen=True, eq=False)
class SuperOp:
    """A linear map between operator algebras, stored densely."""

    source: ModeSet
    target: ModeSet
    matrix: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        _check_map_cap(self.source, self.target)
        matrix = np.array(self.matrix, dtype=np.complex128)
        shape = (self.target.dim**2, self.source.dim**2)
        if matrix.shape != shape:
            raise ShapeError(f"Map {self.source} -> {self.target} must have shape {shape}, got {matrix.shape}.")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, modes: ModeSet) -> SuperOp:
        return cls(modes, modes, np.eye(modes.dim**2, dtype=np.complex128))

    @classmethod
    def zeros(cls, source: ModeSet, target: ModeSet | None = None) -> SuperOp:
        target = source if target is None else target
        return cls(source, target, np.zeros((target.dim**2, source.dim**2), dtype=np.complex128))

    @classmethod
    def from_callable(
        cls, source: ModeSet, fn: Callable[[Operator], Operator], target: ModeSet | None = None
    ) -> SuperOp:
        """Tabulate a linear function column by column on the matrix units."""
        _check_map_cap(source)
        target = source if target is None else target
        dim = source.dim
        columns = []
        for k in range(dim * dim):
            unit = np.zeros(dim * dim, dtype=np.complex128)
            unit[k] = 1.0
            image = fn(unvec(source, unit))
            if image.modes != target:
                raise ShapeError(f"Function maps into {image.modes}, expected {target}.")
            columns.append(vec(image))
        return cls(source, target, np.stack(columns, axis=1))

    @property
    def modes(self) -> ModeSet:
        """The mode set of an endomorphism."""
        if self.source != self.target:
            raise ShapeError(f"Map {self.source} -> {self.target} is not an endomorphism.")
        return self.source

    def __call__(self, op: Operator) -> Operator:
        return apply(self, op)

    def __matmul__(self, other: SuperOp) -> SuperOp:
        return compose(self, other)

    def __add__(self, other: SuperOp) -> SuperOp:
        self._same_shape(other)
        return SuperOp(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: SuperOp) -> SuperOp:
        self._same_shape(other)
        return SuperOp(self.source, self.target, self.matrix - other.matrix)

    def __mul__(self, value: complex) -> SuperOp:
        return SuperOp(self.source, self.target, self.matrix * value)

    __rmul__ = __mul__

    def __neg__(self) -> SuperOp:
        return SuperOp(self.source, self.target, -self.matrix)

    def _same_shape(self, other: SuperOp) -> None:
        if (self.source, self.target) != (other.source, other.target):
            raise ShapeError(
                f"Maps {self.source} -> {self.target} and {other.source} -> {other.target} are not comparable."
            )

    def adjoint(self) -> SuperOp:
        """Adjoint with respect to the Hilbert-Schmidt pairing."""
        return SuperOp(self.target, self.source, self.matrix.conj().T)

    def max_abs_diff(self, other: SuperOp) -> float:
        self._same_shape(other)
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def allclose(self, other: SuperOp, tol: float | None = None) -> bool:
        return self.max_abs_diff(other) <= resolve_tol(tol)


def apply(omega: SuperOp, op: Operator) -> Operator:
    if op.modes != omega.source:
        raise ShapeError(f"Map acts on {omega.source}, got an operator on {op.modes}.")
    return unvec(omega.target, omega.matrix @ vec(op))


def compose(outer: SuperOp, inner: SuperOp) -> SuperOp:
    """``outer o inner``."""
    if inner.target != outer.source:
        raise ShapeError(f"Cannot compose a map into {inner.target} with a map from {outer.source}.")
    return SuperOp(inner.source, outer.target, outer.matrix @ inner.matrix)


def pair_parity(modes: ModeSet, mask: int | None = None) -> npt.NDArray[np.int64]:
    """Parity of ``row xor col`` on `mask`, for every vec index of `modes`."""
    dim = modes.dim
    mask = modes.full_mask if mask is None else mask
    rows, cols = np.divmod(np.arange(dim * dim, dtype=np.int64), dim)
    return np.bitwise_count((rows ^ cols) & mask).astype(np.int64) & 1
