from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from fermikit.algebra import Operator
from fermikit.core.errors import ErrorKind, InputError, ShapeError, StateError
from fermikit.io import (
    dumps,
    load_operator,
    load_payload,
    load_state,
    load_superop,
    operator_payload,
    read_text,
    superop_payload,
    vector_payload,
)
from fermikit.maps import trace_map
from fermikit.modes import ModeSet
from fermikit.parity import StateVector
from fermikit.states import DensityMatrix
from fermikit.superop import SuperOp


def test_load_operator_with_and_without_imaginary_part() -> None:
    op = load_operator(json.dumps({"modes": [2], "re": [[1, 0.5], [0.5, 1]]}))
    assert op.modes == ModeSet((2,))
    assert op.matrix[0, 1] == 0.5
    op = load_operator(json.dumps({"modes": [1], "re": [[0, 0], [0, 0]], "im": [[0, 1], [-1, 0]]}))
    assert op.matrix[0, 1] == 1j


def test_payload_flags_pick_the_type() -> None:
    density = load_payload(json.dumps({"modes": [1], "re": [[0.5, 0], [0, 0.5]], "density": True}))
    assert isinstance(density, DensityMatrix)
    vector = load_payload(json.dumps({"modes": [1, 2], "re": [1, 0, 0, 0]}))
    assert isinstance(vector, StateVector)
    superop = load_payload(json.dumps({"modes": [1], "re": np.eye(4).tolist(), "super": True}))
    assert isinstance(superop, SuperOp)
    traced = load_superop(json.dumps({"modes": [1], "target": [], "re": [[1, 0, 0, 1]], "super": True}))
    assert traced.matrix.shape == (1, 4)


def test_load_state_validates() -> None:
    rho = load_state(json.dumps({"modes": [1], "re": [[1, 0], [0, 0]]}))
    assert rho.purity() == pytest.approx(1.0)
    assert isinstance(load_state(json.dumps({"modes": [1], "re": [0, 3]})), DensityMatrix)
    with pytest.raises(StateError):
        load_state(json.dumps({"modes": [1], "re": [[2, 0], [0, 0]]}))


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        json.dumps({"modes": [1], "re": [[1, 0], [0, 1]], "extra": 1}),
        json.dumps({"modes": [1], "re": [[1, 0], [0, 1]], "im": [[1, 0]]}),
        json.dumps({"modes": "1", "re": [[1, 0], [0, 1]]}),
    ],
)
def test_malformed_payloads(text: str) -> None:
    with pytest.raises(InputError) as exc_info:
        load_operator(text)
    assert exc_info.value.kind == ErrorKind.INVALID_INPUT


def test_shape_mismatch_is_a_shape_error() -> None:
    with pytest.raises(ShapeError):
        load_operator(json.dumps({"modes": [1, 2], "re": [[1, 0], [0, 1]]}))


def test_wrong_payload_kind() -> None:
    with pytest.raises(InputError):
        load_operator(json.dumps({"modes": [1], "re": [1, 0]}))
    with pytest.raises(InputError):
        load_superop(json.dumps({"modes": [1], "re": [[1, 0], [0, 1]]}))


def test_read_text(tmp_path: Path) -> None:
    path = tmp_path / "op.json"
    path.write_text("{}", encoding="utf-8")
    assert read_text(path) == "{}"
    with pytest.raises(InputError):
        read_text(tmp_path / "missing.json")


def test_rendering_rounds_to_significant_digits() -> None:
    op = Operator(ModeSet((1,)), np.array([[1 / 3, -0.0], [1e-17j, 2.0]]))
    payload = operator_payload(op, density=True)
    assert payload["re"][0] == [0.333333333333, 0.0]
    assert payload["im"][1][0] == 1e-17
    assert payload["density"] is True
    assert dumps(payload).endswith("}\n")
    assert "-0.0" not in dumps(payload)

    vector = vector_payload(StateVector(ModeSet((3,)), [1, 1j]))
    assert vector == {"modes": [3], "re": [1.0, 0.0], "im": [0.0, 1.0]}

    traced = superop_payload(trace_map(ModeSet((1,))))
    assert traced["super"] is True
    assert traced["target"] == []
