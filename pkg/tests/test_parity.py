from __future__ import annotations

import numpy as np
import pytest

from fermikit.algebra import Operator, SingleMode, embed, jw_ladder, ordered_product, random_operator, tensor_standard
from fermikit.core.errors import ErrorKind, InputError, SectorError, ShapeError
from fermikit.modes import ModeSet, OrderedPartition, Partition
from fermikit.parity import (
    ParityClass,
    ParityCounts,
    ParitySector,
    StateVector,
    all_even_part,
    local_parity_projector,
    operator_parity,
    parity_operator,
    parity_parts,
    parity_projector,
    parity_sectors,
    predict_psd,
    predict_self_adjoint,
    product_extension_classify,
    project_local_parity,
    theta,
    tps_unitary,
    tps_vector,
    vector_parity,
)
from fermikit.superop import SuperOp, apply

MODES = ModeSet.span(1, 3)
XI = Partition.parse("{1,3}|{2}")


def _even(rng: np.random.Generator, modes: ModeSet, *, hermitian: bool = False) -> Operator:
    return parity_parts(random_operator(rng, modes, hermitian=hermitian))[0]


def _odd(rng: np.random.Generator, modes: ModeSet, *, hermitian: bool = False) -> Operator:
    return parity_parts(random_operator(rng, modes, hermitian=hermitian))[1]


def test_parity_operator_and_projectors() -> None:
    np.testing.assert_allclose(np.diag(parity_operator(ModeSet.span(1, 2)).matrix).real, [1, -1, -1, 1])
    even, odd = parity_projector(MODES, 1), parity_projector(MODES, -1)
    assert (even + odd).max_abs_diff(Operator.identity(MODES)) == 0
    assert (even @ odd).max_abs() == 0
    with pytest.raises(SectorError):
        parity_projector(MODES, 0)


def test_operator_parity_classes(rng: np.random.Generator) -> None:
    ladder = jw_ladder(2, MODES, SingleMode.CREATE)
    number = jw_ladder(2, MODES, SingleMode.NUMBER)
    assert operator_parity(ladder) is ParityClass.ODD
    assert operator_parity(number) is ParityClass.EVEN
    assert operator_parity(ladder + number) is ParityClass.MIXED
    assert operator_parity(Operator.zeros(MODES)) is ParityClass.EVEN
    assert theta(ladder).max_abs_diff(-ladder) == 0
    op = random_operator(rng, MODES)
    even, odd = parity_parts(op)
    assert (even + odd).max_abs_diff(op) < 1e-15
    assert ParityClass.ODD.sign == -1
    assert ParityClass.MIXED.sign is None


def test_vector_parity() -> None:
    assert vector_parity(StateVector.basis(MODES, "011")) is ParityClass.EVEN
    assert vector_parity(StateVector.basis(MODES, "010")) is ParityClass.ODD
    mixed = StateVector(MODES, StateVector.vacuum(MODES).amplitudes + StateVector.basis(MODES, "100").amplitudes)
    assert vector_parity(mixed) is ParityClass.MIXED
    assert mixed.normalized().norm == pytest.approx(1.0)
    with pytest.raises(ShapeError):
        StateVector(MODES, np.ones(3))
    with pytest.raises(InputError):
        StateVector(MODES, np.full(8, np.nan))


def test_sector_parsing() -> None:
    eps = ParitySector.parse(XI, "+-")
    assert eps.signs == (1, -1)
    assert eps.sign_of(ModeSet((2,))) == -1
    assert str(eps) == "+-"
    assert len(list(ParitySector.all(XI))) == 4
    with pytest.raises(SectorError) as exc_info:
        ParitySector.parse(XI, "+")
    assert exc_info.value.kind == ErrorKind.SECTOR
    with pytest.raises(SectorError):
        ParitySector.parse(XI, "+x")


def test_local_sectors_resolve_the_identity(rng: np.random.Generator) -> None:
    op = random_operator(rng, MODES)
    total_vector = Operator.zeros(MODES)
    total_operator = Operator.zeros(MODES)
    for eps in ParitySector.all(XI):
        projector = local_parity_projector(XI, eps, "vector")
        assert isinstance(projector, Operator)
        assert (projector @ projector).max_abs_diff(projector) < 1e-15
        total_vector = total_vector + projector
        superop = local_parity_projector(XI, eps, "operator")
        assert isinstance(superop, SuperOp)
        block = project_local_parity(XI, eps, op)
        assert apply(superop, op).max_abs_diff(block) == 0
        total_operator = total_operator + block
    assert total_vector.max_abs_diff(Operator.identity(MODES)) < 1e-15
    assert total_operator.max_abs_diff(op) < 1e-15


def test_sector_must_belong_to_partition() -> None:
    eps = ParitySector.parse(Partition.parse("{1}|{2,3}"), "++")
    with pytest.raises(SectorError):
        local_parity_projector(XI, eps)


def test_all_even_part_keeps_locally_even_products(rng: np.random.Generator) -> None:
    oxi = XI.ordered()
    even = ordered_product(oxi, [_even(rng, part) for part in oxi.parts])
    assert all_even_part(XI, even).max_abs_diff(even) < 1e-15
    odd = ordered_product(oxi, [_odd(rng, part) for part in oxi.parts])
    assert all_even_part(XI, odd).max_abs() == 0


def test_parity_sectors_omit_zero_blocks(rng: np.random.Generator) -> None:
    oxi = XI.ordered()
    op = ordered_product(oxi, [_even(rng, ModeSet((1, 3))), _odd(rng, ModeSet((2,)))])
    blocks = parity_sectors(XI, op)
    assert [str(eps) for eps in blocks] == ["+-"]


def test_tps_unitary_maps_standard_to_ordered_products(rng: np.random.Generator) -> None:
    for text in ("{2}|{1,3}", "{1,3}|{2}", "{3}|{1}|{2}"):
        oxi = OrderedPartition.parse(text)
        ops = [_even(rng, part) for part in oxi.parts]
        unitary = tps_unitary(oxi)
        rotated = unitary @ tensor_standard(ops) @ unitary.dagger()
        assert rotated.max_abs_diff(ordered_product(oxi, ops)) < 1e-12


def test_tps_vector_projector_is_ordered_product(rng: np.random.Generator) -> None:
    oxi = OrderedPartition.parse("{2}|{1,3}")
    vectors = [
        StateVector.basis(ModeSet((2,)), "1"),
        StateVector(ModeSet((1, 3)), [0.6, 0, 0, 0.8j]),
    ]
    joint = tps_vector(oxi, vectors)
    expected = ordered_product(oxi, [vector.projector() for vector in vectors])
    assert joint.projector().max_abs_diff(expected) < 1e-12
    assert vector_parity(joint) is ParityClass.ODD
    mixed = StateVector(ModeSet((2,)), [1, 1])
    with pytest.raises(InputError):
        tps_vector(oxi, [mixed, vectors[1]])


@pytest.mark.parametrize(
    ("counts", "self_adjoint", "psd"),
    [
        (ParityCounts(even=3, odd=0, mixed=0), True, True),
        (ParityCounts(even=1, odd=1, mixed=0), True, True),
        (ParityCounts(even=0, odd=2, mixed=0), False, True),
        (ParityCounts(even=0, odd=4, mixed=0), True, True),
        (ParityCounts(even=2, odd=0, mixed=1), True, True),
        (ParityCounts(even=0, odd=1, mixed=1), False, True),
        (ParityCounts(even=0, odd=0, mixed=2), False, False),
    ],
)
def test_closed_form_predictions(counts: ParityCounts, self_adjoint: bool, psd: bool) -> None:
    assert predict_self_adjoint(counts) is self_adjoint
    assert predict_psd(counts) is psd


def test_product_extension_classify(rng: np.random.Generator) -> None:
    oxi = OrderedPartition.parse("{2}|{1}|{3}")
    odd_ops = [_odd(rng, part, hermitian=True) for part in oxi.parts[:2]]
    report = product_extension_classify(oxi, [*odd_ops, _even(rng, ModeSet((3,)), hermitian=True)])
    assert report.counts == ParityCounts(even=1, odd=2, mixed=0)
    assert not report.self_adjoint
    assert report.agrees

    unit = np.array([[1.0, 1.0], [1.0, 1.0]])
    pair = OrderedPartition.parse("{1}|{2}")
    report = product_extension_classify(pair, [Operator(ModeSet((1,)), unit), Operator(ModeSet((2,)), unit)])
    assert report.counts.mixed == 2
    assert report.hermiticity_residual == pytest.approx(2.0)
    assert not report.self_adjoint
    assert report.predicted_psd is False

    with pytest.raises(InputError):
        product_extension_classify(pair, [random_operator(rng, ModeSet((1,))), Operator.identity(ModeSet((2,)))])


def test_embedded_parity_operators_commute_or_anticommute(rng: np.random.Generator) -> None:
    left, right = ModeSet((1, 3)), ModeSet((2,))
    odd_a = embed(left, MODES, _odd(rng, left))
    odd_b = embed(right, MODES, _odd(rng, right))
    even_b = embed(right, MODES, _even(rng, right))
    assert (odd_a @ odd_b + odd_b @ odd_a).max_abs() < 1e-12
    assert (odd_a @ even_b - even_b @ odd_a).max_abs() < 1e-12
