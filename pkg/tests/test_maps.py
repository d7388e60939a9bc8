from __future__ import annotations

import itertools

import numpy as np
import pytest
import scipy.linalg

from fermikit.algebra import (
    Operator,
    SingleMode,
    elementary,
    embed,
    jw_ladder,
    ordered_product,
    partial_trace,
    random_matrix,
    random_operator,
    tensor_fermionic,
)
from fermikit.core.config import use_settings
from fermikit.core.errors import DomainError, PartitionError, ShapeError
from fermikit.maps import (
    MapKind,
    choi,
    conjugation,
    even_compression,
    is_cp,
    is_local_map,
    is_physical_map,
    is_tp,
    is_tpcp,
    left_multiplication,
    locality_certificate,
    map_embed,
    map_parity,
    map_parity_projector,
    map_tensor,
    map_theta,
    partial_trace_map,
    right_multiplication,
    theta_map,
    trace_map,
    trace_residual,
    transpose_map,
)
from fermikit.modes import ModeSet, OccPattern, OrderedPartition, Partition
from fermikit.parity import ParityClass, ParitySector, local_parity_projector, parity_parts
from fermikit.superop import SuperOp, compose, unvec, vec

MODES = ModeSet.span(1, 3)
LEFT, RIGHT = ModeSet((1, 3)), ModeSet((2,))
OXI = OrderedPartition.of(RIGHT, LEFT)


def _random_map(rng: np.random.Generator, modes: ModeSet) -> SuperOp:
    return SuperOp(modes, modes, random_matrix(rng, modes.dim**2))


def _even_unitary(rng: np.random.Generator, modes: ModeSet) -> Operator:
    hamiltonian = parity_parts(random_operator(rng, modes, hermitian=True))[0]
    return Operator(modes, scipy.linalg.expm(1j * hamiltonian.matrix))


def test_vec_is_row_major(rng: np.random.Generator) -> None:
    op = random_operator(rng, ModeSet((1,)))
    assert vec(op)[1] == op.matrix[0, 1]
    assert unvec(op.modes, vec(op)).max_abs_diff(op) == 0


def test_superop_shape_and_cap() -> None:
    with pytest.raises(ShapeError):
        SuperOp(MODES, MODES, np.eye(8))
    with use_settings(max_map_modes=2), pytest.raises(DomainError):
        SuperOp.identity(MODES)


def test_elementary_maps_act_as_named(rng: np.random.Generator) -> None:
    a, b = random_operator(rng, MODES), random_operator(rng, MODES)
    unitary = _even_unitary(rng, MODES)
    assert conjugation(unitary)(a).max_abs_diff(unitary @ a @ unitary.dagger()) < 1e-12
    assert left_multiplication(b)(a).max_abs_diff(b @ a) < 1e-12
    assert right_multiplication(b)(a).max_abs_diff(a @ b) < 1e-12
    assert trace_map(MODES)(a).scalar() == pytest.approx(a.trace())
    assert transpose_map(MODES)(a).max_abs_diff(Operator(MODES, a.matrix.T)) == 0
    assert partial_trace_map(MODES, LEFT)(a).max_abs_diff(partial_trace(MODES, LEFT, a)) < 1e-12
    assert compose(left_multiplication(b), right_multiplication(b))(a).max_abs_diff(b @ a @ b) < 1e-12


def test_choi_blocks_are_images_of_matrix_units(rng: np.random.Generator) -> None:
    omega = _random_map(rng, ModeSet((1, 2)))
    matrix = choi(omega)
    for nu, nup in [("00", "11"), ("10", "01")]:
        left, right = OccPattern.parse(omega.source, nu), OccPattern.parse(omega.source, nup)
        assert matrix.block(left, right).max_abs_diff(omega(elementary(omega.source, left, right))) == 0


def test_channel_tests() -> None:
    assert is_tpcp(theta_map(MODES))
    assert is_tpcp(partial_trace_map(MODES, LEFT))
    assert trace_residual(partial_trace_map(MODES, ModeSet())) < 1e-12
    assert is_tp(transpose_map(MODES))
    assert not is_cp(transpose_map(MODES))
    assert not is_tp(left_multiplication(Operator.identity(MODES) * 2.0))


def test_map_parity(rng: np.random.Generator) -> None:
    even = conjugation(_even_unitary(rng, MODES))
    odd = left_multiplication(jw_ladder(2, MODES, SingleMode.ANNIHILATE))
    assert map_parity(even) is ParityClass.EVEN
    assert map_parity(odd) is ParityClass.ODD
    assert map_parity(even + odd) is ParityClass.MIXED
    assert map_theta(odd).max_abs_diff(-odd) == 0
    omega = _random_map(rng, MODES)
    total = map_parity_projector(omega, 1) + map_parity_projector(omega, -1)
    assert total.max_abs_diff(omega) < 1e-15


def test_physical_maps(rng: np.random.Generator) -> None:
    assert is_physical_map(even_compression(conjugation(_even_unitary(rng, MODES))))
    assert not is_physical_map(SuperOp.identity(MODES))
    assert not is_physical_map(theta_map(MODES))
    assert not is_physical_map(left_multiplication(jw_ladder(1, MODES, "create")))
    assert is_physical_map(SuperOp.zeros(MODES))


def test_ordered_map_tensor_takes_products_to_products(rng: np.random.Generator) -> None:
    omegas = [_random_map(rng, part) for part in OXI.parts]
    ops = [random_operator(rng, part) for part in OXI.parts]
    joint = map_tensor(MapKind.ORDERED, OXI, omegas)
    images = [omega(op) for omega, op in zip(omegas, ops, strict=True)]
    assert joint(ordered_product(OXI, ops)).max_abs_diff(ordered_product(OXI, images)) < 1e-10


def test_fermionic_map_tensor_takes_products_to_products(rng: np.random.Generator) -> None:
    xi = OXI.unordered()
    omegas = {part: _random_map(rng, part) for part in xi.parts}
    ops = {part: random_operator(rng, part) for part in xi.parts}
    joint = map_tensor("fermionic", xi, omegas)
    images = {part: omegas[part](ops[part]) for part in xi.parts}
    assert joint(tensor_fermionic(xi, ops)).max_abs_diff(tensor_fermionic(xi, images)) < 1e-10
    assert map_tensor("fermionic", OXI, [omegas[part] for part in OXI.parts]).max_abs_diff(joint) == 0


def test_map_tensor_with_traced_part(rng: np.random.Generator) -> None:
    # Tracing out the first part leaves the second untouched.
    a, b = random_operator(rng, RIGHT), random_operator(rng, LEFT)
    joint = map_tensor(MapKind.ORDERED, OXI, [trace_map(RIGHT), SuperOp.identity(LEFT)])
    assert joint.target == LEFT
    assert joint(ordered_product(OXI, [a, b])).max_abs_diff(b * a.trace()) < 1e-12


def test_trace_extension_is_partial_trace() -> None:
    for keep in (ModeSet((1,)), ModeSet((2,)), LEFT):
        rest = MODES - keep
        extended = map_embed(MapKind.ORDERED, rest, MODES, trace_map(rest))
        assert extended.max_abs_diff(partial_trace_map(MODES, keep)) < 1e-12


def test_fermionic_extensions_commute(rng: np.random.Generator) -> None:
    xi = OXI.unordered()
    omegas = {part: _random_map(rng, part) for part in xi.parts}
    forward = map_embed("fermionic", LEFT, MODES, omegas[LEFT]) @ map_embed("fermionic", RIGHT, MODES, omegas[RIGHT])
    backward = map_embed("fermionic", RIGHT, MODES, omegas[RIGHT]) @ map_embed("fermionic", LEFT, MODES, omegas[LEFT])
    assert forward.max_abs_diff(backward) < 1e-10
    assert forward.max_abs_diff(map_tensor("fermionic", xi, omegas)) < 1e-10


def test_ordered_extensions_of_even_maps_commute(rng: np.random.Generator) -> None:
    evens = [map_parity_projector(_random_map(rng, part), 1) for part in OXI.parts]
    first = map_embed(MapKind.ORDERED, RIGHT, MODES, evens[0])
    second = map_embed(MapKind.ORDERED, LEFT, MODES, evens[1])
    assert (first @ second).max_abs_diff(second @ first) < 1e-10
    assert (first @ second).max_abs_diff(map_tensor(MapKind.ORDERED, OXI, evens)) < 1e-10


def test_odd_extension_flips_sign_past_odd_operator(rng: np.random.Generator) -> None:
    odd_map = map_parity_projector(_random_map(rng, LEFT), -1)
    extended = map_embed(MapKind.ORDERED, LEFT, MODES, odd_map)
    a = parity_parts(random_operator(rng, LEFT))[1]
    b = parity_parts(random_operator(rng, RIGHT))[1]
    ea, eb = embed(LEFT, MODES, a), embed(RIGHT, MODES, b)
    assert extended(eb @ ea).max_abs_diff(-(eb @ embed(LEFT, MODES, odd_map(a)))) < 1e-10


def test_map_tensor_validates_parts(rng: np.random.Generator) -> None:
    with pytest.raises(PartitionError):
        map_tensor(MapKind.ORDERED, OXI, [_random_map(rng, LEFT), _random_map(rng, RIGHT)])
    with pytest.raises(PartitionError):
        map_tensor(MapKind.FERMIONIC, OXI.unordered(), {LEFT: _random_map(rng, LEFT)})
    with pytest.raises(ShapeError):
        map_embed(MapKind.ORDERED, LEFT, MODES, _random_map(rng, RIGHT))


def test_embedded_physical_map_is_local(rng: np.random.Generator) -> None:
    local = even_compression(conjugation(_even_unitary(rng, LEFT)))
    omega = map_embed(MapKind.ORDERED, LEFT, MODES, local)
    certificate = locality_certificate(omega, LEFT)
    assert certificate.local
    assert certificate.residual < 1e-8
    assert is_local_map(omega, LEFT)


def test_product_of_physical_maps_is_local(rng: np.random.Generator) -> None:
    locals_ = [even_compression(conjugation(_even_unitary(rng, part))) for part in OXI.parts]
    omega = map_tensor(MapKind.ORDERED, OXI, locals_)
    certificate = locality_certificate(omega, OXI.unordered())
    assert certificate.local
    assert len(certificate.local_maps) == 2


def test_global_unitary_is_not_local(rng: np.random.Generator) -> None:
    omega = even_compression(conjugation(_even_unitary(rng, MODES)))
    assert not is_local_map(omega, LEFT)
    assert not is_local_map(omega, Partition.of(LEFT, RIGHT))


def test_ordered_product_of_even_maps_acts_on_every_ordering(rng: np.random.Generator) -> None:
    parts = [ModeSet((label,)) for label in MODES]
    evens = {part: map_parity_projector(_random_map(rng, part), 1) for part in parts}
    ops = {part: random_operator(rng, part) for part in parts}
    joint = map_tensor(MapKind.ORDERED, OrderedPartition.of(*parts), [evens[part] for part in parts])
    for order in itertools.permutations(parts):
        oxi = OrderedPartition.of(*order)
        product = ordered_product(oxi, [ops[part] for part in order])
        images = ordered_product(oxi, [evens[part](ops[part]) for part in order])
        assert joint(product).max_abs_diff(images) < 1e-10, str(oxi)


def test_map_supported_on_odd_odd_block_is_local(rng: np.random.Generator) -> None:
    xi = OXI.unordered()
    odd_odd = local_parity_projector(xi, ParitySector.parse(xi, "--"), "operator")
    assert isinstance(odd_odd, SuperOp)
    remainder = even_compression(_random_map(rng, MODES)) @ odd_odd
    assert is_physical_map(remainder)
    assert is_local_map(remainder, LEFT)
    assert is_local_map(remainder, xi)

    local = even_compression(conjugation(_even_unitary(rng, LEFT)))
    omega = map_embed(MapKind.ORDERED, LEFT, MODES, local) + remainder
    certificate = locality_certificate(omega, LEFT)
    assert certificate.local
    assert certificate.remainder.max_abs_diff(remainder) < 1e-8
