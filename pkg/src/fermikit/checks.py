"""Named invariant suites behind ``fermikit check``.

Every suite draws from its own PCG64 generator seeded with ``(seed, index)``
where ``index`` is the suite's position in :data:`SUITE_NAMES`, so a suite
gives the same report whether it runs alone or inside ``all``.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any, cast

import numpy as np
import numpy.typing as npt
import scipy.linalg

from fermikit.algebra import (
    Operator,
    SingleMode,
    anticommutator,
    commutator,
    embed,
    hs_inner,
    jw_ladder,
    lambda_map,
    ordered_product,
    partial_trace,
    phi,
    psi_map,
    random_matrix,
    random_operator,
    single_mode,
    tensor_fermionic,
    tensor_standard,
)
from fermikit.core.config import get_settings
from fermikit.core.errors import InputError, InvariantError
from fermikit.core.results import CheckReport, CheckResult, SuiteReport, significant
from fermikit.maps import (
    MapKind,
    choi,
    conjugation,
    even_compression,
    is_cp,
    is_physical_map,
    is_tpcp,
    left_multiplication,
    locality_certificate,
    map_embed,
    map_parity,
    map_parity_projector,
    map_tensor,
    partial_trace_map,
    theta_map,
    trace_map,
    trace_residual,
    transpose_map,
)
from fermikit.modes import ModeSet, OrderedPartition, Partition, restrict_indices
from fermikit.parity import (
    ParityClass,
    ParitySector,
    StateVector,
    all_even_part,
    local_parity_projector,
    operator_parity,
    parity_operator,
    parity_parts,
    product_extension_classify,
    project_local_parity,
    tps_unitary,
    tps_vector,
    vector_parity,
)
from fermikit.phase import f_table, l_table, u_table
from fermikit.superop import SuperOp

logger = logging.getLogger(__name__)

TIGHT_TOL = 1e-12
DEFAULT_TRIALS = {"ptrace": 200, "prodext": 100}
FALLBACK_TRIALS = 20


@dataclass
class _Invariant:
    """Accumulates residuals of one invariant; the first failure is kept as counterexample."""

    name: str
    tol: float
    trials: int = 0
    max_residual: float = 0.0
    counterexample: dict[str, Any] | None = None

    def record(self, residual: float, **context: object) -> None:
        self.trials += 1
        self.max_residual = max(self.max_residual, float(residual))
        if residual > self.tol and self.counterexample is None:
            self.counterexample = {key: str(value) for key, value in context.items()}
            self.counterexample["residual"] = str(significant(float(residual)))
            logger.warning("invariant %s failed: %s", self.name, self.counterexample)

    def result(self) -> CheckResult:
        return CheckResult(
            invariant=self.name,
            passed=self.max_residual <= self.tol,
            trials=self.trials,
            max_residual=self.max_residual,
            counterexample=self.counterexample,
        )


@dataclass
class _Context:
    rng: np.random.Generator
    max_modes: int
    trials: int
    tol: float
    invariants: dict[str, _Invariant] = field(default_factory=dict)

    def check(self, name: str, tol: float | None = None) -> _Invariant:
        if name not in self.invariants:
            self.invariants[name] = _Invariant(name, self.tol if tol is None else tol)
        return self.invariants[name]

    def results(self) -> list[CheckResult]:
        return [invariant.result() for invariant in self.invariants.values()]

    def size(self, low: int, high: int) -> int:
        """A mode count in [low, min(high, max_modes)]."""
        top = max(min(high, self.max_modes), low)
        return int(self.rng.integers(low, top + 1))


# Random inputs


def _random_modes(rng: np.random.Generator, size: int) -> ModeSet:
    labels = rng.choice(np.arange(1, size + 3), size=size, replace=False)
    return ModeSet.of(int(label) for label in labels)


def _random_parts(rng: np.random.Generator, modes: ModeSet, count: int | None = None) -> list[ModeSet]:
    labels = list(modes.labels)
    if len(labels) < 2:
        return [modes]
    count = count or int(rng.integers(2, min(len(labels), 3) + 1))
    shuffled = [labels[k] for k in rng.permutation(len(labels))]
    cuts = sorted(int(cut) for cut in rng.choice(np.arange(1, len(labels)), size=count - 1, replace=False))
    bounds = [0, *cuts, len(labels)]
    return [ModeSet.of(shuffled[a:b]) for a, b in itertools.pairwise(bounds)]


def _random_subset(rng: np.random.Generator, modes: ModeSet) -> ModeSet:
    keep = rng.integers(0, 2, size=len(modes)).astype(bool)
    return ModeSet(tuple(label for label, flag in zip(modes, keep, strict=True) if flag))


def _with_parity(op: Operator, parity: ParityClass) -> Operator:
    even, odd = parity_parts(op)
    if parity is ParityClass.EVEN:
        return even
    if parity is ParityClass.ODD:
        return odd
    return op


def _random_parity_operator(
    rng: np.random.Generator, modes: ModeSet, parity: ParityClass, *, hermitian: bool = False
) -> Operator:
    return _with_parity(random_operator(rng, modes, hermitian=hermitian), parity)


def _random_psd(rng: np.random.Generator, modes: ModeSet) -> Operator:
    g = random_matrix(rng, modes.dim)
    rho = g @ g.conj().T
    return Operator(modes, rho / np.trace(rho).real)


def _random_parity_vector(rng: np.random.Generator, modes: ModeSet, sign: int) -> StateVector:
    amplitudes = rng.standard_normal(modes.dim) + 1j * rng.standard_normal(modes.dim)
    odd = np.bitwise_count(np.arange(modes.dim)) & 1
    amplitudes[odd == (0 if sign > 0 else 1)] = 0.0
    return StateVector(modes, amplitudes).normalized()


def _random_map(rng: np.random.Generator, modes: ModeSet) -> SuperOp:
    return SuperOp(modes, modes, random_matrix(rng, modes.dim**2))


def _random_even_unitary(rng: np.random.Generator, modes: ModeSet) -> Operator:
    hamiltonian = _random_parity_operator(rng, modes, ParityClass.EVEN, hermitian=True)
    return Operator(modes, scipy.linalg.expm(1j * hamiltonian.matrix))


def _all_even_mask(xi: Partition) -> npt.NDArray[np.bool_]:
    ones = Operator(xi.modes, np.ones((xi.modes.dim, xi.modes.dim)))
    return all_even_part(xi, ones).matrix.real != 0


def _orderings(xi: Partition) -> Iterable[OrderedPartition]:
    for order in itertools.permutations(range(len(xi))):
        yield xi.ordered().reordered(order)


# Suites


def _suite_car(ctx: _Context) -> None:
    for size in range(1, min(ctx.max_modes, 5) + 1):
        modes = ModeSet.span(1, size)
        ladders = {label: jw_ladder(label, modes, SingleMode.ANNIHILATE) for label in modes}
        identity = Operator.identity(modes)
        zero = Operator.zeros(modes)
        for i, j in itertools.product(modes, repeat=2):
            a_i, a_j = ladders[i], ladders[j]
            ctx.check("annihilators_anticommute", 0.0).record(anticommutator(a_i, a_j).max_abs(), i=i, j=j)
            ctx.check("creators_anticommute", 0.0).record(
                anticommutator(a_i.dagger(), a_j.dagger()).max_abs(), i=i, j=j
            )
            expected = identity if i == j else zero
            ctx.check("canonical_anticommutator", 0.0).record(
                anticommutator(a_i, a_j.dagger()).max_abs_diff(expected), i=i, j=j
            )
        local = Operator(ModeSet(), np.ones((1, 1)))
        for label in modes:
            single = Operator(ModeSet((label,)), single_mode(SingleMode.ANNIHILATE))
            ctx.check("ladder_is_fermionic_embedding", 0.0).record(
                embed(single.modes, modes, single).max_abs_diff(ladders[label]), modes=modes, label=label
            )
        ctx.check("empty_embedding_is_scalar", 0.0).record(
            embed(ModeSet(), modes, local * 2.0).max_abs_diff(identity * 2.0), modes=modes
        )


def _suite_phi(ctx: _Context) -> None:
    for _ in range(ctx.trials):
        modes = _random_modes(ctx.rng, ctx.size(1, 5))
        a, b = random_operator(ctx.rng, modes), random_operator(ctx.rng, modes)
        base = hs_inner(a, b)
        ctx.check("phi_preserves_hs").record(abs(hs_inner(phi(modes, a), phi(modes, b)) - base), modes=modes)
        ctx.check("phi_involution", 0.0).record(phi(modes, phi(modes, a)).max_abs_diff(a), modes=modes)
        parts = _random_parts(ctx.rng, modes)
        xi = Partition.of(*parts)
        ctx.check("psi_preserves_hs").record(abs(hs_inner(psi_map(xi, a), psi_map(xi, b)) - base), partition=xi)
        oxi = OrderedPartition.of(*parts)
        ctx.check("lambda_preserves_hs").record(
            abs(hs_inner(lambda_map(oxi, a), lambda_map(oxi, b)) - base), partition=oxi
        )
    for size in range(1, ctx.max_modes + 1):
        modes = ModeSet.span(1, size)
        for cut_mask in range(1 << (size - 1)):
            cuts = [k for k in range(1, size) if cut_mask >> (k - 1) & 1]
            bounds = [0, *cuts, size]
            oxi = OrderedPartition.of(*(modes.labels[a:b] for a, b in itertools.pairwise(bounds)))
            ctx.check("lambda_trivial_in_jw_order", 0.0).record(
                float(np.count_nonzero(l_table(oxi) != 1)), partition=oxi
            )
        diagonal = np.diagonal(f_table(modes))
        ctx.check("f_diagonal_trivial", 0.0).record(float(np.count_nonzero(diagonal != 1)), modes=modes)


def _suite_tensor(ctx: _Context) -> None:
    for _ in range(ctx.trials):
        modes = _random_modes(ctx.rng, ctx.size(2, 5))
        parts = _random_parts(ctx.rng, modes)
        oxi = OrderedPartition.of(*parts)
        ops = [random_operator(ctx.rng, part) for part in parts]
        fermionic = tensor_fermionic(oxi.unordered(), dict(zip(parts, ops, strict=True)))
        ctx.check("ordered_product_is_lambda_of_tensor").record(
            ordered_product(oxi, ops).max_abs_diff(lambda_map(oxi, fermionic)), partition=oxi
        )
        if len(parts) >= 3:
            inner = Partition.of(parts[0], parts[1])
            joined = tensor_fermionic(inner, {parts[0]: ops[0], parts[1]: ops[1]})
            outer = {joined.modes: joined, **dict(zip(parts[2:], ops[2:], strict=True))}
            nested = tensor_fermionic(Partition.of(inner.modes, *parts[2:]), outer)
            ctx.check("tensor_associative").record(nested.max_abs_diff(fermionic), partition=oxi)

        inner_set = _random_subset(ctx.rng, modes)
        middle = inner_set.union(_random_subset(ctx.rng, modes))
        a, b = random_operator(ctx.rng, inner_set), random_operator(ctx.rng, inner_set)
        ctx.check("embedding_nesting").record(
            embed(middle, modes, embed(inner_set, middle, a)).max_abs_diff(embed(inner_set, modes, a)),
            inner=inner_set,
            middle=middle,
        )
        ctx.check("embedding_homomorphism").record(
            embed(inner_set, modes, a @ b).max_abs_diff(embed(inner_set, modes, a) @ embed(inner_set, modes, b)),
            subset=inner_set,
        )
        ctx.check("embedding_adjoint").record(
            embed(inner_set, modes, a.dagger()).max_abs_diff(embed(inner_set, modes, a).dagger()), subset=inner_set
        )
    # I (x~) E^{0,1} on mode 2 differs from I (x) E^{0,1} at entry (2, 3) by a sign.
    pair = ModeSet((1, 2))
    unit = Operator(ModeSet((2,)), single_mode(SingleMode.ANNIHILATE))
    twisted = embed(unit.modes, pair, unit)
    plain = tensor_standard([Operator.identity(ModeSet((1,))), unit])
    ctx.check("noncommuting_extension_witness", 0.0).record(
        abs(twisted.matrix[2, 3] + 1.0) + abs(plain.matrix[2, 3] - 1.0), modes=pair
    )


def _suite_lambda(ctx: _Context) -> None:
    for _ in range(ctx.trials):
        modes = _random_modes(ctx.rng, ctx.size(2, 5))
        xi = Partition.of(*_random_parts(ctx.rng, modes))
        mask = _all_even_mask(xi)
        orderings = list(_orderings(xi))
        reference = l_table(orderings[0])
        physical = all_even_part(xi, random_operator(ctx.rng, modes))
        image = lambda_map(orderings[0], physical)
        for oxi in orderings[1:]:
            ctx.check("l_tables_agree_on_all_even", 0.0).record(
                float(np.count_nonzero((l_table(oxi) != reference) & mask)), partition=oxi
            )
            ctx.check("lambda_ordering_independent").record(
                lambda_map(oxi, physical).max_abs_diff(image), partition=oxi
            )
        a = random_operator(ctx.rng, modes)
        ctx.check("lambda_involution", 0.0).record(
            lambda_map(orderings[-1], lambda_map(orderings[-1], a)).max_abs_diff(a), partition=orderings[-1]
        )


def _standard_partial_trace(modes: ModeSet, subset: ModeSet, matrix: npt.NDArray[np.complex128]) -> Any:
    kept = restrict_indices(modes, subset)
    traced = restrict_indices(modes, modes - subset)
    out = np.zeros((subset.dim, subset.dim), dtype=np.complex128)
    for row in range(modes.dim):
        for col in range(modes.dim):
            if traced[row] == traced[col]:
                out[kept[row], kept[col]] += matrix[row, col]
    return out


def _embedded_units(modes: ModeSet, subset: ModeSet, cache: dict[Any, Any]) -> Any:
    key = (modes, subset)
    if key not in cache:
        units = []
        for row, col in itertools.product(range(subset.dim), repeat=2):
            unit = np.zeros((subset.dim, subset.dim))
            unit[row, col] = 1.0
            units.append(embed(subset, modes, Operator(subset, unit)).matrix)
        cache[key] = np.stack(units)
    return cache[key]


def _suite_ptrace(ctx: _Context) -> None:
    cache: dict[Any, Any] = {}
    low = min(3, ctx.max_modes)
    for _ in range(ctx.trials):
        modes = _random_modes(ctx.rng, ctx.size(low, 5))
        subset = _random_subset(ctx.rng, modes)
        rho = _random_psd(ctx.rng, modes)
        reduced = partial_trace(modes, subset, rho)

        # Tr(rho_X E) = Tr(rho embed(E)) for every matrix unit E of X.
        units = _embedded_units(modes, subset, cache)
        pairings = np.einsum("kij,ji->k", units, rho.matrix).reshape(subset.dim, subset.dim)
        ctx.check("adjoint_oracle").record(float(np.max(np.abs(reduced.matrix - pairings.T))), modes=modes, keep=subset)

        rest = modes - subset
        if subset.labels and rest.labels:
            unitary = tps_unitary(OrderedPartition.of(subset, rest)).matrix
            rotated = unitary.conj().T @ rho.matrix @ unitary
        else:
            rotated = rho.matrix
        oracle = _standard_partial_trace(modes, subset, rotated)
        ctx.check("conjugated_trace_oracle").record(
            float(np.max(np.abs(reduced.matrix - oracle))), modes=modes, keep=subset
        )
        ctx.check("trace_preserving").record(abs(reduced.trace() - rho.trace()), modes=modes, keep=subset)
        lowest = float(scipy.linalg.eigvalsh(reduced.matrix)[0])
        ctx.check("positivity_preserving").record(max(0.0, -lowest), modes=modes, keep=subset)

        inner = _random_subset(ctx.rng, subset)
        ctx.check("nesting").record(
            partial_trace(subset, inner, reduced).max_abs_diff(partial_trace(modes, inner, rho)),
            modes=modes,
            keep=subset,
            inner=inner,
        )
        if subset.labels and rest.labels:
            left = _with_parity(_random_psd(ctx.rng, subset), ParityClass.EVEN)
            right = _with_parity(_random_psd(ctx.rng, rest), ParityClass.EVEN)
            product = ordered_product(OrderedPartition.of(subset, rest), [left, right])
            ctx.check("product_marginals").record(
                max(partial_trace(modes, subset, product).max_abs_diff(left),
                    partial_trace(modes, rest, product).max_abs_diff(right)),
                modes=modes,
                keep=subset,
            )


def _suite_parity(ctx: _Context) -> None:
    for _ in range(ctx.trials):
        modes = _random_modes(ctx.rng, ctx.size(2, 5))
        parts = _random_parts(ctx.rng, modes, 2)
        left, right = parts
        even_a = embed(left, modes, _random_parity_operator(ctx.rng, left, ParityClass.EVEN))
        even_b = embed(right, modes, _random_parity_operator(ctx.rng, right, ParityClass.EVEN))
        odd_a = embed(left, modes, _random_parity_operator(ctx.rng, left, ParityClass.ODD))
        odd_b = embed(right, modes, _random_parity_operator(ctx.rng, right, ParityClass.ODD))
        ctx.check("even_even_commute", TIGHT_TOL).record(commutator(even_a, even_b).max_abs(), left=left, right=right)
        ctx.check("even_odd_commute", TIGHT_TOL).record(commutator(even_a, odd_b).max_abs(), left=left, right=right)
        ctx.check("odd_odd_anticommute", TIGHT_TOL).record(
            anticommutator(odd_a, odd_b).max_abs(), left=left, right=right
        )
        ctx.check("odd_trace_vanishes", TIGHT_TOL).record(abs(odd_a.trace()), modes=modes)

        for parity in (ParityClass.EVEN, ParityClass.ODD):
            op = _random_parity_operator(ctx.rng, modes, parity)
            subset = _random_subset(ctx.rng, modes)
            reduced = partial_trace(modes, subset, op)
            # Tracing an odd operator down to nothing leaves zero, which counts as even.
            kept = operator_parity(reduced) is parity or reduced.max_abs() <= ctx.tol
            ctx.check("partial_trace_keeps_parity", 0.0).record(0.0 if kept else 1.0, keep=subset, parity=parity)
            local = _random_parity_operator(ctx.rng, left, parity)
            ctx.check("embedding_keeps_parity", 0.0).record(
                0.0 if operator_parity(embed(left, modes, local)) is parity else 1.0, subset=left, parity=parity
            )

        xi = Partition.of(*_random_parts(ctx.rng, modes))
        op = random_operator(ctx.rng, modes)
        total = Operator.zeros(modes)
        projectors = Operator.zeros(modes)
        for eps in ParitySector.all(xi):
            total = total + project_local_parity(xi, eps, op)
            projectors = projectors + cast(Operator, local_parity_projector(xi, eps, "vector"))
        ctx.check("sector_resolution").record(total.max_abs_diff(op), partition=xi)
        ctx.check("vector_sector_resolution").record(projectors.max_abs_diff(Operator.identity(modes)), partition=xi)
        parity = parity_operator(modes)
        ctx.check("parity_squares_to_identity", 0.0).record(
            (parity @ parity).max_abs_diff(Operator.identity(modes)), modes=modes
        )


def _suite_tps(ctx: _Context) -> None:
    for _ in range(ctx.trials):
        modes = _random_modes(ctx.rng, ctx.size(2, 5))
        xi = Partition.of(*_random_parts(ctx.rng, modes))
        local = {part: _random_parity_operator(ctx.rng, part, ParityClass.EVEN) for part in xi.parts}
        standard = tensor_standard(list(local.values())).matrix
        signs = np.array([int(s) for s in ctx.rng.choice((1, -1), size=len(xi))])
        vectors = {part: _random_parity_vector(ctx.rng, part, int(s)) for part, s in zip(xi.parts, signs, strict=True)}
        mask = _all_even_mask(xi)
        reference: npt.NDArray[np.int8] | None = None
        for oxi in _orderings(xi):
            unitary = tps_unitary(oxi).matrix
            product = ordered_product(oxi, [local[part] for part in oxi.parts])
            ctx.check("tps_identity").record(
                float(np.max(np.abs(product.matrix - unitary @ standard @ unitary.conj().T))), partition=oxi
            )
            joint = tps_vector(oxi, [vectors[part] for part in oxi.parts])
            projected = ordered_product(oxi, [vectors[part].projector() for part in oxi.parts])
            ctx.check("tps_vector_projector").record(joint.projector().max_abs_diff(projected), partition=oxi)
            ctx.check("tps_vector_parity", 0.0).record(
                0.0 if vector_parity(joint) is not ParityClass.MIXED else 1.0, partition=oxi
            )
            u = u_table(oxi).astype(np.int64)
            adjoint = np.outer(u, u)
            if reference is None:
                reference = adjoint.astype(np.int8)
            ctx.check("tps_adjoint_agrees_on_all_even", 0.0).record(
                float(np.count_nonzero((adjoint != reference) & mask)), partition=oxi
            )


def _prodext_operand(ctx: _Context, part: ModeSet, psd: bool) -> Operator:
    if psd:
        rho = _random_psd(ctx.rng, part)
        return rho if ctx.rng.random() < 0.5 else _with_parity(rho, ParityClass.EVEN)
    parity = [ParityClass.EVEN, ParityClass.ODD, ParityClass.MIXED][int(ctx.rng.integers(3))]
    return _random_parity_operator(ctx.rng, part, parity, hermitian=True)


def _suite_prodext(ctx: _Context) -> None:
    check = ctx.check("closed_form_agreement", 0.0)
    for _ in range(ctx.trials):
        count = int(ctx.rng.integers(2, max(2, min(4, ctx.max_modes)) + 1))
        modes = _random_modes(ctx.rng, ctx.size(count, 6))
        oxi = OrderedPartition.of(*_random_parts(ctx.rng, modes, count))
        psd = bool(ctx.rng.random() < 0.5)
        operands = [_prodext_operand(ctx, part, psd) for part in oxi.parts]
        try:
            product_extension_classify(oxi, operands)
        except InvariantError as exc:
            check.record(1.0, partition=oxi, psd=psd, error=exc.message)
        else:
            check.record(0.0)
    # Two-mode counterexample with a = b = 1: the product is not Hermitian.
    a = Operator(ModeSet((1,)), np.array([[1.0, 1.0], [1.0, 1.0]]))
    b = Operator(ModeSet((2,)), np.array([[1.0, 1.0], [1.0, 1.0]]))
    product = ordered_product(OrderedPartition.of(a.modes, b.modes), [a, b])
    ctx.check("two_mode_counterexample", 0.0).record(abs(product.hermiticity_residual() - 2.0))


def _suite_maps(ctx: _Context) -> None:
    tol = ctx.tol
    for size in range(1, min(ctx.max_modes, 4) + 1):
        modes = ModeSet.span(1, size)
        for subset in modes.subsets():
            channel = partial_trace_map(modes, subset)
            residual = max(trace_residual(channel), max(0.0, -choi(channel).min_eigenvalue()))
            ctx.check("partial_trace_is_channel").record(residual, modes=modes, keep=subset)
            rest = modes - subset
            if rest.labels:
                embedded = map_embed(MapKind.ORDERED, rest, modes, trace_map(rest))
                ctx.check("trace_embedding_is_partial_trace").record(
                    float(np.max(np.abs(embedded.matrix - channel.matrix))), modes=modes, keep=subset
                )

    map_size = min(ctx.max_modes, 3)
    for _ in range(ctx.trials):
        modes = _random_modes(ctx.rng, ctx.size(min(2, map_size), map_size))
        parts = _random_parts(ctx.rng, modes)
        oxi = OrderedPartition.of(*parts)
        omegas = [_random_map(ctx.rng, part) for part in parts]
        ops = [random_operator(ctx.rng, part) for part in parts]

        joint = map_tensor(MapKind.ORDERED, oxi, omegas)
        images = [omega(op) for omega, op in zip(omegas, ops, strict=True)]
        ctx.check("ordered_map_tensor_defining").record(
            joint(ordered_product(oxi, ops)).max_abs_diff(ordered_product(oxi, images)), partition=oxi
        )
        xi = oxi.unordered()
        fermionic = map_tensor(MapKind.FERMIONIC, xi, dict(zip(parts, omegas, strict=True)))
        ctx.check("fermionic_map_tensor_defining").record(
            fermionic(tensor_fermionic(xi, dict(zip(parts, ops, strict=True)))).max_abs_diff(
                tensor_fermionic(xi, dict(zip(parts, images, strict=True)))
            ),
            partition=xi,
        )
        others = [_random_map(ctx.rng, part) for part in parts]
        composed = map_tensor(MapKind.ORDERED, oxi, [a @ b for a, b in zip(omegas, others, strict=True)])
        ctx.check("map_tensor_composition").record(
            (joint @ map_tensor(MapKind.ORDERED, oxi, others)).max_abs_diff(composed), partition=oxi
        )
        ctx.check("map_tensor_adjoint").record(
            joint.adjoint().max_abs_diff(map_tensor(MapKind.ORDERED, oxi, [o.adjoint() for o in omegas])),
            partition=oxi,
        )
        order = [int(k) for k in ctx.rng.permutation(len(parts))]
        product = SuperOp.identity(modes)
        even_product = SuperOp.identity(modes)
        evens = [map_parity_projector(omega, 1) for omega in omegas]
        for k in order:
            product = product @ map_embed(MapKind.FERMIONIC, parts[k], modes, omegas[k])
            even_product = even_product @ map_embed(MapKind.ORDERED, parts[k], modes, evens[k])
        ctx.check("commuting_fermionic_extensions").record(product.max_abs_diff(fermionic), partition=xi)
        ctx.check("commuting_ordered_even_extensions").record(
            even_product.max_abs_diff(map_tensor(MapKind.ORDERED, oxi, evens)), partition=oxi
        )

        # Strong extension on X = first part, with B on the complement.
        subset = parts[0]
        rest = modes - subset
        a = random_operator(ctx.rng, subset)
        b = random_operator(ctx.rng, rest)
        even_map = map_embed(MapKind.ORDERED, subset, modes, evens[0])
        ea, eb = embed(subset, modes, a), embed(rest, modes, b)
        image = embed(subset, modes, evens[0](a))
        ctx.check("even_strong_extension_left").record((even_map(ea @ eb)).max_abs_diff(image @ eb), subset=subset)
        ctx.check("even_strong_extension_right").record((even_map(eb @ ea)).max_abs_diff(eb @ image), subset=subset)
        odd = map_parity_projector(omegas[0], -1)
        odd_map = map_embed(MapKind.ORDERED, subset, modes, odd)
        odd_a = embed(subset, modes, _with_parity(a, ParityClass.ODD))
        odd_b = embed(rest, modes, _with_parity(b, ParityClass.ODD))
        odd_image = embed(subset, modes, odd(_with_parity(a, ParityClass.ODD)))
        ctx.check("odd_extension_sign_flip").record(
            odd_map(odd_b @ odd_a).max_abs_diff(-(odd_b @ odd_image)), subset=subset
        )

        # Map parity, physicality and locality.
        unitary = _random_even_unitary(ctx.rng, modes)
        ladder = jw_ladder(modes.labels[0], modes, SingleMode.ANNIHILATE)
        even_conj, odd_left = conjugation(unitary), left_multiplication(ladder)
        classes = (map_parity(even_conj), map_parity(odd_left), map_parity(even_conj + odd_left))
        expected = (ParityClass.EVEN, ParityClass.ODD, ParityClass.MIXED)
        mismatches = sum(c is not e for c, e in zip(classes, expected, strict=True))
        ctx.check("map_parity_classes", 0.0).record(float(mismatches))
        physical_flags = (
            is_physical_map(even_compression(even_conj)),
            not is_physical_map(SuperOp.identity(modes)),
            not is_physical_map(theta_map(modes)),
        )
        ctx.check("physical_maps", 0.0).record(float(physical_flags.count(False)), modes=modes)
        ctx.check("conjugation_is_tpcp", 0.0).record(
            0.0 if is_tpcp(even_conj, tol=1e-9) and is_tpcp(theta_map(modes)) else 1.0, modes=modes
        )
        ctx.check("transpose_not_cp", 0.0).record(1.0 if is_cp(transpose_map(modes)) else 0.0, modes=modes)

        local = even_compression(conjugation(_random_even_unitary(ctx.rng, subset)))
        certificate = locality_certificate(map_embed(MapKind.ORDERED, subset, modes, local), subset)
        ctx.check("embedded_physical_map_is_local", get_settings().locality_tolerance).record(
            certificate.residual if certificate.remainder_physical else 1.0, subset=subset
        )
        locals_ = [even_compression(conjugation(_random_even_unitary(ctx.rng, part))) for part in parts]
        certificate = locality_certificate(map_tensor(MapKind.ORDERED, oxi, locals_), xi)
        ctx.check("product_of_physical_maps_is_local", get_settings().locality_tolerance).record(
            certificate.residual if certificate.remainder_physical else 1.0, partition=xi
        )


SUITES: dict[str, Callable[[_Context], None]] = {
    "car": _suite_car,
    "phi": _suite_phi,
    "tensor": _suite_tensor,
    "lambda": _suite_lambda,
    "ptrace": _suite_ptrace,
    "parity": _suite_parity,
    "tps": _suite_tps,
    "prodext": _suite_prodext,
    "maps": _suite_maps,
}
SUITE_NAMES: tuple[str, ...] = tuple(SUITES)


def suite_rng(seed: int, name: str) -> np.random.Generator:
    """PCG64 generator for one suite, independent of which other suites run."""
    return np.random.Generator(np.random.PCG64([seed, SUITE_NAMES.index(name)]))


def run_suite(name: str, *, max_modes: int = 4, seed: int = 0, trials: int | None = None) -> SuiteReport:
    if name not in SUITES:
        raise InputError(f"Unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or 'all'.")
    if max_modes < 1:
        raise InputError(f"max_modes must be at least 1, got {max_modes}.")
    if trials is not None and trials < 1:
        raise InputError(f"trials must be at least 1, got {trials}.")
    ctx = _Context(
        rng=suite_rng(seed, name),
        max_modes=max_modes,
        trials=trials or DEFAULT_TRIALS.get(name, FALLBACK_TRIALS),
        tol=get_settings().tolerance,
    )
    logger.debug("running suite %s (max_modes=%d, seed=%d, trials=%d)", name, max_modes, seed, ctx.trials)
    SUITES[name](ctx)
    report = SuiteReport(suite=name, seed=seed, max_modes=max_modes, results=ctx.results())
    logger.info("suite %s: %s", name, "passed" if report.passed else "FAILED")
    return report


def run_checks(
    names: Sequence[str] | str = "all", *, max_modes: int = 4, seed: int = 0, trials: int | None = None
) -> CheckReport:
    if isinstance(names, str):
        names = SUITE_NAMES if names == "all" else (names,)
    return CheckReport([run_suite(name, max_modes=max_modes, seed=seed, trials=trials) for name in names])
