"""Maps between operator algebras: constructors, fermionic products, parity, locality and channels.

All maps are dense :class:`~fermikit.superop.SuperOp` matrices over the
row-major vectorization. The fermionic product of maps is the standard
product of maps dressed with the h signs on both sides; the ordered product
additionally carries the l signs of the ordered partitions.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import numpy.typing as npt
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from fermikit.algebra import Operator, partial_trace
from fermikit.core.config import get_settings, resolve_tol
from fermikit.core.errors import DomainError, InputError, PartitionError, ShapeError
from fermikit.modes import (
    ModeSet,
    OccPattern,
    OrderedPartition,
    Partition,
    require_partition,
    restrict_indices,
    scatter_indices,
)
from fermikit.parity import ParityClass, parity_operator
from fermikit.phase import h_table, l_table
from fermikit.superop import SuperOp, pair_parity

logger = logging.getLogger(__name__)


class MapKind(StrEnum):
    FERMIONIC = "fermionic"
    ORDERED = "ordered"


def conjugation(unitary: Operator) -> SuperOp:
    """A -> U A U^dagger."""
    return SuperOp(unitary.modes, unitary.modes, np.kron(unitary.matrix, unitary.matrix.conj()))


def left_multiplication(op: Operator) -> SuperOp:
    """A -> B A."""
    return SuperOp(op.modes, op.modes, np.kron(op.matrix, np.eye(op.dim)))


def right_multiplication(op: Operator) -> SuperOp:
    """A -> A B."""
    return SuperOp(op.modes, op.modes, np.kron(np.eye(op.dim), op.matrix.T))


def trace_map(modes: ModeSet) -> SuperOp:
    """The full trace, a map onto the scalars of the empty mode set."""
    return SuperOp(modes, ModeSet(), np.eye(modes.dim).reshape(1, -1))


def partial_trace_map(modes: ModeSet, subset: ModeSet) -> SuperOp:
    """The fermionic partial trace from `modes` down to `subset`, tabulated."""
    return SuperOp.from_callable(modes, lambda op: partial_trace(modes, subset, op), target=subset)


def transpose_map(modes: ModeSet) -> SuperOp:
    dim = modes.dim
    perm = np.arange(dim * dim).reshape(dim, dim).T.reshape(-1)
    return SuperOp(modes, modes, np.eye(dim * dim)[perm])


def theta_map(modes: ModeSet) -> SuperOp:
    """Operator parity Theta_Y as a map."""
    return conjugation(parity_operator(modes))


def _theta_signs(modes: ModeSet) -> npt.NDArray[np.float64]:
    return 1.0 - 2.0 * pair_parity(modes)


def even_compression(omega: SuperOp) -> SuperOp:
    """Restriction to physical operators on both sides, Pi+ o Omega o Pi+."""
    keep_out = pair_parity(omega.target) == 0
    keep_in = pair_parity(omega.source) == 0
    return SuperOp(omega.source, omega.target, omega.matrix * np.outer(keep_out, keep_in))


def map_theta(omega: SuperOp) -> SuperOp:
    """Map parity T(Omega) = Theta o Omega o Theta."""
    signs = np.outer(_theta_signs(omega.target), _theta_signs(omega.source))
    return SuperOp(omega.source, omega.target, omega.matrix * signs)


def map_parity_projector(omega: SuperOp, sign: int) -> SuperOp:
    """P+/- applied to `omega`: (Omega +/- T(Omega)) / 2."""
    if sign not in (1, -1):
        raise InputError(f"Map parity sign must be +1 or -1, got {sign}.")
    return (omega + map_theta(omega) * sign) * 0.5


def map_parity(omega: SuperOp, tol: float | None = None) -> ParityClass:
    tol = resolve_tol(tol)
    if np.max(np.abs(map_parity_projector(omega, -1).matrix)) <= tol:
        return ParityClass.EVEN
    if np.max(np.abs(map_parity_projector(omega, 1).matrix)) <= tol:
        return ParityClass.ODD
    return ParityClass.MIXED


def is_physical_map(omega: SuperOp, tol: float | None = None) -> bool:
    """Even, and annihilating every odd operator."""
    tol = resolve_tol(tol)
    if map_parity(omega, tol) is not ParityClass.EVEN:
        return False
    odd = pair_parity(omega.source) == 1
    if not np.any(odd):
        return True
    return bool(np.max(np.abs(omega.matrix[:, odd])) <= tol)


def _vec_sign(table: npt.NDArray[np.int8]) -> npt.NDArray[np.float64]:
    return table.astype(np.float64).reshape(-1)


def _side_signs(kind: MapKind, parts: Sequence[ModeSet]) -> npt.NDArray[np.float64]:
    """Vectorized h (and l) signs of the product structure given by `parts`, empty parts dropped."""
    kept = tuple(part for part in parts if part.labels)
    signs = _vec_sign(h_table(Partition(kept)))
    if kind is MapKind.ORDERED:
        signs = signs * _vec_sign(l_table(OrderedPartition(kept)))
    return signs


def _local_vec_index(modes: ModeSet, part: ModeSet) -> npt.NDArray[np.int64]:
    """For every vec index on `modes`, the vec index of the restricted pair on `part`."""
    rows, cols = np.divmod(np.arange(modes.dim**2, dtype=np.int64), modes.dim)
    local = restrict_indices(modes, part)
    return local[rows] * part.dim + local[cols]


def _standard_map_tensor(operands: Sequence[SuperOp]) -> tuple[ModeSet, ModeSet, npt.NDArray[np.complex128]]:
    sources = [omega.source for omega in operands]
    targets = [omega.target for omega in operands]
    for i, left in enumerate(targets):
        for right in targets[i + 1 :]:
            if not left.isdisjoint(right):
                raise PartitionError(f"Map targets {left} and {right} overlap.")
    source = ModeSet().union(*sources)
    target = ModeSet().union(*targets)
    matrix = np.ones((target.dim**2, source.dim**2), dtype=np.complex128)
    for omega in operands:
        out_ix = _local_vec_index(target, omega.target)
        in_ix = _local_vec_index(source, omega.source)
        matrix *= omega.matrix[np.ix_(out_ix, in_ix)]
    return source, target, matrix


def map_tensor(
    kind: MapKind | str,
    xi: Partition | OrderedPartition,
    operands: Sequence[SuperOp] | dict[ModeSet, SuperOp],
) -> SuperOp:
    """Fermionic or ordered product of per-part maps.

    The fermionic kind takes fermionic products to fermionic products of the
    images; the ordered kind does the same for ordered products in the order
    of `xi`. Targets may differ from the sources (a part may be traced out).
    """
    kind = MapKind(kind)
    if kind is MapKind.FERMIONIC and isinstance(xi, OrderedPartition):
        if not isinstance(operands, dict):
            operands = dict(zip(xi.parts, operands, strict=True))
        xi = xi.unordered()
    if kind is MapKind.ORDERED and isinstance(xi, Partition):
        xi = xi.ordered()
    require_partition(xi.modes, xi)
    if isinstance(operands, dict):
        if set(operands) != set(xi.parts):
            raise PartitionError(f"Maps must be given exactly for the parts of {xi}.")
        ops = [operands[part] for part in xi.parts]
    else:
        ops = list(operands)
    if [omega.source for omega in ops] != list(xi.parts):
        got = ", ".join(str(omega.source) for omega in ops)
        raise PartitionError(f"Maps on {got} do not match the parts of {xi}.")
    source, target, matrix = _standard_map_tensor(ops)
    signs_in = _side_signs(kind, xi.parts)
    signs_out = _side_signs(kind, [omega.target for omega in ops])
    return SuperOp(source, target, signs_out[:, None] * matrix * signs_in[None, :])


def map_embed(kind: MapKind | str, subset: ModeSet, modes: ModeSet, omega: SuperOp) -> SuperOp:
    """Extend `omega` from `subset` to `modes` with the identity on the complement."""
    kind = MapKind(kind)
    if not subset.issubset(modes):
        raise DomainError(f"{subset} is not contained in {modes}.")
    if omega.source != subset:
        raise ShapeError(f"Map acts on {omega.source}, expected {subset}.")
    rest = modes - subset
    if not rest.labels:
        return omega
    if not subset.labels:
        raise DomainError("Cannot embed a map on the empty mode set.")
    if kind is MapKind.ORDERED:
        return map_tensor(kind, OrderedPartition.of(subset, rest), [omega, SuperOp.identity(rest)])
    return map_tensor(kind, Partition.of(subset, rest), {subset: omega, rest: SuperOp.identity(rest)})


@dataclass(frozen=True)
class LocalityCertificate:
    """Recovered local maps, the remainder Xi and the fit residual on the locally physical block."""

    target: ModeSet | Partition
    local_maps: tuple[SuperOp, ...] = field(repr=False)
    remainder: SuperOp = field(repr=False)
    residual: float
    remainder_physical: bool
    tol: float

    @property
    def local(self) -> bool:
        return self.residual <= self.tol and self.remainder_physical


def _embedded_signs(modes: ModeSet, subset: ModeSet) -> npt.NDArray[np.float64]:
    rest = modes - subset
    if not subset.labels or not rest.labels:
        return np.ones(modes.dim**2)
    return _side_signs(MapKind.ORDERED, [subset, rest])


def _lsqr(design: scipy.sparse.csr_matrix, rhs: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    # The design is real; solve the real and imaginary parts separately.
    real = scipy.sparse.linalg.lsqr(design, rhs.real, atol=1e-14, btol=1e-14)[0]
    imag = scipy.sparse.linalg.lsqr(design, rhs.imag, atol=1e-14, btol=1e-14)[0]
    return real + 1j * imag


def _x_local(omega: SuperOp, subset: ModeSet, tol: float) -> LocalityCertificate:
    modes = omega.modes
    if not subset.issubset(modes):
        raise DomainError(f"{subset} is not contained in {modes}.")
    rest = modes - subset
    local_dim = subset.dim**2
    in_x = _local_vec_index(modes, subset)
    in_rest = _local_vec_index(modes, rest)
    odd_x = pair_parity(modes, modes.mask(subset))
    odd_rest = pair_parity(modes, modes.mask(rest))
    signs = _embedded_signs(modes, subset)
    columns = np.flatnonzero((odd_x == 0) & (odd_rest == 0))

    # Entries reachable by the embedding of a physical local map.
    reachable = (in_rest[:, None] == in_rest[None, columns]) & (odd_x[:, None] == 0)
    out_idx, col_pos = np.nonzero(reachable)
    in_idx = columns[col_pos]
    keys, param = np.unique(in_x[out_idx] * local_dim + in_x[in_idx], return_inverse=True)
    design = scipy.sparse.csr_matrix(
        (signs[out_idx] * signs[in_idx], (np.arange(out_idx.size), param)),
        shape=(out_idx.size, keys.size),
    )
    rhs = omega.matrix[out_idx, in_idx]
    solution = _lsqr(design, rhs) if keys.size else np.zeros(0, dtype=np.complex128)

    local_matrix = np.zeros(local_dim * local_dim, dtype=np.complex128)
    local_matrix[keys] = solution
    local = SuperOp(subset, subset, local_matrix.reshape(local_dim, local_dim))
    if not subset.labels:
        fitted = SuperOp.identity(modes) * local.matrix[0, 0]
    else:
        fitted = map_embed(MapKind.ORDERED, subset, modes, local)
    remainder = omega - fitted
    residual = float(np.max(np.abs(remainder.matrix[:, columns]))) if columns.size else 0.0
    return LocalityCertificate(
        target=subset,
        local_maps=(local,),
        remainder=remainder,
        residual=residual,
        remainder_physical=is_physical_map(remainder, tol),
        tol=tol,
    )


def _all_even_grid(modes: ModeSet, xi: Partition) -> tuple[npt.NDArray[np.int64], list[npt.NDArray[np.int64]]]:
    """Global vec indices of the all-even block, laid out on per-part local axes."""
    grid_rows = np.zeros((1,) * len(xi), dtype=np.int64)
    grid_cols = np.zeros((1,) * len(xi), dtype=np.int64)
    evens = []
    for axis, part in enumerate(xi.parts):
        even = np.flatnonzero(pair_parity(part) == 0)
        evens.append(even)
        scatter = scatter_indices(modes, part)
        shape = [1] * len(xi)
        shape[axis] = even.size
        grid_rows = grid_rows | scatter[even // part.dim].reshape(shape)
        grid_cols = grid_cols | scatter[even % part.dim].reshape(shape)
    return grid_rows * modes.dim + grid_cols, evens


def _xi_local(omega: SuperOp, xi: Partition, tol: float) -> LocalityCertificate:
    modes = omega.modes
    require_partition(modes, xi)
    grid, evens = _all_even_grid(modes, xi)
    flat = grid.reshape(-1)
    signs = _side_signs(MapKind.ORDERED, xi.parts)
    block = signs[flat][:, None] * omega.matrix[np.ix_(flat, flat)] * signs[flat][None, :]
    sizes = [even.size for even in evens]
    current = block.reshape(*sizes, *sizes)

    factors = []
    for _ in range(len(xi) - 1):
        size = current.shape[0]
        rest_axes = current.ndim // 2
        # (o_1, o_rest, i_1, i_rest) -> ((o_1, i_1), (o_rest, i_rest))
        moved = np.moveaxis(current, rest_axes, 1)
        matrix = moved.reshape(size * size, -1)
        u, s, vh = scipy.linalg.svd(matrix, full_matrices=False)
        factors.append(u[:, 0].reshape(size, size))
        current = (s[0] * vh[0]).reshape(moved.shape[2:])
    factors.append(current.reshape(sizes[-1], sizes[-1]))

    local_maps = []
    for part, even, factor in zip(xi.parts, evens, factors, strict=True):
        matrix = np.zeros((part.dim**2, part.dim**2), dtype=np.complex128)
        matrix[np.ix_(even, even)] = factor
        local_maps.append(SuperOp(part, part, matrix))
    fitted = map_tensor(MapKind.ORDERED, xi.ordered(), local_maps)
    remainder = omega - fitted
    residual = float(np.max(np.abs(remainder.matrix[:, flat])))
    return LocalityCertificate(
        target=xi,
        local_maps=tuple(local_maps),
        remainder=remainder,
        residual=residual,
        remainder_physical=is_physical_map(remainder, tol),
        tol=tol,
    )


def locality_certificate(
    omega: SuperOp, target: ModeSet | Partition, tol: float | None = None
) -> LocalityCertificate:
    """Fit `omega` as a local physical part plus a physical remainder that kills locally physical operators."""
    tol = get_settings().locality_tolerance if tol is None else tol
    if isinstance(target, ModeSet):
        certificate = _x_local(omega, target, tol)
    else:
        certificate = _xi_local(omega, target, tol)
    logger.debug("locality fit on %s: residual %.3g", target, certificate.residual)
    return certificate


def is_local_map(omega: SuperOp, target: ModeSet | Partition, tol: float | None = None) -> bool:
    return locality_certificate(omega, target, tol).local


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Block matrix whose (nu, nu') block is Omega(E^{nu,nu'})."""

    source: ModeSet
    target: ModeSet
    matrix: npt.NDArray[np.complex128]

    def block(self, nu: OccPattern, nup: OccPattern) -> Operator:
        if nu.modes != self.source or nup.modes != self.source:
            raise DomainError(f"Patterns must live on {self.source}.")
        dim = self.target.dim
        rows = slice(nu.index * dim, (nu.index + 1) * dim)
        cols = slice(nup.index * dim, (nup.index + 1) * dim)
        return Operator(self.target, self.matrix[rows, cols])

    def min_eigenvalue(self) -> float:
        return float(scipy.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)[0])

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def choi(omega: SuperOp) -> ChoiMatrix:
    d_in, d_out = omega.source.dim, omega.target.dim
    tensor = omega.matrix.reshape(d_out, d_out, d_in, d_in).transpose(2, 0, 3, 1)
    return ChoiMatrix(omega.source, omega.target, tensor.reshape(d_in * d_out, d_in * d_out))


def is_cp(omega: SuperOp, tol: float | None = None) -> bool:
    tol = resolve_tol(tol)
    matrix = choi(omega)
    return matrix.hermiticity_residual() <= tol and matrix.min_eigenvalue() >= -tol


def trace_residual(omega: SuperOp) -> float:
    """Deviation of Tr o Omega from Tr."""
    d_out = omega.target.dim
    diagonal = np.arange(d_out) * (d_out + 1)
    traced = omega.matrix[diagonal].sum(axis=0)
    return float(np.max(np.abs(traced - np.eye(omega.source.dim).reshape(-1))))


def is_tp(omega: SuperOp, tol: float | None = None) -> bool:
    return trace_residual(omega) <= resolve_tol(tol)


def is_tpcp(omega: SuperOp, tol: float | None = None) -> bool:
    return is_tp(omega, tol) and is_cp(omega, tol)
