"""Density matrices, reduced states and correlation classifiers."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import numpy.typing as npt
import scipy.linalg
import scipy.optimize

from fermikit.algebra import Basis, Operator, ordered_product, partial_trace
from fermikit.core.config import get_settings, resolve_tol
from fermikit.core.errors import InputError, InvariantError, StateError
from fermikit.modes import ModeSet, OrderedPartition, Partition, require_partition
from fermikit.parity import ParityClass, StateVector, all_even_part, operator_parity, parity_projector
from fermikit.phase import apply_signs, f_table

logger = logging.getLogger(__name__)


class CorrelationMode(StrEnum):
    NO_SSR = "no_ssr"
    SSR = "ssr"


def _min_eigenvalue(matrix: npt.NDArray[np.complex128]) -> float:
    try:
        return float(scipy.linalg.eigvalsh((matrix + matrix.conj().T) / 2)[0])
    except np.linalg.LinAlgError as exc:
        raise StateError("Eigenvalue computation did not converge.", cause=exc) from exc


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A positive, Hermitian, unit-trace operator."""

    op: Operator
    tol: float | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        tol = resolve_tol(self.tol)
        op = self.op
        residual = op.hermiticity_residual()
        if residual > tol:
            raise StateError(f"Density matrix on {op.modes} is not Hermitian (residual {residual:.3g}).")
        trace = op.trace()
        if abs(trace - 1.0) > tol:
            raise StateError(f"Density matrix on {op.modes} has trace {trace:.12g}, expected 1.")
        lowest = _min_eigenvalue(op.matrix)
        if lowest < -tol:
            raise StateError(f"Density matrix on {op.modes} has negative eigenvalue {lowest:.3g}.")

    @classmethod
    def from_operator(cls, op: Operator, tol: float | None = None) -> DensityMatrix:
        return cls(op, tol)

    @classmethod
    def from_vector(cls, vector: StateVector) -> DensityMatrix:
        return cls(vector.normalized().projector())

    @property
    def modes(self) -> ModeSet:
        return self.op.modes

    @property
    def matrix(self) -> npt.NDArray[np.complex128]:
        return self.op.matrix

    @property
    def dim(self) -> int:
        return self.op.dim

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))


@dataclass(frozen=True, eq=False)
class CoeffMatrix:
    """Expansion coefficients of a state in the standard or the fermionic basis."""

    modes: ModeSet
    entries: npt.NDArray[np.complex128]
    basis: Basis = "standard"

    def to(self, basis: Basis) -> CoeffMatrix:
        if basis == self.basis:
            return self
        return CoeffMatrix(self.modes, apply_signs(f_table(self.modes), self.entries), basis)

    def operator(self) -> Operator:
        """The operator these coefficients expand."""
        return Operator(self.modes, self.to("standard").entries)


def coeffs(rho: DensityMatrix, basis: Basis = "standard") -> CoeffMatrix:
    """Coefficients R (standard) or R~ = f o R (fermionic)."""
    return CoeffMatrix(rho.modes, np.array(rho.matrix), "standard").to(basis)


def spectrum(rho: DensityMatrix) -> npt.NDArray[np.float64]:
    """Eigenvalues of the standard coefficient matrix, ascending."""
    return scipy.linalg.eigvalsh(rho.matrix)


def reduce_state(rho: DensityMatrix, subset: ModeSet) -> DensityMatrix:
    reduced = partial_trace(rho.modes, subset, rho.op)
    return DensityMatrix(reduced, rho.tol)


def maximally_mixed(modes: ModeSet) -> DensityMatrix:
    return DensityMatrix(Operator.identity(modes) / modes.dim)


def product_state(oxi: OrderedPartition, marginals: Sequence[DensityMatrix]) -> DensityMatrix:
    """Ordered product of local states; fails with StateError when the product is not a state."""
    return DensityMatrix(ordered_product(oxi, [marginal.op for marginal in marginals]))


@dataclass(frozen=True)
class CorrelationReport:
    mode: CorrelationMode
    partition: Partition
    uncorrelated: bool
    product_physical: bool | None
    physical: bool
    residual: float
    product_residual: float
    reconstruction_hermitian: bool
    marginals: tuple[DensityMatrix, ...] = field(repr=False)

    def as_dict(self) -> dict[str, object]:
        return {
            "mode": self.mode.value,
            "partition": str(self.partition),
            "uncorrelated": self.uncorrelated,
            "product_physical": self.product_physical,
            "physical": self.physical,
            "residual": self.residual,
            "product_residual": self.product_residual,
            "reconstruction_hermitian": self.reconstruction_hermitian,
        }


def _warn_if_borderline(name: str, residual: float, tol: float) -> None:
    if tol < residual <= 10 * tol or tol / 10 < residual <= tol:
        logger.warning("%s residual %.3g is within a factor 10 of the tolerance %.3g", name, residual, tol)


def classify_correlation(
    rho: DensityMatrix,
    xi: Partition,
    mode: CorrelationMode | str = CorrelationMode.NO_SSR,
    tol: float | None = None,
) -> CorrelationReport:
    """Decide whether `rho` is the ordered product of its marginals, with or without parity superselection.

    Marginals are multiplied in the order of their smallest labels.
    """
    mode = CorrelationMode(mode)
    tol = resolve_tol(tol)
    require_partition(rho.modes, xi)
    marginals = tuple(reduce_state(rho, part) for part in xi.parts)
    reconstruction = ordered_product(xi.ordered(), [marginal.op for marginal in marginals])
    physical = operator_parity(rho.op, tol) is ParityClass.EVEN
    product_residual = rho.op.max_abs_diff(reconstruction)
    hermitian = reconstruction.is_hermitian(tol)

    if mode is CorrelationMode.NO_SSR:
        residual = product_residual
        uncorrelated = residual <= tol
        product_physical = None
        if uncorrelated and physical and not all(operator_parity(m.op, tol) is ParityClass.EVEN for m in marginals):
            raise InvariantError(f"Uncorrelated even state on {xi} has a marginal that is not even.")
    else:
        residual = all_even_part(xi, rho.op).max_abs_diff(reconstruction)
        uncorrelated = physical and residual <= tol
        product_physical = physical and product_residual <= tol
        if product_physical and not uncorrelated:
            raise InvariantError(
                f"Product physical state on {xi} failed the uncorrelated test (residual {residual:.3g})."
            )
    _warn_if_borderline("correlation", residual, tol)
    return CorrelationReport(
        mode=mode,
        partition=xi,
        uncorrelated=uncorrelated,
        product_physical=product_physical,
        physical=physical,
        residual=residual,
        product_residual=product_residual,
        reconstruction_hermitian=hermitian,
        marginals=marginals,
    )


@dataclass(frozen=True)
class SeparabilityCertificate:
    """An explicit convex decomposition into ordered products of local pure states."""

    partition: Partition
    weights: tuple[float, ...]
    factors: tuple[tuple[Operator, ...], ...] = field(repr=False)
    residual: float

    def reconstruct(self) -> Operator:
        oxi = self.partition.ordered()
        total = Operator.zeros(oxi.modes)
        for weight, local in zip(self.weights, self.factors, strict=True):
            total = total + ordered_product(oxi, local) * weight
        return total


def _random_local_vector(rng: np.random.Generator, part: ModeSet, sign: int | None) -> StateVector:
    amplitudes = rng.standard_normal(part.dim) + 1j * rng.standard_normal(part.dim)
    if sign is not None:
        amplitudes = parity_projector(part, sign).matrix @ amplitudes
    return StateVector(part, amplitudes).normalized()


def _candidate_pool(
    xi: Partition, ssr: bool, rng: np.random.Generator, candidates: int
) -> list[tuple[Operator, ...]]:
    pool: list[tuple[Operator, ...]] = []
    # Computational-basis products; every local factor is parity-definite.
    grids = np.meshgrid(*(np.arange(part.dim) for part in xi.parts), indexing="ij")
    for combo in zip(*(grid.reshape(-1) for grid in grids), strict=True):
        pool.append(
            tuple(
                StateVector.basis(part, format(int(index), f"0{len(part)}b")).projector()
                for part, index in zip(xi.parts, combo, strict=True)
            )
        )
    for _ in range(candidates):
        # At most one local factor of mixed parity keeps the ordered product positive.
        free = None if ssr else int(rng.integers(len(xi)))
        local = []
        for k, part in enumerate(xi.parts):
            sign = None if k == free else int(rng.choice((1, -1)))
            local.append(_random_local_vector(rng, part, sign).projector())
        pool.append(tuple(local))
    return pool


def _stacked(op: Operator) -> npt.NDArray[np.float64]:
    flat = op.matrix.reshape(-1)
    return np.concatenate([flat.real, flat.imag])


def separable_certificate(
    rho: DensityMatrix,
    xi: Partition,
    *,
    ssr: bool = False,
    rng: np.random.Generator | None = None,
    candidates: int = 64,
    max_terms: int | None = None,
    tol: float | None = None,
) -> SeparabilityCertificate | None:
    """Search for a convex decomposition of `rho` into products of local pure states.

    Candidates are computational-basis products plus random local pure states;
    weights come from non-negative least squares. Returns None when the search
    finds nothing, which says nothing about non-separability.
    """
    require_partition(rho.modes, xi)
    if candidates < 0:
        raise InputError(f"candidates must be non-negative, got {candidates}.")
    if ssr and operator_parity(rho.op, resolve_tol(None)) is not ParityClass.EVEN:
        return None
    tol = get_settings().locality_tolerance if tol is None else tol
    rng = np.random.default_rng() if rng is None else rng
    oxi = xi.ordered()
    pool = _candidate_pool(xi, ssr, rng, candidates)
    columns = np.stack([_stacked(ordered_product(oxi, local)) for local in pool], axis=1)
    target = _stacked(rho.op)
    weights, _ = scipy.optimize.nnls(columns, target)
    if max_terms is not None and np.count_nonzero(weights) > max_terms:
        keep = np.argsort(weights)[::-1][:max_terms]
        sub, _ = scipy.optimize.nnls(columns[:, keep], target)
        weights = np.zeros_like(weights)
        weights[keep] = sub
    residual = float(np.max(np.abs(columns @ weights - target)))
    logger.debug("separability search on %s: %d candidates, residual %.3g", xi, len(pool), residual)
    if residual > tol:
        return None
    support = [k for k in np.flatnonzero(weights > tol)]
    return SeparabilityCertificate(
        partition=xi,
        weights=tuple(float(weights[k]) for k in support),
        factors=tuple(pool[k] for k in support),
        residual=residual,
    )
