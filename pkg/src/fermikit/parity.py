"""Fermion-number parity on vectors, operators and maps."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Literal, TypeAlias

import numpy as np
import numpy.typing as npt
import scipy.linalg

from fermikit.algebra import Operator, embed, ordered_product
from fermikit.core.config import resolve_tol
from fermikit.core.errors import InputError, InvariantError, SectorError, ShapeError
from fermikit.modes import ModeSet, OccPattern, OrderedPartition, Partition, require_partition, restrict_indices
from fermikit.phase import u_table
from fermikit.superop import SuperOp, pair_parity

logger = logging.getLogger(__name__)

Level: TypeAlias = Literal["vector", "operator"]


class ParityClass(StrEnum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"

    @property
    def sign(self) -> int | None:
        return {ParityClass.EVEN: 1, ParityClass.ODD: -1}.get(self)


@dataclass(frozen=True)
class ParitySector:
    """A local parity assignment epsilon: parts -> {+1, -1}."""

    partition: Partition
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.signs) != len(self.partition.parts):
            raise SectorError(
                f"Sector has {len(self.signs)} signs for the {len(self.partition)} parts of {self.partition}."
            )
        if any(sign not in (1, -1) for sign in self.signs):
            raise SectorError(f"Sector signs must be +1 or -1, got {self.signs}.")

    @classmethod
    def parse(cls, partition: Partition, text: str) -> ParitySector:
        """Parse ``"+-"``; signs follow the parts ordered by smallest label."""
        glyphs = {"+": 1, "-": -1, "−": -1}
        try:
            signs = tuple(glyphs[char] for char in text.strip())
        except KeyError as exc:
            raise SectorError(f"Cannot parse sector {text!r}; use '+' and '-'.") from exc
        return cls(partition, signs)

    @classmethod
    def all(cls, partition: Partition) -> Iterator[ParitySector]:
        for signs in itertools.product((1, -1), repeat=len(partition)):
            yield cls(partition, signs)

    @classmethod
    def all_even(cls, partition: Partition) -> ParitySector:
        return cls(partition, (1,) * len(partition))

    def __str__(self) -> str:
        return "".join("+" if sign > 0 else "-" for sign in self.signs)

    def sign_of(self, part: ModeSet) -> int:
        return self.signs[self.partition.parts.index(part)]


@dataclass(frozen=True, eq=False)
class StateVector:
    modes: ModeSet
    amplitudes: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.shape != (self.modes.dim,):
            raise ShapeError(f"State vector on {self.modes} needs {self.modes.dim} amplitudes, got {amplitudes.size}.")
        if not np.all(np.isfinite(amplitudes)):
            raise InputError("State vector amplitudes must be finite.")
        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def basis(cls, modes: ModeSet, nu: OccPattern | str) -> StateVector:
        pattern = OccPattern.parse(modes, nu) if isinstance(nu, str) else nu
        amplitudes = np.zeros(modes.dim, dtype=np.complex128)
        amplitudes[pattern.index] = 1.0
        return cls(modes, amplitudes)

    @classmethod
    def vacuum(cls, modes: ModeSet) -> StateVector:
        return cls.basis(modes, "0" * len(modes))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        return StateVector(self.modes, self.amplitudes / self.norm)

    def projector(self) -> Operator:
        return Operator(self.modes, np.outer(self.amplitudes, self.amplitudes.conj()))


def _popcount_parity(dim: int, mask: int | None = None) -> npt.NDArray[np.int64]:
    indices = np.arange(dim, dtype=np.int64)
    if mask is not None:
        indices &= mask
    return np.bitwise_count(indices).astype(np.int64) & 1


def parity_operator(modes: ModeSet) -> Operator:
    """T_Y: diagonal with (-1) ** (number of occupied modes)."""
    return Operator(modes, np.diag(1.0 - 2.0 * _popcount_parity(modes.dim)))


def parity_projector(modes: ModeSet, sign: int) -> Operator:
    if sign not in (1, -1):
        raise SectorError(f"Parity sign must be +1 or -1, got {sign}.")
    return (Operator.identity(modes) + parity_operator(modes) * sign) / 2


def theta(op: Operator) -> Operator:
    """Operator parity Theta_Y: conjugation by T_Y."""
    signs = 1.0 - 2.0 * _popcount_parity(op.dim)
    return Operator(op.modes, signs[:, None] * op.matrix * signs[None, :])


def parity_parts(op: Operator) -> tuple[Operator, Operator]:
    """Even and odd parts (I +/- Theta)(A) / 2."""
    flipped = theta(op)
    return (op + flipped) / 2, (op - flipped) / 2


def operator_parity(op: Operator, tol: float | None = None) -> ParityClass:
    tol = resolve_tol(tol)
    even, odd = parity_parts(op)
    if odd.max_abs() <= tol:
        return ParityClass.EVEN
    if even.max_abs() <= tol:
        return ParityClass.ODD
    return ParityClass.MIXED


def vector_parity(vector: StateVector, tol: float | None = None) -> ParityClass:
    tol = resolve_tol(tol)
    odd = _popcount_parity(vector.modes.dim).astype(bool)
    magnitudes = np.abs(vector.amplitudes)
    if not np.any(magnitudes[odd] > tol):
        return ParityClass.EVEN
    if not np.any(magnitudes[~odd] > tol):
        return ParityClass.ODD
    return ParityClass.MIXED


def _check_sector(xi: Partition, eps: ParitySector) -> None:
    require_partition(xi.modes, xi)
    if eps.partition != xi:
        raise SectorError(f"Sector {eps} belongs to {eps.partition}, not to {xi}.")


def _operator_sector_mask(xi: Partition, eps: ParitySector) -> npt.NDArray[np.bool_]:
    modes = xi.modes
    keep = np.ones(modes.dim**2, dtype=bool)
    for mask, sign in zip(xi.masks(modes), eps.signs, strict=True):
        keep &= pair_parity(modes, mask) == (0 if sign > 0 else 1)
    return keep


def local_parity_projector(xi: Partition, eps: ParitySector, level: Level = "vector") -> Operator | SuperOp:
    """Projector onto the xi-local parity sector eps, on vectors or on operators."""
    _check_sector(xi, eps)
    modes = xi.modes
    if level == "vector":
        result = Operator.identity(modes)
        for part, sign in zip(xi.parts, eps.signs, strict=True):
            result = result @ embed(part, modes, parity_projector(part, sign))
        return result
    return SuperOp(modes, modes, np.diag(_operator_sector_mask(xi, eps).astype(np.complex128)))


def project_local_parity(xi: Partition, eps: ParitySector, op: Operator) -> Operator:
    """Operator-level sector projection without building the superoperator."""
    _check_sector(xi, eps)
    require_partition(op.modes, xi)
    keep = _operator_sector_mask(xi, eps).reshape(op.dim, op.dim)
    return Operator(op.modes, np.where(keep, op.matrix, 0.0))


def all_even_part(xi: Partition, op: Operator) -> Operator:
    return project_local_parity(xi, ParitySector.all_even(xi), op)


def parity_sectors(xi: Partition, op: Operator, tol: float | None = None) -> dict[ParitySector, Operator]:
    """Nonzero xi-local sector blocks of `op`; zero blocks are omitted."""
    tol = resolve_tol(tol)
    blocks = {eps: project_local_parity(xi, eps, op) for eps in ParitySector.all(xi)}
    return {eps: block for eps, block in blocks.items() if block.max_abs() > tol}


def tps_unitary(oxi: OrderedPartition) -> Operator:
    """Diagonal unitary carrying standard products of locally even operators to ordered products."""
    return Operator(oxi.modes, np.diag(u_table(oxi).astype(np.complex128)))


def tensor_vectors(vectors: Sequence[StateVector]) -> StateVector:
    """Interleaved standard product of vectors on disjoint mode sets."""
    modes = ModeSet().union(*(vector.modes for vector in vectors))
    if sum(len(vector.modes) for vector in vectors) != len(modes):
        raise InputError("Vectors must live on disjoint mode sets.")
    amplitudes = np.ones(modes.dim, dtype=np.complex128)
    for vector in vectors:
        amplitudes *= vector.amplitudes[restrict_indices(modes, vector.modes)]
    return StateVector(modes, amplitudes)


def tps_vector(oxi: OrderedPartition, vectors: Sequence[StateVector], tol: float | None = None) -> StateVector:
    """Joint vector U (psi_1 (x) ... (x) psi_n) of locally parity-definite vectors."""
    require_partition(oxi.modes, oxi)
    if [vector.modes for vector in vectors] != list(oxi.parts):
        raise InputError(f"Vectors must be given for the parts of {oxi} in order.")
    for vector in vectors:
        if vector_parity(vector, tol) is ParityClass.MIXED:
            raise InputError(f"Vector on {vector.modes} has no definite parity.")
    joint = tensor_vectors(vectors)
    return StateVector(joint.modes, u_table(oxi) * joint.amplitudes)


@dataclass(frozen=True)
class ParityCounts:
    even: int
    odd: int
    mixed: int


@dataclass(frozen=True)
class ProductExtensionReport:
    """Self-adjointness and positivity of an ordered product, next to the closed-form prediction."""

    counts: ParityCounts
    self_adjoint: bool
    psd: bool
    predicted_self_adjoint: bool
    predicted_psd: bool | None
    hermiticity_residual: float
    min_eigenvalue: float | None
    product: Operator

    @property
    def agrees(self) -> bool:
        if self.self_adjoint != self.predicted_self_adjoint:
            return False
        return self.predicted_psd is None or self.psd == self.predicted_psd


def predict_self_adjoint(counts: ParityCounts) -> bool:
    if counts.mixed == 0:
        return counts.odd % 4 in (0, 1)
    return counts.mixed == 1 and counts.odd % 4 == 0


def predict_psd(counts: ParityCounts) -> bool:
    """Prediction for positive semidefinite operands."""
    return counts.mixed <= 1


def _min_eigenvalue(op: Operator) -> float:
    hermitian = (op.matrix + op.matrix.conj().T) / 2
    return float(scipy.linalg.eigvalsh(hermitian)[0])


def product_extension_classify(
    oxi: OrderedPartition, operands: Sequence[Operator], tol: float | None = None
) -> ProductExtensionReport:
    """Classify the ordered product of Hermitian operands and cross-check the closed form."""
    tol = resolve_tol(tol)
    for op in operands:
        if not op.is_hermitian(tol):
            raise InputError(f"Operand on {op.modes} is not Hermitian.")
    classes = [operator_parity(op, tol) for op in operands]
    counts = ParityCounts(
        even=classes.count(ParityClass.EVEN),
        odd=classes.count(ParityClass.ODD),
        mixed=classes.count(ParityClass.MIXED),
    )
    product = ordered_product(oxi, operands)
    residual = product.hermiticity_residual()
    self_adjoint = residual <= tol
    min_eigenvalue = _min_eigenvalue(product) if self_adjoint else None
    psd = min_eigenvalue is not None and min_eigenvalue >= -tol
    operands_psd = all(_min_eigenvalue(op) >= -tol for op in operands)
    report = ProductExtensionReport(
        counts=counts,
        self_adjoint=self_adjoint,
        psd=psd,
        predicted_self_adjoint=predict_self_adjoint(counts),
        predicted_psd=predict_psd(counts) if operands_psd else None,
        hermiticity_residual=residual,
        min_eigenvalue=min_eigenvalue,
        product=product,
    )
    if not report.agrees:
        logger.warning("product extension mismatch on %s: %s", oxi, counts)
        raise InvariantError(
            f"Ordered product on {oxi} with counts {counts} disagrees with the closed form "
            f"(self_adjoint={self_adjoint}, psd={psd})."
        )
    return report
