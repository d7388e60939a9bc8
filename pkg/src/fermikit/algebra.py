"""Operators on occupation spaces and the fermionic products built from them.

Operators are plain coefficient matrices in the computational basis. Whether
a matrix is read in the standard or the fermionic basis is decided by the
function that produced it, not by a tag on the value.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Literal, TypeAlias

import numpy as np
import numpy.typing as npt

from fermikit.core.config import resolve_tol
from fermikit.core.errors import DomainError, PartitionError, ShapeError
from fermikit.modes import (
    ModeSet,
    OccPattern,
    OrderedPartition,
    Partition,
    require_partition,
    restrict_indices,
)
from fermikit.phase import apply_signs, f_table, h_table, l_table, phase_f

Direction: TypeAlias = Literal["forward", "inverse"]
Basis: TypeAlias = Literal["standard", "fermionic"]


class SingleMode(StrEnum):
    """Single-mode operators in the basis (|0>, |1>)."""

    CREATE = "create"
    ANNIHILATE = "annihilate"
    NUMBER = "number"
    HOLE = "hole"
    PHASE = "phase"
    IDENTITY = "identity"

    @property
    def odd(self) -> bool:
        return self in (SingleMode.CREATE, SingleMode.ANNIHILATE)


_SINGLE_MODE: dict[SingleMode, tuple[tuple[int, int], tuple[int, int]]] = {
    SingleMode.CREATE: ((0, 0), (1, 0)),
    SingleMode.ANNIHILATE: ((0, 1), (0, 0)),
    SingleMode.NUMBER: ((0, 0), (0, 1)),
    SingleMode.HOLE: ((1, 0), (0, 0)),
    SingleMode.PHASE: ((1, 0), (0, -1)),
    SingleMode.IDENTITY: ((1, 0), (0, 1)),
}


@dataclass(frozen=True, eq=False)
class Operator:
    """A complex 2**|Y| x 2**|Y| matrix on the mode set Y."""

    modes: ModeSet
    matrix: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.complex128)
        dim = self.modes.dim
        if matrix.shape != (dim, dim):
            raise ShapeError(f"Operator on {self.modes} must be {dim}x{dim}, got shape {matrix.shape}.")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, modes: ModeSet) -> Operator:
        return cls(modes, np.eye(modes.dim, dtype=np.complex128))

    @classmethod
    def zeros(cls, modes: ModeSet) -> Operator:
        return cls(modes, np.zeros((modes.dim, modes.dim), dtype=np.complex128))

    @classmethod
    def from_scalar(cls, value: complex) -> Operator:
        return cls(ModeSet(), np.array([[value]], dtype=np.complex128))

    @property
    def dim(self) -> int:
        return self.modes.dim

    def scalar(self) -> complex:
        """The single entry of an operator on the empty mode set."""
        if self.modes.labels:
            raise ShapeError(f"Only operators on the empty mode set are scalars, not on {self.modes}.")
        return complex(self.matrix[0, 0])

    def _same_modes(self, other: Operator) -> None:
        if other.modes != self.modes:
            raise ShapeError(f"Operators live on different mode sets: {self.modes} and {other.modes}.")

    def dagger(self) -> Operator:
        return Operator(self.modes, self.matrix.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def max_abs_diff(self, other: Operator) -> float:
        self._same_modes(other)
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def allclose(self, other: Operator, tol: float | None = None) -> bool:
        return self.max_abs_diff(other) <= resolve_tol(tol)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix)))

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def is_hermitian(self, tol: float | None = None) -> bool:
        return self.hermiticity_residual() <= resolve_tol(tol)

    def __matmul__(self, other: Operator) -> Operator:
        self._same_modes(other)
        return Operator(self.modes, self.matrix @ other.matrix)

    def __add__(self, other: Operator) -> Operator:
        self._same_modes(other)
        return Operator(self.modes, self.matrix + other.matrix)

    def __sub__(self, other: Operator) -> Operator:
        self._same_modes(other)
        return Operator(self.modes, self.matrix - other.matrix)

    def __neg__(self) -> Operator:
        return Operator(self.modes, -self.matrix)

    def __mul__(self, value: complex) -> Operator:
        return Operator(self.modes, self.matrix * value)

    __rmul__ = __mul__

    def __truediv__(self, value: complex) -> Operator:
        return Operator(self.modes, self.matrix / value)


def _require_on(modes: ModeSet, op: Operator) -> None:
    if op.modes != modes:
        raise ShapeError(f"Expected an operator on {modes}, got one on {op.modes}.")


def _operand_list(operands: Sequence[Operator] | dict[ModeSet, Operator], parts: Sequence[ModeSet]) -> list[Operator]:
    if isinstance(operands, dict):
        missing = [str(part) for part in parts if part not in operands]
        if missing or len(operands) != len(parts):
            raise PartitionError(f"Operands must be given exactly for the parts {', '.join(map(str, parts))}.")
        return [operands[part] for part in parts]
    ops = list(operands)
    if [op.modes for op in ops] != list(parts):
        got = ", ".join(str(op.modes) for op in ops)
        raise PartitionError(f"Operands on {got} do not match the parts {', '.join(map(str, parts))}.")
    return ops


def single_mode(which: SingleMode | str) -> npt.NDArray[np.complex128]:
    return np.array(_SINGLE_MODE[SingleMode(which)], dtype=np.complex128)


def elementary(modes: ModeSet, nu: OccPattern, nup: OccPattern, basis: Basis = "standard") -> Operator:
    """The matrix unit E^{nu,nu'}, or its fermionic counterpart f * E^{nu,nu'}."""
    if nu.modes != modes or nup.modes != modes:
        raise DomainError(f"Patterns on {nu.modes} and {nup.modes} do not live on {modes}.")
    matrix = np.zeros((modes.dim, modes.dim), dtype=np.complex128)
    row, col = nu.index, nup.index
    matrix[row, col] = phase_f(modes, nu, nup) if basis == "fermionic" else 1.0
    return Operator(modes, matrix)


def tensor_standard(operands: Sequence[Operator]) -> Operator:
    """Interleaved Kronecker product on the union of disjoint mode sets."""
    for i, left in enumerate(operands):
        for right in operands[i + 1 :]:
            if not left.modes.isdisjoint(right.modes):
                raise PartitionError(f"Operands on {left.modes} and {right.modes} overlap.")
    modes = ModeSet().union(*(op.modes for op in operands))
    matrix = np.ones((modes.dim, modes.dim), dtype=np.complex128)
    for op in operands:
        ix = restrict_indices(modes, op.modes)
        matrix *= op.matrix[np.ix_(ix, ix)]
    return Operator(modes, matrix)


def embed_standard(subset: ModeSet, modes: ModeSet, op: Operator) -> Operator:
    """The standard extension A (x) I of `op` from `subset` to `modes`."""
    if not subset.issubset(modes):
        raise DomainError(f"{subset} is not contained in {modes}.")
    _require_on(subset, op)
    return tensor_standard([op, Operator.identity(modes - subset)])


def jw_ladder(label: int, modes: ModeSet, which: SingleMode | str) -> Operator:
    """Jordan-Wigner image of a single-mode operator of mode `label` inside `modes`.

    Parity-odd selections carry phase operators on every mode before `label`.
    """
    which = SingleMode(which)
    if label not in modes:
        raise DomainError(f"Mode {label} is not in {modes}.")
    phase = single_mode(SingleMode.PHASE)
    factors = []
    for other in modes:
        if other == label:
            factors.append(Operator(ModeSet((other,)), single_mode(which)))
        elif other < label and which.odd:
            factors.append(Operator(ModeSet((other,)), phase))
    product = tensor_standard(factors)
    return embed_standard(product.modes, modes, product)


def _require_direction(direction: str) -> None:
    if direction not in ("forward", "inverse"):
        raise DomainError(f"Unknown direction {direction!r}; use 'forward' or 'inverse'.")


def phi(modes: ModeSet, op: Operator, direction: Direction = "forward") -> Operator:
    """Entrywise multiplication by the f table; forward and inverse coincide."""
    _require_direction(direction)
    _require_on(modes, op)
    return Operator(modes, apply_signs(f_table(modes), op.matrix))


def psi_map(xi: Partition, op: Operator, direction: Direction = "forward") -> Operator:
    """Entrywise multiplication by the h table, taking standard products to fermionic ones."""
    _require_direction(direction)
    require_partition(op.modes, xi)
    return Operator(op.modes, apply_signs(h_table(xi), op.matrix))


def tensor_fermionic(xi: Partition, operands: Sequence[Operator] | dict[ModeSet, Operator]) -> Operator:
    """Fermionic tensor product of per-part operators."""
    require_partition(xi.modes, xi)
    ops = _operand_list(operands, xi.parts)
    return psi_map(xi, tensor_standard(ops))


def embed(subset: ModeSet, modes: ModeSet, op: Operator) -> Operator:
    """Fermionic canonical embedding A (x~) I of `op` from `subset` into `modes`."""
    if not subset.issubset(modes):
        raise DomainError(f"{subset} is not contained in {modes}.")
    _require_on(subset, op)
    rest = modes - subset
    if not rest.labels:
        return op
    if not subset.labels:
        return Operator.identity(modes) * op.scalar()
    return tensor_fermionic(Partition.of(subset, rest), {subset: op, rest: Operator.identity(rest)})


def lambda_map(oxi: OrderedPartition, op: Operator, direction: Direction = "forward") -> Operator:
    """Entrywise multiplication by the l table; an involution."""
    _require_direction(direction)
    require_partition(op.modes, oxi)
    return Operator(op.modes, apply_signs(l_table(oxi), op.matrix))


def ordered_product(oxi: OrderedPartition, operands: Sequence[Operator]) -> Operator:
    """Matrix product of the embeddings of the operands, in tuple order."""
    require_partition(oxi.modes, oxi)
    ops = _operand_list(operands, oxi.parts)
    modes = oxi.modes
    result = Operator.identity(modes)
    for part, op in zip(oxi.parts, ops, strict=True):
        result = result @ embed(part, modes, op)
    return result


def partial_trace(modes: ModeSet, subset: ModeSet, op: Operator) -> Operator:
    """Fermionic partial trace from `modes` down to `subset`.

    Signs are applied before and after an ordinary interleaved partial trace:
    ``result = f_X o Tr_{Y,X}(f_Y o A)``.
    """
    if not subset.issubset(modes):
        raise DomainError(f"{subset} is not contained in {modes}.")
    _require_on(modes, op)
    rest = modes - subset
    signed = apply_signs(f_table(modes), op.matrix)
    kept, traced = subset.dim, rest.dim
    order = np.argsort(restrict_indices(modes, subset) * traced + restrict_indices(modes, rest))
    blocks = signed[np.ix_(order, order)].reshape(kept, traced, kept, traced)
    reduced = np.trace(blocks, axis1=1, axis2=3)
    return Operator(subset, apply_signs(f_table(subset), reduced))


def hs_inner(left: Operator, right: Operator) -> complex:
    """Hilbert-Schmidt pairing Tr(A^dagger B)."""
    if left.modes != right.modes:
        raise ShapeError(f"Operators live on different mode sets: {left.modes} and {right.modes}.")
    return complex(np.vdot(left.matrix, right.matrix))


def commutator(left: Operator, right: Operator) -> Operator:
    return left @ right - right @ left


def anticommutator(left: Operator, right: Operator) -> Operator:
    return left @ right + right @ left


def random_matrix(rng: np.random.Generator, dim: int, *, hermitian: bool = False) -> npt.NDArray[np.complex128]:
    matrix = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    if hermitian:
        matrix = (matrix + matrix.conj().T) / 2
    return matrix


def random_operator(rng: np.random.Generator, modes: ModeSet, *, hermitian: bool = False) -> Operator:
    return Operator(modes, random_matrix(rng, modes.dim, hermitian=hermitian))
