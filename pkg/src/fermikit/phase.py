"""Exact +/-1 phase factors f, h, l and u.

Every kernel reduces to one primitive. For weights ``w`` and ``t`` given as
pattern indices, ``_cross(w, t, outer, inner)`` counts, over the modes ``i``
in ``outer`` with ``w_i = 1``, the modes ``k > i`` in ``inner`` with
``t_k = 1``. A larger label is a less significant bit, so "``k > i``" is
"below bit i". The sign is ``(-1) ** count``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Literal, TypeAlias, cast

import numpy as np
import numpy.typing as npt

from fermikit.core.errors import DomainError
from fermikit.modes import ModeSet, OccPattern, OrderedPartition, Partition, require_partition

Sign: TypeAlias = Literal[1, -1]
IndexLike: TypeAlias = int | npt.NDArray[np.int64]


class PhaseKind(StrEnum):
    F = "f"
    H = "h"
    L = "l"
    U = "u"


def _cross(w: IndexLike, t: IndexLike, outer: int, inner: int) -> IndexLike:
    total: Any = 0
    bits = outer
    while bits:
        low = bits & -bits
        below = low - 1
        total = total + ((w & low) != 0) * np.bitwise_count(t & inner & below)
        bits ^= low
    return total


def _f_exponent(modes: ModeSet, nu: IndexLike, nup: IndexLike) -> IndexLike:
    full = modes.full_mask
    return _cross(nup, nu ^ nup, full, full)


def _h_exponent(xi: Partition, nu: IndexLike, nup: IndexLike) -> IndexLike:
    modes = xi.modes
    within: Any = 0
    for mask in xi.masks(modes):
        within = within + _cross(nup, nu ^ nup, mask, mask)
    return _f_exponent(modes, nu, nup) - within


def _ordered_pairs(oxi: OrderedPartition) -> list[tuple[int, int]]:
    masks = oxi.masks()
    return [(masks[r], masks[s]) for r in range(1, len(masks)) for s in range(r)]


def _l_exponent(oxi: OrderedPartition, nu: IndexLike, nup: IndexLike) -> IndexLike:
    delta = nu ^ nup
    total: Any = 0
    for later, earlier in _ordered_pairs(oxi):
        total = total + _cross(delta, delta, later, earlier)
    return total


def _u_exponent(oxi: OrderedPartition, nu: IndexLike) -> IndexLike:
    total: Any = 0
    for later, earlier in _ordered_pairs(oxi):
        total = total + _cross(nu, nu, later, earlier)
    return total


def _sign(exponent: IndexLike) -> Sign:
    return cast(Sign, -1 if int(exponent) & 1 else 1)


def _signs(exponent: IndexLike, shape: tuple[int, ...]) -> npt.NDArray[np.int8]:
    parity = np.broadcast_to(np.asarray(exponent, dtype=np.int64) & 1, shape)
    return (1 - 2 * parity).astype(np.int8)


def _index(modes: ModeSet, nu: OccPattern) -> int:
    if nu.modes != modes:
        raise DomainError(f"Pattern on {nu.modes} does not live on {modes}.")
    return nu.index


def phase_f(modes: ModeSet, nu: OccPattern, nup: OccPattern) -> Sign:
    """Sign relating the standard and fermionic matrix units of `modes`."""
    return _sign(_f_exponent(modes, _index(modes, nu), _index(modes, nup)))


def phase_h(xi: Partition, nu: OccPattern, nup: OccPattern) -> Sign:
    """Cross-part sign of the fermionic tensor product of matrix units."""
    require_partition(nu.modes, xi)
    modes = xi.modes
    return _sign(_h_exponent(xi, _index(modes, nu), _index(modes, nup)))


def phase_l(oxi: OrderedPartition, nu: OccPattern, nup: OccPattern) -> Sign:
    """Sign turning a fermionic tensor product into the ordered product of embeddings."""
    require_partition(nu.modes, oxi)
    modes = oxi.modes
    return _sign(_l_exponent(oxi, _index(modes, nu), _index(modes, nup)))


def phase_u(oxi: OrderedPartition, nu: OccPattern) -> Sign:
    """Diagonal entry of the locally even tensor-product-structure unitary."""
    require_partition(nu.modes, oxi)
    return _sign(_u_exponent(oxi, _index(oxi.modes, nu)))


def _grid(dim: int) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    indices = np.arange(dim, dtype=np.int64)
    return indices[:, None], indices[None, :]


def f_table(modes: ModeSet) -> npt.NDArray[np.int8]:
    nu, nup = _grid(modes.dim)
    return _signs(_f_exponent(modes, nu, nup), (modes.dim, modes.dim))


def h_table(xi: Partition) -> npt.NDArray[np.int8]:
    require_partition(xi.modes, xi)
    dim = xi.modes.dim
    nu, nup = _grid(dim)
    return _signs(_h_exponent(xi, nu, nup), (dim, dim))


def l_table(oxi: OrderedPartition) -> npt.NDArray[np.int8]:
    require_partition(oxi.modes, oxi)
    dim = oxi.modes.dim
    nu, nup = _grid(dim)
    return _signs(_l_exponent(oxi, nu, nup), (dim, dim))


def u_table(oxi: OrderedPartition) -> npt.NDArray[np.int8]:
    require_partition(oxi.modes, oxi)
    dim = oxi.modes.dim
    return _signs(_u_exponent(oxi, np.arange(dim, dtype=np.int64)), (dim,))


@dataclass(frozen=True)
class SignTable:
    """A phase table in the lexicographic pattern order."""

    kind: PhaseKind
    label: str
    entries: npt.NDArray[np.int8]

    @property
    def rows(self) -> list[list[int]]:
        return np.atleast_2d(self.entries).astype(int).tolist()

    def glyphs(self) -> str:
        return "\n".join(" ".join("+" if value > 0 else "-" for value in row) for row in self.rows)

    def csv(self) -> str:
        return "\n".join(",".join(str(value) for value in row) for row in self.rows)

    def as_json(self) -> str:
        entries: Any = self.entries.astype(int).tolist()
        return json.dumps({"kind": self.kind.value, "label": self.label, "entries": entries})


def emit_table(kind: PhaseKind | str, arg: ModeSet | Partition | OrderedPartition) -> SignTable:
    """Emit the f table of a mode set, the h table of a partition, or the l/u table of an ordered partition."""
    kind = PhaseKind(kind)
    if kind is PhaseKind.F:
        modes = arg if isinstance(arg, ModeSet) else arg.modes
        return SignTable(kind, str(modes), f_table(modes))
    if isinstance(arg, ModeSet):
        raise DomainError(f"The {kind.value} table needs a partition, got the mode set {arg}.")
    if kind is PhaseKind.H:
        xi = arg if isinstance(arg, Partition) else arg.unordered()
        return SignTable(kind, str(xi), h_table(xi))
    oxi = arg if isinstance(arg, OrderedPartition) else arg.ordered()
    table = l_table(oxi) if kind is PhaseKind.L else u_table(oxi)
    return SignTable(kind, str(oxi), table)


def apply_signs(signs: npt.NDArray[np.int8], matrix: npt.NDArray[Any]) -> npt.NDArray[np.complex128]:
    return signs.astype(np.float64) * np.asarray(matrix, dtype=np.complex128)
