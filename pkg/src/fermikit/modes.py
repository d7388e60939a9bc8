"""Mode labels, mode subsets, occupation patterns and partitions.

Patterns index matrices lexicographically in the Jordan-Wigner order: the
smallest label of a mode set is the most significant bit. For
``Y = {i_1 < ... < i_k}`` the pattern ``nu`` sits at
``sum_r nu[i_r] * 2**(k - r)``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Self

import numpy as np
import numpy.typing as npt

from fermikit.core.config import get_settings
from fermikit.core.errors import DomainError, InputError, PartitionError

_SET_SYNTAX = re.compile(r"^\s*\{\s*(\d+(?:\s*,\s*\d+)*)?\s*\}\s*$")


def _check_label(label: object) -> int:
    if isinstance(label, bool) or not isinstance(label, int | np.integer):
        raise DomainError(f"Mode labels must be integers, got {label!r}.")
    if label < 1:
        raise DomainError(f"Mode labels start at 1, got {label}.")
    return int(label)


@dataclass(frozen=True)
class ModeSet:
    """A subsystem Y: strictly increasing global mode labels."""

    labels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        labels = tuple(_check_label(label) for label in self.labels)
        if any(a >= b for a, b in zip(labels, labels[1:], strict=False)):
            raise DomainError(f"Mode labels must be strictly increasing, got {labels}.")
        cap = get_settings().max_modes
        if len(labels) > cap:
            raise DomainError(f"Mode set of size {len(labels)} exceeds the cap of {cap} modes.")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, labels: Iterable[int]) -> ModeSet:
        """Build from any iterable of labels; duplicates are rejected, order is not significant."""
        items = [_check_label(label) for label in labels]
        if len(set(items)) != len(items):
            raise DomainError(f"Duplicate mode labels in {items}.")
        return cls(tuple(sorted(items)))

    @classmethod
    def span(cls, first: int, last: int) -> ModeSet:
        """Contiguous labels first..last inclusive."""
        return cls(tuple(range(first, last + 1)))

    @classmethod
    def parse(cls, text: str) -> ModeSet:
        """Parse the ``{1,3,4}`` syntax."""
        match = _SET_SYNTAX.match(text)
        if match is None:
            raise InputError(f"Cannot parse mode set {text!r}; expected e.g. '{{1,3,4}}'.")
        body = match.group(1)
        if not body:
            return cls()
        return cls.of(int(part) for part in body.split(","))

    def __str__(self) -> str:
        return "{" + ",".join(str(label) for label in self.labels) + "}"

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._positions

    @property
    def dim(self) -> int:
        return 1 << len(self.labels)

    @cached_property
    def _positions(self) -> dict[int, int]:
        return {label: r for r, label in enumerate(self.labels)}

    def position(self, label: int) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise DomainError(f"Mode {label} is not in {self}.") from None

    def bit(self, label: int) -> int:
        """Bit position of `label` inside a pattern index of this set."""
        return len(self.labels) - 1 - self.position(label)

    def mask(self, subset: Iterable[int]) -> int:
        value = 0
        for label in subset:
            value |= 1 << self.bit(label)
        return value

    @property
    def full_mask(self) -> int:
        return self.dim - 1

    def issubset(self, other: ModeSet) -> bool:
        return all(label in other for label in self.labels)

    def isdisjoint(self, other: ModeSet) -> bool:
        return not any(label in other for label in self.labels)

    def union(self, *others: ModeSet) -> ModeSet:
        labels = set(self.labels)
        for other in others:
            labels.update(other.labels)
        return ModeSet(tuple(sorted(labels)))

    def difference(self, other: ModeSet) -> ModeSet:
        return ModeSet(tuple(label for label in self.labels if label not in other))

    def intersection(self, other: ModeSet) -> ModeSet:
        return ModeSet(tuple(label for label in self.labels if label in other))

    __or__ = union
    __sub__ = difference
    __and__ = intersection

    def subsets(self) -> Iterator[ModeSet]:
        """All subsets, smallest first."""
        for mask in range(self.dim):
            yield ModeSet(tuple(label for r, label in enumerate(self.labels) if mask >> r & 1))


@dataclass(frozen=True)
class OccPattern:
    """Occupation bits nu: Y -> {0, 1}, stored in increasing-label order."""

    modes: ModeSet
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(bit) for bit in self.bits)
        if len(bits) != len(self.modes):
            raise DomainError(f"Pattern has {len(bits)} bits for {len(self.modes)} modes {self.modes}.")
        if any(bit not in (0, 1) for bit in bits):
            raise DomainError(f"Occupation bits must be 0 or 1, got {bits}.")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, modes: ModeSet, text: str) -> OccPattern:
        """Parse a bitstring such as ``"011"`` read in increasing-label order."""
        cleaned = text.strip()
        if any(char not in "01" for char in cleaned):
            raise InputError(f"Cannot parse occupation pattern {text!r}.")
        return cls(modes, tuple(int(char) for char in cleaned))

    @classmethod
    def from_mapping(cls, modes: ModeSet, occupations: dict[int, int]) -> OccPattern:
        if set(occupations) != set(modes.labels):
            raise DomainError(f"Pattern domain {sorted(occupations)} differs from {modes}.")
        return cls(modes, tuple(occupations[label] for label in modes))

    def __getitem__(self, label: int) -> int:
        return self.bits[self.modes.position(label)]

    def __str__(self) -> str:
        return "".join(str(bit) for bit in self.bits)

    @property
    def index(self) -> int:
        return pattern_index(self.modes, self)

    @property
    def weight(self) -> int:
        return sum(self.bits)


def pattern_index(modes: ModeSet, nu: OccPattern) -> int:
    """Matrix index of `nu`; the smallest label is the most significant bit.

    >>> pattern_index(ModeSet((2, 5)), OccPattern(ModeSet((2, 5)), (0, 1)))
    1
    """
    if nu.modes != modes:
        raise DomainError(f"Pattern on {nu.modes} does not live on {modes}.")
    value = 0
    for bit in nu.bits:
        value = value << 1 | bit
    return value


def index_pattern(modes: ModeSet, index: int) -> OccPattern:
    if not 0 <= index < modes.dim:
        raise DomainError(f"Index {index} is out of range for {modes} (dimension {modes.dim}).")
    k = len(modes)
    return OccPattern(modes, tuple(index >> (k - 1 - r) & 1 for r in range(k)))


def restrict(nu: OccPattern, subset: ModeSet) -> OccPattern:
    if not subset.issubset(nu.modes):
        raise DomainError(f"{subset} is not contained in {nu.modes}.")
    return OccPattern(subset, tuple(nu[label] for label in subset))


def restrict_indices(modes: ModeSet, subset: ModeSet) -> npt.NDArray[np.int64]:
    """For every index of `modes`, the index of the restricted pattern on `subset`."""
    if not subset.issubset(modes):
        raise DomainError(f"{subset} is not contained in {modes}.")
    indices = np.arange(modes.dim, dtype=np.int64)
    out = np.zeros(modes.dim, dtype=np.int64)
    width = len(subset)
    for r, label in enumerate(subset):
        out |= ((indices >> modes.bit(label)) & 1) << (width - 1 - r)
    return out


def scatter_indices(modes: ModeSet, subset: ModeSet) -> npt.NDArray[np.int64]:
    """For every index of `subset`, the index on `modes` with the other bits cleared."""
    if not subset.issubset(modes):
        raise DomainError(f"{subset} is not contained in {modes}.")
    local = np.arange(subset.dim, dtype=np.int64)
    out = np.zeros(subset.dim, dtype=np.int64)
    width = len(subset)
    for r, label in enumerate(subset):
        out |= ((local >> (width - 1 - r)) & 1) << modes.bit(label)
    return out


def _parts_from(items: Iterable[ModeSet | Iterable[int]]) -> tuple[ModeSet, ...]:
    return tuple(item if isinstance(item, ModeSet) else ModeSet.of(item) for item in items)


def _parse_parts(text: str) -> tuple[ModeSet, ...]:
    if not text.strip():
        return ()
    return tuple(ModeSet.parse(chunk) for chunk in text.split("|"))


@dataclass(frozen=True)
class _Parts:
    parts: tuple[ModeSet, ...]

    def __iter__(self) -> Iterator[ModeSet]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "|".join(str(part) for part in self.parts)

    @property
    def modes(self) -> ModeSet:
        """Union of the parts."""
        return ModeSet().union(*self.parts)

    def masks(self, modes: ModeSet | None = None) -> list[int]:
        target = self.modes if modes is None else modes
        return [target.mask(part) for part in self.parts]


@dataclass(frozen=True)
class Partition(_Parts):
    """Unordered partition; parts are kept sorted by their smallest label."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(sorted(_parts_from(self.parts), key=_part_key)))

    @classmethod
    def of(cls, *parts: ModeSet | Iterable[int]) -> Self:
        return cls(_parts_from(parts))

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse ``{1,3}|{2}``."""
        return cls(_parse_parts(text))

    def ordered(self) -> OrderedPartition:
        return OrderedPartition(self.parts)


@dataclass(frozen=True)
class OrderedPartition(_Parts):
    """Ordered partition; the tuple order matters."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", _parts_from(self.parts))

    @classmethod
    def of(cls, *parts: ModeSet | Iterable[int]) -> Self:
        return cls(_parts_from(parts))

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse ``{2}|{1,3}``; the textual order is the tuple order."""
        return cls(_parse_parts(text))

    def unordered(self) -> Partition:
        return Partition(self.parts)

    def reordered(self, order: Sequence[int]) -> OrderedPartition:
        return OrderedPartition(tuple(self.parts[i] for i in order))


def _part_key(part: ModeSet) -> tuple[int, ...]:
    return (part.labels[0] if part.labels else 0, *part.labels)


def validate_partition(modes: ModeSet, xi: Partition | OrderedPartition) -> bool:
    """True iff the parts are nonempty, pairwise disjoint and cover `modes`."""
    seen: set[int] = set()
    for part in xi.parts:
        if not part.labels:
            return False
        if seen.intersection(part.labels):
            return False
        seen.update(part.labels)
    return seen == set(modes.labels)


def require_partition(modes: ModeSet, xi: Partition | OrderedPartition) -> None:
    if not validate_partition(modes, xi):
        raise PartitionError(f"{xi} is not a partition of {modes} into nonempty disjoint parts.")
