from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fermikit.core.config import use_settings
from fermikit.core.errors import DomainError, ErrorKind, FermikitError, InputError, PartitionError
from fermikit.modes import (
    ModeSet,
    OccPattern,
    OrderedPartition,
    Partition,
    index_pattern,
    pattern_index,
    require_partition,
    restrict,
    restrict_indices,
    scatter_indices,
    validate_partition,
)

labels = st.lists(st.integers(min_value=1, max_value=12), min_size=0, max_size=6, unique=True)


def test_smallest_label_is_most_significant_bit() -> None:
    modes = ModeSet((2, 5, 7))
    assert pattern_index(modes, OccPattern(modes, (1, 0, 0))) == 4
    assert pattern_index(modes, OccPattern(modes, (0, 0, 1))) == 1
    assert modes.bit(2) == 2
    assert modes.bit(7) == 0


@given(labels, st.data())
def test_index_pattern_inverts_pattern_index(items: list[int], data: st.DataObject) -> None:
    modes = ModeSet.of(items)
    index = data.draw(st.integers(min_value=0, max_value=modes.dim - 1))
    assert pattern_index(modes, index_pattern(modes, index)) == index


def test_mode_set_rejects_bad_labels() -> None:
    with pytest.raises(DomainError) as exc_info:
        ModeSet((0, 1))
    assert exc_info.value.kind == ErrorKind.DOMAIN
    with pytest.raises(DomainError):
        ModeSet((3, 2))
    with pytest.raises(DomainError):
        ModeSet.of([1, 1])
    with pytest.raises(DomainError):
        ModeSet((True,))  # type: ignore[arg-type]


def test_mode_set_cap_comes_from_settings() -> None:
    with use_settings(max_modes=3), pytest.raises(DomainError):
        ModeSet.span(1, 4)
    assert len(ModeSet.span(1, 4)) == 4


def test_parse_mode_sets_and_partitions() -> None:
    assert ModeSet.parse("{3, 1}") == ModeSet((1, 3))
    assert ModeSet.parse("{}") == ModeSet()
    xi = Partition.parse("{2}|{1,3}")
    assert xi.parts == (ModeSet((1, 3)), ModeSet((2,)))
    assert str(xi) == "{1,3}|{2}"
    oxi = OrderedPartition.parse("{2}|{1,3}")
    assert oxi.parts == (ModeSet((2,)), ModeSet((1, 3)))
    assert oxi.unordered() == xi
    with pytest.raises(InputError):
        ModeSet.parse("1,2")


def test_set_operations() -> None:
    left, right = ModeSet((1, 3)), ModeSet((2, 3))
    assert left | right == ModeSet((1, 2, 3))
    assert left - right == ModeSet((1,))
    assert left & right == ModeSet((3,))
    assert not left.isdisjoint(right)
    assert len(list(ModeSet((1, 2, 3)).subsets())) == 8


def test_restrict_and_index_maps() -> None:
    modes = ModeSet((1, 2, 3))
    nu = OccPattern.parse(modes, "101")
    assert str(restrict(nu, ModeSet((1, 3)))) == "11"
    assert str(restrict(nu, ModeSet((2,)))) == "0"
    assert restrict_indices(modes, ModeSet((1, 3))).tolist() == [0, 1, 0, 1, 2, 3, 2, 3]
    assert scatter_indices(modes, ModeSet((1, 3))).tolist() == [0, 1, 4, 5]
    with pytest.raises(DomainError):
        restrict(nu, ModeSet((4,)))


def test_pattern_validation() -> None:
    modes = ModeSet((1, 2))
    with pytest.raises(DomainError):
        OccPattern(modes, (1,))
    with pytest.raises(DomainError):
        OccPattern(modes, (1, 2))
    with pytest.raises(InputError):
        OccPattern.parse(modes, "1x")
    assert OccPattern.from_mapping(modes, {2: 1, 1: 0}).bits == (0, 1)
    with pytest.raises(DomainError):
        pattern_index(ModeSet((1, 3)), OccPattern(modes, (0, 1)))


def test_partition_validation() -> None:
    modes = ModeSet((1, 2, 3))
    assert validate_partition(modes, Partition.parse("{1,3}|{2}"))
    assert not validate_partition(modes, Partition.parse("{1}|{2}"))
    assert not validate_partition(modes, Partition.parse("{1,2}|{2,3}"))
    assert not validate_partition(modes, Partition.of((1, 2, 3), ()))
    with pytest.raises(PartitionError) as exc_info:
        require_partition(modes, Partition.parse("{1}|{3}"))
    assert isinstance(exc_info.value, FermikitError)
    assert exc_info.value.kind == ErrorKind.PARTITION


def test_reordered_partition() -> None:
    oxi = OrderedPartition.parse("{1}|{2}|{3}")
    assert str(oxi.reordered([2, 0, 1])) == "{3}|{1}|{2}"
