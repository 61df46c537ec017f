"""Signed-path helpers: reduction, reversal, cyclic forms, occurrence
counts."""

from hypothesis import given
from hypothesis import strategies as st
import pytest

from foldspace import (MalformedPathError, canonical_cycle, concat_reduced,
                       count_occurrences, cyclic_tighten,
                       is_cyclically_reduced, is_reduced, reverse_path,
                       tighten)
from foldspace.paths import cyclic_rotations, require_reduced

edge_ints = st.integers(min_value=-4, max_value=4).filter(lambda e: e != 0)
paths = st.lists(edge_ints, max_size=10).map(tuple)


def test_reverse_involution():
    assert reverse_path((1, -2, 3)) == (-3, 2, -1)
    assert reverse_path(()) == ()


@given(paths)
def test_reverse_is_involutive(p):
    assert reverse_path(reverse_path(p)) == p


def test_is_reduced():
    assert is_reduced((1, 2, -1))
    assert not is_reduced((1, -1))
    assert is_reduced(())


def test_is_cyclically_reduced():
    assert is_cyclically_reduced((1, 2))
    assert not is_cyclically_reduced((1, 2, -1))
    assert is_cyclically_reduced((1,))
    # the single back-and-forth is already non-reduced
    assert not is_cyclically_reduced((1, -1))


def test_tighten_cancels_nested_pairs():
    assert tighten((1, 2, -2, -1, 3)) == (3,)
    assert tighten((1, -1)) == ()
    assert tighten((1, 2, 3)) == (1, 2, 3)


@given(paths)
def test_tighten_idempotent_and_reduced(p):
    t = tighten(p)
    assert is_reduced(t)
    assert tighten(t) == t


def test_cyclic_tighten_cancels_around_the_seam():
    assert cyclic_tighten((1, 2, -1)) == (2,)
    assert cyclic_tighten((-2, 1, 2)) == (1,)
    assert cyclic_tighten((1, -1)) == ()


@given(paths)
def test_cyclic_tighten_is_cyclically_reduced(p):
    t = cyclic_tighten(p)
    assert t == () or is_cyclically_reduced(t)


def test_concat_reduced():
    assert concat_reduced((1, 2), (-2, 3)) == (1, 3)
    assert concat_reduced() == ()
    assert concat_reduced((1,), (-1,)) == ()


def test_count_occurrences_overlapping():
    assert count_occurrences((1, 1, 1), (1, 1)) == 2
    assert count_occurrences((1, 2, 1, 2, 1), (1, 2, 1)) == 2
    assert count_occurrences((1, 2), (1, 2, 1)) == 0
    assert count_occurrences((1, 2), ()) == 0


def test_count_occurrences_is_signed():
    assert count_occurrences((1, -1, 1), (-1,)) == 1
    assert count_occurrences((-1, -2), (1, 2)) == 0


def test_cyclic_rotations():
    assert cyclic_rotations((1, 2)) == [(1, 2), (2, 1)]
    assert cyclic_rotations(()) == [()]


def test_canonical_cycle_rotation_and_reversal_invariant():
    base = (1, 2, -1, 3)
    key = canonical_cycle(base)
    for rot in cyclic_rotations(base):
        assert canonical_cycle(rot) == key
    assert canonical_cycle(reverse_path(base)) == key


@given(paths)
def test_canonical_cycle_idempotent(p):
    key = canonical_cycle(p)
    assert canonical_cycle(key) == key


def test_require_reduced_raises():
    with pytest.raises(MalformedPathError):
        require_reduced((1, -1))
    assert require_reduced((1, 2)) == (1, 2)
