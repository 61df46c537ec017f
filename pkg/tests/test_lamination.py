"""Legal structures, allowed-word languages, cylinder weights, and minimal
components."""

from fractions import Fraction

import pytest

from foldspace import (DirectionError, FoldingSequence, InvalidTrackError,
                       ShallowDepthError, allowed_words, complexity_profile,
                       cylinder_weight, flip_cylinder_weight,
                       frequency_current, gates, gen_alternating_block,
                       identity_morphism, minimal_components,
                       one_edge_extensions, oriented_mass, rose,
                       sandwich_report, simplicial_length_measure)
from foldspace.sequences import _turn


# -- legal structures ----------------------------------------------------


def test_gates_on_fibonacci(fib_unfold20):
    legal = gates(fib_unfold20, -3)
    g = legal.graph
    # composite first edges: a -> a, b -> a, -a -> -b, -b -> -a; the only
    # illegal turn pairs the two directions with equal first edge (a, b)
    assert legal.is_legal(1, -1)
    assert legal.is_legal(1, -2)
    assert legal.is_legal(-1, 2)
    assert legal.is_legal(-1, -2)
    assert not legal.is_legal(1, 2)
    # three gates: the illegal pair {a, b} plus each reverse direction
    gate_partition = legal.gates_at("*")
    assert sorted(sorted(g) for g in gate_partition) == [[-2], [-1], [1, 2]]


def test_gates_direction_gate(fib_fold15):
    with pytest.raises(DirectionError):
        gates(fib_fold15, 3)


def test_legal_continuation(fib_unfold20):
    legal = gates(fib_unfold20, -3)
    assert legal.has_legal_continuation(1)
    assert legal.has_legal_continuation(-2)


def test_taken_turns_are_legal(fib_unfold20):
    legal = gates(fib_unfold20, -5)
    for x, y in fib_unfold20.taken_turns_at(-5):
        assert legal.is_legal(x, y)


# -- allowed words -------------------------------------------------------


def test_allowed_words_fibonacci_counts(fib_unfold20):
    for L in range(1, 9):
        lang = allowed_words(fib_unfold20, 15, L)
        assert lang.count == L + 1, f"L={L}"


def test_allowed_words_flip_canonical(fib_unfold20):
    lang = allowed_words(fib_unfold20, 15, 3)
    for w in lang.words:
        from foldspace import reverse_path
        assert min(w, reverse_path(w)) == w


def test_allowed_words_shallow_depth(fib_unfold20):
    # at depth 3 the longest image has F_5 = 5 edges
    with pytest.raises(ShallowDepthError):
        allowed_words(fib_unfold20, 3, 6)
    lang = allowed_words(fib_unfold20, 3, 6, require_depth=False)
    assert lang.count >= 1
    with pytest.raises(ShallowDepthError):
        allowed_words(fib_unfold20, 25, 2)       # beyond the stored range


def test_legal_source_control_counts_more(rose2):
    # the identity sequence takes no turns: the taken language is the bare
    # edge set while the legal one holds all two-edge words
    seq = FoldingSequence([identity_morphism(rose2)] * 3, "unfolding")
    taken = allowed_words(seq, 2, 2, source="taken", require_depth=False)
    legal = allowed_words(seq, 2, 2, source="legal", require_depth=False)
    assert taken.count == 0          # single-edge images yield no 2-windows
    assert legal.count == 6          # all flip-classes of legal 2-words
    with pytest.raises(ValueError):
        allowed_words(seq, 2, 2, source="guessed", require_depth=False)


def test_complexity_profile_fibonacci(fib_unfold20):
    profile = complexity_profile(fib_unfold20, (10, 15), 12)
    assert profile.counts == {L: L + 1 for L in range(1, 13)}
    assert profile.stable
    assert profile.subexponential
    assert profile.entropy < 0.25


# -- cylinder weights ----------------------------------------------------


def test_cylinder_weight_right_end(fib_fold15):
    mu = frequency_current(fib_fold15)
    # at the right end each edge is its own image: weight = mu(gamma)
    assert cylinder_weight(fib_fold15, mu, (1,), 15) == mu.at(15)[0]
    assert cylinder_weight(fib_fold15, mu, (2,), 15) == mu.at(15)[1]


def test_cylinder_weight_hand_value(fib_fold15):
    mu = frequency_current(fib_fold15)
    # level 13: images are aba and ab; mu_13 = (610, 377)
    w = cylinder_weight(fib_fold15, mu, (1,), 13)
    assert w == 610 * 2 + 377 * 1
    w2 = cylinder_weight(fib_fold15, mu, (1, 2), 13)
    assert w2 == 610 * 1 + 377 * 1


def test_cylinder_weight_flip_symmetric(fib_fold15):
    mu = frequency_current(fib_fold15)
    for gamma in ((1,), (1, 2), (2, 1, 1)):
        from foldspace import reverse_path
        assert cylinder_weight(fib_fold15, mu, gamma, 12) == \
            cylinder_weight(fib_fold15, mu, reverse_path(gamma), 12)


def test_cylinder_weight_monotone_toward_deep(fib_fold15):
    mu = frequency_current(fib_fold15)
    for gamma in ((1,), (2,), (1, 2), (1, -2), (1, 2, 1)):
        values = [cylinder_weight(fib_fold15, mu, gamma, level)
                  for level in range(15, -1, -1)]
        assert all(a <= b for a, b in zip(values, values[1:])), gamma


def test_sandwich_bounds(fib_fold15):
    mu = frequency_current(fib_fold15)
    for gamma in ((1,), (2,), (1, 2), (2, 1, 1)):
        for level in range(0, 16):
            rep = sandwich_report(fib_fold15, mu, gamma, level)
            assert rep["ok"], (gamma, level, rep)
            assert rep["upper"] - rep["lower"] == \
                oriented_mass(mu, level)


def test_one_edge_extensions(rose2):
    exts = one_edge_extensions(rose2, (1,))
    assert set(exts) == {(1, 1), (1, 2), (1, -2)}


def test_cylinder_weight_validation(fib_fold15, fib_unfold20):
    mu = frequency_current(fib_fold15)
    lam = simplicial_length_measure(fib_unfold20)
    with pytest.raises(InvalidTrackError):
        cylinder_weight(fib_fold15, lam, (1,), 5)     # wrong kind
    mu_other = frequency_current(
        FoldingSequence([fib_fold15.morphisms[0]] * 3))
    with pytest.raises(InvalidTrackError):
        cylinder_weight(fib_fold15, mu_other, (1,), 5)
    from foldspace import MalformedPathError
    with pytest.raises(MalformedPathError):
        cylinder_weight(fib_fold15, mu, (1, -1), 5)


def test_flip_cylinder_weight(fib_fold15):
    mu = frequency_current(fib_fold15)
    assert flip_cylinder_weight(fib_fold15, mu, (1, 2), 12) == \
        2 * cylinder_weight(fib_fold15, mu, (1, 2), 12)


# -- minimal components --------------------------------------------------


def test_minimal_components_fibonacci(fib_unfold20):
    rep = minimal_components(fib_unfold20, 15, 4)
    assert rep.count == 1
    assert rep.bound == 3
    assert rep.bound_ok


def test_minimal_components_alternating_two_orbits():
    seq = gen_alternating_block(schedule=(4, 8, 4), rank=4,
                                direction="unfolding").sequence
    # depth past the last block boundary sees both word families
    rep = minimal_components(seq, 16, 12)
    assert rep.count == 2
    assert rep.bound == 9
    assert rep.bound_ok
