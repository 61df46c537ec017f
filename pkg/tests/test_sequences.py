"""Folding sequences: indexing, validation, composites, tracks, decay, and
the reducedness window search."""

from fractions import Fraction

import pytest

from foldspace import (BudgetExceededError, DirectionError,
                       FoldingSequence, InvalidTrackError, SequenceError,
                       area, current_track_from_initial, decay_check,
                       frequency_current, identity_morphism,
                       is_reduced_window, length_track_from_terminal,
                       path_turns, rose, simplicial_length_measure)
from foldspace.examples import fibonacci_step
from foldspace.sequences import _turn

from conftest import rose_morphism


# -- construction and indexing -------------------------------------------


def test_levels_by_direction(fib_fold15, fib_unfold20):
    assert list(fib_fold15.levels) == list(range(0, 16))
    assert list(fib_unfold20.levels) == list(range(-20, 1))
    assert fib_fold15.n_steps == 15


def test_graph_and_step_lookup(fib_fold15):
    g = fib_fold15.graph_at(0)
    assert g.edge_ids == ("a", "b")
    assert fib_fold15.step_at(3).edge_image(1) == (1, 2)
    with pytest.raises(SequenceError):
        fib_fold15.step_at(15)          # no step starts at the right end
    with pytest.raises(SequenceError):
        fib_fold15.graph_at(16)


def test_step_runs_collapse_repeats(fib_fold15):
    runs = fib_fold15.step_runs
    assert len(runs) == 1
    start, length, step = runs[0]
    assert (start, length) == (0, 15)
    assert step is fib_fold15.morphisms[0]


def test_empty_sequence_rejected():
    with pytest.raises(SequenceError):
        FoldingSequence([])


def test_direction_validated():
    with pytest.raises(DirectionError):
        FoldingSequence([fibonacci_step()], "sideways")


def test_chaining_validated(rose2, rose3):
    f = fibonacci_step()
    g = identity_morphism(rose3)
    with pytest.raises(SequenceError):
        FoldingSequence([f, g])


def test_non_change_of_marking_step_rejected(rose2):
    bad = rose_morphism(rose2, {"a": "a", "b": "a"})
    with pytest.raises(SequenceError):
        FoldingSequence([bad])
    # validate=False admits it for deliberate controls
    seq = FoldingSequence([bad], validate=False)
    assert seq.n_steps == 1


def test_composite_cancellation_detected(rose2):
    f = rose_morphism(rose2, {"a": "a b", "b": "a"})
    h = rose_morphism(rose2, {"a": "b -a", "b": "a"})
    # h(f(a)) = h(a)h(b) = b a^{-1} a = b: the composite cancels
    with pytest.raises(SequenceError, match="cancels"):
        FoldingSequence([f, h])


def test_taken_turns_accumulate(fib_fold15):
    g = fib_fold15.graph_at(0)

    def tok(turns):
        return {frozenset((g.token(x), g.token(y))) for x, y in turns}

    assert fib_fold15.taken_turns_at(0) == frozenset()
    assert tok(fib_fold15.taken_turns_at(1)) == {frozenset({"-a", "b"})}
    assert tok(fib_fold15.taken_turns_at(2)) == {
        frozenset({"-a", "b"}), frozenset({"a", "-b"})}
    full = {frozenset({"-a", "b"}), frozenset({"a", "-b"}),
            frozenset({"a", "-a"})}
    for level in range(3, 16):
        assert tok(fib_fold15.taken_turns_at(level)) == full


def test_turn_canonicalization():
    assert _turn(2, -1) == _turn(-1, 2)
    assert path_turns((1, 2, 1)) == {_turn(-1, 2), _turn(-2, 1)}


# -- composites ----------------------------------------------------------


def test_composite_matrix_fibonacci(fib_fold15):
    M4 = fib_fold15.composite_matrix(0, 4)
    assert M4 == [[5, 3], [3, 2]]
    ident = fib_fold15.composite_matrix(7, 7)
    assert ident == [[1, 0], [0, 1]]
    with pytest.raises(SequenceError):
        fib_fold15.composite_matrix(4, 0)


def test_image_lengths_and_expansion(fib_fold15):
    # image lengths into the right end are Fibonacci numbers
    assert fib_fold15.image_lengths(15) == [1, 1]
    assert fib_fold15.image_lengths(13) == [3, 2]
    assert fib_fold15.expansion(13, 1) == (1, 2, 1)
    assert fib_fold15.expansion(13, -1) == (-1, -2, -1)
    assert fib_fold15.expansion(15, 2) == (2,)


def test_expansion_budget(fib_unfold40):
    # the deepest composite image has F_42 > 10^7 edges
    with pytest.raises(BudgetExceededError):
        fib_unfold40.expansion(-40, 1)
    assert len(fib_unfold40.expansion(-20, 1)) == 17711


def test_first_edge_composite(fib_fold15):
    fmap = fib_fold15.first_edge_composite(13)
    assert fmap[1] == 1 and fmap[2] == 1
    assert fmap[-1] == -1 and fmap[-2] == -2
    partial = fib_fold15.first_edge_composite(13, 14)
    assert partial[1] == 1 and partial[-1] == -2


# -- tracks --------------------------------------------------------------


def test_frequency_current_oracle(fib_fold15):
    mu = frequency_current(fib_fold15)
    assert mu.at(0) == (1, 1)
    assert mu.at(4) == (8, 5)
    mu.validate()


def test_simplicial_length_oracle(fib_unfold20):
    lam = simplicial_length_measure(fib_unfold20)
    assert lam.at(0) == (1, 1)
    assert lam.at(-3) == (5, 3)
    lam.validate()


def test_track_direction_gates(fib_fold15, fib_unfold20):
    with pytest.raises(DirectionError):
        frequency_current(fib_unfold20)
    with pytest.raises(DirectionError):
        simplicial_length_measure(fib_fold15)


def test_track_rejects_negative_and_bad_dims(fib_fold15):
    with pytest.raises(InvalidTrackError):
        current_track_from_initial(fib_fold15, [1, -1])
    with pytest.raises(Exception):
        current_track_from_initial(fib_fold15, [1, 1, 1])


def test_track_validate_catches_corruption(fib_fold15):
    mu = frequency_current(fib_fold15)
    vecs = [list(mu.at(n)) for n in fib_fold15.levels]
    vecs[7][0] += 1
    from foldspace import MeasureTrack
    bad = MeasureTrack(fib_fold15, "current", vecs)
    with pytest.raises(InvalidTrackError, match="recurrence fails"):
        bad.validate()


def test_area_invariance_and_value(fib_fold15):
    lam = length_track_from_terminal(fib_fold15, [2, 3])
    mu = current_track_from_initial(fib_fold15, [1, 1])
    value = area(fib_fold15, lam, mu)
    # pairing at the right end: mu_15 . (2, 3)
    mu15 = mu.at(15)
    assert value == 2 * mu15[0] + 3 * mu15[1]
    with pytest.raises(InvalidTrackError):
        area(fib_fold15, mu, lam)       # wrong kinds in wrong order


def test_area_rejects_foreign_tracks(fib_fold15, fib_unfold20):
    lam = simplicial_length_measure(fib_unfold20)
    mu = frequency_current(fib_fold15)
    with pytest.raises(InvalidTrackError):
        area(fib_fold15, lam, mu)


# -- decay flags ---------------------------------------------------------


def test_decay_flags_on_expanding_sequence(fib_unfold20, fib_fold15):
    lam = simplicial_length_measure(fib_unfold20)
    rep = decay_check(fib_unfold20, length_track=lam)
    assert rep["flags"]["lambda_deep_growth"]
    assert rep["flags"]["reduced_consistent"]
    mu = frequency_current(fib_fold15)
    rep = decay_check(fib_fold15, current_track=mu)
    assert rep["flags"]["mu_growth"]
    assert rep["flags"]["reduced_consistent"]


def test_decay_flags_on_flat_sequence(rose2):
    ident = identity_morphism(rose2)
    seq = FoldingSequence([ident] * 6, "unfolding")
    lam = simplicial_length_measure(seq)
    rep = decay_check(seq, length_track=lam)
    assert not rep["flags"]["lambda_deep_growth"]
    assert not rep["flags"]["reduced_consistent"]


# -- reducedness windows -------------------------------------------------


def test_reduced_window_fibonacci_passes(fib_unfold20):
    rep = is_reduced_window(fib_unfold20, (-2, 0))
    assert rep["passed"] and rep["witness"] is None


def test_reduced_window_single_step_caveat(fib_unfold20):
    # one step is too short: {b} maps to {a} edge-to-edge
    rep = is_reduced_window(fib_unfold20, (-1, 0))
    assert not rep["passed"]
    assert rep["witness"] == (("b",), ("a",))


def test_reduced_window_flags_identity(rose2):
    seq = FoldingSequence([identity_morphism(rose2)] * 4, "unfolding")
    rep = is_reduced_window(seq, (-4, 0))
    assert not rep["passed"]
    assert rep["witness"][0] == ("a",)


def test_reduced_window_alternating_blocks(alt4_small_unfold):
    seq = alt4_small_unfold        # schedule (4, 8), T = 12
    # within the A-block the fixed pair {c} is a stabilized witness
    rep = is_reduced_window(seq, (-12, -8))
    assert not rep["passed"]
    assert set(rep["witness"][0]) <= {"c", "d"}
    # within the B-block the fixed pair {a} is a witness
    rep = is_reduced_window(seq, (-8, 0))
    assert not rep["passed"]
    assert set(rep["witness"][0]) <= {"a", "b"}
    # across the block boundary no subgraph stabilizes
    rep = is_reduced_window(seq, (-12, 0))
    assert rep["passed"]


def test_reduced_window_budget():
    g = rose([f"x{i}" for i in range(16)])
    seq = FoldingSequence([identity_morphism(g)], "unfolding")
    with pytest.raises(BudgetExceededError):
        is_reduced_window(seq, (-1, 0))


def test_reduced_window_bad_range(fib_unfold20):
    with pytest.raises(SequenceError):
        is_reduced_window(fib_unfold20, (-30, 0))
