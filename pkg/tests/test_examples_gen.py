"""Canned example generators and their file round-trips."""

import pytest

from foldspace.errors import FormatError
from foldspace.examples import (
    gen_alternating_block,
    gen_custom,
    gen_example,
    gen_fibonacci,
)
from foldspace.io_formats import parse_sequence

from conftest import rose_morphism


class TestFibonacciGenerator:
    def test_shape(self):
        ex = gen_fibonacci(steps=12, direction="unfolding")
        seq = ex.sequence
        assert ex.name == "fibonacci"
        assert seq.n_steps == 12
        assert seq.direction == "unfolding"
        assert list(seq.levels) == list(range(-12, 1))
        assert ex.notes == {"rank": 2, "steps": 12,
                            "direction": "unfolding"}

    def test_step_images(self):
        seq = gen_fibonacci(steps=3, direction="folding").sequence
        step = seq.step_at(0)
        assert step.edge_image(1) == (1, 2)
        assert step.edge_image(2) == (1,)
        assert seq.matrix_at(0) == [[1, 1], [1, 0]]

    def test_single_shared_step(self):
        seq = gen_fibonacci(steps=10).sequence
        assert len({id(m) for m in seq.morphisms}) == 1
        assert len(seq.step_runs) == 1


class TestAlternatingGenerator:
    def test_rank4_shape(self):
        ex = gen_alternating_block(schedule=(4, 8), rank=4,
                                   direction="unfolding")
        seq = ex.sequence
        assert seq.n_steps == 12
        assert seq.block_boundaries == (4, 12)
        assert ex.notes["schedule"] == (4, 8)
        assert ex.notes["boundaries"] == (4, 12)
        # first block stretches the a, b pair; second the c, d pair
        step_a = seq.step_at(-12)
        assert step_a.edge_image(1) == (1, 2)
        assert step_a.edge_image(3) == (3,)
        step_b = seq.step_at(-8)
        assert step_b.edge_image(1) == (1,)
        assert step_b.edge_image(3) == (3, 4)

    def test_default_schedule_boundaries(self):
        ex = gen_alternating_block()
        assert ex.sequence.n_steps == 5460
        assert ex.sequence.block_boundaries == (4, 20, 84, 340, 1364, 5460)

    def test_rank3_images_interact(self):
        seq = gen_alternating_block(schedule=(2, 2), rank=3).sequence
        step_a = seq.step_at(-4)
        assert step_a.edge_image(3) == (3, 1)
        step_b = seq.step_at(-2)
        assert step_b.edge_image(1) == (2, 1)
        assert step_b.edge_image(3) == (3, 2)

    def test_two_shared_steps(self):
        seq = gen_alternating_block(schedule=(3, 5, 3), rank=4).sequence
        assert len({id(m) for m in seq.morphisms}) == 2
        assert [r[1] for r in seq.step_runs] == [3, 5, 3]

    def test_bad_rank(self):
        with pytest.raises(FormatError):
            gen_alternating_block(rank=5)


class TestDispatch:
    def test_by_name(self):
        assert gen_example("fibonacci", steps=5).sequence.n_steps == 5
        ex = gen_example("alternating_block", schedule=(2, 2), rank=3,
                         direction="folding")
        assert ex.sequence.direction == "folding"

    def test_custom(self, rose2):
        f = rose_morphism(rose2, {"a": (1, 2), "b": (1,)})
        ex = gen_example("custom", morphisms=[f, f], direction="folding",
                         block_boundaries=[1, 2])
        assert ex.name == "custom"
        assert ex.sequence.block_boundaries == (1, 2)

    def test_unknown_name(self):
        with pytest.raises(FormatError):
            gen_example("golden")


class TestWriteRoundTrip:
    def test_fibonacci_files(self, tmp_path):
        ex = gen_fibonacci(steps=9)
        path = ex.write(tmp_path)
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == ["fibonacci.sequence", "fibonacci_graph0.graph",
                         "fibonacci_step0.morphism"]
        text = (tmp_path / "fibonacci.sequence").read_text()
        assert "x9" in text
        parsed = parse_sequence(path)
        assert parsed.direction == ex.sequence.direction
        assert parsed.n_steps == 9
        assert len({id(m) for m in parsed.morphisms}) == 1
        for level in parsed.levels:
            assert parsed.graph_at(level) == ex.sequence.graph_at(level)
        assert parsed.matrix_at(-9) == ex.sequence.matrix_at(-9)

    def test_alternating_blocks_round_trip(self, tmp_path):
        ex = gen_alternating_block(schedule=(3, 5), rank=4,
                                   direction="folding")
        path = ex.write(tmp_path, name="alt")
        text = (tmp_path / "alt.sequence").read_text()
        assert "x3" in text and "x5" in text
        assert "BLOCKS" in text
        parsed = parse_sequence(path)
        assert parsed.block_boundaries == (3, 8)
        assert parsed.n_steps == 8
        assert len({id(m) for m in parsed.morphisms}) == 2
        for level in list(parsed.levels)[:-1]:
            assert parsed.matrix_at(level) == ex.sequence.matrix_at(level)
            theirs = parsed.step_at(level)
            ours = ex.sequence.step_at(level)
            for j in range(1, 5):
                assert theirs.edge_image(j) == ours.edge_image(j)
