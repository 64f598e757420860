import random

import pytest
from hypothesis import given, strategies as st

from artifact import generators as gen
from artifact.oca import (Config, OcaError, is_deterministic, is_weakly_deterministic, make_oca,
                          parse_oca, render_oca, run_prefix, step_deterministic, successors)

seeds = st.integers(0, 2 ** 32 - 1)


@given(seeds)
def test_render_parse_round_trip(seed):
    a = gen.random_oca(random.Random(seed), 5, 3)
    assert parse_oca(render_oca(a)) == a


@given(seeds)
def test_random_det_oca_is_deterministic(seed):
    a = gen.random_det_oca(random.Random(seed), 8)
    assert is_deterministic(a) and is_weakly_deterministic(a)


def test_parse_accepts_comments_and_separators():
    a = parse_oca("states q0 q1 # two\ninit q0; accept q1\nq0 inc q1; q1 dec q0\n")
    assert a.states == ("q0", "q1") and a.accepting == frozenset({"q1"})
    assert [t.instr.value for t in a.transitions] == ["inc", "dec"]


@pytest.mark.parametrize("text", [
    "states q0; init q1",                 # undeclared initial state
    "states q0; init q0; q0 jump q0",     # unknown instruction
    "states q0; init q0; q0 inc q9",      # undeclared target
    "states q0 q0; init q0",              # duplicate state
    "init q0",                            # no states line
])
def test_parse_rejects_bad_input(text):
    with pytest.raises(OcaError):
        parse_oca(text)


def test_guards_follow_counter_semantics():
    a = make_oca(["q"], "q", [], [("q", "dec", "q"), ("q", "ifzero", "q")])
    assert successors(a, Config("q", 0)) == {Config("q", 0)}
    assert successors(a, Config("q", 3)) == {Config("q", 2)}


def test_determinism_shapes():
    assert not is_deterministic(make_oca(["q"], "q", [], [("q", "inc", "q"), ("q", "dec", "q")]))
    fan = make_oca(["q", "r", "s"], "q", [], [("q", "inc", "r"), ("q", "inc", "s")])
    assert not is_weakly_deterministic(fan)


def test_run_prefix_stops_when_stuck():
    a = make_oca(["q0", "q1"], "q0", [], [("q0", "inc", "q1"), ("q1", "dec", "q1")])
    run = run_prefix(a, 10)
    assert [c.counter for c in run] == [0, 1, 0]
    assert step_deterministic(a, run[-1]) is None
