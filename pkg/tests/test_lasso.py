import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import generators as gen, lasso
from artifact.oca import make_oca, run_prefix
from artifact.suites import setp_check

seeds = st.integers(0, 2 ** 32 - 1)


def _window_only(a, limit):
    """The lasso search without early detection: plain simulation."""
    return run_prefix(a, limit), None


@given(seeds)
def test_summary_replays_the_simulation(seed):
    a = gen.random_det_oca(random.Random(seed), 8)
    s = lasso.analyze(a)
    if not s.infinite:
        assert tuple(run_prefix(a, len(s.max_run) + 3)) == s.max_run
        return
    n = s.k1 + 3 * s.k2 + 2
    raw = run_prefix(a, n)
    assert len(raw) == n
    assert [lasso.counter_at(s, i) for i in range(n)] == [c.counter for c in raw]
    assert [lasso.state_at(s, i) for i in range(n)] == [c.state for c in raw]
    assert np.array_equal(lasso.counters(s, n), [c.counter for c in raw])


@given(seeds)
def test_early_detection_matches_full_window(seed):
    a = gen.random_det_oca(random.Random(seed), 8)
    fast = lasso.analyze(a)
    original = lasso._early_lasso
    lasso._early_lasso = _window_only
    try:
        slow = lasso.analyze(a)
    finally:
        lasso._early_lasso = original
    assert fast == slow


@given(seeds)
def test_lasso_is_minimal(seed):
    a = gen.random_det_oca(random.Random(seed), 6)
    s = lasso.analyze(a)
    if not s.infinite:
        return
    raw = run_prefix(a, s.k1 + 3 * s.k2 + 2)
    shifted = lambda i, d, c: raw[i + d].state == raw[i].state and raw[i + d].counter == raw[i].counter + c
    # no shorter period and no earlier start
    for d in range(1, s.k2):
        if (s.k_inc * d) % s.k2 == 0:
            c = s.k_inc * d // s.k2
            assert not all(shifted(i, d, c) for i in range(s.k1, s.k1 + s.k2))
    if s.k1 > 0:
        assert not shifted(s.k1 - 1, s.k2, s.k_inc)


@given(seeds)
def test_bounds_hold(seed):
    a = gen.random_det_oca(random.Random(seed), 8)
    s = lasso.analyze(a)
    m = len(a.states)
    if s.infinite:
        assert s.k1 + s.k2 <= m ** 3 and 0 <= s.k_inc <= m


@given(seeds)
def test_setp_characterization(seed):
    a = gen.random_det_oca(random.Random(seed), 5)
    s = lasso.analyze(a)
    if s.infinite and s.k_inc > 0:
        d = lasso.constants(s)
        if s.k1 + 4 * d.l * s.k2 <= 5000:
            assert setp_check(s, d)


def test_constants_of_a_sawtooth():
    # up two, down one, forever
    a = make_oca(["a", "b", "c"], "a", ["a"], [("a", "inc", "b"), ("b", "inc", "c"),
                                               ("c", "dec", "a"), ("c", "ifzero", "a")])
    s = lasso.analyze(a)
    assert (s.k1, s.k2, s.k_inc) == (0, 3, 1)
    d = lasso.constants(s)
    assert (d.beta1, d.beta2, d.gamma) == (0, 2, 0)
    assert d.l == 1 + 0 + 2


def test_zero_test_loop_has_no_increment():
    a = make_oca(["a", "b"], "a", [], [("a", "inc", "b"), ("b", "dec", "a"), ("b", "ifzero", "a")])
    s = lasso.analyze(a)
    assert s.infinite and s.k_inc == 0 and lasso.constants(s).l is None


def test_long_prefix_before_the_loop():
    # counts up to 3 via a chain, then loops without touching the counter again
    states = ["s0", "s1", "s2", "s3", "loop"]
    tr = [("s0", "inc", "s1"), ("s1", "inc", "s2"), ("s2", "inc", "s3"),
          ("s3", "dec", "loop"), ("loop", "inc", "s3")]
    a = make_oca(states, "s0", [], tr)
    s = lasso.analyze(a)
    assert (s.k1, s.k2, s.k_inc) == (3, 2, 0)


def test_summary_json_fields():
    s = lasso.analyze(make_oca(["q"], "q", ["q"], [("q", "inc", "q")]))
    d = lasso.summary_json(s)
    assert d["kind"] == "InfiniteRun" and d["k_inc"] == 1 and d["l"] == 1


def test_nondeterministic_input_is_rejected():
    with pytest.raises(lasso.NotDeterministicError):
        lasso.analyze(make_oca(["q"], "q", [], [("q", "inc", "q"), ("q", "dec", "q")]))
