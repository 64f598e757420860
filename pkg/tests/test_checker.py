import random

import pytest
from hypothesis import given, strategies as st

from artifact import generators as gen
from artifact.checker import (FINITARY, INFINITARY, Branch, check, relativization_bound)
from artifact.formulas import parse_fo, parse_ltl
from artifact.lasso import NotDeterministicError
from artifact.oca import make_oca
from artifact.suites import oracle_verdict

seeds = st.integers(0, 2 ** 32 - 1)
modes = st.sampled_from([INFINITARY, FINITARY])


@given(seeds, modes)
def test_check_matches_the_reference_semantics(seed, mode):
    rng = random.Random(seed)
    a, phi = gen.random_det_oca(rng, 5), gen.random_fo(rng, 2, 3, 3)
    B = relativization_bound(a, phi, mode)
    if B is None:
        assert not check(a, phi, mode).answer
        return
    assert check(a, phi, mode, bound=B).answer == oracle_verdict(a, phi, mode, B)


@given(seeds, modes)
def test_verdict_is_stable_past_the_default_bound(seed, mode):
    rng = random.Random(seed)
    a, phi = gen.random_det_oca(rng, 5), gen.random_fo(rng, 2, 3, 3)
    B = relativization_bound(a, phi, mode)
    if B is not None:
        assert len({check(a, phi, mode, bound=k * B).answer for k in (1, 2, 4)}) == 1


# q0 inc q1, q1 dec q2, q2 inc q2: positions 1 and 3 both hold counter 1,
# exactly L*K2 = 2 apart with the first one still in the prefix
BEFORE_LOOP = make_oca(["q0", "q1", "q2"], "q0", ["q2"],
                       [("q0", "inc", "q1"), ("q1", "dec", "q2"), ("q2", "inc", "q2")])
SAME_COUNTER_TWO_LATER = parse_fo(
    "(exists x (and (poslt2 x) (not (poslt1 x)) (exists y (and (succ+2 y x) (sim x y)))))")


@pytest.mark.parametrize("bound", [None, 10, 40])
def test_sim_across_the_prefix_boundary(bound):
    assert check(BEFORE_LOOP, SAME_COUNTER_TWO_LATER, bound=bound).answer
    assert oracle_verdict(BEFORE_LOOP, SAME_COUNTER_TWO_LATER, INFINITARY, 40)


def test_branches():
    inc = make_oca(["q"], "q", ["q"], [("q", "inc", "q")])
    ping = make_oca(["a", "b"], "a", ["a"], [("a", "inc", "b"), ("b", "dec", "a")])
    stuck = make_oca(["a", "b"], "a", ["b"], [("a", "inc", "b")])
    t = parse_ltl("true")
    assert check(inc, t).branch is Branch.INF_KINC_POS
    assert check(ping, t).branch is Branch.INF_KINC_ZERO
    assert check(stuck, t).branch is Branch.NO_ACCEPTING_INF_RUN and not check(stuck, t).answer
    assert check(stuck, t, FINITARY).branch is Branch.FIN_NO_INF_RUN and check(stuck, t, FINITARY).answer
    assert check(inc, t, FINITARY).branch is Branch.FIN_WITH_INF_RUN


def test_ltl_with_freeze_on_a_counter():
    # the counter of an inc loop never returns to an earlier value
    inc = make_oca(["q"], "q", ["q"], [("q", "inc", "q")])
    assert not check(inc, parse_ltl("(down 1 (X (F (up 1))))")).answer
    ping = make_oca(["a", "b"], "a", ["a"], [("a", "inc", "b"), ("b", "dec", "a")])
    assert check(ping, parse_ltl("(G (down 1 (X (X (up 1)))))")).answer


def test_state_atoms_purified_or_direct():
    ping = make_oca(["a", "b"], "a", ["a"], [("a", "inc", "b"), ("b", "dec", "a")])
    phi = parse_ltl("(G (imp (state a) (X (state b))))")
    assert check(ping, phi).answer and check(ping, phi, purify=False).answer
    psi = parse_ltl("(F (and (state b) (X (state b))))")
    assert not check(ping, psi).answer and not check(ping, psi, purify=False).answer


def test_universal_variant():
    ping = make_oca(["a", "b"], "a", ["a"], [("a", "inc", "b"), ("b", "dec", "a")])
    assert check(ping, parse_ltl("(G (F (state a)))"), universal=True).answer
    with pytest.raises(ValueError):
        check(ping, parse_ltl("true"), FINITARY, universal=True)


def test_finitary_needs_an_accepting_prefix_end():
    # the run passes through b exactly once; only b accepts
    a = make_oca(["a", "b", "c"], "a", ["b"], [("a", "inc", "b"), ("b", "inc", "c"), ("c", "inc", "c")])
    assert check(a, parse_ltl("(X (state b))"), FINITARY).answer
    assert not check(a, parse_ltl("(X (X (state c)))"), FINITARY).answer


def test_errors():
    nd = make_oca(["q"], "q", [], [("q", "inc", "q"), ("q", "dec", "q")])
    with pytest.raises(NotDeterministicError):
        check(nd, parse_ltl("true"))
    ping = make_oca(["a", "b"], "a", ["a"], [("a", "inc", "b"), ("b", "dec", "a")])
    with pytest.raises(ValueError):
        check(ping, parse_ltl("(up 1)"))
    with pytest.raises(ValueError):
        check(ping, parse_ltl("true"), "sometimes")
