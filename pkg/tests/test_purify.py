import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact import generators as gen, purify, reductions
from artifact.checker import FINITARY, INFINITARY, check
from artifact.formulas import fo, ltl, parse_fo, parse_ltl
from artifact.oca import is_deterministic, is_weakly_deterministic, make_oca, run_prefix
from artifact.suites import sta_check

seeds = st.integers(0, 2 ** 32 - 1)
TWO = make_oca(["q1", "q2"], "q1", ["q2"], [("q1", "inc", "q2"), ("q2", "dec", "q1"), ("q2", "ifzero", "q1")])


def test_gadget_sizes():
    p = purify.purify_automaton(TWO)
    assert purify.gadget_len(2) == 15 and len(p.states) == 30
    assert p.initial == "q1" and is_deterministic(p)


def test_pattern_returns_to_its_base_height():
    # every pattern climbs and descends back, so the original counter is kept
    p = purify.purify_automaton(TWO)
    run = run_prefix(p, 3 * 15 + 1)
    originals = [c for c in run if c.state in TWO.states]
    assert [c.counter for c in originals] == [c.counter for c in run_prefix(TWO, len(originals))]


@given(seeds)
def test_sta_marks_exactly_the_original_positions(seed):
    assert sta_check(gen.random_det_oca(random.Random(seed), 4))


@settings(max_examples=15)
@given(seeds, st.sampled_from([INFINITARY, FINITARY]))
def test_purification_is_transparent_ltl(seed, mode):
    rng = random.Random(seed)
    a = gen.random_det_oca(rng, 3)
    phi = gen.random_ltl(rng, 2, 2, a.states)
    assert check(a, phi, mode, purify=False).answer == check(a, phi, mode).answer


@settings(max_examples=15)
@given(seeds, st.sampled_from([INFINITARY, FINITARY]))
def test_purification_is_transparent_fo(seed, mode):
    rng = random.Random(seed)
    a = gen.random_det_oca(rng, 3)
    phi = gen.random_fo(rng, 2, 3, 2, letters=a.states, size=4)
    assert check(a, phi, mode, purify=False).answer == check(a, phi, mode).answer


def test_purified_formulas_are_pure():
    inst = purify.purify_ltl(TWO, parse_ltl("(F (and (state q2) (X (state q1))))"))
    assert ltl.is_pure(inst.formula) and inst.gadget_len == 15
    inst = purify.purify_fo(TWO, parse_fo("(exists x (letter q2 x))"))
    assert fo.is_pure(inst.formula) and len(fo.variables(inst.formula)) <= 1 + 2


def test_reserved_marker_is_rejected():
    a = make_oca(["q__g1"], "q__g1", [], [])
    with pytest.raises(ValueError):
        purify.purify_automaton(a)


@given(seeds)
def test_weak_determinization_is_weakly_deterministic(seed):
    rng = random.Random(seed)
    a = gen.random_oca(rng, 4, 4)
    b, f = purify.weak_determinize(a, gen.random_ltl(rng, 2, 1, a.states))
    assert is_weakly_deterministic(b)
    assert set(a.states) <= set(b.states) and b.initial == a.initial


def test_weak_determinization_of_minsky_gadgets():
    m = reductions.parse_2cm("states s0 s1 s2; init s0; accept s2\n"
                             "s0 inc 1 s1; s1 dec 1 s2; s1 ifzero 2 s2")
    inst = reductions.minsky_to_instance(m)
    assert not is_weakly_deterministic(inst.automaton)
    b, _ = purify.weak_determinize(inst.automaton, inst.formula)
    assert is_weakly_deterministic(b)
