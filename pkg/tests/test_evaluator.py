import random

import pytest
from hypothesis import given, strategies as st

from artifact import generators as gen
from artifact.checker import FINITARY, INFINITARY, UpWord, default_bound, eval_up_word, reduce_to_word
from artifact.formulas import fo, parse_fo

seeds = st.integers(0, 2 ** 32 - 1)


def _instance(seed, size=6):
    rng = random.Random(seed)
    a = gen.random_det_oca(rng, 5)
    phi = gen.random_fo(rng, 3, 3, 3, size=size)
    mode = rng.choice((INFINITARY, FINITARY))
    return reduce_to_word(a, phi, mode)


@given(seeds, st.sampled_from([5, 40, 150, 500]))
def test_pruning_matches_plain_enumeration(seed, bound):
    w, g = _instance(seed)
    if w is None:
        return
    want = eval_up_word(w, g, bound, prune=False, shift=False)
    assert eval_up_word(w, g, bound) == want
    assert eval_up_word(w, g, bound, shift=False) == want


@given(seeds)
def test_exact_answer_ignores_the_representation(seed):
    # s.t^w, (s.t).t^w and s.(tt)^w are the same infinite word
    w, g = _instance(seed, size=7)
    if w is None:
        return
    want = eval_up_word(w, g)
    assert eval_up_word(UpWord(w.s + w.t, w.t), g) == want
    assert eval_up_word(UpWord(w.s, w.t + w.t), g) == want


def _word(s, t):
    return UpWord(tuple(s), tuple(t))


def test_exact_quantifiers_reach_infinity():
    w = _word("", "ab")
    every_a_has_a_later_b = parse_fo(
        "(forall x (imp (letter a x) (exists y (and (lt x y) (letter b y)))))")
    assert eval_up_word(w, every_a_has_a_later_b)
    # relativized to [0, 5) the a at position 4 has no later b
    assert not eval_up_word(w, every_a_has_a_later_b, 5)


def test_exact_last_position_does_not_exist():
    w = _word("a", "b")
    has_last = parse_fo("(exists x (not (exists y (lt x y))))")
    assert not eval_up_word(w, has_last)
    assert eval_up_word(w, has_last, 10)


def test_prefix_letters_are_not_periodic():
    w = _word("ab", "c")
    assert eval_up_word(w, parse_fo("(exists x (exists y (and (letter a x) (letter b y) (succ+1 y x))))"))
    assert not eval_up_word(w, parse_fo("(exists x (exists y (and (letter c x) (letter a y) (lt x y))))"))


def test_distance_atoms_far_out():
    # in (ab)^w distinct a's are at least 2 apart, and some are exactly 2 apart
    w = _word("", "ab")
    f = parse_fo("(exists x (exists y (and (letter a x) (letter a y) (lt x y) (distlt2 x y))))")
    assert not eval_up_word(w, f)
    g = parse_fo("(exists x (exists y (and (letter a x) (letter a y) (succ+2 y x))))")
    assert eval_up_word(w, g)


def test_default_bound_formula():
    w = _word("ab", "c")
    f = parse_fo("(exists x (exists y (succ+3 x y)))")
    assert default_bound(w, f) == 2 + 1 * (3 + 2) * 2 ** 3


def test_rejects_open_formulas_and_bad_bounds():
    w = _word("", "a")
    with pytest.raises(ValueError):
        eval_up_word(w, parse_fo("(letter a x)"))
    with pytest.raises(ValueError):
        eval_up_word(w, parse_fo("(exists x (letter a x))"), 0)
    with pytest.raises(ValueError):
        eval_up_word(w, parse_fo("(exists x (letter a x))"), None, prune=False)
