import random

import pytest
from hypothesis import given, strategies as st

from artifact import generators as gen, semantics
from artifact.formulas import (FormulaSyntaxError, close_at_start, fo, ltl, ltl_to_fo, parse_fo,
                               parse_ltl, register_count, render_fo, render_ltl)

seeds = st.integers(0, 2 ** 32 - 1)


@given(seeds)
def test_ltl_round_trip(seed):
    phi = gen.random_ltl(random.Random(seed), 4, 2, ("a", "b"))
    assert parse_ltl(render_ltl(phi)) == phi


@given(seeds)
def test_fo_round_trip(seed):
    phi = gen.random_fo(random.Random(seed), 3, 3, 4, letters=("a", "q1"), size=8)
    assert parse_fo(render_fo(phi)) == phi


@given(seeds)
def test_ltl_to_fo_agrees_on_finite_words(seed):
    rng = random.Random(seed)
    w = gen.random_data_word(rng, 8, 4)
    phi = gen.random_ltl(rng, 3, 2, ("a", "b"))
    i = rng.randrange(len(w))
    want = semantics.eval_ltl_finite(w, i, {}, phi)
    assert semantics.eval_fo_finite(w, {"y0": i}, ltl_to_fo(phi)) == want


@given(seeds)
def test_ltl_to_fo_variable_budget(seed):
    phi = gen.random_ltl(random.Random(seed), 4, 2, ("a",))
    out = ltl_to_fo(phi)
    assert len(fo.variables(out)) <= register_count(phi) + 3
    assert fo.free_vars(out) <= {"y0"}


def test_close_at_start_pins_the_first_position():
    w = semantics.DataWord(("a", "b"), (0, 0))
    f = close_at_start(ltl_to_fo(parse_ltl("(state a)")))
    assert fo.is_sentence(f) and semantics.eval_fo_finite(w, {}, f)
    g = close_at_start(ltl_to_fo(parse_ltl("(state b)")))
    assert not semantics.eval_fo_finite(w, {}, g)


def test_freeze_compares_data():
    w = semantics.DataWord(("a", "a", "a"), (5, 6, 5))
    same_later = parse_ltl("(down 1 (X (X (up 1))))")
    assert semantics.eval_ltl_finite(w, 0, {}, same_later)
    assert not semantics.eval_ltl_finite(w, 0, {}, parse_ltl("(down 1 (X (up 1)))"))


def test_next_fails_at_the_last_position():
    w = semantics.DataWord(("a",), (0,))
    assert not semantics.eval_ltl_finite(w, 0, {}, parse_ltl("(X true)"))


@pytest.mark.parametrize("text", ["(and (state a)", "(up 0)", "(U (state a))", "(frob 1)", ")"])
def test_ltl_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_ltl(text)


@pytest.mark.parametrize("text", ["(lt x)", "(exists (lt x y))", "(succ+x x y)", "(poslt3 x y)"])
def test_fo_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_fo(text)


def test_fo_helpers():
    f = fo.Exists("x", fo.conj(fo.Succ("x", "y", 2), fo.PosLt("x", 7)))
    assert fo.free_vars(f) == {"y"}
    assert fo.quantifier_depth(f) == 1 and fo.max_constant(f) == 7
    assert fo.transform(f, atom_fn=lambda g: g) == f


def test_register_helpers():
    phi = parse_ltl("(down 2 (X (and (up 2) (down 1 (up 1)))))")
    assert ltl.is_sentence(phi) and register_count(phi) == 2
    assert not ltl.is_sentence(parse_ltl("(up 1)"))
