"""Golden examples with known answers, run by `artifact selftest`.

Each entry is a zero-argument function returning True on success.  The
tag records where the expected value comes from: "trivial" for answers
that follow from a definition, "source" for values fixed by the
construction being implemented.
"""

from __future__ import annotations

import io
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass
from typing import Callable

from . import lasso, purify, reductions, semantics
from .checker import check
from .checker import tables as tb
from .checker.evaluate import UpWord, eval_up_word
from .formulas import fo, ltl, ltl_to_fo, parse_fo, parse_ltl
from .formulas.sexpr import FormulaSyntaxError
from .oca import (Config, OcaError, is_deterministic, is_weakly_deterministic, make_oca,
                  parse_oca, run_prefix, step_deterministic, successors)

TRIVIAL, SOURCE = "trivial", "source"


@dataclass(frozen=True)
class Golden:
    name: str
    tag: str
    fn: Callable[[], bool]


GOLDENS: list[Golden] = []


def golden(name, tag=TRIVIAL):
    def deco(fn):
        GOLDENS.append(Golden(name, tag, fn))
        return fn
    return deco


def raises(exc, fn, *args) -> bool:
    try:
        fn(*args)
    except exc:
        return True
    return False


INC_LOOP = make_oca(["q0"], "q0", ["q0"], [("q0", "inc", "q0")])
PING = make_oca(["q0", "q1"], "q0", ["q0"], [("q0", "inc", "q1"), ("q1", "dec", "q0")])
STUCK = make_oca(["q0", "q1"], "q0", ["q1"], [("q0", "inc", "q1")])
UP1 = ltl.Reg(1)


# ---------------------------------------------------------------- oca

@golden("parse_oca minimal file")
def _():
    a = parse_oca("states q0; init q0; accept q0; q0 inc q0")
    return len(a.states) == 1 and len(a.transitions) == 1


@golden("parse_oca undeclared state")
def _():
    return raises(OcaError, parse_oca, "states q0\ninit q0\naccept\nq0 inc q9\n")


@golden("successors: inc")
def _():
    return successors(INC_LOOP, Config("q0", 5)) == {Config("q0", 6)}


@golden("successors: dec at zero is disabled", SOURCE)
def _():
    a = make_oca(["q0", "q1"], "q0", [], [("q0", "dec", "q1")])
    return successors(a, Config("q0", 0)) == set()


@golden("successors: zero test at zero", SOURCE)
def _():
    a = make_oca(["q0", "q1", "q2"], "q0", [], [("q0", "ifzero", "q1"), ("q0", "dec", "q2")])
    return successors(a, Config("q0", 0)) == {Config("q1", 0)}


ZD = make_oca(["q0", "q1"], "q0", [], [("q0", "ifzero", "q1"), ("q0", "dec", "q1"), ("q1", "inc", "q0")])
FAN = make_oca(["q0", "q1", "q2"], "q0", [], [("q0", "inc", "q1"), ("q0", "inc", "q2")])


@golden("is_deterministic: inc self-loop")
def _():
    return is_deterministic(INC_LOOP)


@golden("is_deterministic: zero test and dec")
def _():
    return is_deterministic(ZD)


@golden("is_deterministic: two incs")
def _():
    return not is_deterministic(FAN)


@golden("is_weakly_deterministic: distinct instructions")
def _():
    a = make_oca(["q0", "q1", "q2"], "q0", [], [("q0", "inc", "q1"), ("q0", "dec", "q2")])
    return is_weakly_deterministic(a)


@golden("is_weakly_deterministic: two incs")
def _():
    return not is_weakly_deterministic(FAN)


@golden("step_deterministic: inc")
def _():
    return step_deterministic(INC_LOOP, Config("q0", 0)) == Config("q0", 1)


@golden("step_deterministic: no transition")
def _():
    return step_deterministic(STUCK, Config("q1", 1)) is None


@golden("step_deterministic: dec branch at 3")
def _():
    return step_deterministic(ZD, Config("q0", 3)) == Config("q1", 2)


@golden("run_prefix: inc self-loop")
def _():
    return run_prefix(INC_LOOP, 4) == [Config("q0", i) for i in range(4)]


@golden("run_prefix: ping")
def _():
    return run_prefix(PING, 4) == [Config("q0", 0), Config("q1", 1), Config("q0", 0), Config("q1", 1)]


@golden("run_prefix: stuck at once")
def _():
    a = make_oca(["q0"], "q0", [], [("q0", "dec", "q0")])
    return run_prefix(a, 4) == [Config("q0", 0)]


# ---------------------------------------------------------------- lasso

@golden("analyze: inc self-loop")
def _():
    s = lasso.analyze(INC_LOOP)
    return (s.k1, s.k2, s.k_inc) == (0, 1, 1)


@golden("analyze: ping")
def _():
    s = lasso.analyze(PING)
    return (s.k1, s.k2, s.k_inc) == (0, 2, 0)


@golden("constants: L absent when K_inc = 0")
def _():
    return lasso.constants(lasso.analyze(PING)).l is None


@golden("counter_at: inc self-loop at 1000")
def _():
    return lasso.counter_at(lasso.analyze(INC_LOOP), 1000) == 1000


@golden("counter_at: ping at 999")
def _():
    return lasso.counter_at(lasso.analyze(PING), 999) == 1


@golden("state_at: inc self-loop")
def _():
    s = lasso.analyze(INC_LOOP)
    return all(lasso.state_at(s, i) == "q0" for i in (0, 1, 17, 12345))


@golden("state_at: ping at 7")
def _():
    return lasso.state_at(lasso.analyze(PING), 7) == "q1"


@golden("accepting_status: accept {q0}")
def _():
    st = lasso.accepting_status(INC_LOOP, lasso.analyze(INC_LOOP))
    return st.has_accepting_infinite and st.has_accepting_finite


@golden("accepting_status: accept nothing")
def _():
    a = make_oca(["q0"], "q0", [], [("q0", "inc", "q0")])
    st = lasso.accepting_status(a, lasso.analyze(a))
    return not st.has_accepting_infinite and not st.has_accepting_finite


@golden("accepting_status: stuck run")
def _():
    st = lasso.accepting_status(STUCK, lasso.analyze(STUCK))
    return st.has_accepting_finite and not st.has_accepting_infinite


# ---------------------------------------------------------------- formulas

@golden("parse_ltl: freeze next up")
def _():
    return parse_ltl("(down 1 (X (up 1)))") == ltl.Freeze(1, ltl.Next(UP1))


@golden("parse_fo: exists sim")
def _():
    return parse_fo("(exists x (sim x x))") == fo.Exists("x", fo.Sim("x", "x"))


@golden("parse_ltl: register 0 rejected", SOURCE)
def _():
    return raises(FormulaSyntaxError, parse_ltl, "(up 0)")


@golden("down1 X up1: sentence, pure, one register")
def _():
    f = ltl.Freeze(1, ltl.Next(UP1))
    return ltl.is_sentence(f) and ltl.is_pure(f) and ltl.register_count(f) == 1


@golden("up1 alone is not a sentence")
def _():
    return not ltl.is_sentence(UP1)


@golden("q0 and down1 F up1: sentence, impure")
def _():
    f = ltl.conj(ltl.State("q0"), ltl.Freeze(1, ltl.F(UP1)))
    return ltl.is_sentence(f) and not ltl.is_pure(f)


@golden("ltl_to_fo: letter atom", SOURCE)
def _():
    return ltl_to_fo(ltl.State("a")) == fo.Letter("a", "y0")


@golden("ltl_to_fo: up_r becomes y0 ~ x_r", SOURCE)
def _():
    out = ltl_to_fo(ltl.Freeze(1, UP1))
    return fo.Sim("y0", "x1") in set(fo.subformulas(out))


@golden("depth and max constant: exists exists lt")
def _():
    f = fo.Exists("x", fo.Exists("y", fo.Lt("x", "y")))
    return fo.quantifier_depth(f) == 2 and fo.max_constant(f) == 0


@golden("depth and max constant: poslt 7")
def _():
    f = fo.Exists("x", fo.PosLt("x", 7))
    return fo.quantifier_depth(f) == 1 and fo.max_constant(f) == 7


@golden("depth and max constant: open succ 13")
def _():
    f = fo.Succ("x", "y", 13)
    return fo.quantifier_depth(f) == 0 and fo.max_constant(f) == 13


# ---------------------------------------------------------------- semantics

@golden("eval_ltl_finite: state atom")
def _():
    return semantics.eval_ltl_finite(semantics.DataWord(("a",), (0,)), 0, {}, ltl.State("a"))


@golden("eval_ltl_finite: X fails at the last position", SOURCE)
def _():
    return not semantics.eval_ltl_finite(semantics.DataWord(("a",), (0,)), 0, {}, ltl.Next(ltl.TRUE))


@golden("eval_fo_finite: successor pair")
def _():
    w = semantics.DataWord(("a", "a", "a"), (0, 1, 2))
    return semantics.eval_fo_finite(w, {}, fo.Exists("x", fo.Exists("y", fo.Succ("x", "y", 1))))


@golden("eval_fo_finite: undefined variable", SOURCE)
def _():
    w = semantics.DataWord(("a", "a"), (0, 0))
    return not semantics.eval_fo_finite(w, {"y": 0}, fo.Sim("x", "y"))


@golden("eval_fo_run_bounded: true")
def _():
    w = semantics.RunWord(lasso.analyze(PING))
    return semantics.eval_fo_run_bounded(w, fo.TRUE, 5)


@golden("eval_ltl_run_bounded: F q0")
def _():
    w = semantics.RunWord(lasso.analyze(INC_LOOP))
    return all(semantics.eval_ltl_run_bounded(w, ltl.F(ltl.State("q0")), h) is semantics.Tri.TRUE
               for h in (1, 5, 20))


@golden("eval_ltl_run_bounded: G down1 X not up1 is unknown")
def _():
    w = semantics.RunWord(lasso.analyze(INC_LOOP))
    f = ltl.G(ltl.Freeze(1, ltl.Next(ltl.neg(UP1))))
    return all(semantics.eval_ltl_run_bounded(w, f, h) is semantics.Tri.UNKNOWN for h in (1, 5, 20))


@golden("bounded_witness_search: one configuration")
def _():
    return semantics.bounded_witness_search(INC_LOOP, ltl.TRUE, 1) == [Config("q0", 0)]


@golden("bounded_witness_search: nothing accepting")
def _():
    a = make_oca(["q0"], "q0", [], [("q0", "inc", "q0")])
    return all(semantics.bounded_witness_search(a, f, 6) is None
               for f in (ltl.TRUE, ltl.F(ltl.State("q0")), ltl.FALSE))


# ---------------------------------------------------------------- purify

TWO = make_oca(["q1", "q2"], "q1", ["q2"], [("q1", "inc", "q2"), ("q2", "dec", "q1")])


@golden("purify_ltl: T(q1)", SOURCE)
def _():
    want = ltl.X(ltl.Freeze(1, ltl.X(ltl.Not(UP1), 2)), 6)
    return purify.purify_ltl(TWO, ltl.State("q1")).formula == want


@golden("purify_ltl: T(X q1) for m = 2", SOURCE)
def _():
    t_q1 = purify.purify_ltl(TWO, ltl.State("q1")).formula
    return purify.purify_ltl(TWO, ltl.Next(ltl.State("q1"))).formula == ltl.X(t_q1, 16)


@golden("STA uses one register")
def _():
    return ltl.register_count(purify.sta_formula()) == 1


def _sta_profile(a, periods=3):
    """(position, original?, STA holds?) over the first periods of the purified run."""
    p = purify.purify_automaton(a)
    P = purify.gadget_len(len(a.states))
    run = run_prefix(p, periods * P + 7)
    w = semantics.DataWord.from_run(run)
    sta = purify.sta_formula()
    return [(j, run[j].state in a.states, semantics.eval_ltl_finite(w, j, {}, sta))
            for j in range(len(run) - 6)]


@golden("STA holds exactly at original-state positions", SOURCE)
def _():
    return all(orig == holds for a in (INC_LOOP, PING, TWO) for _, orig, holds in _sta_profile(a))


@golden("STA fails at the third pattern position", SOURCE)
def _():
    for a in (INC_LOOP, PING, TWO):
        p = purify.purify_automaton(a)
        run = run_prefix(p, 3 * purify.gadget_len(len(a.states)) + 7)
        rows = _sta_profile(a)
        if not any(run[j].state.endswith(purify.FRESH + "2") for j, _, _ in rows):
            return False
        if any(holds for j, _, holds in rows if run[j].state.endswith(purify.FRESH + "2")):
            return False
    return True


@golden("purify_fo: successor constant for m = 2", SOURCE)
def _():
    out = purify.purify_fo(TWO, fo.Exists("x", fo.Exists("y", fo.Succ("x", "y", 1)))).formula
    succ = {g for g in fo.subformulas(out) if isinstance(g, fo.Succ) and {g.x, g.y} == {"x", "y"}}
    return succ == {fo.Succ("x", "y", 15)}


@golden("purify_fo: at most two more variables", SOURCE)
def _():
    f = fo.Exists("x", fo.conj(fo.Letter("q1", "x"), fo.Exists("y", fo.conj(fo.Lt("x", "y"),
                                                                          fo.Letter("q2", "y")))))
    return len(fo.variables(purify.purify_fo(TWO, f).formula)) <= len(fo.variables(f)) + 2


@golden("weak determinization: inc fan", SOURCE)
def _():
    a = make_oca(["q", "q1", "q2"], "q", [], [("q", "inc", "q1"), ("q", "inc", "q2")])
    b, _ = purify.weak_determinize(a, ltl.TRUE)
    fresh = set(b.states) - set(a.states)
    out = {(t.source, t.instr.value): t.target for t in b.transitions}
    x = out[("q", "inc")]
    y = out[(x, "dec")]
    z = out[(x, "inc")]
    return (len(fresh) == 3 and {x, y, z} == fresh and out[(y, "inc")] == "q1"
            and out[(z, "dec")] == "q2" and len(b.transitions) == 5)


@golden("weak determinization: already weakly deterministic input")
def _():
    b, f = purify.weak_determinize(ZD, ltl.F(ltl.State("q1")))
    return is_weakly_deterministic(b) and set(b.states) == set(ZD.states)


# ---------------------------------------------------------------- checker

@golden("tables: pf on ping")
def _():
    s = lasso.analyze(PING)
    t = tb.build_tables(s, lasso.constants(s), "finitary", PING.accepting)
    return t.pf == frozenset(i for i in range(t.window) if i % 2 == 0)


@golden("build_word: stuck run of length 2", SOURCE)
def _():
    w = tb.build_word(lasso.analyze(STUCK))
    return w.s == (0, 1) and w.t == (fo.BOT,)


@golden("translate_sim: lt is kept", SOURCE)
def _():
    s = lasso.analyze(INC_LOOP)
    t = tb.build_tables(s, lasso.constants(s))
    return tb.translate_sim(fo.Lt("x", "y"), t) == fo.Lt("x", "y")


@golden("translate_sim: empty p2")
def _():
    s = lasso.analyze(INC_LOOP)
    t = tb.build_tables(s, lasso.constants(s))
    return not t.p2 and tb._pairs(t.p1 | t.p2, "x", "y") == tb._pairs(t.p1, "x", "y")


def _finitary_true(a):
    s = lasso.analyze(a)
    d = lasso.constants(s) if s.infinite else None
    t = tb.build_tables(s, d, "finitary", a.accepting)
    return eval_up_word(tb.build_word(s, d), tb.relativize_finitary(fo.TRUE, t))


@golden("relativize_finitary: true with an accepting position")
def _():
    return _finitary_true(PING) and _finitary_true(STUCK)


@golden("relativize_finitary: no accepting position")
def _():
    return not _finitary_true(make_oca(["q0", "q1"], "q0", [], [("q0", "inc", "q1"), ("q1", "dec", "q0")]))


@golden("eval_up_word: letter 0 exists")
def _():
    return eval_up_word(UpWord((), (0,)), fo.Exists("x", fo.Letter(0, "x")))


@golden("check: no accepting state", SOURCE)
def _():
    a = make_oca(["q0"], "q0", [], [("q0", "inc", "q0")])
    return check(a, fo.TRUE, "infinitary").answer is False


# ---------------------------------------------------------------- reductions

@golden("qbf_to_instance: N = 1 chain", SOURCE)
def _():
    q = reductions.parse_qbf("forall p1 exists p2\n(iff p1 p2)\n")
    a, _ = reductions.qbf_to_instance(q)
    loop = [t for t in a.transitions if t.source == t.target]
    return (len(a.states) == 6 and is_deterministic(a) and len(loop) == 1
            and loop[0].source == "qF" and loop[0].instr.value == "ifzero")


@golden("qbf_to_instance: unsatisfiable matrix")
def _():
    q = reductions.parse_qbf("forall p1 exists p2\n(and p1 (not p1))\n")
    a, f = reductions.qbf_to_instance(q)
    return check(a, f, "infinitary", purify=False).answer is False


@golden("solve_qbf_bruteforce: p2 copies p1")
def _():
    return reductions.solve_qbf_bruteforce(reductions.parse_qbf("forall p1 exists p2\n(iff p1 p2)\n"))


@golden("solve_qbf_bruteforce: p1 alone")
def _():
    return not reductions.solve_qbf_bruteforce(reductions.parse_qbf("forall p1 exists p2\np1\n"))


@golden("minsky_to_instance: one register", SOURCE)
def _():
    m = reductions.TwoCounterMachine(["s", "h"], "s", ["h"], [("s", "inc", 1, "h")])
    return ltl.register_count(reductions.minsky_to_instance(m).formula) == 1


@golden("A_sat: 2 states and 4 transitions", SOURCE)
def _():
    a = reductions.a_sat()
    return len(a.states) == 2 and len(a.transitions) == 4


@golden("omega-SAT: next clause", SOURCE)
def _():
    psi = ltl.Freeze(1, ltl.F(UP1))
    _, t_psi = reductions.satltl_to_instance(psi)
    _, got = reductions.satltl_to_instance(ltl.Next(psi))
    pos = reductions.pos_formula()
    return got == ltl.Next(ltl.Until(ltl.neg(pos), ltl.And((pos, t_psi))))


@golden("omega-SAT: identity on up1", SOURCE)
def _():
    f = ltl.Freeze(1, UP1)
    return reductions.satltl_to_instance(f)[1] == f


# ---------------------------------------------------------------- cli

def _cli(argv, files):
    from .cli import main
    with tempfile.TemporaryDirectory() as d:
        paths = []
        for name, text in files.items():
            path = os.path.join(d, name)
            with open(path, "w") as fh:
                fh.write(text)
            paths.append(path)
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(argv + paths)
        return code, out.getvalue(), err.getvalue()


@golden("cli analyze: ping")
def _():
    import json
    code, out, _ = _cli(["analyze", "--format", "json"],
                        {"loop.oca": "states q0 q1\ninit q0\naccept q0\nq0 inc q1\nq1 dec q0\n"})
    d = json.loads(out)
    return code == 0 and (d["k1"], d["k2"], d["k_inc"]) == (0, 2, 0)


@golden("cli check: nondeterministic input")
def _():
    code, _, err = _cli(["check"], {"nondet.oca": "states q0 q1 q2\ninit q0\naccept q1\nq0 inc q1\nq0 inc q2\n",
                                    "phi.ltl": "(F (state q1))"})
    return code == 3 and "automaton is not deterministic" in err


def run_goldens():
    """[(golden, passed, error message)] in registration order."""
    out = []
    for g in GOLDENS:
        try:
            ok, msg = bool(g.fn()), ""
        except Exception as err:       # a crash is a failure, reported verbatim
            ok, msg = False, f"{type(err).__name__}: {err}"
        out.append((g, ok, msg))
    return out
