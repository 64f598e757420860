import pytest
from hypothesis import given, strategies as st

from artifact import reductions as rd
from artifact import semantics
from artifact.checker import FINITARY, INFINITARY, check
from artifact.formulas import ltl
from artifact.formulas.sexpr import FormulaSyntaxError
from artifact.oca import is_deterministic

COUNTDOWN = """states s0 s1 s2 s3 s4 s5; init s0; accept s5
s0 inc 1 s1; s1 inc 1 s2; s2 dec 1 s3; s3 dec 1 s4; s4 ifzero 1 s5
"""


def clauses(n):
    lit = st.integers(1, 2 * n).flatmap(lambda v: st.sampled_from((v, -v)))
    return st.lists(st.lists(lit, min_size=1, max_size=3), min_size=1, max_size=4)


# ---------------------------------------------------------------- QBF

def test_qbf_parse_render_roundtrip():
    q = rd.parse_qbf("forall p1 exists p2\n(or (not p1) (and p2 true))\n")
    assert q.n == 1
    again = rd.parse_qbf(rd.render_qbf(q))
    assert again == q


@pytest.mark.parametrize("text", [
    "",
    "exists p1 forall p2\np1",
    "forall p1 exists p2\np3",
    "forall p1 exists p2 forall p3\np1",
    "forall p1 exists p2\n(xor p1 p2)",
])
def test_qbf_parse_errors(text):
    with pytest.raises(FormulaSyntaxError):
        rd.parse_qbf(text)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), clauses(n))))
def test_bruteforce_agrees_with_expansion(case):
    n, cl = case
    q = rd.QbfInstance(n, rd.cnf_matrix(cl))
    assert rd.solve_qbf_bruteforce(q) == rd.solve_qbf_expansion(q)


def test_qbf_oracle_hand_cases():
    # forall p1 exists p2: p1 <-> p2 is true, the swapped prefix would not be
    q = rd.parse_qbf("forall p1 exists p2\n(iff p1 p2)")
    assert rd.solve_qbf_bruteforce(q)
    assert not rd.solve_qbf_bruteforce(rd.parse_qbf("forall p1 exists p2\np1"))


def test_qbf_chain_shape():
    q = rd.parse_qbf("forall p1 exists p2 forall p3 exists p4\np2")
    a, f = rd.qbf_to_instance(q)
    assert a.states == tuple(rd.qbf_states(2))
    assert len(a.states) == 2 + 2 * 4
    assert is_deterministic(a)
    assert ltl.register_count(f) == 4


@pytest.mark.parametrize("matrix", ["(iff p1 p2)", "p1", "(not p2)", "(and p1 (not p1))", "true"])
def test_qbf_instance_verdicts_n1(matrix):
    q = rd.parse_qbf("forall p1 exists p2\n" + matrix)
    a, f = rd.qbf_to_instance(q)
    want = rd.solve_qbf_bruteforce(q)
    assert check(a, f, INFINITARY).answer == want
    assert check(a, f, FINITARY).answer == want


def test_qbf_variable_cap():
    q = rd.QbfInstance(11, rd.pvar(1))
    with pytest.raises(ValueError):
        rd.solve_qbf_bruteforce(q)


# ---------------------------------------------------------------- two-counter machines

def test_2cm_roundtrip_and_errors():
    m = rd.parse_2cm(COUNTDOWN)
    assert rd.parse_2cm(rd.render_2cm(m)) == m
    with pytest.raises(ValueError, match="line 2"):
        rd.parse_2cm("states a b; init a\na jump 1 b")
    with pytest.raises(ValueError):
        rd.parse_2cm("states a b; accept b\na inc 1 b")
    with pytest.raises(ValueError, match="incrementation"):
        rd.parse_2cm("states a b; init a\na dec 1 b")


def test_replay_and_shortest_run():
    m = rd.parse_2cm(COUNTDOWN)
    run = rd.shortest_halting_run(m)
    assert [t.op for t in run] == ["inc", "inc", "dec", "dec", "ifzero"]
    assert rd.replay_2cm(m, run)
    assert not rd.replay_2cm(m, run[:-1])
    assert not rd.replay_2cm(m, run[1:])


def test_minsky_witness_replays():
    m = rd.parse_2cm(COUNTDOWN)
    inst = rd.minsky_to_instance(m)
    assert ltl.register_count(inst.formula) == 1
    run = semantics.bounded_witness_search(inst.automaton, inst.formula, inst.max_len)
    assert run is not None and len(run) <= inst.max_len
    assert semantics.validate_witness(inst.automaton, inst.formula, run)
    assert rd.replay_2cm(m, rd.project_witness(inst, run))


def test_minsky_without_halting_run_has_no_witness():
    # the only route to the accepting state needs counter 1 at zero after an inc
    m = rd.parse_2cm("states s0 s1 s2; init s0; accept s2\ns0 inc 1 s1; s1 ifzero 1 s2")
    assert rd.shortest_halting_run(m) is None
    inst = rd.minsky_to_instance(m, steps=2)
    assert semantics.bounded_witness_search(inst.automaton, inst.formula, inst.max_len) is None


# ---------------------------------------------------------------- omega-SAT

def test_satltl_shape():
    a, f = rd.satltl_to_instance(ltl.Freeze(1, ltl.F(ltl.Reg(1))))
    assert len(a.states) == 2 and len(a.transitions) == 4
    assert ltl.registers(f) <= {1}


def test_satltl_rejects_other_registers():
    with pytest.raises(ValueError):
        rd.satltl_to_instance(ltl.Freeze(2, ltl.Reg(2)))
