import json

import pytest

from artifact.cli import main

INC_LOOP = "states q0; init q0; accept q0\nq0 inc q0\n"
PING = "states q0 q1; init q0; accept q0\nq0 inc q1\nq1 dec q0\n"
NONDET = "states q0 q1; init q0; accept q1\nq0 inc q0\nq0 inc q1\n"
SOME_EQUAL = "(exists x (exists y (and (lt x y) (sim x y))))"


@pytest.fixture
def files(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return put


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_json(files, capsys):
    code, out, _ = run(capsys, "check", "--mode", "infinitary", "--format", "json",
                       files("a.oca", INC_LOOP), files("phi.fo", SOME_EQUAL))
    assert code == 0
    assert json.loads(out)["answer"] is False


def test_check_is_byte_deterministic(files, capsys):
    argv = ["check", "--format", "json", files("a.oca", PING), files("phi.fo", SOME_EQUAL)]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
    assert json.loads(first)["answer"] is True


def test_analyze(files, capsys):
    code, out, _ = run(capsys, "analyze", "--format", "json", files("loop.oca", PING))
    d = json.loads(out)
    assert code == 0
    assert (d["k1"], d["k2"], d["k_inc"]) == (0, 2, 0)


def test_nondeterministic_input(files, capsys):
    code, _, err = run(capsys, "check", files("n.oca", NONDET), files("phi.ltl", "(F (state q1))"))
    assert code == 3
    assert "automaton is not deterministic" in err


@pytest.mark.parametrize("oca, formula, name", [
    ("states q0; init q0\nq0 jump q0\n", "true", "phi.ltl"),
    (INC_LOOP, "(and", "phi.ltl"),
])
def test_input_format_errors(files, capsys, oca, formula, name):
    assert run(capsys, "check", files("a.oca", oca), files(name, formula))[0] == 3


def test_missing_file_is_input_error(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "absent.oca"))[0] == 3


def test_usage_errors(files, capsys):
    a = files("a.oca", PING)
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", a, files("phi.txt", "true"))[0] == 2
    assert run(capsys, "check", "--bound", "0", a, files("phi.fo", SOME_EQUAL))[0] == 2
    # the lasso word of PING has |s| + |t| = 2
    assert run(capsys, "check", "--bound", "1", a, files("phi2.fo", SOME_EQUAL))[0] == 2
    assert run(capsys, "check", "--bound", "2", a, files("phi3.fo", SOME_EQUAL))[0] == 0


def test_out_prefix_writes_files(files, capsys, tmp_path):
    prefix = str(tmp_path / "gen")
    q = files("q.qbf", "forall p1 exists p2\n(iff p1 p2)\n")
    code, out, _ = run(capsys, "gen-qbf", "--out", prefix, q)
    assert code == 0 and out == ""
    assert (tmp_path / "gen.oca").read_text().startswith("states q0")
    assert (tmp_path / "gen.ltl").read_text().strip()


def test_translate_and_purify(files, capsys):
    code, out, _ = run(capsys, "translate", "--closed", files("f.ltl", "(down 1 (F (up 1)))"))
    assert code == 0 and "exists" in out
    code, out, _ = run(capsys, "purify", "--format", "json", files("a.oca", PING),
                       files("f.ltl", "(F (state q1))"))
    assert code == 0 and set(json.loads(out)) == {"oca", "ltl"}


def test_gen_minsky_search(files, capsys):
    m = files("m.2cm", "states s0 s1 s2; init s0; accept s2\ns0 inc 1 s1\ns1 dec 1 s2\n")
    code, out, _ = run(capsys, "gen-minsky", "--search", "--format", "json", m)
    d = json.loads(out)
    assert code == 0 and d["replay"].strip() == "valid"


def test_weakdet_and_gen_sat(files, capsys):
    code, out, _ = run(capsys, "weakdet", files("n.oca", NONDET), files("f.ltl", "(F (state q1))"))
    assert code == 0 and "# --- oca" in out
    assert run(capsys, "gen-sat", files("s.ltl", "(down 1 (F (up 1)))"))[0] == 0
    assert run(capsys, "gen-sat", files("s2.ltl", "(down 2 (up 2))"))[0] == 3


def test_oracle_check_reports_seed(capsys):
    code, out, _ = run(capsys, "oracle-check", "--seed", "3", "--count", "3", "--suite", "ltl2fo")
    assert code == 0
    assert out.splitlines()[0] == "seed 3"
    code, out, _ = run(capsys, "oracle-check", "--count", "2", "--suite", "lasso", "--format", "json")
    assert json.loads(out)["seed"] == 0
