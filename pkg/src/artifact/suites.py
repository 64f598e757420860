"""Randomized equivalence suites shared by `oracle-check` and the tests.

Every suite takes a seeded Random and a case count and returns a
SuiteResult; a case that fails records a short reproducible description.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import generators as gen
from . import lasso, purify, reductions, semantics
from .checker import FINITARY, INFINITARY, check, relativization_bound
from .checker.tables import build_tables
from .formulas import fo, ltl, ltl_to_fo, render
from .oca import is_weakly_deterministic, render_oca, run_prefix


@dataclass
class SuiteResult:
    cases: int = 0
    failures: int = 0
    first_failure: Optional[str] = None
    stats: dict = field(default_factory=dict)

    def record(self, ok: bool, what=lambda: ""):
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = what()


def _describe(a, *rest) -> str:
    return " | ".join([render_oca(a).replace("\n", "; ")] + [render(x) if isinstance(x, (fo.Fo, ltl.Ltl))
                                                            else str(x) for x in rest])


# ---------------------------------------------------------------- lasso bounds

def lasso_suite(rng: random.Random, count: int, max_states: int = 8) -> SuiteResult:
    res = SuiteResult(stats={"infinite": 0, "finite": 0})
    for _ in range(count):
        a = gen.random_det_oca(rng, max_states)
        try:
            s = lasso.analyze(a)
        except Exception as err:        # noqa: BLE001 - any crash is a failure
            res.record(False, lambda: _describe(a, f"analyze raised {err!r}"))
            continue
        if not s.infinite:
            res.stats["finite"] += 1
            raw = run_prefix(a, len(s.max_run) + 5)
            res.record(tuple(raw) == s.max_run, lambda: _describe(a, "max_run differs from simulation"))
            continue
        res.stats["infinite"] += 1
        m = len(a.states)
        n = s.k1 + 4 * s.k2 + 1
        raw = run_prefix(a, n)
        ok = (s.k1 + s.k2 <= m ** 3 and s.k_inc <= m and len(raw) == n
              and all(raw[i + s.k2].state == raw[i].state
                      and raw[i + s.k2].counter == raw[i].counter + s.k_inc
                      for i in range(s.k1, s.k1 + 3 * s.k2 + 1))
              and all(lasso.counter_at(s, i) == raw[i].counter and lasso.state_at(s, i) == raw[i].state
                      for i in range(n)))
        res.record(ok, lambda: _describe(a, (s.k1, s.k2, s.k_inc)))
    return res


# ---------------------------------------------------------------- set characterization

def setp_check(s, d) -> bool:
    """Exhaustively compare counter equality with the table characterization
    for all 0 <= i <= j <= K1 + 4 L K2."""
    t = build_tables(s, d)
    W, LK2, K1 = t.window, t.period, s.k1
    n = K1 + 4 * LK2 + 1
    c = lasso.counters(s, n)
    pos = np.arange(n)
    res = np.where(pos < K1, pos, K1 + (pos - K1) % LK2)
    p1 = np.array(sorted(i * W + j for i, j in t.p1), dtype=np.int64)
    p12 = np.array(sorted(i * W + j for i, j in t.p1 | t.p2), dtype=np.int64)

    def member(table, keys):
        if not table.size:
            return np.zeros(keys.shape, dtype=bool)
        k = np.searchsorted(table, keys)
        k = np.minimum(k, table.size - 1)
        return table[k] == keys

    for i in range(n):
        j = pos[i:]
        lhs = c[j] == c[i]
        in_p1 = (j < W) & member(p1, i * W + np.minimum(j, W - 1)) if i < W else np.zeros(j.shape, bool)
        late = (i >= K1) & (j >= K1) & (j - i < LK2) & member(p12, res[i] * W + res[j])
        if not np.array_equal(lhs, in_p1 | late):
            return False
    return True


def setp_suite(rng: random.Random, count: int, max_states: int = 8, limit: int = 50_000) -> SuiteResult:
    res = SuiteResult(stats={"skipped_large": 0, "not_pos": 0})
    tried = 0
    while res.cases < count and tried < 50 * count:
        tried += 1
        a = gen.random_det_oca(rng, max_states)
        s = lasso.analyze(a)
        if not s.infinite or s.k_inc == 0:
            res.stats["not_pos"] += 1
            continue
        d = lasso.constants(s)
        if s.k1 + 4 * d.l * s.k2 > limit:
            res.stats["skipped_large"] += 1
            continue
        res.record(setp_check(s, d), lambda: _describe(a))
    return res


# ---------------------------------------------------------------- checker against the oracle

def oracle_verdict(a, phi, mode, bound) -> bool:
    s = lasso.analyze(a)
    if mode == INFINITARY:
        if not lasso.accepting_status(a, s).has_accepting_infinite:
            return False
        return semantics.eval_fo_run_bounded(semantics.RunWord(s), phi, bound)
    return semantics.eval_fo_finitary_bounded(s, a.accepting, phi, bound)


def checker_cases(rng: random.Random, count: int):
    """count pairs (automaton, pure sentence); each is used in both modes."""
    return [(gen.random_det_oca(rng, 5), gen.random_fo(rng, 2, 3, 3)) for _ in range(count)]


def checker_suite(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult(stats={"max_bound": 0, "settled_early": 0})
    for a, phi in checker_cases(rng, count):
        for mode in (INFINITARY, FINITARY):
            B = relativization_bound(a, phi, mode)
            if B is None:
                # no accepting infinite run: both sides are false without a word
                res.stats["settled_early"] += 1
                res.record(check(a, phi, mode).answer is False and not oracle_verdict(a, phi, mode, 1),
                           lambda: _describe(a, phi, mode))
                continue
            res.stats["max_bound"] = max(res.stats["max_bound"], B)
            got = check(a, phi, mode, bound=B).answer
            want = oracle_verdict(a, phi, mode, B)
            res.record(got == want, lambda: _describe(a, phi, mode, f"B={B} check={got} oracle={want}"))
    return res


def stabilization_suite(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult()
    for a, phi in checker_cases(rng, count):
        for mode in (INFINITARY, FINITARY):
            B = relativization_bound(a, phi, mode)
            if B is None:
                continue
            v = [check(a, phi, mode, bound=k * B).answer for k in (1, 2, 4)]
            res.record(len(set(v)) == 1, lambda: _describe(a, phi, mode, f"B={B} verdicts={v}"))
    return res


# ---------------------------------------------------------------- QBF

def qbf_suite(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult(stats={"true": 0})
    for q in gen.qbf_corpus(rng, max(1, count // 2)):
        want = reductions.solve_qbf_bruteforce(q)
        a, f = reductions.qbf_to_instance(q)
        v = [want, reductions.solve_qbf_expansion(q)]
        v += [check(a, f, mode).answer for mode in (INFINITARY, FINITARY)]
        res.stats["true"] += want
        res.record(len(set(v)) == 1, lambda: f"{reductions.render_qbf(q)!r} {v}")
    return res


# ---------------------------------------------------------------- purification

def purify_cases(rng: random.Random, count: int):
    out = []
    for _ in range(count):
        a = gen.random_det_oca(rng, 4)
        out.append((a, gen.random_fo(rng, 2, 3, 2, letters=a.states, size=4)))
        out.append((a, gen.random_ltl(rng, 2, 2, a.states)))
    return out


def purify_suite(rng: random.Random, count: int) -> SuiteResult:
    """check on the source (state atoms read directly) against check on the
    purified instance; count automata, each with one FO and one LTL formula."""
    res = SuiteResult()
    for a, phi in purify_cases(rng, count):
        for mode in (INFINITARY, FINITARY):
            x = check(a, phi, mode, purify=False).answer
            y = check(a, phi, mode).answer
            res.record(x == y, lambda: _describe(a, phi, mode, f"direct={x} purified={y}"))
    return res


def sta_check(a, periods: int = 3) -> bool:
    """On the purified run: a position with 6 successors satisfies STA iff it
    carries an original state, and there phi_i holds iff the state is q_i."""
    p = purify.purify_automaton(a)
    P = purify.gadget_len(len(a.states))
    # phi_i looks 2i + 6 positions ahead, STA 6
    run = run_prefix(p, periods * P + 2 * len(a.states) + 7)
    w = semantics.DataWord.from_run(run)
    sta = purify.sta_formula()
    idx = {q: i for i, q in enumerate(a.states, 1)}
    for j in range(min(len(run) - 2 * len(a.states) - 6, periods * P)):
        q = run[j].state
        if semantics.eval_ltl_finite(w, j, {}, sta) != (q in idx):
            return False
        if q in idx:
            for i in idx.values():
                if semantics.eval_ltl_finite(w, j, {}, purify.state_formula(i)) != (idx[q] == i):
                    return False
    return True


def sta_suite(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult()
    for _ in range(count):
        a = gen.random_det_oca(rng, 4)
        res.record(sta_check(a), lambda: _describe(a))
    return res


# ---------------------------------------------------------------- LTL to FO

def ltl2fo_suite(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult()
    for _ in range(count):
        w = gen.random_data_word(rng, 8, 4)
        phi = gen.random_ltl(rng, 3, 2, ("a", "b"))
        i = rng.randrange(len(w))
        x = semantics.eval_ltl_finite(w, i, {}, phi)
        y = semantics.eval_fo_finite(w, {"y0": i}, ltl_to_fo(phi))
        res.record(x == y, lambda: f"{w} at {i}: {render(phi)}")
    return res


# ---------------------------------------------------------------- weak determinization

def fan_width(a) -> int:
    widths = {}
    for t in a.transitions:
        widths[(t.source, t.instr)] = widths.get((t.source, t.instr), 0) + 1
    return max(widths.values(), default=1)


def expansion(a) -> int:
    """Upper bound on the steps one original step becomes."""
    return 2 * fan_width(a) + 1


def weakdet_suite(rng: random.Random, count: int, n: int = 4, min_stable: Optional[int] = None) -> SuiteResult:
    """Search witnesses of length n on the source and n' = 1 + (n-1)E on the
    weak determinization: orig(n) => wd(n') => orig(n'), and on instances
    whose source verdict is the same at n and n' the two sides agree."""
    res = SuiteResult(stats={"stable": 0, "positive": 0})
    min_stable = count if min_stable is None else min_stable
    tried = 0
    while (res.cases < count or res.stats["stable"] < min_stable) and tried < 40 * count:
        tried += 1
        a = gen.random_oca(rng, 3, 3)
        phi = gen.random_ltl(rng, 2, 1, a.states)
        b, f = purify.weak_determinize(a, phi)
        n2 = 1 + (n - 1) * expansion(a)
        try:
            o1 = semantics.bounded_witness_search(a, phi, n, limit=200_000)
            o2 = semantics.bounded_witness_search(a, phi, n2, limit=200_000)
            w2 = semantics.bounded_witness_search(b, f, n2, limit=200_000)
        except RuntimeError:
            continue                     # search space too large for a desk-scale case
        ok = is_weakly_deterministic(b)
        ok &= (o1 is None or w2 is not None) and (w2 is None or o2 is not None)
        ok &= all(r is None or semantics.validate_witness(x, g, r)
                  for x, g, r in ((a, phi, o1), (a, phi, o2), (b, f, w2)))
        stable = (o1 is None) == (o2 is None)
        if stable:
            res.stats["stable"] += 1
            ok &= (o1 is None) == (w2 is None)
        res.stats["positive"] += o1 is not None
        res.record(ok, lambda: _describe(a, phi, f"n={n} n'={n2} orig={o1 is not None},"
                                              f"{o2 is not None} wd={w2 is not None}"))
    return res


SUITES = {
    "lasso": lasso_suite,
    "setp": setp_suite,
    "checker": checker_suite,
    "stabilization": stabilization_suite,
    "qbf": qbf_suite,
    "purify": purify_suite,
    "sta": sta_suite,
    "ltl2fo": ltl2fo_suite,
    "weakdet": weakdet_suite,
}
