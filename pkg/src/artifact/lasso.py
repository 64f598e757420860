"""Structure of the unique run of a deterministic one-counter automaton.

The run either gets stuck (a finite maximal run) or is a lasso: after a
prefix of K1 configurations, blocks of K2 configurations repeat with every
counter shifted by K_inc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .oca import DEC, INC, Config, Oca, is_deterministic, step_deterministic


class LassoError(RuntimeError):
    """Internal consistency failure: no lasso where one must exist."""


class NotDeterministicError(ValueError):
    def __init__(self, msg="automaton is not deterministic"):
        super().__init__(msg)


class RunKind(str, Enum):
    INFINITE = "InfiniteRun"
    FINITE = "FiniteRun"


@dataclass(frozen=True)
class LassoSummary:
    prefix: tuple[Config, ...]
    loop: tuple[Config, ...]
    k1: int
    k2: int
    k_inc: int
    kind: RunKind
    max_run: tuple[Config, ...] = ()

    @property
    def infinite(self) -> bool:
        return self.kind is RunKind.INFINITE

    def window(self) -> tuple[Config, ...]:
        return self.prefix + self.loop if self.infinite else self.max_run


@dataclass(frozen=True)
class DerivedConstants:
    beta1: int
    beta2: int
    gamma: int
    l: Optional[int]


@dataclass(frozen=True)
class AcceptingStatus:
    has_accepting_infinite: bool
    has_accepting_finite: bool


def _simulate(a: Oca, run: list[Config], length: int) -> None:
    while len(run) < length:
        nxt = step_deterministic(a, run[-1])
        if nxt is None:
            return
        run.append(nxt)


def _shifted(c: Config, d: int) -> Config:
    return Config(c.state, c.counter + d)


def _replays(run, k1, k2, kinc) -> bool:
    return all(run[i + k2] == _shifted(run[i], kinc) for i in range(k1, k1 + k2))


def _canonical(a: Oca, run: list[Config], k1: int, k2: int, kinc: int):
    """Least period, then least start, of an already valid lasso."""
    _simulate(a, run, k1 + 2 * k2 + 1)
    if len(run) < k1 + 2 * k2 or not _replays(run, k1, k2, kinc):
        raise LassoError(f"lasso ({k1}, {k2}, {kinc}) fails the replay check")
    for d in range(1, k2 + 1):
        if k2 % d or (kinc * d) % k2:
            continue
        c = kinc * d // k2
        if all(run[i + d] == _shifted(run[i], c) for i in range(k1, k1 + k2)):
            k2, kinc = d, c
            break
    while k1 > 0 and run[k1 - 1 + k2] == _shifted(run[k1 - 1], kinc):
        k1 -= 1
    return k1, k2, kinc


def _early_lasso(a: Oca, limit: int):
    """Simulate with plain integers until a lasso is certain, the run gets
    stuck, or limit configurations exist.  Returns (run, lasso or None).

    A lasso is certain when a state repeats at positions i < j, the counter
    stays >= c_i on [i, j] and no zero test is taken in between: the segment
    then replays forever shifted by c_j - c_i.  Suffix minima are kept on a
    monotone stack, so the test costs O(1) amortized per step.  A repeated
    configuration with counter 0 is a lasso as well."""
    names = list(a.states)
    idx = {q: k for k, q in enumerate(names)}
    inc = [-1] * len(names)
    dec = [-1] * len(names)
    zero = [-1] * len(names)
    for q in names:
        for t in a.outgoing(q):
            table = inc if t.instr is INC else dec if t.instr is DEC else zero
            table[idx[q]] = idx[t.target]
    qs, cs = [idx[a.initial]], [0]
    stack: list[int] = []
    per_state: list[list[int]] = [[] for _ in names]
    zero_seen: dict[int, int] = {}
    last_zero_test = -1
    lasso = None
    while True:
        j = len(qs) - 1
        q, c = qs[j], cs[j]
        while stack and cs[stack[-1]] > c:
            per_state[qs[stack.pop()]].pop()
        mine = per_state[q]
        if mine and mine[-1] > last_zero_test:
            i = mine[-1]
            lasso = (i, j - i, c - cs[i])
            break
        if c == 0:
            if q in zero_seen:
                lasso = (zero_seen[q], j - zero_seen[q], 0)
                break
            zero_seen[q] = j
        stack.append(j)
        mine.append(j)
        if len(qs) >= limit:
            break
        if inc[q] >= 0:
            q2, c2 = inc[q], c + 1
        elif c > 0 and dec[q] >= 0:
            q2, c2 = dec[q], c - 1
        elif c == 0 and zero[q] >= 0:
            q2, c2 = zero[q], 0
            last_zero_test = j
        else:
            break
        qs.append(q2)
        cs.append(c2)
    return [Config(names[q], c) for q, c in zip(qs, cs)], lasso


def analyze(a: Oca) -> LassoSummary:
    if not is_deterministic(a):
        raise NotDeterministicError()
    nq = len(a.states)
    n_max = nq ** 3 + nq + 2
    run, early = _early_lasso(a, n_max + 1)
    if early is not None:
        k1, k2, kinc = _canonical(a, run, *early)
        return LassoSummary(prefix=tuple(run[:k1]), loop=tuple(run[k1:k1 + k2]),
                            k1=k1, k2=k2, k_inc=kinc, kind=RunKind.INFINITE)
    if len(run) <= n_max or step_deterministic(a, run[-1]) is None:
        return LassoSummary(prefix=tuple(run), loop=(), k1=len(run), k2=0, k_inc=0,
                            kind=RunKind.FINITE, max_run=tuple(run))

    # positions of successful zero tests; 0 belongs by convention
    zeros = [0] + [i for i in range(1, len(run) - 1)
                   if run[i].counter == 0 and run[i + 1].counter == 0]
    lasso = None
    first: dict[str, int] = {}
    for j in zeros:
        q = run[j].state
        if q in first:
            lasso = (first[q], j - first[q], 0)
            break
        first[q] = j
    if lasso is None:
        # no zero test after z: a state repeats within |Q| steps
        z = zeros[-1]
        first = {}
        for k in range(z + 1, z + nq + 2):
            q = run[k].state
            if q in first:
                k0 = first[q]
                lasso = (k0, k - k0, run[k].counter - run[k0].counter)
                break
            first[q] = k
    if lasso is None or lasso[2] < 0:
        raise LassoError("no lasso found within the simulation window")
    k1, k2, kinc = _canonical(a, run, *lasso)
    return LassoSummary(prefix=tuple(run[:k1]), loop=tuple(run[k1:k1 + k2]),
                        k1=k1, k2=k2, k_inc=kinc, kind=RunKind.INFINITE)


def constants(s: LassoSummary) -> DerivedConstants:
    if not s.infinite:
        raise ValueError("derived constants need an infinite run")
    base = s.loop[0].counter
    loop = [c.counter for c in s.loop]
    beta1 = base - min(loop)
    beta2 = max(loop) - base
    gamma = max((c.counter for c in s.prefix), default=0)
    l = None
    if s.k_inc > 0:
        l = 1 + gamma + math.ceil((beta1 + beta2) / s.k_inc)
    return DerivedConstants(beta1, beta2, gamma, l)


def counter_at(s: LassoSummary, i: int) -> int:
    if not s.infinite:
        raise ValueError("counter_at needs an infinite run")
    if i < s.k1:
        return s.prefix[i].counter
    a, r = divmod(i - s.k1, s.k2)
    return s.loop[r].counter + a * s.k_inc


def state_at(s: LassoSummary, i: int) -> str:
    if not s.infinite:
        raise ValueError("state_at needs an infinite run")
    if i < s.k1:
        return s.prefix[i].state
    return s.loop[(i - s.k1) % s.k2].state


def counters(s: LassoSummary, n: int) -> np.ndarray:
    """counter_at for positions 0..n-1 as an int64 array."""
    idx = np.arange(n, dtype=np.int64)
    if not s.infinite:
        if n > len(s.max_run):
            raise ValueError("position beyond the maximal run")
        return np.array([c.counter for c in s.max_run[:n]], dtype=np.int64)
    pre = np.array([c.counter for c in s.prefix] or [0], dtype=np.int64)
    lp = np.array([c.counter for c in s.loop], dtype=np.int64)
    a, r = np.divmod(np.maximum(idx - s.k1, 0), s.k2)
    out = lp[r] + a * s.k_inc
    head = idx < s.k1
    out[head] = pre[idx[head]]
    return out


def state_indices(s: LassoSummary, n: int, states: tuple[str, ...]) -> np.ndarray:
    """Index (into `states`) of state_at for positions 0..n-1."""
    where = {q: k for k, q in enumerate(states)}
    if not s.infinite:
        return np.array([where[c.state] for c in s.max_run[:n]], dtype=np.int64)
    pre = np.array([where[c.state] for c in s.prefix] or [0], dtype=np.int64)
    lp = np.array([where[c.state] for c in s.loop], dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    out = lp[np.maximum(idx - s.k1, 0) % s.k2]
    head = idx < s.k1
    out[head] = pre[idx[head]]
    return out


def accepting_status(a: Oca, s: LassoSummary) -> AcceptingStatus:
    acc = a.accepting
    if s.infinite:
        inf = any(c.state in acc for c in s.loop)
        fin = inf or any(c.state in acc for c in s.prefix)
        return AcceptingStatus(inf, fin)
    return AcceptingStatus(False, any(c.state in acc for c in s.max_run))


def summary_json(s: LassoSummary) -> dict:
    d = constants(s) if s.infinite else None
    return {
        "k1": s.k1, "k2": s.k2, "k_inc": s.k_inc,
        "prefix": [[c.state, c.counter] for c in s.prefix],
        "loop": [[c.state, c.counter] for c in s.loop],
        "kind": s.kind.value,
        "beta1": d.beta1 if d else None, "beta2": d.beta2 if d else None,
        "gamma": d.gamma if d else None, "l": d.l if d else None,
    }
