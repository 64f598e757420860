"""Reference semantics.

These evaluators follow the satisfaction clauses directly and share no code
with the decision procedure in :mod:`artifact.checker`; the test-suite uses
them as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

import numpy as np

from .formulas import fo, ltl
from .lasso import LassoSummary, counters, state_indices
from .oca import Config, Oca, moves


@dataclass(frozen=True)
class DataWord:
    letters: tuple
    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "classes", tuple(self.classes))
        if len(self.letters) != len(self.classes) or not self.letters:
            raise ValueError("letters and classes must be nonempty and of equal length")

    def __len__(self):
        return len(self.letters)

    @classmethod
    def from_run(cls, run: Sequence[Config]) -> "DataWord":
        return cls(tuple(c.state for c in run), tuple(c.counter for c in run))

    def to_json(self) -> dict:
        return {"letters": list(self.letters), "classes": list(self.classes)}


# ---------------------------------------------------------------- LTL

def eval_ltl_finite(word: DataWord, i: int, v: Mapping[int, int], phi: ltl.Ltl) -> bool:
    n = len(word)
    if not 0 <= i < n:
        raise ValueError("position outside the word")
    letters, classes = word.letters, word.classes
    free: dict[int, tuple] = {}
    cache: dict = {}

    def regs_of(g):
        key = id(g)
        if key not in free:
            free[key] = tuple(sorted(ltl.free_registers(g)))
        return free[key]

    def ev(g, i, v):
        if isinstance(g, ltl.Top):
            return True
        if isinstance(g, ltl.State):
            return letters[i] == g.name
        if isinstance(g, ltl.Reg):
            return g.r in v and classes[v[g.r]] == classes[i]
        if isinstance(g, ltl.Not):
            return not ev(g.arg, i, v)
        if isinstance(g, ltl.And):
            return all(ev(a, i, v) for a in g.args)
        key = (id(g), i, tuple(v.get(r) for r in regs_of(g)))
        if key in cache:
            return cache[key]
        if isinstance(g, ltl.Next):
            out = i + 1 < n and ev(g.arg, i + 1, v)
        elif isinstance(g, ltl.Freeze):
            out = ev(g.arg, i, {**v, g.r: i})
        elif isinstance(g, ltl.Until):
            out = False
            for j in range(i, n):
                if ev(g.right, j, v):
                    out = True
                    break
                if not ev(g.left, j, v):
                    break
        else:
            raise TypeError(f"not an LTL formula: {g!r}")
        cache[key] = out
        return out

    return ev(phi, i, dict(v))


class Tri(Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"


def eval_ltl_run_bounded(w: "RunWord", phi: ltl.Ltl, horizon: int) -> Tri:
    """Kleene three-valued evaluation at position 0 where Until only looks for
    witnesses (and refutations) strictly below the horizon."""
    cache: dict = {}
    free: dict[int, tuple] = {}

    def state(i):
        return w.state_at(i)

    def counter(i):
        return w.counter_at(i)

    def k_and(a, b):
        if a is False or b is False:
            return False
        if a is True and b is True:
            return True
        return None

    def k_not(a):
        return None if a is None else not a

    def k_or(a, b):
        return k_not(k_and(k_not(a), k_not(b)))

    def ev(g, i, v):
        if isinstance(g, ltl.Top):
            return True
        if isinstance(g, ltl.State):
            return state(i) == g.name
        if isinstance(g, ltl.Reg):
            return g.r in v and counter(v[g.r]) == counter(i)
        if isinstance(g, ltl.Not):
            return k_not(ev(g.arg, i, v))
        if isinstance(g, ltl.And):
            out = True
            for a in g.args:
                out = k_and(out, ev(a, i, v))
                if out is False:
                    break
            return out
        if id(g) not in free:
            free[id(g)] = tuple(sorted(ltl.free_registers(g)))
        key = (id(g), i, tuple(v.get(r) for r in free[id(g)]))
        if key in cache:
            return cache[key]
        if isinstance(g, ltl.Next):
            out = ev(g.arg, i + 1, v)
        elif isinstance(g, ltl.Freeze):
            out = ev(g.arg, i, {**v, g.r: i})
        elif isinstance(g, ltl.Until):
            out, pre = False, True
            for j in range(i, horizon):
                out = k_or(out, k_and(pre, ev(g.right, j, v)))
                if out is True:
                    break
                pre = k_and(pre, ev(g.left, j, v))
                if pre is False:
                    break
            else:
                # witnesses at or beyond the horizon are not inspected
                out = k_or(out, k_and(pre, None))
        else:
            raise TypeError(f"not an LTL formula: {g!r}")
        cache[key] = out
        return out

    res = ev(phi, 0, {})
    return Tri.UNKNOWN if res is None else (Tri.TRUE if res else Tri.FALSE)


# ---------------------------------------------------------------- FO on finite words

def eval_fo_finite(word: DataWord, u: Mapping[str, int], phi: fo.Fo) -> bool:
    n = len(word)
    letters, classes = word.letters, word.classes
    fv: dict = {}
    order: dict[int, tuple] = {}
    cache: dict = {}

    def ev(g, u):
        if isinstance(g, fo.Top):
            return True
        if isinstance(g, fo.Not):
            return not ev(g.arg, u)
        if isinstance(g, fo.And):
            return all(ev(a, u) for a in g.args)
        if isinstance(g, fo.Exists):
            if id(g) not in order:
                order[id(g)] = tuple(sorted(fo.free_vars(g, fv)))
            key = (id(g), tuple(u.get(x) for x in order[id(g)]))
            if key not in cache:
                cache[key] = any(ev(g.body, {**u, g.var: p}) for p in range(n))
            return cache[key]
        vals = [u.get(x) for x in fo.atom_vars(g)]
        if any(p is None for p in vals):
            return False
        if isinstance(g, fo.Letter):
            return letters[vals[0]] == g.letter
        if isinstance(g, fo.Sim):
            return classes[vals[0]] == classes[vals[1]]
        if isinstance(g, fo.Lt):
            return vals[0] < vals[1]
        if isinstance(g, fo.Succ):
            return vals[0] == vals[1] + g.c
        if isinstance(g, fo.DistLt):
            return vals[1] < vals[0] + g.c
        if isinstance(g, fo.PosLt):
            return vals[0] < g.c
        raise TypeError(f"not an FO formula: {g!r}")

    return ev(phi, dict(u))


# ---------------------------------------------------------------- FO on runs

@dataclass(frozen=True)
class RunWord:
    """The data word of a deterministic run: letter = state, data = counter."""
    source: LassoSummary

    def __post_init__(self):
        if not self.source.infinite:
            raise ValueError("RunWord needs an infinite run")

    def state_at(self, i: int) -> str:
        s = self.source
        if i < s.k1:
            return s.prefix[i].state
        return s.loop[(i - s.k1) % s.k2].state

    def counter_at(self, i: int) -> int:
        s = self.source
        if i < s.k1:
            return s.prefix[i].counter
        a, r = divmod(i - s.k1, s.k2)
        return s.loop[r].counter + a * s.k_inc

    def states(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(c.state for c in self.source.prefix + self.source.loop))


class _Dense:
    """Brute-force FO evaluation by numpy broadcasting: every subformula is a
    boolean tensor with one axis per variable (size n when the variable
    matters, 1 otherwise) and, in the finitary variant, a trailing axis for
    the end position of the prefix."""

    def __init__(self, phi, n, state_idx, codes, counts, with_end):
        self.n = n
        self.state_idx = state_idx
        self.codes = codes
        self.counts = counts
        self.with_end = with_end
        names = sorted(fo.variables(phi))
        self.axis = {x: k for k, x in enumerate(names)}
        self.ndim = len(names) + (1 if with_end else 0)

    def positions(self, ax):
        shape = [1] * self.ndim
        shape[ax] = self.n
        return np.arange(self.n, dtype=np.int64).reshape(shape)

    def scalar(self, value):
        return np.full([1] * self.ndim, value, dtype=np.int64)

    def false(self):
        return np.zeros([1] * self.ndim, dtype=bool)

    def ev(self, g, env):
        if isinstance(g, fo.Top):
            return ~self.false()
        if isinstance(g, fo.Not):
            return ~self.ev(g.arg, env)
        if isinstance(g, fo.And):
            out = self.ev(g.args[0], env)
            for a in g.args[1:]:
                out = out & self.ev(a, env)
            return out
        if isinstance(g, fo.Exists):
            ax = self.axis[g.var]
            body = self.ev(g.body, {**env, g.var: self.positions(ax)})
            if body.shape[ax] == 1:
                return body
            if not self.with_end:
                return body.any(axis=ax, keepdims=True)
            if body.shape[-1] == 1:
                # quantify over [0, end]: running disjunction, then the
                # quantified axis becomes the end axis
                return np.swapaxes(np.logical_or.accumulate(body, axis=ax), ax, -1)
            end = self.positions(self.ndim - 1)
            return (body & (self.positions(ax) <= end)).any(axis=ax, keepdims=True)
        vals = [env.get(x) for x in fo.atom_vars(g)]
        if any(p is None for p in vals):
            return self.false()
        if isinstance(g, fo.Letter):
            code = self.codes.get(g.letter)
            if code is None:
                return self.false()
            return self.state_idx[vals[0]] == code
        if isinstance(g, fo.Sim):
            return self.counts[vals[0]] == self.counts[vals[1]]
        if isinstance(g, fo.Lt):
            return vals[0] < vals[1]
        if isinstance(g, fo.Succ):
            return vals[0] == vals[1] + g.c
        if isinstance(g, fo.DistLt):
            return vals[1] < vals[0] + g.c
        if isinstance(g, fo.PosLt):
            return vals[0] < g.c
        raise TypeError(f"not an FO formula: {g!r}")


def _run_arrays(s: LassoSummary, n: int):
    names = tuple(dict.fromkeys(c.state for c in s.window()))
    return names, state_indices(s, n, names), counters(s, n)


def eval_fo_run_bounded(w: RunWord, phi: fo.Fo, bound: int,
                        valuation: Optional[Mapping[str, int]] = None) -> bool:
    """phi over the infinite run, every quantifier ranging over [0, bound)."""
    if bound < 1:
        raise ValueError("bound must be positive")
    valuation = dict(valuation or {})
    top = max([bound] + [p + 1 for p in valuation.values()])
    names, sidx, cnt = _run_arrays(w.source, top)
    d = _Dense(phi, bound, sidx, {q: k for k, q in enumerate(names)}, cnt, with_end=False)
    env = {x: d.scalar(p) for x, p in valuation.items()}
    return bool(d.ev(phi, env).any())


def eval_fo_finitary_bounded(s: LassoSummary, accepting, phi: fo.Fo, bound: int) -> bool:
    """Is there an accepting position e < bound of the run such that phi
    holds on the finite data word of positions 0..e?"""
    n = bound if s.infinite else min(bound, len(s.max_run))
    names, sidx, cnt = _run_arrays(s, n)
    codes = {q: k for k, q in enumerate(names)}
    d = _Dense(phi, n, sidx, codes, cnt, with_end=True)
    res = d.ev(phi, {}).reshape(-1)
    acc = np.isin(sidx, [codes[q] for q in accepting if q in codes])
    return bool((res & acc).any()) if res.size == n else bool(res[0] and acc.any())


# ---------------------------------------------------------------- witness search

def bounded_witness_search(a: Oca, phi: ltl.Ltl, max_len: int,
                           limit: int = 2_000_000) -> Optional[list[Config]]:
    """Least accepting finite run (by length, then transition-declaration
    order) with at most max_len configurations that satisfies phi at 0."""
    frontier = [(a.initial_config(),)]
    explored = 0
    for _length in range(1, max_len + 1):
        for run in frontier:
            if run[-1].state in a.accepting:
                if eval_ltl_finite(DataWord.from_run(run), 0, {}, phi):
                    return list(run)
        if _length == max_len:
            break
        nxt = []
        for run in frontier:
            for c in moves(a, run[-1]):
                nxt.append(run + (c,))
        explored += len(nxt)
        if explored > limit:
            raise RuntimeError(f"witness search exceeded {limit} runs")
        frontier = nxt
        if not frontier:
            break
    return None


def validate_witness(a: Oca, phi: ltl.Ltl, run: Sequence[Config]) -> bool:
    if not run or run[0] != a.initial_config():
        return False
    for c, d in zip(run, run[1:]):
        if d not in set(moves(a, c)):
            return False
    return run[-1].state in a.accepting and eval_ltl_finite(DataWord.from_run(run), 0, {}, phi)
