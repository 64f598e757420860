"""Equality tables over the run window, the word s.t^w and the data-free
translation of x ~ y."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from ..formulas import fo
from ..lasso import DerivedConstants, LassoSummary, counter_at
from .evaluate import UpWord

POS, ZERO, FINITE = "pos", "zero", "finite"


@dataclass(frozen=True)
class SimTables:
    """mode pos (K_inc > 0) fills p1/p2, zero (K_inc = 0) fills p3, finite
    fills p4.  `window` is the number of position letters and `states` the
    state carried by each of them."""
    mode: str
    k1: int
    window: int
    period: int
    pf: frozenset
    states: tuple
    p1: frozenset = frozenset()
    p2: frozenset = frozenset()
    p3: frozenset = frozenset()
    p4: frozenset = frozenset()


def _equal_pairs(values, ordered: bool) -> set:
    groups: dict[int, list[int]] = defaultdict(list)
    for i, v in enumerate(values):
        groups[v].append(i)
    out = set()
    for idx in groups.values():
        for a in idx:
            for b in idx:
                if not ordered or a <= b:
                    out.add((a, b))
    return out


def build_tables(s: LassoSummary, d: Optional[DerivedConstants] = None, purpose: str = "infinitary",
                 accepting=frozenset()) -> SimTables:
    """purpose is informational: both verdict modes use the same tables, pf
    only matters for the finitary one."""
    if purpose not in ("finitary", "infinitary"):
        raise ValueError(f"unknown purpose {purpose!r}")
    accepting = frozenset(accepting)
    if not s.infinite:
        run = s.max_run
        states = tuple(c.state for c in run)
        return SimTables(FINITE, k1=len(run), window=len(run), period=0,
                         pf=frozenset(i for i, q in enumerate(states) if q in accepting),
                         states=states,
                         p4=frozenset(_equal_pairs([c.counter for c in run], ordered=False)))
    if s.k_inc == 0:
        win = s.window()
        states = tuple(c.state for c in win)
        return SimTables(ZERO, k1=s.k1, window=len(win), period=s.k2,
                         pf=frozenset(i for i, q in enumerate(states) if q in accepting),
                         states=states,
                         p3=frozenset(_equal_pairs([c.counter for c in win], ordered=False)))
    if d is None or d.l is None:
        raise ValueError("K_inc > 0 needs the derived constant L")
    period = d.l * s.k2
    w = s.k1 + period
    vals = [counter_at(s, i) for i in range(w)]
    states = tuple(s.prefix[i].state if i < s.k1 else s.loop[(i - s.k1) % s.k2].state
                   for i in range(w))
    shift = d.l * s.k_inc
    where: dict[int, list[int]] = defaultdict(list)
    for i, v in enumerate(vals):
        where[v].append(i)
    p2 = {(i, j) for j, v in enumerate(vals) for i in where.get(v + shift, ()) if j < i}
    return SimTables(POS, k1=s.k1, window=w, period=period,
                     pf=frozenset(i for i, q in enumerate(states) if q in accepting),
                     states=states,
                     p1=frozenset(_equal_pairs(vals, ordered=True)), p2=frozenset(p2))


def build_word(s: LassoSummary, d: Optional[DerivedConstants] = None,
               purpose: str = "infinitary") -> UpWord:
    if not s.infinite:
        return UpWord(tuple(range(len(s.max_run))), (fo.BOT,))
    if s.k_inc == 0:
        return UpWord(tuple(range(s.k1)), tuple(range(s.k1, s.k1 + s.k2)))
    if d is None or d.l is None:
        raise ValueError("K_inc > 0 needs the derived constant L")
    return UpWord(tuple(range(s.k1)), tuple(range(s.k1, s.k1 + d.l * s.k2)))


def _pairs(rel, x: str, y: str) -> fo.Fo:
    """(letter(x), letter(y)) in rel, as a union of rectangles: rows with the
    same partner set share one disjunct, so same-data relations stay small."""
    rows: dict[int, set] = defaultdict(set)
    for i, j in rel:
        rows[i].add(j)
    groups: dict[frozenset, list] = defaultdict(list)
    for i in sorted(rows):
        groups[frozenset(rows[i])].append(i)
    return fo.disj(*(fo.conj(fo.disj(*(fo.Letter(i, x) for i in left)),
                             fo.disj(*(fo.Letter(j, y) for j in sorted(right))))
                     for right, left in groups.items()))


def translate_sim(phi: fo.Fo, tables: SimTables, *, direct_letters: bool = False) -> fo.Fo:
    """Replace every x ~ y by a letter-level formula over the position word.

    With direct_letters, a state letter q(x) becomes the disjunction of the
    position letters carrying q; otherwise letters in phi are rejected.
    """
    if not direct_letters and not fo.is_pure(phi):
        raise ValueError("translate_sim expects a pure formula")
    by_state: dict[str, list[int]] = defaultdict(list)
    for i, q in enumerate(tables.states):
        by_state[q].append(i)
    cache: dict = {}

    def sim(x, y):
        if (x, y) in cache:
            return cache[(x, y)]
        if tables.mode == POS:
            def t1(a, b):
                # before K1 the partner must lie in the first window copy;
                # from K1 on it must be closer than L.K2
                near = fo.PosLt(a, tables.k1)
                return fo.conj(
                    fo.implies(near, fo.conj(fo.PosLt(b, tables.window), _pairs(tables.p1, a, b))),
                    fo.implies(fo.neg(near), fo.conj(fo.DistLt(a, b, tables.period),
                                                     _pairs(tables.p1 | tables.p2, a, b))))
            out = fo.disj(fo.conj(fo.le(x, y), t1(x, y)), fo.conj(fo.le(y, x), t1(y, x)))
        else:
            out = _pairs(tables.p3 if tables.mode == ZERO else tables.p4, x, y)
        cache[(x, y)] = out
        return out

    def atom(g):
        if isinstance(g, fo.Sim):
            return sim(g.x, g.y)
        if isinstance(g, fo.Letter):
            return fo.disj(*(fo.Letter(i, g.var) for i in by_state.get(g.letter, ())))
        return g

    return fo.transform(phi, atom_fn=atom)


def relativize_finitary(phi: fo.Fo, tables: SimTables, x_end: Optional[str] = None) -> fo.Fo:
    """There is an accepting position x_end such that phi holds with every
    quantifier bounded by x_end."""
    if x_end is None:
        x_end = fo.fresh_var("x_end", fo.variables(phi))
    elif x_end in fo.free_vars(phi):
        raise ValueError(f"{x_end} is free in the formula")
    body = fo.transform(phi, exists_fn=lambda x, b: fo.Exists(x, fo.conj(fo.le(x, x_end), b)))
    accept = fo.disj(*(fo.Letter(i, x_end) for i in sorted(tables.pf)))
    parts = [accept]
    if tables.mode == FINITE:
        parts.append(fo.Not(fo.Letter(fo.BOT, x_end)))
    return fo.Exists(x_end, fo.conj(*parts, body))
