"""Formula and automaton transformations: purification (state atoms become
counter patterns) and weak determinization."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Union

from .formulas import fo, ltl
from .oca import DEC, IFZERO, INC, Oca, Transition

FRESH = "__g"


@dataclass(frozen=True)
class PurifiedInstance:
    automaton: Oca
    formula: Union[ltl.Ltl, fo.Fo]
    gadget_len: int


def gadget_len(m: int) -> int:
    return 9 + 2 * (m + 1)


def _reject_fresh(a: Oca) -> None:
    for q in a.states:
        if FRESH in q:
            raise ValueError(f"state name {q!r} uses the reserved marker {FRESH!r}")


# ---------------------------------------------------------------- the pattern

def pattern(base: str, i: int, m: int) -> list[tuple[str, object]]:
    """States of the pattern replacing the i-th state (1-based) in order,
    each with the instruction leading to the next one."""
    g = f"{base}{FRESH}"
    seq: list[tuple[str, object]] = [(base, INC), (f"{g}1", INC), (f"{g}2", INC),
                                     (f"{g}3", DEC), (f"{g}4", DEC), (f"{g}5", DEC)]
    for k in range(1, m + 2):
        if k == i:
            seq += [(f"{g}d0", INC), (f"{g}d1", INC), (f"{g}d", DEC), (f"{g}d2", DEC)]
        else:
            seq += [(f"{g}p{k}", INC), (f"{g}q{k}", DEC)]
    seq.append((f"{g}F", None))
    return seq


def purify_automaton(a: Oca) -> Oca:
    _reject_fresh(a)
    m = len(a.states)
    states, trans, exit_of = [], [], {}
    for i, q in enumerate(a.states, 1):
        seq = pattern(q, i, m)
        assert len(seq) == gadget_len(m)
        states += [name for name, _ in seq]
        trans += [Transition(x, ins, y) for (x, ins), (y, _) in zip(seq, seq[1:])]
        exit_of[q] = seq[-1][0]
    trans += [Transition(exit_of[t.source], t.instr, t.target) for t in a.transitions]
    return Oca(tuple(states), a.initial, frozenset(exit_of[q] for q in a.accepting), tuple(trans))


# ---------------------------------------------------------------- LTL side

def _freeze_pairs(span: int) -> ltl.Ltl:
    """down_1 of: two distinct positions among the next `span` repeat the value."""
    up = ltl.Reg(1)
    return ltl.Freeze(1, ltl.disj(*(ltl.And((ltl.X(up, i), ltl.X(up, j)))
                                    for i, j in combinations(range(1, span + 1), 2))))


def sta_formula() -> ltl.Ltl:
    """No three equal values among the next 7 positions, and the current
    value comes back 6 positions later."""
    no_three = ltl.Not(ltl.disj(*(ltl.X(_freeze_pairs(6 - a), a) for a in range(5))))
    zero_six = ltl.Freeze(1, ltl.X(ltl.Reg(1), 6))
    return ltl.And((no_three, zero_six))


def phi_i(i: int) -> ltl.Ltl:
    return ltl.X(ltl.Freeze(1, ltl.X(ltl.Not(ltl.Reg(1)), 2)), 6 + 2 * (i - 1))


def state_formula(i: int) -> ltl.Ltl:
    """phi_i also holds at the state before q_i, hence the exclusion."""
    if i == 1:
        return phi_i(1)
    return ltl.And((phi_i(i), ltl.Not(phi_i(i - 1))))


def _index(a: Oca) -> dict[str, int]:
    return {q: i for i, q in enumerate(a.states, 1)}


def purify_ltl(a: Oca, phi: ltl.Ltl) -> PurifiedInstance:
    idx = _index(a)
    for q in ltl.state_atoms(phi):
        if q not in idx:
            raise ValueError(f"unknown state atom {q!r}")
    m = len(a.states)
    P = gadget_len(m)
    sta = sta_formula()
    memo: dict[int, ltl.Ltl] = {}

    def T(f):
        if id(f) in memo:
            return memo[id(f)]
        if isinstance(f, ltl.State):
            out = state_formula(idx[f.name])
        elif isinstance(f, (ltl.Top, ltl.Reg)):
            out = f
        elif isinstance(f, ltl.Not):
            out = ltl.Not(T(f.arg))
        elif isinstance(f, ltl.And):
            out = ltl.And(tuple(T(c) for c in f.args))
        elif isinstance(f, ltl.Freeze):
            out = ltl.Freeze(f.r, T(f.arg))
        elif isinstance(f, ltl.Next):
            out = ltl.X(T(f.arg), P)
        elif isinstance(f, ltl.Until):
            out = ltl.Until(ltl.implies(sta, T(f.left)), ltl.And((sta, T(f.right))))
        else:
            raise TypeError(f"not an LTL formula: {f!r}")
        memo[id(f)] = out
        return out

    return PurifiedInstance(purify_automaton(a), T(phi), P)


# ---------------------------------------------------------------- FO side

def _at(v: str, x: str, k: int, body: fo.Fo) -> fo.Fo:
    return fo.Exists(v, fo.conj(fo.Succ(v, x, k), body))


def fo_sta(x: str, w: str, z: str) -> fo.Fo:
    """STA anchored at x using the two auxiliary variables w and z."""
    triples = []
    for a, b, c in combinations(range(7), 3):
        # x+a ~ x+b and x+b ~ x+c; w is reused for the third position
        first = x if a == 0 else w
        inner = _at(z, x, b, fo.conj(fo.Sim(first, z), _at(w, x, c, fo.Sim(z, w))))
        triples.append(inner if a == 0 else _at(w, x, a, inner))
    no_three = fo.Not(fo.disj(*triples))
    zero_six = _at(z, x, 6, fo.Sim(z, x))
    return fo.conj(no_three, zero_six)


def fo_phi(i: int, x: str, w: str, z: str) -> fo.Fo:
    return fo.Exists(w, fo.conj(fo.Succ(w, x, 6 + 2 * (i - 1)),
                                fo.Exists(z, fo.conj(fo.Succ(z, w, 2), fo.Not(fo.Sim(z, w))))))


def fo_state(i: int, x: str, w: str, z: str) -> fo.Fo:
    if i == 1:
        return fo_phi(1, x, w, z)
    return fo.conj(fo_phi(i, x, w, z), fo.Not(fo_phi(i - 1, x, w, z)))


def purify_fo(a: Oca, phi: fo.Fo) -> PurifiedInstance:
    idx = _index(a)
    for q in fo.letters(phi):
        if q not in idx:
            raise ValueError(f"unknown letter atom {q!r}")
    m = len(a.states)
    P = gadget_len(m)
    taken = set(fo.variables(phi))
    w = fo.fresh_var("w", taken)
    z = fo.fresh_var("z", taken | {w})

    def atom(g):
        if isinstance(g, fo.Letter):
            return fo_state(idx[g.letter], g.var, w, z)
        if isinstance(g, fo.Succ):
            return fo.Succ(g.x, g.y, g.c * P)
        if isinstance(g, fo.DistLt):
            return fo.DistLt(g.x, g.y, g.c * P)
        if isinstance(g, fo.PosLt):
            return fo.PosLt(g.x, g.c * P)
        return g

    out = fo.transform(phi, atom_fn=atom,
                       exists_fn=lambda x, body: fo.Exists(x, fo.conj(fo_sta(x, w, z), body)))
    return PurifiedInstance(purify_automaton(a), out, P)


# ---------------------------------------------------------------- weak determinization

def _chain(trans, states, start, steps, end, name, last=DEC):
    """`steps` transitions from start to end: decs, the final one `last`."""
    cur = start
    for k in range(1, steps):
        nxt = f"{name}_{k}"
        states.append(nxt)
        trans.append(Transition(cur, DEC, nxt))
        cur = nxt
    trans.append(Transition(cur, last, end))


def weak_determinize_automaton(a: Oca) -> Oca:
    _reject_fresh(a)
    states = list(a.states)
    trans: list[Transition] = []
    for q in a.states:
        by_instr: dict = {}
        for t in a.outgoing(q):
            by_instr.setdefault(t.instr, []).append(t.target)
        for instr, targets in by_instr.items():
            g = f"{q}{FRESH}"
            k = len(targets)
            if k == 1:
                trans.append(Transition(q, instr, targets[0]))
                continue
            if instr is INC:
                c = [f"{g}i{j}" for j in range(1, k + 1)]
                states += c + [f"{g}ia"]
                trans.append(Transition(q, INC, c[0]))
                trans += [Transition(c[j], INC, c[j + 1]) for j in range(k - 1)]
                trans += [Transition(c[0], DEC, f"{g}ia"), Transition(f"{g}ia", INC, targets[0])]
                for j in range(2, k + 1):      # c_j sits j above, leave with j-1 decs
                    _chain(trans, states, c[j - 1], j - 1, targets[j - 1], f"{g}i{j}")
            elif instr is DEC:
                c = [f"{g}d{j}" for j in range(1, k + 1)]
                states += [f"{g}d0"] + c
                trans += [Transition(q, DEC, f"{g}d0"), Transition(f"{g}d0", INC, c[0])]
                trans += [Transition(c[j], INC, c[j + 1]) for j in range(k - 1)]
                for j in range(1, k + 1):      # c_j sits j-1 above the source, leave with j decs
                    _chain(trans, states, c[j - 1], j, targets[j - 1], f"{g}d{j}")
            else:
                c = [f"{g}z{j}" for j in range(1, k + 1)]
                states += c
                trans += [Transition(q, IFZERO, c[0]), Transition(c[0], IFZERO, targets[0])]
                trans += [Transition(c[j], INC, c[j + 1]) for j in range(k - 1)]
                for j in range(2, k + 1):      # c_j sits at j-1, go down then test zero
                    _chain(trans, states, c[j - 1], j, targets[j - 1], f"{g}z{j}", last=IFZERO)
    return Oca(tuple(states), a.initial, a.accepting, tuple(trans))


def weak_determinize(a: Oca, phi: ltl.Ltl) -> tuple[Oca, ltl.Ltl]:
    out = weak_determinize_automaton(a)
    orig = ltl.disj(*(ltl.State(q) for q in a.states))
    memo: dict[int, ltl.Ltl] = {}

    def T(f):
        if id(f) in memo:
            return memo[id(f)]
        if isinstance(f, (ltl.Top, ltl.State, ltl.Reg)):
            res = f
        elif isinstance(f, ltl.Not):
            res = ltl.Not(T(f.arg))
        elif isinstance(f, ltl.And):
            res = ltl.And(tuple(T(c) for c in f.args))
        elif isinstance(f, ltl.Freeze):
            res = ltl.Freeze(f.r, T(f.arg))
        elif isinstance(f, ltl.Next):
            res = ltl.Next(ltl.Until(ltl.neg(orig), ltl.And((orig, T(f.arg)))))
        elif isinstance(f, ltl.Until):
            res = ltl.Until(ltl.implies(orig, T(f.left)), ltl.And((orig, T(f.right))))
        else:
            raise TypeError(f"not an LTL formula: {f!r}")
        memo[id(f)] = res
        return res

    return out, T(phi)
