"""Seeded random instances for the property and oracle suites."""

from __future__ import annotations

import random
from itertools import product

from .formulas import fo, ltl
from .oca import Oca, Transition, DEC, IFZERO, INC
from .semantics import DataWord

_SHAPES = ((), (INC,), (DEC, IFZERO), (DEC,), (IFZERO,))
_SHAPE_WEIGHTS = (1, 5, 5, 1, 1)


def random_det_oca(rng: random.Random, max_states: int = 5, min_states: int = 1,
                   accept_p: float = 0.4) -> Oca:
    n = rng.randint(min_states, max_states)
    states = [f"q{i}" for i in range(n)]
    trans = []
    for q in states:
        shape = rng.choices(_SHAPES, _SHAPE_WEIGHTS)[0]
        trans += [Transition(q, ins, rng.choice(states)) for ins in shape]
    accepting = [q for q in states if rng.random() < accept_p]
    return Oca(tuple(states), states[0], frozenset(accepting), tuple(trans))


def random_oca(rng: random.Random, max_states: int = 4, max_out: int = 3) -> Oca:
    """Unrestricted (usually nondeterministic) automaton."""
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    trans = set()
    for q in states:
        for _ in range(rng.randint(0, max_out)):
            trans.add(Transition(q, rng.choice((INC, DEC, IFZERO)), rng.choice(states)))
    accepting = [q for q in states if rng.random() < 0.5]
    return Oca(tuple(states), states[0], frozenset(accepting),
               tuple(sorted(trans, key=lambda t: (t.source, t.instr.value, t.target))))


# ---------------------------------------------------------------- FO

def _fo_atom(rng, scope, max_const, letters):
    x = rng.choice(scope)
    others = [v for v in scope if v != x]
    y = rng.choice(others) if others and rng.random() < 0.85 else x
    kinds = ["sim", "lt", "succ", "dist", "pos"] + (["letter"] * 2 if letters else [])
    k = rng.choice(kinds)
    if k == "sim":
        return fo.Sim(x, y)
    if k == "lt":
        return fo.Lt(x, y)
    if k == "succ":
        return fo.Succ(x, y, rng.randint(1, max(1, max_const)))
    if k == "dist":
        return fo.DistLt(x, y, rng.randint(0, max_const))
    if k == "pos":
        return fo.PosLt(x, rng.randint(0, max_const))
    return fo.Letter(rng.choice(letters), x)


def random_fo(rng: random.Random, depth: int = 2, n_vars: int = 3, max_const: int = 3,
              letters=(), size: int = 5) -> fo.Fo:
    """A sentence of quantifier depth at most `depth` over variables
    x0..x{n_vars-1}; letters, if given, adds letter atoms."""
    names = [f"x{i}" for i in range(n_vars)]
    letters = tuple(letters)

    def gen(scope, d, budget):
        if scope and (d == 0 or budget <= 0 or rng.random() < 0.3):
            return _fo_atom(rng, scope, max_const, letters)
        if not scope or (d > 0 and rng.random() < 0.55):
            if d == 0:
                return fo.TRUE
            v = rng.choice(names)
            body = gen(sorted(set(scope) | {v}), d - 1, budget - 1)
            return fo.Exists(v, body) if rng.random() < 0.5 else fo.forall(v, body)
        r = rng.random()
        if r < 0.2:
            return fo.neg(gen(scope, d, budget - 1))
        parts = [gen(scope, d, budget - 1) for _ in range(2)]
        return fo.conj(*parts) if r < 0.6 else fo.disj(*parts)

    return gen([], depth, size)


# ---------------------------------------------------------------- LTL

def random_ltl(rng: random.Random, depth: int = 3, registers: int = 2, states=()) -> ltl.Ltl:
    """A sentence of temporal/freeze nesting at most `depth`."""
    states = tuple(states)

    def gen(bound, d):
        atoms = [ltl.TRUE] + [ltl.Reg(r) for r in bound] + [ltl.State(q) for q in states]
        if d == 0 or rng.random() < 0.2:
            return rng.choice(atoms)
        r = rng.random()
        if r < 0.25 and registers:
            reg = rng.randint(1, registers)
            return ltl.Freeze(reg, gen(bound | {reg}, d - 1))
        if r < 0.4:
            return ltl.neg(gen(bound, d - 1))
        if r < 0.55:
            return ltl.conj(gen(bound, d - 1), gen(bound, d - 1))
        if r < 0.65:
            return ltl.disj(gen(bound, d - 1), gen(bound, d - 1))
        if r < 0.8:
            return ltl.Next(gen(bound, d - 1))
        return ltl.Until(gen(bound, d - 1), gen(bound, d - 1))

    return gen(frozenset(), depth)


def random_data_word(rng: random.Random, max_len: int = 8, classes: int = 4, letters=("a", "b")) -> DataWord:
    n = rng.randint(1, max_len)
    return DataWord(tuple(rng.choice(letters) for _ in range(n)),
                    tuple(rng.randrange(classes) for _ in range(n)))


# ---------------------------------------------------------------- QBF corpus

def qbf_corpus(rng: random.Random, count_per_n: int = 30, max_clauses: int = 3):
    """Random 3-literal CNF matrices for 2N = 2 and 4 plus a few fixed ones."""
    from .reductions import QbfInstance, cnf_matrix
    out = []
    for n in (1, 2):
        nv = 2 * n
        for _ in range(count_per_n):
            clauses = []
            for _ in range(rng.randint(1, max_clauses)):
                width = rng.randint(1, min(3, nv))
                vs = rng.sample(range(1, nv + 1), width)
                clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
            out.append(QbfInstance(n, cnf_matrix(clauses)))
    return out


def all_assignments(n: int):
    return product((False, True), repeat=n)
