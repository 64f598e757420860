"""Freeze LTL: abstract syntax, sugar and static analysis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


class Ltl:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Ltl):
    pass


@dataclass(frozen=True)
class State(Ltl):
    name: str


@dataclass(frozen=True)
class Reg(Ltl):
    """The test up_r: same data value as the one stored in register r."""
    r: int

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise ValueError("registers range over positive integers")


@dataclass(frozen=True)
class Not(Ltl):
    arg: Ltl


@dataclass(frozen=True)
class And(Ltl):
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two arguments")


@dataclass(frozen=True)
class Next(Ltl):
    arg: Ltl


@dataclass(frozen=True)
class Until(Ltl):
    left: Ltl
    right: Ltl


@dataclass(frozen=True)
class Freeze(Ltl):
    """down_r: store the current position in register r."""
    r: int
    arg: Ltl

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise ValueError("registers range over positive integers")


LtlFormula = Union[Top, State, Reg, Not, And, Next, Until, Freeze]

TRUE = Top()
FALSE = Not(TRUE)


# -- sugar ---------------------------------------------------------------

def conj(*fs: Ltl) -> Ltl:
    fs = tuple(f for f in fs if f != TRUE)
    if not fs:
        return TRUE
    return fs[0] if len(fs) == 1 else And(fs)


def disj(*fs: Ltl) -> Ltl:
    if not fs:
        return FALSE
    if len(fs) == 1:
        return fs[0]
    return Not(And(tuple(neg(f) for f in fs)))


def neg(f: Ltl) -> Ltl:
    return f.arg if isinstance(f, Not) else Not(f)


def implies(a: Ltl, b: Ltl) -> Ltl:
    return Not(And((a, neg(b))))


def iff(a: Ltl, b: Ltl) -> Ltl:
    return conj(implies(a, b), implies(b, a))


def F(f: Ltl) -> Ltl:
    return Until(TRUE, f)


def G(f: Ltl) -> Ltl:
    return Not(F(neg(f)))


def Fp(f: Ltl) -> Ltl:
    return Next(F(f))


def Gp(f: Ltl) -> Ltl:
    return Next(G(f))


def X(f: Ltl, k: int = 1) -> Ltl:
    for _ in range(k):
        f = Next(f)
    return f


# -- analysis ------------------------------------------------------------

def children(f: Ltl) -> tuple:
    if isinstance(f, (Not, Next, Freeze)):
        return (f.arg,)
    if isinstance(f, And):
        return f.args
    if isinstance(f, Until):
        return (f.left, f.right)
    return ()


def subformulas(f: Ltl):
    stack, seen = [f], set()
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        yield g
        stack.extend(children(g))


def free_registers(f: Ltl) -> frozenset:
    memo: dict[int, frozenset] = {}

    def go(g):
        key = id(g)
        if key not in memo:
            if isinstance(g, Reg):
                memo[key] = frozenset([g.r])
            elif isinstance(g, Freeze):
                memo[key] = go(g.arg) - {g.r}
            else:
                out = frozenset()
                for c in children(g):
                    out |= go(c)
                memo[key] = out
        return memo[key]

    return go(f)


def is_sentence(f: Ltl) -> bool:
    return not free_registers(f)


def is_pure(f: Ltl) -> bool:
    return not any(isinstance(g, State) for g in subformulas(f))


def registers(f: Ltl) -> frozenset:
    return frozenset(g.r for g in subformulas(f) if isinstance(g, (Reg, Freeze)))


def register_count(f: Ltl) -> int:
    return len(registers(f))


def state_atoms(f: Ltl) -> frozenset:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, State))


def temporal_depth(f: Ltl) -> int:
    memo: dict[int, int] = {}

    def go(g):
        if id(g) not in memo:
            sub = max((go(c) for c in children(g)), default=0)
            memo[id(g)] = sub + (1 if isinstance(g, (Next, Until, Freeze)) else 0)
        return memo[id(g)]

    return go(f)


def map_states(f: Ltl, fn) -> Ltl:
    """Replace every state atom q by fn(q); other nodes are rebuilt as is."""
    memo: dict[int, Ltl] = {}

    def go(g):
        key = id(g)
        if key in memo:
            return memo[key]
        if isinstance(g, State):
            out = fn(g.name)
        elif isinstance(g, Not):
            out = Not(go(g.arg))
        elif isinstance(g, And):
            out = And(tuple(go(c) for c in g.args))
        elif isinstance(g, Next):
            out = Next(go(g.arg))
        elif isinstance(g, Until):
            out = Until(go(g.left), go(g.right))
        elif isinstance(g, Freeze):
            out = Freeze(g.r, go(g.arg))
        else:
            out = g
        memo[key] = out
        return out

    return go(f)
