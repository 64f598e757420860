"""First-order logic over data words with order, data equality and
bounded-distance atoms: abstract syntax, sugar and static analysis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Union


class Fo:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Fo):
    pass


@dataclass(frozen=True)
class Letter(Fo):
    letter: Hashable
    var: str


@dataclass(frozen=True)
class Sim(Fo):
    x: str
    y: str


@dataclass(frozen=True)
class Lt(Fo):
    x: str
    y: str


@dataclass(frozen=True)
class Succ(Fo):
    """x = y + c."""
    x: str
    y: str
    c: int = 1

    def __post_init__(self):
        if not isinstance(self.c, int) or self.c < 1:
            raise ValueError("Succ needs a constant c >= 1")


@dataclass(frozen=True)
class DistLt(Fo):
    """u(y) < u(x) + c."""
    x: str
    y: str
    c: int

    def __post_init__(self):
        if not isinstance(self.c, int) or self.c < 0:
            raise ValueError("constants are natural numbers")


@dataclass(frozen=True)
class PosLt(Fo):
    """u(x) < c."""
    x: str
    c: int

    def __post_init__(self):
        if not isinstance(self.c, int) or self.c < 0:
            raise ValueError("constants are natural numbers")


@dataclass(frozen=True)
class Not(Fo):
    arg: Fo


@dataclass(frozen=True)
class And(Fo):
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two arguments")


@dataclass(frozen=True)
class Exists(Fo):
    var: str
    body: Fo


FoFormula = Union[Top, Letter, Sim, Lt, Succ, DistLt, PosLt, Not, And, Exists]
ATOMS = (Top, Letter, Sim, Lt, Succ, DistLt, PosLt)

TRUE = Top()
FALSE = Not(TRUE)


class _Bottom:
    """The pad letter of words built from a maximal finite run."""
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "BOT"

    def __reduce__(self):
        return (_Bottom, ())


BOT = _Bottom()


# -- sugar ---------------------------------------------------------------

def neg(f: Fo) -> Fo:
    return f.arg if isinstance(f, Not) else Not(f)


def conj(*fs: Fo) -> Fo:
    flat = []
    for f in fs:
        if f == TRUE:
            continue
        flat.extend(f.args if isinstance(f, And) else (f,))
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*fs: Fo) -> Fo:
    if not fs:
        return FALSE
    if len(fs) == 1:
        return fs[0]
    return Not(And(tuple(neg(f) for f in fs)))


def implies(a: Fo, b: Fo) -> Fo:
    return Not(conj(a, neg(b)))


def forall(x: str, f: Fo) -> Fo:
    return Not(Exists(x, neg(f)))


def le(x: str, y: str) -> Fo:
    return Not(Lt(y, x))


def eq(x: str, y: str) -> Fo:
    return And((Not(Lt(x, y)), Not(Lt(y, x))))


# -- analysis ------------------------------------------------------------

def children(f: Fo) -> tuple:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, And):
        return f.args
    if isinstance(f, Exists):
        return (f.body,)
    return ()


def atom_vars(f: Fo) -> tuple:
    if isinstance(f, (Sim, Lt, Succ, DistLt)):
        return (f.x, f.y)
    if isinstance(f, Letter):
        return (f.var,)
    if isinstance(f, PosLt):
        return (f.x,)
    return ()


def subformulas(f: Fo):
    stack, seen = [f], set()
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        yield g
        stack.extend(children(g))


def free_vars(f: Fo, memo: dict | None = None) -> frozenset:
    memo = {} if memo is None else memo

    def go(g):
        key = id(g)
        if key not in memo:
            if isinstance(g, Exists):
                memo[key] = go(g.body) - {g.var}
            elif isinstance(g, (Not, And)):
                out = frozenset()
                for c in children(g):
                    out |= go(c)
                memo[key] = out
            else:
                memo[key] = frozenset(atom_vars(g))
        return memo[key]

    return go(f)


def variables(f: Fo) -> frozenset:
    out = set()
    for g in subformulas(f):
        out.update(atom_vars(g))
        if isinstance(g, Exists):
            out.add(g.var)
    return frozenset(out)


def is_sentence(f: Fo) -> bool:
    return not free_vars(f)


def is_pure(f: Fo) -> bool:
    return not any(isinstance(g, Letter) for g in subformulas(f))


def letters(f: Fo) -> frozenset:
    return frozenset(g.letter for g in subformulas(f) if isinstance(g, Letter))


def quantifier_depth(f: Fo) -> int:
    memo: dict[int, int] = {}

    def go(g):
        if id(g) not in memo:
            sub = max((go(c) for c in children(g)), default=0)
            memo[id(g)] = sub + (1 if isinstance(g, Exists) else 0)
        return memo[id(g)]

    return go(f)


def max_constant(f: Fo) -> int:
    return max((g.c for g in subformulas(f) if isinstance(g, (Succ, DistLt, PosLt))), default=0)


def size(f: Fo) -> int:
    return sum(1 for _ in subformulas(f))


def transform(f: Fo, atom_fn=None, exists_fn=None) -> Fo:
    """Bottom-up rebuild.  atom_fn maps atoms; exists_fn(var, new_body) builds
    the image of a quantifier."""
    memo: dict[int, Fo] = {}

    def go(g):
        key = id(g)
        if key in memo:
            return memo[key]
        if isinstance(g, Not):
            out = Not(go(g.arg))
        elif isinstance(g, And):
            out = And(tuple(go(c) for c in g.args))
        elif isinstance(g, Exists):
            body = go(g.body)
            out = exists_fn(g.var, body) if exists_fn else Exists(g.var, body)
        else:
            out = atom_fn(g) if atom_fn else g
        memo[key] = out
        return out

    return go(f)


def fresh_var(base: str, taken) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"
