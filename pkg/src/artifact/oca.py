"""One-counter automata: data model, text format, determinism checks and stepping."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional


class OcaError(ValueError):
    """Raised for malformed automata or automaton files."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message)


class Instr(str, Enum):
    INC = "inc"
    DEC = "dec"
    IFZERO = "ifzero"

    def __str__(self) -> str:
        return self.value


INC, DEC, IFZERO = Instr.INC, Instr.DEC, Instr.IFZERO

ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


@dataclass(frozen=True)
class Transition:
    source: str
    instr: Instr
    target: str


@dataclass(frozen=True, order=True)
class Config:
    state: str
    counter: int

    def __post_init__(self):
        if self.counter < 0:
            raise ValueError("counter values are natural numbers")


@dataclass(frozen=True)
class Oca:
    """A = <Q, q_I, delta, F>.  States keep their declaration order."""

    states: tuple[str, ...]
    initial: str
    accepting: frozenset[str]
    transitions: tuple[Transition, ...]
    _out: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", tuple(
            t if isinstance(t, Transition) else Transition(t[0], Instr(t[1]), t[2])
            for t in self.transitions))
        declared = set(self.states)
        if len(declared) != len(self.states):
            raise OcaError("duplicate state declaration")
        for q in self.states:
            if not ID_RE.match(q):
                raise OcaError(f"invalid state id {q!r}")
        if self.initial not in declared:
            raise OcaError(f"undeclared initial state {self.initial!r}")
        for q in self.accepting:
            if q not in declared:
                raise OcaError(f"undeclared accepting state {q!r}")
        out: dict[str, list[Transition]] = {q: [] for q in self.states}
        seen = set()
        for t in self.transitions:
            for q in (t.source, t.target):
                if q not in declared:
                    raise OcaError(f"transition mentions undeclared state {q!r}")
            if t in seen:
                raise OcaError(f"duplicate transition {t.source} {t.instr} {t.target}")
            seen.add(t)
            out[t.source].append(t)
        object.__setattr__(self, "_out", {q: tuple(ts) for q, ts in out.items()})

    def outgoing(self, q: str) -> tuple[Transition, ...]:
        return self._out[q]

    def initial_config(self) -> Config:
        return Config(self.initial, 0)


def _apply(t: Transition, n: int) -> Optional[int]:
    if t.instr is INC:
        return n + 1
    if t.instr is DEC:
        return n - 1 if n >= 1 else None
    return 0 if n == 0 else None


def moves(a: Oca, c: Config) -> Iterator[Config]:
    """One-step successors in transition-declaration order."""
    for t in a.outgoing(c.state):
        n = _apply(t, c.counter)
        if n is not None:
            yield Config(t.target, n)


def successors(a: Oca, c: Config) -> set[Config]:
    return set(moves(a, c))


_DET_SHAPES = ([], ["inc"], ["dec", "ifzero"], ["dec"], ["ifzero"])


def is_deterministic(a: Oca) -> bool:
    """Minsky shapes: a lone inc, a dec/ifzero pair, or nothing.  Half of a
    dec/ifzero pair is also accepted; such a state simply gets stuck when the
    missing branch would be needed."""
    for q in a.states:
        kinds = sorted(t.instr.value for t in a.outgoing(q))
        if kinds not in _DET_SHAPES:
            return False
    return True


def is_weakly_deterministic(a: Oca) -> bool:
    for q in a.states:
        targets: dict[Instr, str] = {}
        for t in a.outgoing(q):
            if targets.setdefault(t.instr, t.target) != t.target:
                return False
    return True


def step_deterministic(a: Oca, c: Config) -> Optional[Config]:
    # In a deterministic automaton at most one move is enabled.
    return next(moves(a, c), None)


def run_prefix(a: Oca, length: int) -> list[Config]:
    run: list[Config] = []
    c: Optional[Config] = a.initial_config()
    while c is not None and len(run) < length:
        run.append(c)
        c = step_deterministic(a, c)
    return run


# ---------------------------------------------------------------- text format

def _tokens(line: str):
    for m in re.finditer(r"\S+", line):
        yield m.group(0), m.start() + 1


def parse_oca(text: str) -> Oca:
    states: list[str] = []
    initial = None
    accepting: list[str] = []
    transitions: list[Transition] = []
    refs: list[tuple[str, int, int]] = []
    seen: set[Transition] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        # allow several ';'-separated statements on one line
        offset = 0
        for chunk in line.split(";"):
            toks = [(tok, col + offset) for tok, col in _tokens(chunk)]
            offset += len(chunk) + 1
            if not toks:
                continue
            for tok, col in toks:
                if tok not in ("states", "init", "accept", "inc", "dec", "ifzero") and not ID_RE.match(tok):
                    raise OcaError(f"invalid identifier {tok!r}", lineno, col)
            head, col = toks[0]
            args = toks[1:]
            if head == "states":
                for q, c in args:
                    if q in states:
                        raise OcaError(f"state {q!r} declared twice", lineno, c)
                    states.append(q)
            elif head == "init":
                if len(args) != 1:
                    raise OcaError("'init' takes exactly one state", lineno, col)
                if initial is not None:
                    raise OcaError("duplicate initial state", lineno, col)
                initial = args[0][0]
                refs.append((initial, lineno, args[0][1]))
            elif head == "accept":
                for q, c in args:
                    accepting.append(q)
                    refs.append((q, lineno, c))
            elif len(toks) == 3 and toks[1][0] in ("inc", "dec", "ifzero"):
                t = Transition(head, Instr(toks[1][0]), toks[2][0])
                if t in seen:
                    raise OcaError("duplicate transition", lineno, col)
                seen.add(t)
                transitions.append(t)
                refs.append((head, lineno, col))
                refs.append((toks[2][0], lineno, toks[2][1]))
            else:
                raise OcaError(f"cannot parse statement starting with {head!r}", lineno, col)
    declared = set(states)
    for q, lineno, col in refs:
        if q not in declared:
            raise OcaError(f"undeclared state {q!r}", lineno, col)
    if initial is None:
        raise OcaError("missing 'init' line")
    return Oca(tuple(states), initial, frozenset(accepting), tuple(transitions))


def render_oca(a: Oca) -> str:
    lines = ["states " + " ".join(a.states), f"init {a.initial}"]
    acc = [q for q in a.states if q in a.accepting]
    lines.append(("accept " + " ".join(acc)).rstrip())
    lines += [f"{t.source} {t.instr} {t.target}" for t in a.transitions]
    return "\n".join(lines) + "\n"


def make_oca(states, initial, accepting, transitions) -> Oca:
    """Convenience constructor taking (src, instr, dst) string triples."""
    return Oca(tuple(states), initial, frozenset(accepting),
               tuple(Transition(s, Instr(i), d) for s, i, d in transitions))
