"""Generators for the hardness constructions, with small oracles.

* QBF to deterministic model checking (a chain automaton whose counter
  alternates 0/1 so that registers can record truth values);
* two-counter (Minsky) machines to finitary model checking of
  nondeterministic automata with one register;
* freeze LTL with one register to the infinitary problem on a fixed
  two-state automaton.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .formulas import ltl
from .formulas.sexpr import FormulaSyntaxError, read_sexpr
from .oca import ID_RE, Config, Oca, make_oca

# ---------------------------------------------------------------- QBF

_PVAR = re.compile(r"p([1-9][0-9]*)\Z")


@dataclass(frozen=True)
class QbfInstance:
    """forall p1 exists p2 ... forall p(2n-1) exists p(2n) . matrix

    The matrix is a propositional formula written with the LTL syntax
    classes restricted to Top/State/Not/And, the state names being p1..p2n.
    """
    n: int
    matrix: ltl.Ltl

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("a QBF instance needs n >= 1")
        for g in ltl.subformulas(self.matrix):
            if not isinstance(g, (ltl.Top, ltl.State, ltl.Not, ltl.And)):
                raise ValueError("the matrix must be propositional")
            if isinstance(g, ltl.State):
                m = _PVAR.match(g.name)
                if not m or int(m.group(1)) > 2 * self.n:
                    raise ValueError(f"undeclared propositional variable {g.name!r}")


def pvar(i: int) -> ltl.Ltl:
    return ltl.State(f"p{i}")


def cnf_matrix(clauses: Sequence[Sequence[int]]) -> ltl.Ltl:
    """Clauses of signed variable indices (DIMACS style)."""
    return ltl.conj(*(ltl.disj(*(pvar(v) if v > 0 else ltl.neg(pvar(-v)) for v in cl))
                      for cl in clauses))


def _prop_from_sexpr(e) -> ltl.Ltl:
    if isinstance(e, str):
        if e in ("true", "false"):
            return ltl.TRUE if e == "true" else ltl.FALSE
        if not _PVAR.match(e):
            raise FormulaSyntaxError(f"expected a variable p<k>, got {e!r}")
        return ltl.State(e)
    if not e or not isinstance(e[0], str):
        raise FormulaSyntaxError("expected an operator")
    head, args = e[0], [_prop_from_sexpr(a) for a in e[1:]]
    if head == "not" and len(args) == 1:
        return ltl.neg(args[0])
    if head in ("and", "or") and len(args) >= 2:
        return ltl.conj(*args) if head == "and" else ltl.disj(*args)
    if head == "imp" and len(args) == 2:
        return ltl.implies(*args)
    if head == "iff" and len(args) == 2:
        return ltl.iff(*args)
    raise FormulaSyntaxError(f"bad propositional operator {head!r} with {len(args)} argument(s)")


def parse_qbf(text: str) -> QbfInstance:
    """First non-empty line: `forall p1 exists p2 ...`; the rest: one
    S-expression over p<k>, true, false, not, and, or, imp, iff."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith(";")]
    if not lines:
        raise FormulaSyntaxError("empty QBF file")
    toks = lines[0].split()
    if len(toks) % 4 != 0 or not toks:
        raise FormulaSyntaxError("the prefix must be 'forall p1 exists p2 ...' with an even number of variables")
    for k in range(0, len(toks), 2):
        want = "forall" if k % 4 == 0 else "exists"
        if toks[k] != want or toks[k + 1] != f"p{k // 2 + 1}":
            raise FormulaSyntaxError(f"prefix position {k // 2 + 1}: expected '{want} p{k // 2 + 1}'")
    matrix = _prop_from_sexpr(read_sexpr("\n".join(lines[1:])))
    try:
        return QbfInstance(len(toks) // 4, matrix)
    except ValueError as err:
        raise FormulaSyntaxError(str(err)) from None


def render_qbf(q: QbfInstance) -> str:
    prefix = " ".join(f"{'forall' if i % 2 else 'exists'} p{i}" for i in range(1, 2 * q.n + 1))

    def go(f):
        if isinstance(f, ltl.Top):
            return "true"
        if isinstance(f, ltl.State):
            return f.name
        if isinstance(f, ltl.Not):
            return f"(not {go(f.arg)})"
        return "(and " + " ".join(go(a) for a in f.args) + ")"

    return prefix + "\n" + go(q.matrix) + "\n"


def eval_prop(f: ltl.Ltl, val: dict) -> bool:
    if isinstance(f, ltl.Top):
        return True
    if isinstance(f, ltl.State):
        return val[f.name]
    if isinstance(f, ltl.Not):
        return not eval_prop(f.arg, val)
    return all(eval_prop(a, val) for a in f.args)


MAX_QBF_VARS = 20


def solve_qbf_bruteforce(q: QbfInstance) -> bool:
    """Game-tree search, odd variables universal."""
    if 2 * q.n > MAX_QBF_VARS:
        raise ValueError(f"brute force is capped at {MAX_QBF_VARS} variables")
    val: dict[str, bool] = {}

    def go(i):
        if i > 2 * q.n:
            return eval_prop(q.matrix, val)
        results = []
        for b in (False, True):
            val[f"p{i}"] = b
            results.append(go(i + 1))
        return all(results) if i % 2 else any(results)

    return go(1)


def solve_qbf_expansion(q: QbfInstance) -> bool:
    """Independent evaluator: tabulate the matrix over all assignments,
    then fold the quantifier prefix from the innermost variable outwards."""
    if 2 * q.n > MAX_QBF_VARS:
        raise ValueError(f"brute force is capped at {MAX_QBF_VARS} variables")
    names = [f"p{i}" for i in range(1, 2 * q.n + 1)]
    table = [eval_prop(q.matrix, dict(zip(names, bits)))
             for bits in product((False, True), repeat=len(names))]
    for i in range(len(names), 0, -1):
        fold = all if i % 2 else any
        table = [fold(table[k:k + 2]) for k in range(0, len(table), 2)]
    return table[0]


def qbf_states(n: int) -> list[str]:
    out = ["q0"]
    for i in range(1, 2 * n + 1):
        out += [f"q{i}", f"q{i}p"]
    return out + ["qF"]


def qbf_to_instance(q: QbfInstance) -> tuple[Oca, ltl.Ltl]:
    n2 = 2 * q.n
    states = qbf_states(q.n)
    trans = [("q0", "ifzero", "q1")]
    for i in range(1, n2 + 1):
        trans.append((f"q{i}", "inc", f"q{i}p"))
        trans.append((f"q{i}p", "dec", f"q{i + 1}" if i < n2 else "qF"))
    trans.append(("qF", "ifzero", "qF"))
    a = make_oca(states, "q0", ["qF"], trans)

    def at(i):
        return ltl.disj(ltl.State(f"q{i}"), ltl.State(f"q{i}p"))

    # p_i holds iff the primed state was chosen, where the counter is 1
    psi = ltl.F(ltl.conj(ltl.State("qF"),
                         ltl.map_states(q.matrix, lambda p: ltl.neg(ltl.Reg(int(p[1:]))))))
    for i in range(n2, 0, -1):
        step = ltl.Freeze(i, ltl.Next(psi))
        psi = ltl.F(ltl.conj(at(i), step)) if i % 2 == 0 else ltl.G(ltl.implies(at(i), step))
    return a, psi


# ---------------------------------------------------------------- two-counter machines

_OPS = ("inc", "dec", "ifzero")


@dataclass(frozen=True)
class CmTransition:
    source: str
    op: str
    counter: int
    target: str


@dataclass(frozen=True)
class TwoCounterMachine:
    states: tuple
    initial: str
    accepting: frozenset
    transitions: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", tuple(
            t if isinstance(t, CmTransition) else CmTransition(*t) for t in self.transitions))
        names = set(self.states)
        for q in self.states:
            if not ID_RE.match(q):
                raise ValueError(f"invalid state id {q!r}")
        if self.initial not in names or not self.accepting <= names:
            raise ValueError("initial and accepting states must be declared")
        for t in self.transitions:
            if t.op not in _OPS or t.counter not in (1, 2):
                raise ValueError(f"bad instruction {t.op}/{t.counter}")
            if t.source not in names or t.target not in names:
                raise ValueError("transition mentions an undeclared state")
            if t.source == self.initial and t.op != "inc":
                raise ValueError("every transition leaving the initial state must be an incrementation")


def _cm_step(t: CmTransition, c: tuple) -> Optional[tuple]:
    v = list(c)
    k = t.counter - 1
    if t.op == "inc":
        v[k] += 1
    elif t.op == "dec":
        if v[k] == 0:
            return None
        v[k] -= 1
    elif v[k] != 0:
        return None
    return tuple(v)


def replay_2cm(m: TwoCounterMachine, steps: Sequence[CmTransition]) -> bool:
    """Is the transition sequence a run from (initial, 0, 0) ending in an
    accepting state?"""
    q, c = m.initial, (0, 0)
    for t in steps:
        if t not in m.transitions or t.source != q:
            return False
        c = _cm_step(t, c)
        if c is None:
            return False
        q = t.target
    return q in m.accepting


def shortest_halting_run(m: TwoCounterMachine, max_steps: int = 50) -> Optional[list[CmTransition]]:
    """Breadth-first search over configurations."""
    start = (m.initial, (0, 0))
    parent = {start: None}
    todo = deque([(start, 0)])
    while todo:
        (q, c), d = todo.popleft()
        if q in m.accepting:
            path = []
            node = (q, c)
            while parent[node] is not None:
                node, t = parent[node]
                path.append(t)
            return path[::-1]
        if d == max_steps:
            continue
        for t in m.transitions:
            if t.source != q:
                continue
            c2 = _cm_step(t, c)
            if c2 is not None and (t.target, c2) not in parent:
                parent[(t.target, c2)] = ((q, c), t)
                todo.append(((t.target, c2), d + 1))
    return None


@dataclass(frozen=True)
class MinskyInstance:
    automaton: Oca
    formula: ltl.Ltl
    max_len: int
    transition_state: dict      # name of the state standing for each 2CM transition


def gadget_max_len(steps: int) -> int:
    """Enough positions for a halting run of `steps` instructions: values
    stay at most steps + 1, a zero test climbs one above, and each gadget of
    height h spends 2h + 1 positions after its entry state."""
    return 3 + steps * (2 * (steps + 2) + 1)


def minsky_to_instance(m: TwoCounterMachine, steps: Optional[int] = None,
                       search_steps: int = 50) -> MinskyInstance:
    """steps: length of the 2CM run the reported max_len must accommodate
    (default: the shortest halting run, or search_steps if none is found)."""
    if steps is None:
        run = shortest_halting_run(m, search_steps)
        steps = len(run) if run is not None else search_steps
    states = ["init", "i0"] + [f"z_{q}" for q in m.states]
    trans = [("init", "inc", "i0"), ("i0", "dec", f"z_{m.initial}")]
    tname = {}
    cls = {k: {c: [] for c in (1, 2)} for k in ("I", "D", "Il", "Inl", "Dl", "Dnl", "Z", "Zd")}
    for c in (1, 2):
        cls["I"][c].append("i0")
        cls["D"][c].append("i0")
    for k, t in enumerate(m.transitions):
        tk = f"t{k}"
        tname[t] = tk
        z, z2 = f"z_{t.source}", f"z_{t.target}"
        if t.op in ("inc", "dec"):
            pre = "i" if t.op == "inc" else "d"
            last, nlast, down = f"{pre}l{k}", f"{pre}n{k}", f"a{k}"
            states += [last, nlast, tk, down]
            trans += [(z, "inc", last), (z, "inc", nlast), (nlast, "inc", nlast),
                      (nlast, "inc", last), (last, "inc", tk), (tk, "dec", down),
                      (down, "dec", down), (down, "ifzero", z2)]
            big = "I" if t.op == "inc" else "D"
            cls[big][t.counter].append(tk)
            cls[big + "l"][t.counter].append(last)
            cls[big + "nl"][t.counter].append(nlast)
        else:
            climb, peak, down = f"u{k}", f"v{k}", f"zd{k}"
            states += [climb, peak, tk, down]
            trans += [(z, "inc", peak), (z, "inc", climb), (climb, "inc", climb),
                      (climb, "inc", peak), (peak, "inc", tk), (tk, "dec", down),
                      (down, "dec", down), (down, "ifzero", z2)]
            cls["Z"][t.counter].append(tk)
            cls["Zd"][t.counter].append(down)
    a = make_oca(states, "init", [f"z_{q}" for q in m.states if q in m.accepting], trans)
    return MinskyInstance(a, minsky_formula(cls, [f"z_{q}" for q in m.accepting]),
                          gadget_max_len(steps), tname)


def minsky_formula(cls: dict, accepting: Sequence[str]) -> ltl.Ltl:
    up = ltl.Reg(1)

    def down(f):
        return ltl.Freeze(1, f)

    def Gp(f):
        return ltl.Next(ltl.G(f))

    rules = []
    for c in (1, 2):
        I, D, Il, Inl, Dl, Dnl, Z, Zd = (ltl.disj(*(ltl.State(q) for q in cls[k][c]))
                                         for k in ("I", "D", "Il", "Inl", "Dl", "Dnl", "Z", "Zd"))

        def fresh_after(a, b):
            # after an a-position, no strict future b-position shares its value
            return ltl.G(ltl.implies(a, down(Gp(ltl.implies(b, ltl.neg(up))))))

        def next_value(a, nl, l):
            return ltl.G(ltl.implies(a, ltl.implies(down(ltl.F(ltl.conj(nl, up))),
                                                   down(ltl.F(ltl.conj(l, up))))))

        rules += [
            fresh_after(I, I),                                          # (i)
            fresh_after(D, D),                                          # (ii)
            fresh_after(D, I),                                          # (iii)
            next_value(I, Inl, Il), fresh_after(ltl.disj(Il, Inl), I),  # (iv)
            next_value(D, Dnl, Dl), fresh_after(ltl.disj(Dl, Dnl), D),  # (v)
            next_value(I, Dnl, Il), next_value(I, Dl, Il),              # (vi)
            fresh_after(Dnl, Il),
            ltl.G(ltl.implies(I, down(ltl.G(ltl.implies(Z, ltl.neg(up)))))),   # (vii)
            ltl.neg(ltl.F(ltl.conj(I, down(ltl.F(ltl.conj(Zd, up))),            # (viii)
                                   ltl.neg(down(ltl.F(ltl.conj(up, D))))))),
            ltl.neg(ltl.F(ltl.conj(Zd, down(ltl.F(ltl.conj(D, up)))))),
        ]
    rules.append(ltl.F(ltl.disj(*(ltl.State(q) for q in accepting))))    # (ix)
    return ltl.conj(*rules)


def project_witness(inst: MinskyInstance, run: Sequence[Config]) -> list[CmTransition]:
    back = {v: t for t, v in inst.transition_state.items()}
    return [back[c.state] for c in run if c.state in back]


# ---------------------------------------------------------------- omega-SAT

def a_sat() -> Oca:
    return make_oca(["qI", "qf"], "qI", ["qf"],
                    [("qI", "inc", "qI"), ("qI", "inc", "qf"), ("qf", "dec", "qf"),
                     ("qf", "ifzero", "qI")])


def pos_formula() -> ltl.Ltl:
    return ltl.Freeze(1, ltl.X(ltl.Reg(1), 2))


def satltl_to_instance(phi: ltl.Ltl) -> tuple[Oca, ltl.Ltl]:
    if ltl.registers(phi) - {1}:
        raise ValueError("the encoding handles register 1 only")
    pos = pos_formula()
    memo: dict[int, ltl.Ltl] = {}

    def T(f):
        if id(f) in memo:
            return memo[id(f)]
        if isinstance(f, (ltl.Top, ltl.State, ltl.Reg)):
            out = f
        elif isinstance(f, ltl.Not):
            out = ltl.Not(T(f.arg))
        elif isinstance(f, ltl.And):
            out = ltl.And(tuple(T(c) for c in f.args))
        elif isinstance(f, ltl.Freeze):
            out = ltl.Freeze(f.r, T(f.arg))
        elif isinstance(f, ltl.Next):
            out = ltl.Next(ltl.Until(ltl.neg(pos), ltl.And((pos, T(f.arg)))))
        elif isinstance(f, ltl.Until):
            out = ltl.Until(ltl.implies(pos, T(f.left)), ltl.And((pos, T(f.right))))
        else:
            raise TypeError(f"not an LTL formula: {f!r}")
        memo[id(f)] = out
        return out

    return a_sat(), T(phi)


def parse_2cm(text: str) -> TwoCounterMachine:
    """Same layout as the OCA format, transitions read `src op counter dst`."""
    states, initial, accepting, trans = [], None, [], []
    statements = ((n, chunk) for n, line in enumerate(text.splitlines(), 1)
                  for chunk in line.split("#", 1)[0].split(";"))
    for lineno, raw in statements:
        toks = raw.split()
        if not toks:
            continue
        head = toks[0]
        if head == "states":
            states += toks[1:]
        elif head == "init" and len(toks) == 2:
            if initial is not None:
                raise ValueError(f"line {lineno}: duplicate initial state")
            initial = toks[1]
        elif head == "accept":
            accepting += toks[1:]
        elif len(toks) == 4 and toks[1] in _OPS and toks[2] in ("1", "2"):
            trans.append((toks[0], toks[1], int(toks[2]), toks[3]))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if initial is None:
        raise ValueError("missing 'init' line")
    return TwoCounterMachine(states, initial, accepting, trans)


def render_2cm(m: TwoCounterMachine) -> str:
    lines = ["states " + " ".join(m.states), f"init {m.initial}",
             ("accept " + " ".join(q for q in m.states if q in m.accepting)).rstrip()]
    lines += [f"{t.source} {t.op} {t.counter} {t.target}" for t in m.transitions]
    return "\n".join(lines) + "\n"
