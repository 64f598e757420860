"""Evaluation of data-free FO sentences over ultimately periodic words s.t^w.

Without a bound the evaluation is exact on the infinite word; with a bound
B every quantifier ranges over [0, B).  The evaluator works on a compiled
negation normal form and never enumerates a whole range:

* quantifiers whose body pins the variable (x = y + c, x = y, x < 1) are
  *functional* and are assigned instead of enumerated;
* the remaining quantifiers only visit positions near a landmark (0, |s|,
  B if any, positional constants and the values of the free variables),
  plus one representative per residue class mod |t| in every long gap.  How
  far is far is computed per subformula (see _Evaluator.reach, an
  Ehrenfeucht-Fraisse argument);
* in memo keys, long gaps between free positions in the periodic part are
  shortened by multiples of |t|;
* quantifier-free conjuncts are evaluated with numpy over all candidates.

Pruning and shifting can be disabled, which the test-suite uses to compare
against plain enumeration.
"""

from __future__ import annotations

import bisect
import sys
from dataclasses import dataclass

import numpy as np

from ..formulas import fo

MAX_BOUND = 2 ** 62
_UNBOUNDED = 2 ** 62     # a stand-in for infinity; never a landmark
_DENSE_LIMIT = 2048
_PAIR_PRODUCT_LIMIT = 1 << 16
_TABLE_LIMIT = 1 << 18     # longest per-position table
_TABLE_BUDGET = 1 << 26    # total table cells before the tables are dropped


@dataclass(frozen=True)
class UpWord:
    """s followed by t repeated forever."""
    s: tuple
    t: tuple

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(self.s))
        object.__setattr__(self, "t", tuple(self.t))
        if not self.t:
            raise ValueError("the periodic part t must be nonempty")

    def letter(self, i: int):
        if i < len(self.s):
            return self.s[i]
        return self.t[(i - len(self.s)) % len(self.t)]

    def alphabet(self) -> tuple:
        return tuple(dict.fromkeys(self.s + self.t))


def default_bound(w: UpWord, phi: fo.Fo) -> int:
    """|s| + |t| (c_max + 2) 2^(d+1), clamped to 2^62."""
    d = fo.quantifier_depth(phi)
    c = fo.max_constant(phi)
    if d + 1 >= 64:
        return MAX_BOUND
    return min(MAX_BOUND, len(w.s) + len(w.t) * (c + 2) * 2 ** (d + 1))


# ---------------------------------------------------------------- compiled form

class _Node:
    __slots__ = ("free", "rank", "_order")

    @property
    def order(self):
        try:
            return self._order
        except AttributeError:
            self._order = tuple(sorted(self.free))
            return self._order


class _Const(_Node):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = bool(value)
        self.free, self.rank = frozenset(), 0


class _Mask(_Node):
    __slots__ = ("var", "members", "size", "mask")

    def __init__(self, var, members, size):
        self.var, self.size = var, size
        self.members = frozenset(members)
        self.mask = None
        self.free, self.rank = frozenset([var]), 0

    def array(self):
        if self.mask is None:
            self.mask = np.zeros(self.size, dtype=bool)
            self.mask[list(self.members)] = True
        return self.mask


class _Pair(_Node):
    """(letter(x), letter(y)) belongs to a finite relation (or, with neg,
    does not)."""
    __slots__ = ("x", "y", "members", "neg", "size", "_dense", "_keys")

    def __init__(self, x, y, members, size, neg=False):
        self.x, self.y, self.size, self.neg = x, y, size, neg
        self.members = frozenset(members)
        self._dense = self._keys = None
        self.free, self.rank = frozenset([x, y]), 0

    def dense(self):
        if self._dense is None and self.size <= _DENSE_LIMIT:
            d = np.zeros((self.size, self.size), dtype=bool)
            if self.members:
                a, b = zip(*self.members)
                d[list(a), list(b)] = True
            self._dense = ~d if self.neg else d
        return self._dense

    def keys(self):
        if self._keys is None:
            self._keys = np.array(sorted(a * self.size + b for a, b in self.members), dtype=np.int64)
        return self._keys

    def holds(self, a: int, b: int) -> bool:
        return ((a, b) in self.members) != self.neg

    def holds_vec(self, a, b):
        d = self.dense()
        if d is not None:
            return d[a, b]
        return np.isin(np.asarray(a) * self.size + b, self.keys(), invert=self.neg)


class _Cmp(_Node):
    """op in lt (x<y), succ (x=y+c), distlt (y<x+c), poslt (x<c); pos=False negates."""
    __slots__ = ("op", "x", "y", "c", "pos")

    def __init__(self, op, x, y, c, pos):
        self.op, self.x, self.y, self.c, self.pos = op, x, y, c, pos
        self.free = frozenset(v for v in (x, y) if v is not None)
        self.rank = 0


class _Junction(_Node):
    __slots__ = ("is_and", "children")

    def __init__(self, is_and, children):
        self.is_and, self.children = is_and, tuple(children)
        self.free = frozenset().union(*(c.free for c in self.children))
        self.rank = max(c.rank for c in self.children)


class _Func(_Node):
    """A quantifier whose variable is pinned to src + off (src None: off)."""
    __slots__ = ("is_ex", "var", "src", "off", "body")

    def __init__(self, is_ex, var, src, off, body):
        self.is_ex, self.var, self.src, self.off, self.body = is_ex, var, src, off, body
        self.free = (body.free - {var}) | ({src} if src is not None else set())
        self.free = frozenset(self.free)
        self.rank = body.rank


class _Quant(_Node):
    __slots__ = ("is_ex", "var", "body", "order", "vparts", "rparts")

    def __init__(self, is_ex, var, body):
        self.is_ex, self.var, self.body = is_ex, var, body
        self.free = body.free - {var}
        self.rank = body.rank + 1
        self.order = tuple(sorted(self.free))
        parts = body.children if (isinstance(body, _Junction) and body.is_and == is_ex) else (body,)
        self.vparts = tuple(p for p in parts if p.rank == 0)
        self.rparts = tuple(p for p in parts if p.rank > 0)


TRUE_NODE, FALSE_NODE = _Const(True), _Const(False)


class _Compiler:
    def __init__(self, codes: dict, size: int):
        self.codes = codes
        self.size = size
        self.memo: dict = {}
        self.max_const = 0
        self.poslt: set[int] = set()
        self._all = frozenset(range(size))

    def mask(self, var, members):
        members = frozenset(members)
        if not members:
            return FALSE_NODE
        if len(members) == self.size:
            return TRUE_NODE
        return _Mask(var, members, self.size)

    def compile(self, f: fo.Fo, pos: bool) -> _Node:
        key = (id(f), pos)
        out = self.memo.get(key)
        if out is None:
            out = self._compile(f, pos)
            self.memo[key] = out
        return out

    def _compile(self, f, pos):
        if isinstance(f, fo.Top):
            return TRUE_NODE if pos else FALSE_NODE
        if isinstance(f, fo.Not):
            return self.compile(f.arg, not pos)
        if isinstance(f, fo.And):
            if (len(f.args) == 2 and all(type(g) is fo.Letter for g in f.args)
                    and f.args[0].var != f.args[1].var):
                return self.letter_pair(f, pos)
            return self.junction(pos, [self.compile(a, pos) for a in f.args])
        if isinstance(f, fo.Exists):
            return self.quantifier(pos, f.var, self.compile(f.body, pos))
        if isinstance(f, fo.Letter):
            code = self.codes.get(f.letter)
            members = set() if code is None else {code}
            if not pos:
                members = set(range(self.size)) - members
            return self.mask(f.var, members)
        if isinstance(f, fo.Sim):
            raise ValueError("Sim atoms must be translated away before evaluation")
        if isinstance(f, fo.Lt):
            if f.x == f.y:
                return _Const(not pos)
            return _Cmp("lt", f.x, f.y, 0, pos)
        if isinstance(f, fo.Succ):
            self.max_const = max(self.max_const, f.c)
            if f.x == f.y:
                return _Const(not pos)
            return _Cmp("succ", f.x, f.y, f.c, pos)
        if isinstance(f, fo.DistLt):
            self.max_const = max(self.max_const, f.c)
            if f.x == f.y:
                return _Const((f.c > 0) == pos)
            return _Cmp("distlt", f.x, f.y, f.c, pos)
        if isinstance(f, fo.PosLt):
            self.poslt.add(f.c)
            if f.c == 0:
                return _Const(not pos)
            return _Cmp("poslt", f.x, None, f.c, pos)
        raise TypeError(f"not an FO formula: {f!r}")

    def junction(self, is_and, children):
        flat: list[_Node] = []
        for c in children:
            if isinstance(c, _Junction) and c.is_and == is_and:
                flat.extend(c.children)
            else:
                flat.append(c)
        masks: dict[str, frozenset] = {}
        rest: list[_Node] = []
        pairs: dict[tuple, set] = {}
        for c in flat:
            if isinstance(c, _Const):
                if c.value != is_and:
                    return c
                continue
            if isinstance(c, _Mask):
                old = masks.get(c.var)
                if old is None:
                    masks[c.var] = c.members
                else:
                    masks[c.var] = old & c.members if is_and else old | c.members
                continue
            if self._pair_shape(c, is_and):
                m1, m2 = sorted(c.children, key=lambda m: m.var)
                # OR of pairs I(x)&J(y); under AND the negated form !I(x)|!J(y)
                if is_and:
                    a1, a2 = self._all - m1.members, self._all - m2.members
                else:
                    a1, a2 = m1.members, m2.members
                if len(a1) * len(a2) <= _PAIR_PRODUCT_LIMIT:
                    pairs.setdefault((m1.var, m2.var), set()).update((a, b) for a in a1 for b in a2)
                    continue
            if isinstance(c, _Pair) and c.neg == is_and:
                pairs.setdefault((c.x, c.y), set()).update(c.members)
                continue
            rest.append(c)
        out: list[_Node] = []
        for var, members in masks.items():
            m = self.mask(var, members)
            if isinstance(m, _Const):
                if m.value != is_and:
                    return m
                continue
            out.append(m)
        for (x, y), rel in pairs.items():
            if rel:       # an empty relation is the junction's unit
                out.append(_Pair(x, y, rel, self.size, neg=is_and))
        out.extend(rest)
        if not out:
            return TRUE_NODE if is_and else FALSE_NODE
        if len(out) == 1:
            return out[0]
        return _Junction(is_and, out)

    @staticmethod
    def _pair_shape(c, is_and):
        return (isinstance(c, _Junction) and c.is_and != is_and and len(c.children) == 2
                and all(isinstance(m, _Mask) for m in c.children)
                and c.children[0].var != c.children[1].var)

    def letter_pair(self, f, pos):
        """I(x) & J(y) compiled straight to a one-element relation."""
        (x, i), (y, j) = sorted((g.var, self.codes.get(g.letter)) for g in f.args)
        if i is None or j is None:
            return FALSE_NODE if pos else TRUE_NODE
        return _Pair(x, y, {(i, j)}, self.size, neg=not pos)

    def quantifier(self, is_ex, var, body):
        if var not in body.free:
            return body
        parts = list(body.children) if (isinstance(body, _Junction) and body.is_and == is_ex) else [body]
        # In an existential body the pinning atom occurs positively; in a
        # universal body it occurs negated, as the guard of an implication.
        want = is_ex
        for k, p in enumerate(parts):
            if not isinstance(p, _Cmp) or p.pos != want:
                continue
            if p.op == "succ" and p.x == var:
                return self._func(is_ex, var, p.y, p.c, parts, [k])
            if p.op == "succ" and p.y == var:
                return self._func(is_ex, var, p.x, -p.c, parts, [k])
            if p.op == "poslt" and p.x == var and p.c == 1:
                return self._func(is_ex, var, None, 0, parts, [k])
        # x = v written as not(x < v) and not(v < x)
        lts = {}
        for k, p in enumerate(parts):
            if isinstance(p, _Cmp) and p.op == "lt" and p.pos != want:
                lts[(p.x, p.y)] = k
        for (x, y), k in lts.items():
            if x == var and (y, x) in lts:
                return self._func(is_ex, var, y, 0, parts, [k, lts[(y, x)]])
        return _Quant(is_ex, var, body)

    def _func(self, is_ex, var, src, off, parts, used):
        rest = [p for k, p in enumerate(parts) if k not in used]
        body = self.junction(is_ex, rest) if rest else (TRUE_NODE if is_ex else FALSE_NODE)
        return _Func(is_ex, var, src, off, body)


# ---------------------------------------------------------------- evaluation

class _Evaluator:
    def __init__(self, w: UpWord, bound: int, codes: dict, comp: _Compiler, root: _Node,
                 prune: bool, shift: bool):
        self.B = _UNBOUNDED if bound is None else bound
        self.S = len(w.s)
        self.p = len(w.t)
        self.s_codes = np.array([codes[a] for a in w.s] or [0], dtype=np.int64)
        self.t_codes = np.array([codes[a] for a in w.t], dtype=np.int64)
        self.s_list = [codes[a] for a in w.s]
        self.t_list = [codes[a] for a in w.t]
        self.size = len(codes)
        self.prune, self.shift = prune, shift
        marks = {0, self.S} | {c for c in comp.poslt if c < self.B}
        if bound is not None:
            marks.add(bound)
        self.static = sorted(marks)
        self.reaches: dict = {}
        self.memo: dict = {}
        self.vcache: dict = {}
        self.tables: dict = {}
        self.seen: dict = {}
        self.table_cells = 0

    def reach(self, n: _Node) -> int:
        """A distance beyond which n cannot tell gaps apart.

        Call two assignments of n's free variables r-similar when they agree
        below |s| and, listing variables and landmarks in increasing order,
        every gap between neighbours is either the same in both or longer
        than r in both with equal residues mod |t|.  r-similar assignments
        with r >= reach(n) give n the same truth value; the quantifier case
        is a one-round Ehrenfeucht-Fraisse step, answering a move near a
        point by the same offset and a move far from all points by a
        position of the same residue in the matching gap."""
        r = self.reaches.get(id(n))
        if r is not None:
            return r
        t = type(n)
        if t is _Cmp:
            r = abs(n.c) if n.op in ("succ", "distlt") else 0
        elif t is _Junction:
            r = max(self.reach(c) for c in n.children)
        elif t is _Func:
            r = self.reach(n.body) + abs(n.off)
        elif t is _Quant:
            r = 2 * self.reach(n.body) + self.p + 1
        else:
            r = 0
        self.reaches[id(n)] = r
        return r

    # -- letters
    def code(self, i: int) -> int:
        if i < self.S:
            return self.s_list[i]
        return self.t_list[(i - self.S) % self.p]

    def codes(self, x):
        if not isinstance(x, np.ndarray):
            return self.code(x)
        periodic = self.t_codes[np.maximum(x - self.S, 0) % self.p]
        if self.S == 0:
            return periodic
        return np.where(x < self.S, self.s_codes[np.minimum(x, self.S - 1)], periodic)

    # -- scalar
    def ev(self, n: _Node, env: dict) -> bool:
        t = type(n)
        if t is _Const:
            return n.value
        if t is _Mask:
            return self.code(env[n.var]) in n.members
        if t is _Pair:
            return n.holds(self.code(env[n.x]), self.code(env[n.y]))
        if t is _Cmp:
            return self.cmp(n, env[n.x], env[n.y] if n.y is not None else None)
        if t is _Junction:
            if n.is_and:
                return all(self.ev(c, env) for c in n.children)
            return any(self.ev(c, env) for c in n.children)
        if t is _Func:
            z = (env[n.src] if n.src is not None else 0) + n.off
            if not 0 <= z < self.B:
                return not n.is_ex
            return self.ev(n.body, {**env, n.var: z})
        return self.quant(n, env)

    @staticmethod
    def cmp(n, x, y):
        if n.op == "lt":
            r = x < y
        elif n.op == "succ":
            r = x == y + n.c
        elif n.op == "distlt":
            r = y < x + n.c
        else:
            r = x < n.c
        return r if n.pos else ~r if isinstance(r, np.ndarray) else not r

    # -- vectorized (rank-0 nodes only)
    # Within one prefilter, shifted position arrays are shared per (source,
    # offset) and results are cached per (node, argument arrays), so repeated
    # subformulas over the same positions are evaluated once.
    def vcodes(self, x):
        if not isinstance(x, np.ndarray):
            return self.code(x)
        hit = self.vcache.get(("c", id(x)))
        if hit is None:
            hit = self.vcache[("c", id(x))] = (x, self.codes(x))
        return hit[1]

    def vec(self, n: _Node, env: dict):
        t = type(n)
        if t is _Const:
            return n.value
        out = self.tabulated(n, env)
        if out is not None:
            return out
        key = (id(n),) + tuple(id(env[v]) if isinstance(env[v], np.ndarray) else ("s", env[v])
                               for v in n.order)
        hit = self.vcache.get(key)
        if hit is not None:
            return hit[1]
        out = self._vec(n, env)
        # the env arrays are kept alive with the entry so their ids stay valid
        self.vcache[key] = (tuple(env[v] for v in n.order), out)
        return out

    # Every position array seen during a prefilter is base + offset for one
    # base array (the candidates, or an arange while tabulating).  A node
    # whose array arguments share a base is a function of the base position
    # once its offsets and scalar arguments are fixed, so its values are
    # tabulated per (node, offsets, scalars) and reused across prefilters.
    # Entries where base + offset leaves [0, B) are junk, but an enclosing
    # functional quantifier masks exactly those entries.
    def derive(self, z, src, off):
        d = self.vcache.get(("o", id(src)))
        if d is not None:
            self.vcache[("o", id(z))] = (z, d[1], d[2] + off)

    def tabulated(self, n: _Node, env: dict):
        base, sig = None, []
        for v in n.order:
            x = env[v]
            if not isinstance(x, np.ndarray):
                sig.append(("s", x))
                continue
            d = self.vcache.get(("o", id(x)))
            if d is None or (base is not None and d[1] is not base):
                return None
            base = d[1]
            sig.append(d[2])
        if base is None or not base.size:
            return None
        key = (id(n), tuple(sig))
        table = self.tables.get(key)
        mkey = ("m", id(base))
        hit = self.vcache.get(mkey)
        if hit is None:
            hit = self.vcache[mkey] = (base, int(base.max()) + 1)
        need = hit[1]
        if table is None or table.size < need:
            if need > _TABLE_LIMIT:
                return None
            # rent or buy: evaluate directly until the cells spent on this
            # key would have paid for the table
            spent = self.seen.get(key, 0) + base.size
            if spent < need:
                self.seen[key] = spent
                return None
            self.seen[key] = 0
            table = self.build_table(n, key, sig, need, table)
        return table[base]

    def build_table(self, n, key, sig, need, old):
        size = min(max(need, 2 * (old.size if old is not None else 32)), _TABLE_LIMIT)
        ar = np.arange(size, dtype=np.int64)
        self.vcache[("o", id(ar))] = (ar, ar, 0)
        env = {}
        for v, s in zip(n.order, sig):
            if isinstance(s, tuple):
                env[v] = s[1]
            elif s == 0:
                env[v] = ar
            else:
                z = ar + s
                z = np.where((z >= 0) & (z < self.B), z, 0)
                self.vcache[("o", id(z))] = (z, ar, s)
                env[v] = z
        if self.table_cells + size > _TABLE_BUDGET:
            self.tables.clear()
            self.table_cells = 0
        table = np.broadcast_to(self._vec(n, env), (size,)).copy()
        self.tables[key] = table
        self.table_cells += size
        return table

    def _vec(self, n: _Node, env: dict):
        t = type(n)
        if t is _Mask:
            return n.array()[self.vcodes(env[n.var])]
        if t is _Pair:
            return n.holds_vec(self.vcodes(env[n.x]), self.vcodes(env[n.y]))
        if t is _Cmp:
            return self.cmp(n, env[n.x], env[n.y] if n.y is not None else None)
        if t is _Junction:
            out = self.vec(n.children[0], env)
            op = np.logical_and if n.is_and else np.logical_or
            for c in n.children[1:]:
                out = op(out, self.vec(c, env))
            return out
        if t is _Func:
            src = env[n.src] if n.src is not None else 0
            if not isinstance(src, np.ndarray):
                z = src + n.off
                if not 0 <= z < self.B:
                    return not n.is_ex
                return self.vec(n.body, {**env, n.var: z})
            skey = ("f", id(src), n.off)
            hit = self.vcache.get(skey)
            if hit is None:
                z = src + n.off
                valid = (z >= 0) & (z < self.B)
                hit = self.vcache[skey] = (src, valid, np.where(valid, z, 0))
                self.derive(hit[2], src, n.off)
            _, valid, z = hit
            body = self.vec(n.body, {**env, n.var: z})
            return valid & body if n.is_ex else ~valid | body
        raise AssertionError("vectorized evaluation of a quantified node")

    # -- quantifiers
    def canonical(self, vals: tuple, margin: int) -> tuple:
        """Shorten every gap longer than margin in the periodic part by a
        multiple of |t|, so margin-similar assignments share one memo key.
        Landmarks stay put; a block of values that would move towards the
        next landmark is left alone unless it is already far from it."""
        if not vals:
            return vals
        pts = sorted(set(vals))
        moved = {}
        i = 0
        while i < len(pts):
            k = bisect.bisect_right(self.static, pts[i]) - 1
            a = self.static[k]
            b = self.static[k + 1] if k + 1 < len(self.static) else _UNBOUNDED
            j = i
            while j < len(pts) and pts[j] < b:
                j += 1
            block = pts[i:j]
            i = j
            if a < self.S:
                continue
            prev, total, out = a, 0, []
            for v in block:
                gap = v - prev
                if gap > margin:
                    total += (gap - margin - 1) // self.p * self.p
                prev = v
                out.append(v - total)
            if total and (b == _UNBOUNDED or b - block[-1] > margin):
                moved.update(zip(block, out))
        if not moved:
            return vals
        return tuple(moved.get(v, v) for v in vals)

    def quant(self, n: _Quant, env: dict) -> bool:
        vals = tuple(env[v] for v in n.order)
        if self.shift:
            vals = self.canonical(vals, self.reach(n))
        key = (id(n), vals)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        env = dict(zip(n.order, vals))
        out = self._quant(n, env, vals)
        self.memo[key] = out
        return out

    def _range(self, n: _Quant, env: dict):
        lo, hi = 0, self.B
        x = n.var
        for p in n.vparts:
            if not isinstance(p, _Cmp):
                continue
            holds = p.pos == n.is_ex     # the atom must hold (or fail) on survivors
            if p.op == "poslt":
                if p.x != x:
                    continue
                if holds:
                    hi = min(hi, p.c)
                else:
                    lo = max(lo, p.c)
                continue
            if p.x == x and p.y in env:
                v = env[p.y]
                if p.op == "lt":
                    hi, lo = (min(hi, v), lo) if holds else (hi, max(lo, v))
                elif p.op == "distlt":          # v < x + c  <=>  x > v - c
                    lo, hi = (max(lo, v - p.c + 1), hi) if holds else (lo, min(hi, v - p.c + 1))
                elif p.op == "succ" and holds:
                    lo, hi = max(lo, v + p.c), min(hi, v + p.c + 1)
            elif p.y == x and p.x in env:
                v = env[p.x]
                if p.op == "lt":
                    lo, hi = (max(lo, v + 1), hi) if holds else (lo, min(hi, v + 1))
                elif p.op == "distlt":          # x < v + c
                    lo, hi = (lo, min(hi, v + p.c)) if holds else (max(lo, v + p.c), hi)
                elif p.op == "succ" and holds:
                    lo, hi = max(lo, v - p.c), min(hi, v - p.c + 1)
        return max(lo, 0), min(hi, self.B)

    def candidates(self, lo: int, hi: int, radius: int, pinned) -> np.ndarray:
        """[lo, hi) restricted to the prefix and radius-neighbourhoods of the
        landmarks and pinned values; with radius >= reach(body) + |t| every
        dropped position has a kept one of the same residue in its gap."""
        if lo >= hi:
            return np.zeros(0, dtype=np.int64)
        if not self.prune:
            return np.arange(lo, hi, dtype=np.int64)
        if hi - lo <= 4 * radius + self.S:
            return np.arange(lo, hi, dtype=np.int64)
        pieces = []
        if lo < self.S:
            pieces.append(np.arange(lo, min(hi, self.S), dtype=np.int64))
        for m in set(self.static).union(pinned, (lo, hi)):
            if m == _UNBOUNDED:
                continue
            a, b = max(lo, m - radius), min(hi, m + radius + 1)
            if a < b:
                pieces.append(np.arange(a, b, dtype=np.int64))
        return np.unique(np.concatenate(pieces))

    def _quant(self, n: _Quant, env: dict, vals: tuple) -> bool:
        lo, hi = self._range(n, env)
        cands = self.candidates(lo, hi, self.reach(n.body) + self.p, vals)
        if cands.size and n.vparts:
            venv = {**env, n.var: cands}
            keep = None
            self.vcache = {("o", id(cands)): (cands, cands, 0)}
            try:
                for p in n.vparts:
                    r = np.broadcast_to(self.vec(p, venv), cands.shape)
                    if not n.is_ex:
                        r = ~r
                    keep = r if keep is None else keep & r
                    if not keep.any():
                        break
            finally:
                self.vcache = {}
            cands = cands[keep]
        if not n.rparts:
            return bool(cands.size) if n.is_ex else not cands.size
        x = n.var
        if n.is_ex:
            for e in cands.tolist():
                env[x] = e
                if all(self.ev(r, env) for r in n.rparts):
                    return True
            return False
        for e in cands.tolist():
            env[x] = e
            if not any(self.ev(r, env) for r in n.rparts):
                return False
        return True


def compile_formula(phi: fo.Fo, alphabet) -> tuple[_Node, _Compiler, dict]:
    codes = {a: k for k, a in enumerate(alphabet)}
    comp = _Compiler(codes, len(codes))
    return comp.compile(phi, True), comp, codes


def eval_up_word(w: UpWord, phi: fo.Fo, bound: int | None = None, *,
                 prune: bool = True, shift: bool = True) -> bool:
    """Truth of the sentence phi on w.  With a bound every quantifier is
    relativized to [0, bound); without one the answer is exact for the
    infinite word (pruning is then mandatory)."""
    if not fo.is_sentence(phi):
        raise ValueError("eval_up_word expects a sentence")
    if any(isinstance(g, fo.Sim) for g in fo.subformulas(phi)):
        raise ValueError("Sim atoms must be translated away before evaluation")
    if bound is not None and bound < 1:
        raise ValueError("bound must be positive")
    if bound is None and not prune:
        raise ValueError("exact evaluation needs pruning")
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        root, comp, codes = compile_formula(phi, w.alphabet())
        return bool(_Evaluator(w, bound, codes, comp, root, prune, shift).ev(root, {}))
    finally:
        sys.setrecursionlimit(old)
