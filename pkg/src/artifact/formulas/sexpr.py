"""S-expression reader and printers for both logics."""

from __future__ import annotations

import re

from . import fo, ltl


class FormulaSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s();]+))")


def read_sexpr(text: str):
    """Nested lists of atoms (strings).  Exactly one expression is expected."""
    pos, stack, out = 0, [], []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise FormulaSyntaxError(f"unexpected character at offset {pos}")
        pos = m.end()
        comment, lpar, rpar, atom = m.groups()
        if comment:
            continue
        if lpar:
            stack.append([])
        elif rpar:
            if not stack:
                raise FormulaSyntaxError(f"unbalanced ')' at offset {m.start(3)}")
            done = stack.pop()
            (stack[-1] if stack else out).append(done)
        elif atom:
            (stack[-1] if stack else out).append(atom)
    if stack:
        raise FormulaSyntaxError("unbalanced '(': missing ')'")
    if len(out) != 1:
        raise FormulaSyntaxError(f"expected one expression, found {len(out)}")
    return out[0]


def _arity(head, args, n):
    if len(args) != n:
        raise FormulaSyntaxError(f"'{head}' expects {n} argument(s), got {len(args)}")


def _symbol(x, what="symbol"):
    if not isinstance(x, str):
        raise FormulaSyntaxError(f"expected a {what}, got a list")
    return x


def _register(x) -> int:
    x = _symbol(x, "register")
    if not x.isdigit():
        raise FormulaSyntaxError(f"malformed register {x!r}")
    r = int(x)
    if r == 0:
        raise FormulaSyntaxError("registers range over positive integers, not 0")
    return r


# -- LTL -------------------------------------------------------------------

def ltl_from_sexpr(e) -> ltl.Ltl:
    if isinstance(e, str):
        if e == "true":
            return ltl.TRUE
        if e == "false":
            return ltl.FALSE
        raise FormulaSyntaxError(f"unexpected symbol {e!r}; state atoms are written (state q)")
    if not e:
        raise FormulaSyntaxError("empty expression")
    head, args = _symbol(e[0], "operator"), e[1:]
    sub = [ltl_from_sexpr(a) for a in args] if head not in ("state", "up", "down") else None
    if head in ("true", "false"):
        _arity(head, args, 0)
        return ltl.TRUE if head == "true" else ltl.FALSE
    if head == "state":
        _arity(head, args, 1)
        return ltl.State(_symbol(args[0]))
    if head == "up":
        _arity(head, args, 1)
        return ltl.Reg(_register(args[0]))
    if head == "down":
        _arity(head, args, 2)
        return ltl.Freeze(_register(args[0]), ltl_from_sexpr(args[1]))
    if head == "not":
        _arity(head, args, 1)
        return ltl.Not(sub[0])
    if head in ("and", "or"):
        if len(sub) < 2:
            raise FormulaSyntaxError(f"'{head}' expects at least 2 arguments")
        return ltl.And(tuple(sub)) if head == "and" else ltl.disj(*sub)
    if head == "imp":
        _arity(head, args, 2)
        return ltl.implies(*sub)
    if head == "U":
        _arity(head, args, 2)
        return ltl.Until(*sub)
    unary = {"X": ltl.Next, "F": ltl.F, "G": ltl.G, "Fp": ltl.Fp, "Gp": ltl.Gp}
    if head in unary:
        _arity(head, args, 1)
        return unary[head](sub[0])
    raise FormulaSyntaxError(f"unknown LTL operator {head!r}")


def parse_ltl(text: str) -> ltl.Ltl:
    return ltl_from_sexpr(read_sexpr(text))


def render_ltl(f: ltl.Ltl) -> str:
    if isinstance(f, ltl.Top):
        return "true"
    if isinstance(f, ltl.State):
        return f"(state {f.name})"
    if isinstance(f, ltl.Reg):
        return f"(up {f.r})"
    if isinstance(f, ltl.Not):
        return f"(not {render_ltl(f.arg)})"
    if isinstance(f, ltl.And):
        return "(and " + " ".join(render_ltl(a) for a in f.args) + ")"
    if isinstance(f, ltl.Next):
        return f"(X {render_ltl(f.arg)})"
    if isinstance(f, ltl.Until):
        return f"(U {render_ltl(f.left)} {render_ltl(f.right)})"
    if isinstance(f, ltl.Freeze):
        return f"(down {f.r} {render_ltl(f.arg)})"
    raise TypeError(f"not an LTL formula: {f!r}")


# -- FO --------------------------------------------------------------------

_CONST_HEAD = re.compile(r"(succ\+|distlt|poslt)(\d+)\Z")


def _letter(tok: str):
    if tok == "BOT":
        return fo.BOT
    return int(tok) if tok.isdigit() else tok


def fo_from_sexpr(e) -> fo.Fo:
    if isinstance(e, str):
        if e == "true":
            return fo.TRUE
        if e == "false":
            return fo.FALSE
        raise FormulaSyntaxError(f"unexpected symbol {e!r}")
    if not e:
        raise FormulaSyntaxError("empty expression")
    head, args = _symbol(e[0], "operator"), e[1:]
    m = _CONST_HEAD.match(head)
    if m:
        kind, c = m.group(1), int(m.group(2))
        try:
            if kind == "poslt":
                _arity(head, args, 1)
                return fo.PosLt(_symbol(args[0]), c)
            _arity(head, args, 2)
            x, y = _symbol(args[0]), _symbol(args[1])
            return fo.Succ(x, y, c) if kind == "succ+" else fo.DistLt(x, y, c)
        except ValueError as err:
            if isinstance(err, FormulaSyntaxError):
                raise
            raise FormulaSyntaxError(f"malformed constant in {head!r}: {err}") from None
    if head.startswith(("succ", "distlt", "poslt")):
        raise FormulaSyntaxError(f"malformed constant in {head!r}")
    if head in ("true", "false"):
        _arity(head, args, 0)
        return fo.TRUE if head == "true" else fo.FALSE
    if head == "letter":
        _arity(head, args, 2)
        return fo.Letter(_letter(_symbol(args[0])), _symbol(args[1]))
    if head in ("sim", "lt", "le"):
        _arity(head, args, 2)
        x, y = _symbol(args[0]), _symbol(args[1])
        return {"sim": fo.Sim, "lt": fo.Lt, "le": fo.le}[head](x, y)
    if head in ("exists", "forall"):
        _arity(head, args, 2)
        body = fo_from_sexpr(args[1])
        x = _symbol(args[0])
        return fo.Exists(x, body) if head == "exists" else fo.forall(x, body)
    sub = [fo_from_sexpr(a) for a in args]
    if head == "not":
        _arity(head, args, 1)
        return fo.Not(sub[0])
    if head in ("and", "or"):
        if len(sub) < 2:
            raise FormulaSyntaxError(f"'{head}' expects at least 2 arguments")
        return fo.And(tuple(sub)) if head == "and" else fo.disj(*sub)
    if head == "imp":
        _arity(head, args, 2)
        return fo.implies(*sub)
    raise FormulaSyntaxError(f"unknown FO operator {head!r}")


def parse_fo(text: str) -> fo.Fo:
    return fo_from_sexpr(read_sexpr(text))


def render_fo(f: fo.Fo) -> str:
    parts: list[str] = []

    def go(g):
        if isinstance(g, fo.Top):
            parts.append("true")
        elif isinstance(g, fo.Letter):
            parts.append(f"(letter {g.letter} {g.var})")
        elif isinstance(g, fo.Sim):
            parts.append(f"(sim {g.x} {g.y})")
        elif isinstance(g, fo.Lt):
            parts.append(f"(lt {g.x} {g.y})")
        elif isinstance(g, fo.Succ):
            parts.append(f"(succ+{g.c} {g.x} {g.y})")
        elif isinstance(g, fo.DistLt):
            parts.append(f"(distlt{g.c} {g.x} {g.y})")
        elif isinstance(g, fo.PosLt):
            parts.append(f"(poslt{g.c} {g.x})")
        elif isinstance(g, fo.Not):
            parts.append("(not ")
            go(g.arg)
            parts.append(")")
        elif isinstance(g, fo.And):
            parts.append("(and")
            for a in g.args:
                parts.append(" ")
                go(a)
            parts.append(")")
        elif isinstance(g, fo.Exists):
            parts.append(f"(exists {g.var} ")
            go(g.body)
            parts.append(")")
        else:
            raise TypeError(f"not an FO formula: {g!r}")

    go(f)
    return "".join(parts)


def render(f) -> str:
    return render_ltl(f) if isinstance(f, ltl.Ltl) else render_fo(f)
