"""From freeze LTL to first-order logic.

Temporal positions live in three recycled variables y0, y1, y2; register r
is mirrored by the variable x<r>.  The result has y0 as its only free
variable.
"""

from __future__ import annotations

from . import fo, ltl

Y = ("y0", "y1", "y2")


def reg_var(r: int) -> str:
    return f"x{r}"


def ltl_to_fo(phi: ltl.Ltl, n: int | None = None) -> fo.Fo:
    if not ltl.is_sentence(phi):
        raise ValueError("ltl_to_fo expects a sentence (every up_r bound by a down_r)")
    memo: dict[tuple[int, int], fo.Fo] = {}

    def T(f, i):
        key = (id(f), i)
        if key in memo:
            return memo[key]
        y, y1, y2 = Y[i], Y[(i + 1) % 3], Y[(i + 2) % 3]
        if isinstance(f, ltl.Top):
            out = fo.TRUE
        elif isinstance(f, ltl.State):
            out = fo.Letter(f.name, y)
        elif isinstance(f, ltl.Reg):
            out = fo.Sim(y, reg_var(f.r))
        elif isinstance(f, ltl.Not):
            out = fo.Not(T(f.arg, i))
        elif isinstance(f, ltl.And):
            out = fo.And(tuple(T(a, i) for a in f.args))
        elif isinstance(f, ltl.Next):
            out = fo.Exists(y1, fo.And((fo.Succ(y1, y, 1), T(f.arg, (i + 1) % 3))))
        elif isinstance(f, ltl.Until):
            between = fo.And((fo.le(y, y2), fo.Lt(y2, y1)))
            out = fo.Exists(y1, fo.And((
                fo.le(y, y1),
                T(f.right, (i + 1) % 3),
                fo.forall(y2, fo.implies(between, T(f.left, (i + 2) % 3))),
            )))
        elif isinstance(f, ltl.Freeze):
            x = reg_var(f.r)
            out = fo.Exists(x, fo.And((fo.eq(x, y), T(f.arg, i))))
        else:
            raise TypeError(f"not an LTL formula: {f!r}")
        memo[key] = out
        return out

    return T(phi, 0)


def close_at_start(f: fo.Fo, y: str = "y0") -> fo.Fo:
    """Pin the free position variable to the first position."""
    return fo.Exists(y, fo.And((fo.PosLt(y, 1), f)))
