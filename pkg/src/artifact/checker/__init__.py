"""Model checking deterministic one-counter automata.

The unique run is summarized as a lasso, data equality along it is encoded
by finite tables over window positions, and the resulting data-free formula
is evaluated on an ultimately periodic word.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from ..formulas import close_at_start, fo, is_pure, is_sentence, ltl, ltl_to_fo
from ..lasso import (DerivedConstants, LassoSummary, NotDeterministicError, accepting_status,
                     analyze, constants)
from ..oca import Oca, is_deterministic
from .evaluate import MAX_BOUND, UpWord, compile_formula, default_bound, eval_up_word
from .tables import (FINITE, POS, ZERO, SimTables, build_tables, build_word, relativize_finitary,
                     translate_sim)

FINITARY, INFINITARY = "finitary", "infinitary"


class Branch(str, Enum):
    INF_KINC_POS = "InfKincPos"
    INF_KINC_ZERO = "InfKincZero"
    NO_ACCEPTING_INF_RUN = "NoAcceptingInfRun"
    FIN_WITH_INF_RUN = "FinWithInfRun"
    FIN_NO_INF_RUN = "FinNoInfRun"


@dataclass(frozen=True)
class Verdict:
    answer: bool
    mode: str
    branch: Branch
    summary: LassoSummary
    constants: Optional[DerivedConstants] = None
    s_len: Optional[int] = None
    t_len: Optional[int] = None
    bound_used: Optional[int] = None
    millis: Optional[float] = None

    def to_json(self) -> dict:
        d = self.constants
        s = self.summary
        return {
            "answer": self.answer, "mode": self.mode, "branch": self.branch.value,
            "k1": s.k1 if s.infinite else None, "k2": s.k2 if s.infinite else None,
            "k_inc": s.k_inc if s.infinite else None,
            "beta1": d.beta1 if d else None, "beta2": d.beta2 if d else None,
            "gamma": d.gamma if d else None, "l": d.l if d else None,
            "word": {"s_len": self.s_len, "t_len": self.t_len},
            "bound_used": self.bound_used, "millis": self.millis,
        }


def prepare(a: Oca, phi: Union[ltl.Ltl, fo.Fo], *, purify: bool = True):
    """Purify if needed and move LTL into FO; returns the automaton and the
    FO sentence that the table pipeline consumes."""
    if not is_sentence(phi):
        raise ValueError("check expects a sentence")
    if purify and not is_pure(phi):
        from ..purify import purify_fo, purify_ltl
        inst = purify_ltl(a, phi) if isinstance(phi, ltl.Ltl) else purify_fo(a, phi)
        a, phi = inst.automaton, inst.formula
    if isinstance(phi, ltl.Ltl):
        phi = close_at_start(ltl_to_fo(phi))
    return a, phi


def check(a: Oca, phi: Union[ltl.Ltl, fo.Fo], mode: str = INFINITARY, *,
          bound: Optional[int] = None, purify: bool = True, universal: bool = False,
          prune: bool = True, shift: bool = True, timing: bool = False) -> Verdict:
    """Is there an accepting (finite or infinite, per mode) run satisfying phi?

    bound=None decides the question exactly; an explicit bound relativizes
    every quantifier of the final FO sentence to positions below it.  With
    purify=False, state atoms are read directly off the window letters.
    """
    if mode not in (FINITARY, INFINITARY):
        raise ValueError(f"unknown mode {mode!r}")
    if not is_deterministic(a):
        raise NotDeterministicError()
    if universal:
        if mode != INFINITARY:
            raise ValueError("the universal variant is only offered for the infinitary mode")
        neg = ltl.neg(phi) if isinstance(phi, ltl.Ltl) else fo.neg(phi)
        v = check(a, neg, mode, bound=bound, purify=purify, prune=prune, shift=shift, timing=timing)
        return Verdict(not v.answer, v.mode, v.branch, v.summary, v.constants,
                       v.s_len, v.t_len, v.bound_used, v.millis)
    start = time.perf_counter()
    s, d, branch, word, g = _reduce(a, phi, mode, purify)

    def done(answer, used=None):
        millis = round((time.perf_counter() - start) * 1000, 3) if timing else None
        return Verdict(bool(answer), mode, branch, s, d,
                       len(word.s) if word else None, len(word.t) if word else None, used, millis)

    if word is None:
        return done(False)
    if bound is not None and bound < 1:
        raise ValueError("bound must be positive")
    return done(eval_up_word(word, g, bound, prune=prune, shift=shift), bound)


def _reduce(a, phi, mode, purify):
    a, f = prepare(a, phi, purify=purify)
    s = analyze(a)
    status = accepting_status(a, s)
    d = constants(s) if s.infinite else None
    if mode == INFINITARY:
        if not status.has_accepting_infinite:
            return s, d, Branch.NO_ACCEPTING_INF_RUN, None, None
        branch = Branch.INF_KINC_POS if s.k_inc > 0 else Branch.INF_KINC_ZERO
    else:
        branch = Branch.FIN_WITH_INF_RUN if s.infinite else Branch.FIN_NO_INF_RUN
    tables = build_tables(s, d, mode, a.accepting)
    word = build_word(s, d, mode)
    g = translate_sim(f, tables, direct_letters=True)
    if mode == FINITARY:
        g = relativize_finitary(g, tables)
    return s, d, branch, word, g


def reduce_to_word(a: Oca, phi, mode: str = INFINITARY, *, purify: bool = True):
    """The ultimately periodic word and data-free sentence check evaluates
    (None, None when the infinitary answer is settled without them)."""
    if not is_deterministic(a):
        raise NotDeterministicError()
    _, _, _, word, g = _reduce(a, phi, mode, purify)
    return word, g


def relativization_bound(a: Oca, phi, mode: str = INFINITARY, *, purify: bool = True) -> Optional[int]:
    """B_default of the sentence check would evaluate."""
    word, g = reduce_to_word(a, phi, mode, purify=purify)
    return None if word is None else default_bound(word, g)


__all__ = [
    "Branch", "Verdict", "check", "prepare", "reduce_to_word", "relativization_bound",
    "FINITARY", "INFINITARY",
    "UpWord", "eval_up_word", "default_bound", "compile_formula", "MAX_BOUND",
    "SimTables", "build_tables", "build_word", "translate_sim", "relativize_finitary",
    "POS", "ZERO", "FINITE",
]
