"""Syntax of freeze LTL and of the first-order dialect, plus the LTL to FO map."""

from . import fo, ltl
from .sexpr import (FormulaSyntaxError, parse_fo, parse_ltl, render, render_fo,
                    render_ltl)
from .translate import close_at_start, ltl_to_fo


def is_pure(f) -> bool:
    return ltl.is_pure(f) if isinstance(f, ltl.Ltl) else fo.is_pure(f)


def is_sentence(f) -> bool:
    return ltl.is_sentence(f) if isinstance(f, ltl.Ltl) else fo.is_sentence(f)


def register_count(f) -> int:
    return ltl.register_count(f)


quantifier_depth = fo.quantifier_depth
max_constant = fo.max_constant

__all__ = [
    "fo", "ltl", "FormulaSyntaxError", "parse_fo", "parse_ltl", "render",
    "render_fo", "render_ltl", "ltl_to_fo", "close_at_start", "is_pure",
    "is_sentence", "register_count", "quantifier_depth", "max_constant",
]
