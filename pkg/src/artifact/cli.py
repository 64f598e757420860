"""Command-line front end.

Exit codes: 0 success, 1 property failure (oracle-check, selftest),
2 usage error, 3 input-format error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import lasso, purify, reductions, semantics
from .checker import INFINITARY, FINITARY, check, reduce_to_word
from .formulas import (FormulaSyntaxError, close_at_start, fo, ltl, ltl_to_fo, parse_fo,
                       parse_ltl, render, render_fo, render_ltl)
from .lasso import NotDeterministicError
from .oca import OcaError, is_deterministic, parse_oca, render_oca

DEFAULT_SEED = 0


class InputError(Exception):
    """Bad input file: reported with exit status 3."""


class UsageError(Exception):
    """Bad flag combination: reported with exit status 2."""


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as err:
        raise InputError(f"{path}: {err.strerror}") from None


def _logic(path: str, override) -> str:
    if override:
        return override
    ext = os.path.splitext(path)[1]
    if ext in (".ltl", ".fo"):
        return ext[1:]
    raise UsageError(f"cannot infer the logic of {path!r}; use --logic ltl|fo")


def load_oca(path):
    try:
        return parse_oca(_read(path))
    except OcaError as err:
        raise InputError(f"{path}: {err}") from None


def load_formula(path, logic=None):
    kind = _logic(path, logic)
    try:
        return (parse_ltl if kind == "ltl" else parse_fo)(_read(path))
    except FormulaSyntaxError as err:
        raise InputError(f"{path}: {err}") from None


def _emit(args, blocks: dict):
    """Write {suffix: text} either to --out PREFIX.suffix or to stdout."""
    if args.out:
        for suffix, text in blocks.items():
            with open(f"{args.out}.{suffix}", "w") as fh:
                fh.write(text)
        return
    if args.format == "json":
        print(json.dumps(blocks, indent=2, sort_keys=True))
        return
    for suffix, text in blocks.items():
        print(f"# --- {suffix}")
        print(text.rstrip("\n"))


def _formula_block(f) -> tuple[str, str]:
    return ("ltl" if isinstance(f, ltl.Ltl) else "fo"), render(f) + "\n"


# ---------------------------------------------------------------- commands

def cmd_analyze(args):
    a = load_oca(args.automaton)
    if not is_deterministic(a):
        raise NotDeterministicError()
    d = lasso.summary_json(lasso.analyze(a))
    if args.format == "json":
        print(json.dumps(d, sort_keys=True))
    else:
        print(f"kind {d['kind']}  k1 {d['k1']}  k2 {d['k2']}  k_inc {d['k_inc']}")
        print(f"beta1 {d['beta1']}  beta2 {d['beta2']}  gamma {d['gamma']}  l {d['l']}")
    return 0


def cmd_check(args):
    a = load_oca(args.automaton)
    phi = load_formula(args.formula, args.logic)
    if not is_deterministic(a):
        raise NotDeterministicError()
    if args.bound is not None:
        word, _ = reduce_to_word(a, phi, args.mode)
        if word is not None and args.bound < len(word.s) + len(word.t):
            raise UsageError(f"--bound must be at least |s| + |t| = {len(word.s) + len(word.t)}")
    try:
        v = check(a, phi, args.mode, bound=args.bound, universal=args.universal, timing=args.timing)
    except ValueError as err:
        if isinstance(err, NotDeterministicError):
            raise
        raise InputError(str(err)) from None
    if args.format == "json":
        print(json.dumps(v.to_json(), sort_keys=True))
    else:
        print(f"{'true' if v.answer else 'false'}  ({v.mode}, {v.branch.value})")
    return 0


def cmd_purify(args):
    a = load_oca(args.automaton)
    phi = load_formula(args.formula, args.logic)
    try:
        inst = purify.purify_ltl(a, phi) if isinstance(phi, ltl.Ltl) else purify.purify_fo(a, phi)
    except ValueError as err:
        raise InputError(str(err)) from None
    suffix, text = _formula_block(inst.formula)
    _emit(args, {"oca": render_oca(inst.automaton), suffix: text})
    return 0


def cmd_weakdet(args):
    a = load_oca(args.automaton)
    phi = load_formula(args.formula, args.logic or "ltl")
    if not isinstance(phi, ltl.Ltl):
        raise UsageError("weakdet translates LTL formulas only")
    try:
        b, f = purify.weak_determinize(a, phi)
    except ValueError as err:
        raise InputError(str(err)) from None
    _emit(args, {"oca": render_oca(b), "ltl": render_ltl(f) + "\n"})
    return 0


def cmd_translate(args):
    phi = load_formula(args.formula, args.logic or "ltl")
    if not isinstance(phi, ltl.Ltl):
        raise UsageError("translate expects an LTL formula")
    try:
        out = ltl_to_fo(phi)
    except ValueError as err:
        raise InputError(str(err)) from None
    if args.closed:
        out = close_at_start(out)
    print(render_fo(out))
    return 0


def cmd_gen_qbf(args):
    try:
        q = reductions.parse_qbf(_read(args.qbf))
    except FormulaSyntaxError as err:
        raise InputError(f"{args.qbf}: {err}") from None
    a, f = reductions.qbf_to_instance(q)
    _emit(args, {"oca": render_oca(a), "ltl": render_ltl(f) + "\n"})
    return 0


def cmd_gen_minsky(args):
    try:
        m = reductions.parse_2cm(_read(args.machine))
    except ValueError as err:
        raise InputError(f"{args.machine}: {err}") from None
    inst = reductions.minsky_to_instance(m)
    blocks = {"oca": render_oca(inst.automaton), "ltl": render_ltl(inst.formula) + "\n",
              "max_len": f"{inst.max_len}\n"}
    if args.search:
        n = args.max_len or inst.max_len
        run = semantics.bounded_witness_search(inst.automaton, inst.formula, n)
        if run is None:
            blocks["witness"] = f"none up to length {n}\n"
        else:
            steps = reductions.project_witness(inst, run)
            blocks["witness"] = json.dumps([[c.state, c.counter] for c in run]) + "\n"
            blocks["replay"] = ("valid" if reductions.replay_2cm(m, steps) else "INVALID") + "\n"
    _emit(args, blocks)
    return 0


def cmd_gen_sat(args):
    phi = load_formula(args.formula, args.logic or "ltl")
    if not isinstance(phi, ltl.Ltl):
        raise UsageError("gen-sat expects an LTL formula")
    try:
        a, f = reductions.satltl_to_instance(phi)
    except ValueError as err:
        raise InputError(str(err)) from None
    _emit(args, {"oca": render_oca(a), "ltl": render_ltl(f) + "\n"})
    return 0


def cmd_oracle_check(args):
    from .suites import SUITES
    seed = DEFAULT_SEED if args.seed is None else args.seed
    if args.format != "json":
        print(f"seed {seed}")
    failed = 0
    rows = []
    for name, suite in SUITES.items():
        if args.suite and name not in args.suite:
            continue
        start = time.perf_counter()
        res = suite(random.Random(f"{seed}:{name}"), args.count)
        failed += res.failures
        rows.append({"suite": name, "cases": res.cases, "failures": res.failures,
                     "first_failure": res.first_failure})
        if args.format != "json":
            status = "pass" if not res.failures else "FAIL"
            print(f"{status}  {name}: {res.cases} cases, {res.failures} failures"
                  f" ({time.perf_counter() - start:.1f}s)")
            if res.first_failure:
                print(f"      first failure: {res.first_failure}")
    if args.format == "json":
        print(json.dumps({"seed": seed, "suites": rows}, sort_keys=True))
    return 1 if failed else 0


def cmd_selftest(args):
    from .golden import run_goldens
    results = run_goldens()
    bad = [r for r in results if not r[1]]
    if args.format == "json":
        print(json.dumps([{"name": g.name, "tag": g.tag, "passed": ok, "error": msg}
                          for g, ok, msg in results], sort_keys=True))
    else:
        for g, ok, msg in results:
            print(f"{'pass' if ok else 'FAIL'}  [{g.tag}] {g.name}" + (f"  {msg}" if msg else ""))
        print(f"{len(results) - len(bad)}/{len(results)} golden examples pass")
    return 1 if bad else 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write PREFIX.<kind> files instead of printing")
    common.add_argument("--logic", choices=("ltl", "fo"), help="override the extension-based choice")

    p = argparse.ArgumentParser(prog="artifact", description="Model checking one-counter automata.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="lasso summary of the unique run")
    s.add_argument("automaton")
    s.set_defaults(fn=cmd_analyze)

    s = sub.add_parser("check", parents=[common], help="decide A |= phi")
    s.add_argument("automaton")
    s.add_argument("formula")
    s.add_argument("--mode", choices=(FINITARY, INFINITARY), default=INFINITARY)
    s.add_argument("--bound", type=int, help="relativize quantifiers to [0, BOUND)")
    s.add_argument("--universal", action="store_true", help="every run instead of some run")
    s.add_argument("--timing", action="store_true", help="report millis")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("purify", parents=[common], help="replace state atoms by counter patterns")
    s.add_argument("automaton")
    s.add_argument("formula")
    s.set_defaults(fn=cmd_purify)

    s = sub.add_parser("weakdet", parents=[common], help="weak determinization")
    s.add_argument("automaton")
    s.add_argument("formula")
    s.set_defaults(fn=cmd_weakdet)

    s = sub.add_parser("translate", parents=[common], help="LTL with freeze to first-order logic")
    s.add_argument("formula")
    s.add_argument("--closed", action="store_true", help="pin y0 to the first position")
    s.set_defaults(fn=cmd_translate)

    s = sub.add_parser("gen-qbf", parents=[common], help="QBF to model checking instance")
    s.add_argument("qbf")
    s.set_defaults(fn=cmd_gen_qbf)

    s = sub.add_parser("gen-minsky", parents=[common], help="two-counter machine to finitary instance")
    s.add_argument("machine")
    s.add_argument("--search", action="store_true", help="look for a witness run")
    s.add_argument("--max-len", type=int, help="witness search length (default: reported max_len)")
    s.set_defaults(fn=cmd_gen_minsky)

    s = sub.add_parser("gen-sat", parents=[common], help="one-register LTL to the omega-SAT instance")
    s.add_argument("formula")
    s.set_defaults(fn=cmd_gen_sat)

    s = sub.add_parser("oracle-check", parents=[common], help="randomized equivalence suites")
    s.add_argument("--seed", type=int)
    s.add_argument("--count", type=int, default=50, help="cases per suite")
    s.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    s.set_defaults(fn=cmd_oracle_check)

    s = sub.add_parser("selftest", parents=[common], help="golden examples")
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    for flag in ("bound", "count", "max_len", "seed"):
        v = getattr(args, flag, None)
        if v is not None and v < (1 if flag != "seed" else 0):
            print(f"artifact: error: --{flag.replace('_', '-')} must be positive", file=sys.stderr)
            return 2
    try:
        return args.fn(args)
    except UsageError as err:
        print(f"artifact: error: {err}", file=sys.stderr)
        return 2
    except (InputError, NotDeterministicError) as err:
        print(f"artifact: error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
