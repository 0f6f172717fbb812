"""Command-line front end.

Exit codes: 0 when the claim is confirmed, 1 when it is refuted or fails,
2 on usage errors (bad options, unparsable formulas, unreadable files).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .fixpoint import FixpointError, VariableConditionError, fixed_point, verify_fixed_point
from .formula import ParseError, depth, parse, render, size, variables
from .logics import LOGICS, UnknownLogic, frame_class_check, lookup
from .paper_models import SHAPES, build, family, fig2_check, no_fixed_point_scan
from .search import SearchBudget, search
from .semantics import FrameError, FrameProperty, check_frame_property, holds, truth_set
from .serialize import dumps, load_frame, load_model, save, to_dot
from .suite import SUITE, run_suite


class UsageError(Exception):
    pass


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as e:
        raise UsageError(str(e)) from None


def _logic(name: str):
    try:
        return lookup(name)
    except UnknownLogic:
        raise UsageError(f"unknown logic {name!r}; known: {', '.join(LOGICS)}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _load(loader, path):
    try:
        return loader(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None
    except FrameError as e:
        raise UsageError(f"{path}: {e}") from None


def _budget(args) -> SearchBudget:
    return SearchBudget(args.max_size, strategy=args.strategy, sampling_seed=args.seed)


def _print_witness(rep, dot_path=None) -> None:
    w = rep.witness
    print(f"countermodel ({len(w.model.frame.worlds)} worlds), fails at world {w.world}:")
    print(dumps(w.model))
    if dot_path:
        with open(dot_path, "w", encoding="utf-8") as fh:
            fh.write(to_dot(w.model, highlight=w.world))
        print(f"wrote {dot_path}")


def _search_line(rep) -> str:
    modes = ", ".join(f"{n}:{m}" for n, m in sorted(rep.modes.items()))
    return f"{rep}  frames={rep.frames_checked} modes=[{modes}] time={rep.elapsed:.2f}s"


# -- commands --------------------------------------------------------------------

def cmd_parse(args) -> int:
    f = _formula(args.formula)
    print(render(f))
    print(f"depth={depth(f)} size={size(f)} variables={','.join(sorted(variables(f))) or '-'}")
    return 0


def cmd_check_model(args) -> int:
    f = _formula(args.formula)
    m = _load(load_model, args.model)
    if args.world is not None:
        if args.world not in m.frame.worlds:
            raise UsageError(f"unknown world {args.world!r}")
        ok = holds(m, args.world, f)
        print(f"{args.world} {'forces' if ok else 'does not force'} {render(f)}")
        return 0 if ok else 1
    ts = truth_set(m, f)
    print(f"true at: {', '.join(str(w) for w in m.frame.worlds if w in ts) or '-'}")
    ok = len(ts) == len(m.frame.worlds)
    print("valid in model" if ok else "not valid in model")
    return 0 if ok else 1


def cmd_check_frame(args) -> int:
    L = _logic(args.logic)
    fr = _load(load_frame, args.frame)
    for prop in FrameProperty:
        if prop in L.closed_props or prop is FrameProperty.BASE:
            print(f"{prop.value}: {'holds' if check_frame_property(fr, prop) else 'fails'}")
    ok = frame_class_check(L, fr)
    print(f"frame {'is' if ok else 'is not'} in the class of {L.name}")
    return 0 if ok else 1


def cmd_fixpoint(args) -> int:
    L = _logic(args.logic)
    a = _formula(args.formula)
    if args.verify and args.max_size is None:
        raise UsageError("--verify needs --max-size")
    try:
        res = fixed_point(L, a, args.var)
    except FixpointError as e:
        print(f"no fixed point constructed: {e}", file=sys.stderr)
        return 1
    print(render(res.fixpoint))
    if args.trace:
        for formula, step in res.trace:
            print(f"  {step}: {formula}")
    if not args.verify:
        return 0
    print(f"seed: {args.seed}")
    try:
        rep = verify_fixed_point(L, a, args.var, res.fixpoint, args.max_size, _budget(args))
    except VariableConditionError as e:
        print(f"variable condition violated: {e}", file=sys.stderr)
        return 1
    print(_search_line(rep))
    if rep.refuted:
        _print_witness(rep)
        return 1
    return 0


def cmd_refute(args) -> int:
    L = _logic(args.logic)
    f = _formula(args.formula)
    print(f"seed: {args.seed}")
    rep = search(L, f, _budget(args))
    print(_search_line(rep))
    if rep.refuted:
        _print_witness(rep, args.dot)
        return 1
    return 0


def cmd_paper(args) -> int:
    fam = family(args.figure)
    if args.scan and fam.value == 2:
        raise UsageError("--scan is available for figures 3, 4 and 5")
    if args.scan and args.depth is None:
        raise UsageError("--scan needs --depth")
    if args.scan and args.n < 3:
        raise UsageError("--scan needs --n of at least 3")
    m = build(fam, args.n)
    if args.json:
        save(m, args.json)
        print(f"wrote {args.json}")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(m))
        print(f"wrote {args.dot}")
    if args.check:
        if fam.value == 2:
            lines = fig2_check()
            for line in lines:
                print(f"{'ok  ' if line.ok else 'FAIL'} {line.label}")
            return 0 if all(line.ok for line in lines) else 1
        L = lookup(SHAPES[fam][2])
        ok = frame_class_check(L, m.frame)
        print(f"{'ok  ' if ok else 'FAIL'} truncation at {args.n} is in the class of {L.name}")
        return 0 if ok else 1
    if args.scan:
        rep = no_fixed_point_scan(fam, None, args.n, args.depth)
        print(
            f"figure {rep.figure} shape {rep.shape} N={rep.N} depth<={rep.max_depth}: "
            f"{len(rep.candidates)} candidates covering {rep.formulas_covered} formulas, "
            f"{len(rep.survivors)} survivors, "
            f"{len(rep.unstable)} unstable, time={rep.elapsed:.2f}s"
        )
        for c in rep.survivors:
            print(f"SURVIVOR {render(c.formula)}")
        print("every candidate fails" if rep.ok else "scan FAILED")
        return 0 if rep.ok else 1
    if not (args.json or args.dot):
        print(dumps(m))
    return 0


def cmd_suite(args) -> int:
    names = args.name or None
    if names:
        unknown = [n for n in names if n not in SUITE]
        if unknown:
            raise UsageError(f"unknown suite entries: {', '.join(unknown)}; known: {', '.join(SUITE)}")
    print(f"seed: {args.seed}  max-size: {args.max_size}  samples: {args.samples}")
    results = run_suite(names, SearchBudget(args.max_size, sampling_seed=args.seed), args.samples, args.seed)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} entries passed")
    return 0 if not failed else 1


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="veltman", description="Interpretability logic toolkit over finite Veltman models.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and pretty-print a formula")
    p.add_argument("formula")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check-model", help="evaluate a formula on a model file")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--world")
    p.set_defaults(func=cmd_check_model)

    p = sub.add_parser("check-frame", help="test a frame file against a logic's frame class")
    p.add_argument("--frame", required=True)
    p.add_argument("--logic", required=True)
    p.set_defaults(func=cmd_check_frame)

    def search_opts(p):
        p.add_argument("--strategy", choices=("auto", "enumerate", "sat"), default="auto")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fixpoint", help="construct (and optionally verify) an explicit fixed point")
    p.add_argument("--logic", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--var", required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--max-size", type=_positive)
    p.add_argument("--trace", action="store_true")
    search_opts(p)
    p.set_defaults(func=cmd_fixpoint)

    p = sub.add_parser("refute", help="search for a countermodel")
    p.add_argument("--logic", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--max-size", type=_positive, required=True)
    p.add_argument("--dot")
    search_opts(p)
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("paper", help="build, check or scan the counter-model families")
    p.add_argument("--figure", type=int, choices=(2, 3, 4, 5), required=True)
    p.add_argument("--n", type=_positive, default=4)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--check", action="store_true")
    mode.add_argument("--scan", action="store_true")
    p.add_argument("--depth", type=int)
    p.add_argument("--json")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_paper)

    p = sub.add_parser("suite", help="run the semantic fact suite")
    p.add_argument("--name", nargs="+")
    p.add_argument("--max-size", type=_positive, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=60)
    p.set_defaults(func=cmd_suite)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"veltman: error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
