"""Command line interface.

Exit codes: 0 success / claim holds, 1 claim fails or modules differ,
2 usage or input error (and verdicts left inconclusive by a budget).
"""

from __future__ import annotations

import argparse
import graphlib
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import harness
from .compose import CompositionError, compose
from .dot import to_dot
from .io import ModuleParseError, load_module, serialize_module
from .iso import find_isomorphism
from .module import InvalidModule
from .runs import recognize_run, runs_upto
from .steps import basic_step, enumerate_steps

OK, MISMATCH, USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _load(path: str):
    try:
        return load_module(path)
    except FileNotFoundError as exc:
        raise InputError(f"{path}: no such file") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_compose(args) -> int:
    a, b = _load(args.first), _load(args.second)
    name = args.name or f"{a.name}{b.name}"
    _emit(serialize_module(compose(a.body, b.body), name), args.output)
    return OK


def _universe(args) -> str:
    return "all" if getattr(args, "all", False) else "basic"


def cmd_steps(args) -> int:
    doc = _load(args.module)
    m = doc.body
    ts = [t for t in m.transitions if args.transition in (None, m.label(t).name)]
    if not ts:
        raise InputError(f"no transition labeled {args.transition!r}")
    n = 0
    truncated = False
    for t in ts:
        if args.all:
            steps, cut = enumerate_steps(m, t, args.budget)
            truncated |= cut
        else:
            steps = [basic_step(m, t)]
        for s in steps:
            sys.stdout.write(serialize_module(s.net, f"Step{n}"))
            sys.stdout.write("\n")
            n += 1
    if truncated:
        print(f"# truncated at budget {args.budget}", file=sys.stderr)
    return OK


def cmd_runs(args) -> int:
    doc = _load(args.module)
    rs = runs_upto(doc.body, args.max_steps, _universe(args), args.budget,
                   strict=not args.order_only)
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        for i, cf in enumerate(rs):
            (out / f"run{i:04d}.netmod").write_text(serialize_module(rs.module(cf), f"Run{i}"), "utf-8")
    if args.count or not args.emit:
        print(len(rs))
    if rs.truncated:
        print("# truncated: result is an under-approximation", file=sys.stderr)
    return OK


def cmd_recognize(args) -> int:
    m, r = _load(args.module).body, _load(args.run).body
    seq = recognize_run(m, r, _universe(args), args.budget)
    if seq is None:
        print("not recognizable as a composition of steps")
        return MISMATCH
    print(" ∘ ".join(s.label.name for s in seq) if seq else "[∅]")
    return OK


def cmd_iso(args) -> int:
    a, b = _load(args.first).body, _load(args.second).body
    w = find_isomorphism(a, b)
    if w is None:
        print("not isomorphic")
        return MISMATCH
    print("isomorphic")
    if args.witness:
        for x, y in w.items():
            print(f"{x} -> {y}")
    return OK


def cmd_export_dot(args) -> int:
    doc = _load(args.module)
    _emit(to_dot(doc.body, args.style, doc.name), args.output)
    return OK


_ARITY = {"theorem1": 2, "composition": 2, "associativity": 3, "identity": 1}


def cmd_verify(args) -> int:
    claim = args.claim
    options = {}
    if claim == "composition":
        options = {"k": args.max_steps, "universe": _universe(args), "budget": args.budget}
    if args.modules:
        if len(args.modules) != _ARITY[claim]:
            raise InputError(f"verify {claim} takes {_ARITY[claim]} module files")
        ops = [_load(p).body for p in args.modules]
        v = harness.evaluate(claim, ops, options)
        if v.status == "fails" and args.shrink:
            v = replace(v, witness=harness.shrink(v.witness))
        report = v.to_json()
        status = v.status
    else:
        c = harness.campaign(claim, args.samples, args.seed, options=options)
        if c.failures and args.shrink:
            first = c.failures[0]
            c.failures[0] = replace(first, witness=harness.shrink(first.witness))
        report = c.to_json()
        status = "holds" if c.ok and not c.inconclusive else ("fails" if not c.ok else "inconclusive")
    if args.json:
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(f"{claim}: {status}")
        for key in ("samples", "held", "not_applicable", "inconclusive", "failures", "detail"):
            if key in report:
                print(f"  {key}: {report[key]}")
        if report.get("witness"):
            print("  witness:")
            for text in report["witness"]["operands"]:
                print("    " + text.rstrip().replace("\n", "\n    "))
    return {"holds": OK, "not applicable": OK, "fails": MISMATCH}.get(status, USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netmod", description="Compose net modules, enumerate their runs, and check composition laws.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compose", help="compose two modules")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("-o", "--output")
    c.add_argument("--name")
    c.set_defaults(func=cmd_compose)

    def universe_flags(q):
        g = q.add_mutually_exclusive_group()
        g.add_argument("--basic-only", action="store_true", help="basic steps only (default)")
        g.add_argument("--all", action="store_true", help="every interface assignment of each step")
        q.add_argument("--budget", type=int, default=10_000)

    s = sub.add_parser("steps", help="list steps of a module")
    s.add_argument("module")
    s.add_argument("--transition", help="only steps of transitions with this label")
    universe_flags(s)
    s.set_defaults(func=cmd_steps)

    r = sub.add_parser("runs", help="enumerate runs up to a bound")
    r.add_argument("module")
    r.add_argument("--max-steps", type=int, required=True)
    universe_flags(r)
    r.add_argument("--order-only", action="store_true", help="allow branched places")
    r.add_argument("--count", action="store_true")
    r.add_argument("--emit", metavar="DIR")
    r.set_defaults(func=cmd_runs)

    rc = sub.add_parser("recognize", help="decompose a module into steps of another")
    rc.add_argument("module")
    rc.add_argument("run")
    universe_flags(rc)
    rc.set_defaults(func=cmd_recognize)

    v = sub.add_parser("verify", help="check a law on given or random modules")
    v.add_argument("claim", choices=sorted(_ARITY))
    v.add_argument("modules", nargs="*")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-steps", type=int, default=4)
    universe_flags(v)
    v.add_argument("--shrink", action="store_true")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("export-dot", help="render a module as DOT")
    d.add_argument("module")
    d.add_argument("--style", choices=("system", "run"), default="system")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_export_dot)

    i = sub.add_parser("iso", help="test two modules for isomorphism")
    i.add_argument("first")
    i.add_argument("second")
    i.add_argument("--witness", action="store_true")
    i.set_defaults(func=cmd_iso)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ModuleParseError, CompositionError, InvalidModule,
            harness.PreconditionError, graphlib.CycleError) as exc:
        if getattr(args, "json", False):
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        else:
            print(f"netmod: error: {exc}", file=sys.stderr)
        return USAGE
