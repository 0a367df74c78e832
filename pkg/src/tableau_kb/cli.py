"""Command-line front end.

Exit codes: 0 success (consistent, entailed, model found), 1 a semantic
"no" (inconsistent, not entailed, no model), 2 input error, 3 resource limit
reached before an answer.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .dlsyntax import parse_axiom, parse_dl, serialize_dl
from .errors import (
    InconsistentKBError,
    ResourceLimitExceeded,
    SourceError,
    TableauKBError,
)
from .model import KnowledgeBase
from .oracle import find_model
from .reasoner import classify, entails, format_realization, realize
from .rules import materialize
from .tableau import is_consistent
from .turtle import read_turtle, to_turtle
from .validation import errors_only, validate

OK, NO, INPUT_ERROR, INCONCLUSIVE = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code, message=""):
        self.code = code
        self.message = message


def _format_of(path, override):
    if override:
        return override
    suffix = Path(path).suffix.lower()
    if suffix in (".dl", ".ttl"):
        return suffix[1:]
    raise _Fail(INPUT_ERROR, f"{path}: cannot infer the format; use --format dl|ttl")


def _load(path, fmt, err) -> KnowledgeBase:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _Fail(INPUT_ERROR, f"{path}: {e.strerror or e}") from None
    except UnicodeDecodeError as e:
        raise _Fail(INPUT_ERROR, f"{path}: not valid UTF-8 ({e.reason})") from None
    try:
        if _format_of(path, fmt) == "dl":
            return parse_dl(text)
        kb, diags = read_turtle(text)
        for d in diags:
            err.write(d.render(str(path)) + "\n")
        return kb
    except SourceError as e:
        loc = f"{e.line}:{e.column}:" if e.line is not None else ""
        msg = e.message
        if e.expected:
            msg += " (expected one of: " + ", ".join(e.expected) + ")"
        raise _Fail(INPUT_ERROR, f"{path}:{loc} error: {msg}") from None
    except TableauKBError as e:
        raise _Fail(INPUT_ERROR, f"{path}: error: {e}") from None


def _require_valid(kb, path, err, strict_rules=False):
    diags = errors_only(validate(kb, strict_rules=strict_rules))
    if diags:
        for d in diags:
            err.write(d.render(str(path)) + "\n")
        raise _Fail(INPUT_ERROR)


def _max_nodes(args):
    if args.max_nodes is not None:
        return args.max_nodes
    env = os.environ.get("TABLEAUKB_MAX_NODES")
    if env:
        try:
            return int(env)
        except ValueError:
            raise _Fail(INPUT_ERROR, f"TABLEAUKB_MAX_NODES is not an integer: {env!r}") from None
    return None


def _emit(args, out, text):
    if getattr(args, "output_path", None):
        Path(args.output_path).write_text(text, encoding="utf-8")
    else:
        out.write(text)


# --------------------------------------------------------------------------
# Commands


def cmd_check(args, out, err):
    kb = _load(args.file, args.format, err)
    _require_valid(kb, args.file, err)
    if args.entails:
        try:
            ax = parse_axiom(args.entails)
        except SourceError as e:
            raise _Fail(INPUT_ERROR, f"--entails: {e}") from None
        yes = entails(kb, ax, max_nodes=_max_nodes(args))
        out.write(("entailed" if yes else "not entailed") + "\n")
        return OK if yes else NO
    verdict = is_consistent(kb, max_nodes=_max_nodes(args))
    if args.trace:
        out.write(verdict.trace_text())
    for reason in verdict.incomplete_reasons:
        err.write(f"{args.file}: note: possibly incomplete: {reason}\n")
    if not verdict.conclusive:
        out.write("inconclusive\n")
        err.write(f"{args.file}: node cap reached after {verdict.nodes_created} nodes\n")
        return INCONCLUSIVE
    if verdict.satisfiable:
        out.write("consistent\n")
        text = verdict.model.to_text() if args.model else ""
        if text:
            out.write(text + "\n")
        return OK
    out.write("inconsistent\n")
    out.write(verdict.clash.line() + "\n")
    return NO


def cmd_classify(args, out, err):
    kb = _load(args.file, args.format, err)
    _require_valid(kb, args.file, err)
    h = classify(kb, max_nodes=_max_nodes(args))
    _emit(args, out, h.to_turtle() if args.output == "ttl" else h.to_text())
    return NO if h.inconsistent else OK


def cmd_realize(args, out, err):
    kb = _load(args.file, args.format, err)
    _require_valid(kb, args.file, err, args.strict_rules)
    try:
        result = realize(kb, max_nodes=_max_nodes(args))
    except InconsistentKBError as e:
        err.write(f"{args.file}: {e}\n")
        return NO
    _emit(args, out, format_realization(result))
    return OK


def cmd_materialize(args, out, err):
    kb = _load(args.file, args.format, err)
    _require_valid(kb, args.file, err, args.strict_rules)
    try:
        store = materialize(
            kb,
            args.mode,
            safety="strict" if args.strict_rules else "auto",
            timeout=args.timeout,
            max_nodes=_max_nodes(args),
        )
    except InconsistentKBError as e:
        err.write(f"{args.file}: {e}\n")
        return NO
    if args.provenance:
        text = store.provenance_report()
    elif args.output == "ttl":
        text = store.to_turtle()
    else:
        text = store.to_dl()
    _emit(args, out, text)
    if not store.complete:
        err.write(f"{args.file}: timeout: materialization is incomplete\n")
        return INCONCLUSIVE
    return OK


def cmd_convert(args, out, err):
    kb = _load(args.file, args.format, err)
    target = args.to
    if target is None and args.output_path:
        target = _format_of(args.output_path, None)
    if target is None:
        target = "ttl" if _format_of(args.file, args.format) == "dl" else "dl"
    if target == "ttl":
        if kb.rules:
            err.write(f"{args.file}: warning: {len(kb.rules)} rule(s) have no Turtle form and were left out\n")
        text = to_turtle(kb)
    else:
        text = serialize_dl(kb)
    _emit(args, out, text)
    return OK


def cmd_validate(args, out, err):
    kb = _load(args.file, args.format, err)
    diags = validate(kb, strict_rules=args.strict_rules)
    for d in diags:
        err.write(d.render(str(args.file)) + "\n")
    if errors_only(diags):
        out.write("invalid\n")
        return INPUT_ERROR
    out.write("valid\n")
    return OK


def cmd_oracle(args, out, err):
    kb = _load(args.file, args.format, err)
    model = find_model(kb, args.oracle_bound, budget=args.budget)
    if model is None:
        out.write(f"no model with at most {args.oracle_bound} elements\n")
        return NO
    out.write(model.to_text())
    return OK


# --------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tableau-kb",
        description="Description-logic knowledge bases: reasoning, rules and Turtle conversion.",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def common(sp):
        sp.add_argument("file", help="knowledge base (.dl or .ttl)")
        sp.add_argument("--format", choices=("dl", "ttl"), help="input format (default: from extension)")
        sp.add_argument("--max-nodes", type=int, metavar="N", help="tableau node cap (default 100000)")
        return sp

    c = common(sub.add_parser("check", help="consistency or entailment check"))
    c.add_argument("--trace", action="store_true", help="print rule applications and clashes")
    c.add_argument("--model", action="store_true", help="print the completion graph when consistent")
    c.add_argument("--entails", metavar="AXIOM", help="check whether AXIOM (DL syntax) is entailed")
    c.set_defaults(func=cmd_check)

    c = common(sub.add_parser("classify", help="compute the concept hierarchy"))
    c.add_argument("--output", choices=("text", "ttl"), default="text")
    c.add_argument("-o", dest="output_path", metavar="PATH")
    c.set_defaults(func=cmd_classify)

    c = common(sub.add_parser("realize", help="most specific concepts of each individual"))
    c.add_argument("--strict-rules", action="store_true")
    c.add_argument("-o", dest="output_path", metavar="PATH")
    c.set_defaults(func=cmd_realize)

    c = common(sub.add_parser("materialize", help="derive facts from rules and role axioms"))
    c.add_argument("--mode", choices=("asserted", "entailment"), default="asserted")
    c.add_argument("--strict-rules", action="store_true", help="reject unsafe rules instead of guarding them")
    c.add_argument("--output", choices=("text", "ttl"), default="text")
    c.add_argument("--provenance", action="store_true", help="print every fact with its origin")
    c.add_argument("--timeout", type=float, metavar="SECONDS")
    c.add_argument("-o", dest="output_path", metavar="PATH")
    c.set_defaults(func=cmd_materialize)

    c = common(sub.add_parser("convert", help="translate between DL text and Turtle"))
    c.add_argument("--to", choices=("dl", "ttl"), help="output format (default: from -o or the other one)")
    c.add_argument("-o", dest="output_path", metavar="PATH")
    c.set_defaults(func=cmd_convert)

    c = common(sub.add_parser("validate", help="report admissibility diagnostics"))
    c.add_argument("--strict-rules", action="store_true")
    c.set_defaults(func=cmd_validate)

    c = common(sub.add_parser("oracle", help="search for a finite model by brute force"))
    c.add_argument("--oracle-bound", type=int, default=4, metavar="D", help="largest domain size (default 4)")
    c.add_argument("--budget", type=int, default=10**7, help="search step budget")
    c.set_defaults(func=cmd_oracle)
    return p


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else INPUT_ERROR
    try:
        return args.func(args, out, err)
    except _Fail as f:
        if f.message:
            err.write(f.message + "\n")
        return f.code
    except ResourceLimitExceeded as e:
        err.write(f"{args.file}: {e}\n")
        return INCONCLUSIVE
    except SourceError as e:
        err.write(f"{args.file}:{e}\n")
        return INPUT_ERROR
    except TableauKBError as e:
        err.write(f"{args.file}: error: {e}\n")
        return INPUT_ERROR


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
