"""Command-line interface.

Exit codes: 0 success, 1 type/kind error (including violated preconditions),
2 parse error, 3 internal invariant violation (measure non-decrease or
postcondition failure), 4 fuel exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from .contexts import EMPTY, Env
from .hereditary import (
    CheckError,
    HsubstInput,
    InternalInvariantViolation,
    PreViolated,
    hsubst,
    hsubst_checked,
    normalize,
    normalize_checked,
)
from .measure import depth, kinds_of
from .reduction import DEFAULT_FUEL, FuelExhausted, build_trace, format_path
from .selftest import format_tap, run_selftest
from .sexp import SexpError, env_from_sexp, term_to_sexp, type_from_sexp, type_to_sexp
from .surface import ParseError, Program, parse_program, parse_type, print_term, print_type
from .syntax import Typ
from .testkit import enumerate_terms
from .typecheck import TypingError, infer_kind, infer_type

EXIT_OK = 0
EXIT_TYPE_ERROR = 1
EXIT_PARSE_ERROR = 2
EXIT_INVARIANT = 3
EXIT_FUEL = 4


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _parse_type_arg(src: str, type_names: list[str] | None = None) -> Typ:
    """Type arguments accept surface syntax, or an s-expression when the
    argument starts with '('."""
    if src.lstrip().startswith("("):
        return type_from_sexp(src)
    return parse_type(src, type_names)


def _span_of(program: Program, location: tuple[int, ...]) -> str:
    span = program.spans.get(location)
    return str(span) if span is not None else "?"


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _measure_payload(ty: Typ) -> dict:
    bag = kinds_of(ty)
    return {"kinds": [[k, m] for k, m in bag.counts], "depth": depth(ty)}


def cmd_check(args: argparse.Namespace) -> int:
    program = parse_program(_read_source(args.file))
    try:
        ty = infer_type(program.env, program.term)
    except TypingError as err:
        where = _span_of(program, err.location)
        print(f"type error at {where}: {err}", file=sys.stderr)
        return EXIT_TYPE_ERROR
    if args.json:
        _print_json({"ok": True, "type": type_to_sexp(ty)})
    else:
        print(print_type(ty, program.type_names))
    return EXIT_OK


def cmd_kind(args: argparse.Namespace) -> int:
    ty = _parse_type_arg(args.type)
    k = infer_kind(EMPTY, ty)
    if k is None:
        print("kind error: type is not kindable in the empty context", file=sys.stderr)
        return EXIT_TYPE_ERROR
    print(k)
    return EXIT_OK


def cmd_measure(args: argparse.Namespace) -> int:
    ty = _parse_type_arg(args.type)
    if args.json:
        _print_json({"ok": True, "measure": _measure_payload(ty)})
    else:
        print(f"kinds={kinds_of(ty)} depth={depth(ty)}")
    return EXIT_OK


def cmd_normalize(args: argparse.Namespace) -> int:
    program = parse_program(_read_source(args.file))
    try:
        goal = infer_type(program.env, program.term)
    except TypingError as err:
        where = _span_of(program, err.location)
        print(f"type error at {where}: {err}", file=sys.stderr)
        return EXIT_TYPE_ERROR
    trace = build_trace(program.term, args.fuel)
    if args.checked:
        result = normalize_checked(program.env, goal, program.term, args.fuel)
    else:
        result = normalize(program.term)
    if args.trace:
        for path, tag, after in trace.steps:
            print(f"{format_path(path)} {tag.value} {term_to_sexp(after)}")
    if args.json:
        _print_json(
            {
                "ok": True,
                "type": type_to_sexp(goal),
                "normal_form": term_to_sexp(result),
                "steps": len(trace.steps),
            }
        )
    elif args.sexp:
        print(term_to_sexp(result))
    else:
        print(print_term(result, program.term_names, program.type_names))
    return EXIT_OK


def cmd_hsubst(args: argparse.Namespace) -> int:
    target_prog = parse_program(_read_source(args.target))
    subst_prog = parse_program(_read_source(args.subst))
    var_type = _parse_type_arg(args.var_type, target_prog.type_names)
    inp = HsubstInput(var_type, target_prog.term, subst_prog.term, args.index)
    if args.checked:
        env: Env = env_from_sexp(_read_source(args.env)) if args.env else target_prog.env
        if args.goal is None:
            print("hsubst --checked requires --goal", file=sys.stderr)
            return EXIT_TYPE_ERROR
        goal = _parse_type_arg(args.goal, target_prog.type_names)
        result = hsubst_checked(env, goal, inp, args.fuel)
    else:
        result = hsubst(inp)
    if args.json:
        _print_json({"ok": True, "normal_form": term_to_sexp(result)})
    elif args.sexp:
        print(term_to_sexp(result))
    else:
        print(print_term(result, target_prog.term_names, target_prog.type_names))
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    goal = _parse_type_arg(args.goal)
    env: Env = env_from_sexp(_read_source(args.env)) if args.env else EMPTY
    for t in enumerate_terms(env, goal, args.max_size):
        print(term_to_sexp(t))
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    results = run_selftest(seed=args.seed, cases=args.cases)
    print(format_tap(results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpred",
        description="Predicative System F: type checking, hereditary-substitution "
        "normalization, and metatheory property suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="type-check a source file and print its type")
    p.add_argument("file", help="source file, or - for stdin")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("kind", help="print the minimal kind of a type")
    p.add_argument("type", help="type expression (surface syntax or s-expression)")
    p.set_defaults(fn=cmd_kind)

    p = sub.add_parser("measure", help="print the kind multiset and depth of a type")
    p.add_argument("type")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("normalize", help="normalize a term by hereditary substitution")
    p.add_argument("file", help="source file, or - for stdin")
    p.add_argument("--trace", action="store_true", help="also print the oracle reduction trace")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--checked", action="store_true", help="enforce the full contract")
    p.add_argument("--sexp", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("hsubst", help="run hereditary substitution directly")
    p.add_argument("--var-type", required=True, dest="var_type")
    p.add_argument("--target", required=True, help="target term file, or -")
    p.add_argument("--subst", required=True, help="substituend term file")
    p.add_argument("--index", required=True, type=int)
    p.add_argument("--checked", action="store_true")
    p.add_argument("--env", help="environment s-expression file (checked mode)")
    p.add_argument("--goal", help="goal type (checked mode)")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--sexp", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_hsubst)

    p = sub.add_parser("enumerate", help="search for inhabitants of a type")
    p.add_argument("--goal", required=True)
    p.add_argument("--max-size", required=True, type=int, dest="max_size")
    p.add_argument("--env", help="environment s-expression file")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("selftest", help="run the full property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=300)
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as err:
        print(f"parse error at {err.span}: {err.message}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except SexpError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except PreViolated as err:
        print(f"precondition violated: {err}", file=sys.stderr)
        return EXIT_TYPE_ERROR
    except TypingError as err:
        print(f"type error: {err}", file=sys.stderr)
        return EXIT_TYPE_ERROR
    except FuelExhausted as err:
        print(f"fuel exhausted: {err}", file=sys.stderr)
        return EXIT_FUEL
    except (CheckError, InternalInvariantViolation) as err:
        print(f"invariant violation: {err}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
