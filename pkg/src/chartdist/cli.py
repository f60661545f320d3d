"""Command line front end.

Arguments naming a readable file are loaded from it; anything else is
taken as inline text.  Output is deterministic byte-for-byte for fixed
inputs.  Exit codes: 0 success (for ``bisim``: bisimilar), 1 usage or
not bisimilar, 2 parse error, 3 type error, 4 rejected certificate or
failed derivation, 5 state budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .bisim import bisimilar, stratified_level
from .chart import (
    ChartFormatError, _relabel, chart_to_dot, disjoint_union,
    format_chart_text, parse_chart_text, state_key,
)
from .derive import (
    CertificateError, CertificateSyntaxError, SynthesisFailure, check,
    format_cert, joint_prechart, parse_cert, synthesize,
)
from .diagram import (
    DiagramSyntaxError, DiagramTypeError, axiom_catalog, c1_copy_pair,
    check_axiom, format_term, from_expression, interpret, parse_term,
    term_to_dot, typecheck,
)
from .expr import ExpansionBudgetError, ExprSyntaxError, expand, free_vars, parse_expr
from .metric import FZERO, MetricIterationError, kleene_solve
from .regbeh import RbTypeError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_TYPE = 3
EXIT_REJECTED = 4
EXIT_BUDGET = 5


class _UsageError(Exception):
    pass


def _resolve(arg: str) -> str:
    try:
        p = Path(arg)
        if p.is_file():
            return p.read_text()
    except OSError:
        pass
    return arg


def _parse_alphabet(spec):
    # accepts "abc", "a,b,c", and "a b c" alike
    if spec is None:
        return None
    letters = set()
    for token in spec.replace(",", " ").split():
        letters.update(token)
    if not letters:
        raise _UsageError("empty alphabet")
    bad = sorted(l for l in letters if not (l.isalpha() and l.islower() and l != "v"))
    if bad:
        raise _UsageError(f"invalid alphabet letters: {', '.join(bad)}")
    return letters


def _level_of(d: Fraction) -> int:
    # d is 0 or a dyadic 1/2^k; level k reads off the denominator
    return d.denominator.bit_length() - 1


def _load_chart(text, args):
    if args.format == "chart":
        return parse_chart_text(text)
    return expand(parse_expr(text, alphabet=_parse_alphabet(args.alphabet)),
                  max_states=args.max_states)


def _load_diagrams(args, a, b):
    """The two inputs as diagram terms with equal boundaries."""
    if args.format == "diag":
        t1 = parse_term(_resolve(a))
        t2 = parse_term(_resolve(b))
    else:
        alphabet = _parse_alphabet(args.alphabet)
        e1 = parse_expr(_resolve(a), alphabet=alphabet)
        e2 = parse_expr(_resolve(b), alphabet=alphabet)
        width = 0
        for e in (e1, e2):
            fv = free_vars(e)
            if fv:
                width = max(width, max(fv))
        t1 = from_expression(e1, width)
        t2 = from_expression(e2, width)
    if typecheck(t1) != typecheck(t2):
        raise DiagramTypeError("the two diagrams have different boundaries")
    return t1, t2


def _row_pairs(t1, t2, max_states):
    rows1 = interpret(t1).payload.rows
    rows2 = interpret(t2).payload.rows
    joint, seeds = joint_prechart(list(rows1) + list(rows2),
                                  max_states=max_states)
    m = len(rows1)
    return joint, list(zip(seeds[:m], seeds[m:]))


def _cmd_dist(args):
    lines = []
    if args.format == "diag":
        t1 = parse_term(_resolve(args.left))
        t2 = parse_term(_resolve(args.right))
        if typecheck(t1) != typecheck(t2):
            raise DiagramTypeError("the two diagrams have different boundaries")
        joint, pairs = _row_pairs(t1, t2, args.max_states)
        result = kleene_solve(joint)
        d = FZERO
        for x, y in pairs:
            d = max(d, result.table.get(x, y))
    else:
        c1 = _load_chart(_resolve(args.left), args)
        c2 = _load_chart(_resolve(args.right), args)
        p, s1, s2 = disjoint_union(c1, c2)
        result = kleene_solve(p)
        d = result.table.get(s1, s2)
    if d == 0:
        lines.append("0 (bisimilar)")
    else:
        lines.append(f"{d} (level {_level_of(d)})")
    if args.table:
        lines.append(result.table.to_tsv().rstrip("\n"))
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_bisim(args):
    if args.format == "diag":
        t1 = parse_term(_resolve(args.left))
        t2 = parse_term(_resolve(args.right))
        if typecheck(t1) != typecheck(t2):
            raise DiagramTypeError("the two diagrams have different boundaries")
        rows1 = interpret(t1).payload.rows
        rows2 = interpret(t2).payload.rows
        witness_lines = []
        worst = None
        for i, (r1, r2) in enumerate(zip(rows1, rows2), start=1):
            ok, w = bisimilar(expand(r1, max_states=args.max_states),
                              expand(r2, max_states=args.max_states))
            if not ok:
                worst = w if worst is None else min(worst, w)
            else:
                for q1, q2 in sorted(w, key=lambda pr: (state_key(pr[0]),
                                                        state_key(pr[1]))):
                    witness_lines.append(f"row {i}\t{q1}\t{q2}")
        if worst is not None:
            return EXIT_USAGE, f"not bisimilar (level {worst})\n"
        return EXIT_OK, "\n".join(["bisimilar"] + witness_lines) + "\n"
    c1 = _load_chart(_resolve(args.left), args)
    c2 = _load_chart(_resolve(args.right), args)
    ok, w = bisimilar(c1, c2)
    if not ok:
        return EXIT_USAGE, f"not bisimilar (level {w})\n"
    lines = ["bisimilar"]
    for q1, q2 in sorted(w, key=lambda pr: (state_key(pr[0]), state_key(pr[1]))):
        lines.append(f"{q1}\t{q2}")
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_strat(args):
    if args.format == "diag":
        t1 = parse_term(_resolve(args.left))
        t2 = parse_term(_resolve(args.right))
        if typecheck(t1) != typecheck(t2):
            raise DiagramTypeError("the two diagrams have different boundaries")
        rows1 = interpret(t1).payload.rows
        rows2 = interpret(t2).payload.rows
        level = float("inf")
        for r1, r2 in zip(rows1, rows2):
            level = min(level, stratified_level(
                expand(r1, max_states=args.max_states),
                expand(r2, max_states=args.max_states)))
    else:
        c1 = _load_chart(_resolve(args.left), args)
        c2 = _load_chart(_resolve(args.right), args)
        level = stratified_level(c1, c2)
    text = "inf" if level == float("inf") else str(level)
    return EXIT_OK, text + "\n"


def _cmd_compile(args):
    if args.format == "diag":
        t = parse_term(_resolve(args.input))
        dom, cod = typecheck(t)
        if dom != ">" or "<" in cod:
            raise DiagramTypeError(
                "compilation needs one forward input and forward outputs; "
                "bend the diagram first")
        row = interpret(t).payload.rows[0]
        c = expand(row, max_states=args.max_states)
    else:
        c = expand(parse_expr(_resolve(args.input),
                              alphabet=_parse_alphabet(args.alphabet)),
                   max_states=args.max_states)
    named, _ = _relabel(c, 0)
    return EXIT_OK, format_chart_text(named)


def _cmd_derive(args):
    t1, t2 = _load_diagrams(args, args.left, args.right)
    eps = Fraction(args.eps) if args.eps is not None else None
    if eps is not None and not 0 <= eps <= 1:
        raise _UsageError(f"--eps {eps} outside [0, 1]")
    cert = synthesize(t1, t2, eps=eps, max_states=args.max_states)
    return EXIT_OK, format_cert(cert) + "\n"


def _cmd_check(args):
    cert = parse_cert(_resolve(args.cert))
    t1, t2 = _load_diagrams(args, args.left, args.right)
    bound = check(cert, t1, t2, max_states=args.max_states)
    return EXIT_OK, f"{bound}\n"


def _cmd_render(args):
    if args.format == "diag":
        t = parse_term(_resolve(args.input))
        typecheck(t)
        dot = term_to_dot(t)
    elif args.format == "chart":
        dot = chart_to_dot(parse_chart_text(_resolve(args.input)))
    else:
        c = expand(parse_expr(_resolve(args.input),
                              alphabet=_parse_alphabet(args.alphabet)),
                   max_states=args.max_states)
        dot = chart_to_dot(c)
    return EXIT_OK, dot


def _cmd_axioms(args):
    lines = []
    if not args.check:
        for name, lhs, rhs in axiom_catalog():
            lines.append(f"{name}: {format_term(lhs)} = {format_term(rhs)}")
        return EXIT_OK, "\n".join(lines) + "\n"
    ok = True
    for name, lhs, rhs in axiom_catalog():
        holds = check_axiom(lhs, rhs)
        ok = ok and holds
        lines.append(f"{name}: {'holds' if holds else 'FAILS'}")
    lhs, rhs = c1_copy_pair()
    control = check_axiom(lhs, rhs)
    ok = ok and not control
    lines.append("act-copy: "
                 + ("fails as expected" if not control else "UNEXPECTEDLY HOLDS"))
    return (EXIT_OK if ok else EXIT_REJECTED), "\n".join(lines) + "\n"


def _add_common(sub, formats):
    sub.add_argument("--format", choices=formats, default=formats[0],
                     help="input syntax (default %(default)s)")
    sub.add_argument("--alphabet", default=None,
                     help="restrict expression letters, e.g. 'a,b'")
    sub.add_argument("--max-states", type=int, default=10000,
                     help="state budget for expansions (default %(default)s)")
    sub.add_argument("-o", dest="output", default=None, metavar="FILE",
                     help="write the report to FILE instead of stdout")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="chartdist",
        description="Exact behavioural distances, bisimilarity, diagram "
                    "compilation, and distance certificates.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("dist", help="exact distance and stratified level")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--table", action="store_true",
                   help="also dump the full distance table as TSV")
    _add_common(p, ["expr", "diag", "chart"])
    p.set_defaults(func=_cmd_dist)

    p = subs.add_parser("bisim", help="bisimilarity with witness dump")
    p.add_argument("left")
    p.add_argument("right")
    _add_common(p, ["expr", "diag", "chart"])
    p.set_defaults(func=_cmd_bisim)

    p = subs.add_parser("strat", help="largest level n with s1 ~(n) s2")
    p.add_argument("left")
    p.add_argument("right")
    _add_common(p, ["expr", "diag", "chart"])
    p.set_defaults(func=_cmd_strat)

    p = subs.add_parser("compile",
                        help="expression or diagram to chart text")
    p.add_argument("input")
    _add_common(p, ["expr", "diag"])
    p.set_defaults(func=_cmd_compile)

    p = subs.add_parser("derive", help="synthesize a distance certificate")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--eps", default=None, metavar="p/q",
                   help="requested bound (default: the exact distance)")
    _add_common(p, ["expr", "diag"])
    p.set_defaults(func=_cmd_derive)

    p = subs.add_parser("check", help="validate a distance certificate")
    p.add_argument("cert")
    p.add_argument("left")
    p.add_argument("right")
    _add_common(p, ["expr", "diag"])
    p.set_defaults(func=_cmd_check)

    p = subs.add_parser("render", help="DOT output for an input")
    p.add_argument("input")
    p.add_argument("--dot", default=None, metavar="FILE",
                   help="write DOT to FILE (same as -o)")
    _add_common(p, ["expr", "diag", "chart"])
    p.set_defaults(func=_cmd_render)

    p = subs.add_parser("axioms", help="list or check the axiom catalogue")
    p.add_argument("--check", action="store_true",
                   help="verify every axiom and the negative control")
    p.add_argument("-o", dest="output", default=None, metavar="FILE")
    p.set_defaults(func=_cmd_axioms)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        code, text = args.func(args)
    except (ExprSyntaxError, ChartFormatError, DiagramSyntaxError,
            CertificateSyntaxError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (DiagramTypeError, RbTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TYPE
    except (SynthesisFailure, CertificateError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REJECTED
    except (ExpansionBudgetError, MetricIterationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    target = getattr(args, "output", None)
    if args.command == "render" and getattr(args, "dot", None):
        target = args.dot
    if target:
        Path(target).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
