"""ssg command line: build family graphs, test semisymmetry, compute
automorphism groups, quotient/expand/compare graphs and run the claim suite."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .autosearch import SearchBoundExceeded, automorphism_group, is_isomorphic, semisymmetry
from .bigraph import U, W, expand, format_graph, quotient, read_graph, twin_classes, VertexPartition
from .families import FamilyError, build_family
from .permgroup import format_group, parse_group
from .report import SLOW_P, SUPPORTED_P, validate_report, verify_paper

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNDECIDED = 3


class UsageError(Exception):
    pass


def _load(arg: str):
    """(graph, family build or None) for a file path or a family token."""
    if os.path.exists(arg):
        try:
            return read_graph(arg), None
        except (ValueError, UnicodeDecodeError) as exc:
            raise UsageError(f"{arg}: {exc}") from None
    return _load_token(arg)


def _load_token(token: str):
    try:
        fb = build_family(token)
    except FamilyError as exc:
        raise UsageError(str(exc)) from None
    return fb.graph, fb


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_family(args) -> int:
    graph, _ = _load_token(args.token)
    _emit(format_graph(graph), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    graph, fb = _load(args.graph)
    witness = None
    if args.mode == "certificate":
        if args.witness:
            try:
                with open(args.witness, encoding="utf-8") as fh:
                    witness = parse_group(fh.read(), graph.order)
            except (OSError, ValueError) as exc:
                raise UsageError(f"{args.witness}: {exc}") from None
        elif fb is not None:
            witness = fb.action
        else:
            raise UsageError("certificate mode on a graph file needs --witness")
    verdict = semisymmetry(graph, args.mode, witness)
    _emit(json.dumps({"graph": args.graph, "mode": args.mode, **verdict.as_dict()}, indent=2) + "\n", args.out)
    if not verdict.decided:
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_aut(args) -> int:
    graph, _ = _load(args.graph)
    res = automorphism_group(graph)
    text = f"order {res.order}\norbits {len(res.orbits)}\ngenerators {len(res.generators)}\n"
    text += format_group(res.group())
    _emit(text, args.out)
    return EXIT_OK


def cmd_quotient(args) -> int:
    graph, _ = _load(args.graph)
    side = U if args.by == "u-twins" else W
    twins = twin_classes(graph, side)
    if side == U:
        q = quotient(graph, VertexPartition.singletons(W, graph.n_w), twins)
    else:
        q = quotient(graph, twins, VertexPartition.singletons(U, graph.n_u))
    _emit(format_graph(q), args.out)
    return EXIT_OK


def cmd_expand(args) -> int:
    if args.p < 1:
        raise UsageError("--p must be positive")
    graph, _ = _load(args.graph)
    _emit(format_graph(expand(graph, args.p)), args.out)
    return EXIT_OK


def cmd_iso(args) -> int:
    g1, _ = _load(args.first)
    g2, _ = _load(args.second)
    same = is_isomorphic(g1, g2)
    _emit(("true" if same else "false") + "\n", args.out)
    return EXIT_OK if same else EXIT_FAIL


def cmd_verify_paper(args) -> int:
    if args.p not in SUPPORTED_P:
        raise UsageError(f"--p must be one of {', '.join(map(str, SUPPORTED_P))}")
    if args.p in SLOW_P and not args.slow:
        raise UsageError(f"--p {args.p} is slow; pass --slow to run it")
    report = verify_paper(args.p)
    validate_report(report)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    for c in report["claims"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['id']}", file=sys.stderr)
    print(f"verdict {report['verdict']}", file=sys.stderr)
    return EXIT_OK if report["verdict"] == "PASS" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ssg", description=__doc__)
    ap.add_argument("--version", action="version", version=f"ssg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="write a family graph in bigraph format")
    p.add_argument("token", help="e.g. gamma9, sigma1:5")
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("check", help="semisymmetry verdict as JSON")
    p.add_argument("graph", help="family token or graph file")
    p.add_argument("--mode", choices=("full", "certificate"), default="full")
    p.add_argument("--witness", help="file with one generator per line (cycle notation)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("aut", help="automorphism group order and generators")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("quotient", help="quotient by twin classes")
    p.add_argument("graph")
    p.add_argument("--by", choices=("u-twins", "w-twins"), default="u-twins")
    p.add_argument("--out")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("expand", help="replace each U-vertex by p twins")
    p.add_argument("graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("iso", help="isomorphism test; exit 0 if isomorphic, 1 if not")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("verify-paper", help="run the claim suite and write a JSON report")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--slow", action="store_true", help="allow the p=7 suite")
    p.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ssg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchBoundExceeded as exc:
        print(f"ssg: search bound exceeded: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED


if __name__ == "__main__":
    sys.exit(main())
