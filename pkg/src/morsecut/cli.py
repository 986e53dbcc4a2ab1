"""Command line interface.

Exit codes: 0 success, 1 invalid input, 2 oracle claim failed during
``check`` (a theorem violation, which should never happen), 64 usage.
Every command is a pure function of its input file, flags, and seed, so
repeated runs are byte-identical.
"""
from __future__ import annotations

import argparse
import os
import random
import sys

from .complexes import PseudomanifoldViolation, closure, sort_key, ultimate_d_collapse
from .forest import (
    dual_graph,
    induced_forest,
    minima_dual_subgraph,
    msf_cut,
    msf_kruskal_relative,
    to_dot,
    watershed_cut,
)
from .oracles import (
    OracleReport,
    oracle_closed_paths,
    oracle_extension_after_collapse,
    oracle_msf,
    oracle_watershed,
)
from .stackio import (
    SPACE_BUILDERS,
    GeneratorSpec,
    StackParseError,
    format_simplex,
    generate,
    load_stack,
    serialize_stack,
)
from .stacks import (
    StackViolation,
    ValuedComplex,
    check_stack,
    gvf,
    minima,
    ultimate_stack_collapse,
)

USAGE_EXIT = 64

CHECK_FAMILIES = {
    "cycle": range(4, 13),
    "simplex_boundary": range(3, 6),
    "torus_grid": range(3, 9),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    return int(os.environ.get("MORSECUT_SEED", "0"))


def build_parser() -> _Parser:
    parser = _Parser(prog="morsecut", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="certify a stack file")
    p.add_argument("file")

    p = sub.add_parser("gvf", help="emit the gradient vector field")
    p.add_argument("file")
    p.add_argument("--dot", metavar="PATH")

    p = sub.add_parser("msf", help="emit the minimum spanning forest edges")
    p.add_argument("file")
    p.add_argument("--strategy", choices=("gvf", "kruskal"), default="gvf")
    p.add_argument("--dot", metavar="PATH")

    p = sub.add_parser("watershed", help="emit the watershed cut faces and their closure")
    p.add_argument("file")
    p.add_argument("--strategy", choices=("gvf", "kruskal"), default="gvf")
    p.add_argument("--dot", metavar="PATH")

    p = sub.add_parser("collapse", help="collapse the stack")
    p.add_argument("file")
    p.add_argument("--ultimate", action="store_true", required=True,
                   help="lower free top-level pairs until none remain")
    p.add_argument("-o", "--output", metavar="PATH")

    p = sub.add_parser("generate", help="emit a generated basic stack file")
    p.add_argument("--kind", choices=sorted(SPACE_BUILDERS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", metavar="PATH")

    p = sub.add_parser("check", help="run the oracle suite over a generated corpus")
    p.add_argument("--families", default=",".join(CHECK_FAMILIES),
                   help="comma-separated subset of: " + ", ".join(CHECK_FAMILIES))
    p.add_argument("--seeds", type=int, default=5, help="seeds per family member (default 5)")
    p.add_argument("--full", action="store_true", help="use 50 seeds per family member")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _forest_for(v: ValuedComplex, strategy: str):
    dg = dual_graph(v)
    if strategy == "gvf":
        return dg, induced_forest(gvf(v), v)
    return dg, msf_kruskal_relative(dg, minima_dual_subgraph(v))


def cmd_validate(args) -> int:
    v = load_stack(args.file)
    print(f"PSEUDOMANIFOLD ok d={v.space.d} simplices={len(v.space)}")
    cert = check_stack(v)
    print(f"STACK ok basic={'yes' if cert.basic else 'no'}")
    if cert.basic:
        print(f"MINIMA count={len(minima(v).parts)}")
    return 0


def cmd_gvf(args) -> int:
    v = load_stack(args.file)
    g = gvf(v)
    for tail, head in g:
        print(f"VECTOR {format_simplex(tail)} -> {format_simplex(head)}")
    if args.dot:
        dg, forest = _forest_for(v, "gvf")
        _emit(to_dot(dg, forest), args.dot)
    return 0


def cmd_msf(args) -> int:
    v = load_stack(args.file)
    dg, forest = _forest_for(v, args.strategy)
    for a, b in sorted(forest.edges, key=lambda e: (sort_key(e[0]), sort_key(e[1]))):
        print(f"FOREST-EDGE {format_simplex(a)} | {format_simplex(b)}")
    if args.dot:
        _emit(to_dot(dg, forest), args.dot)
    return 0


def cmd_watershed(args) -> int:
    v = load_stack(args.file)
    strategy = "via_gvf" if args.strategy == "gvf" else "via_kruskal"
    cut = watershed_cut(v, strategy)
    for f in sorted(cut.cut_faces, key=sort_key):
        print(f"CUT-FACE {format_simplex(f)}")
    for f in sorted(cut.watershed.faces - cut.cut_faces, key=sort_key):
        print(f"WS-FACE {format_simplex(f)}")
    if args.dot:
        dg, forest = _forest_for(v, args.strategy)
        _emit(to_dot(dg, forest, cut), args.dot)
    return 0


def cmd_collapse(args) -> int:
    v = load_stack(args.file)
    _emit(serialize_stack(ultimate_stack_collapse(v)), args.output)
    return 0


def cmd_generate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    v = generate(GeneratorSpec(args.kind, args.n, seed))
    _emit(serialize_stack(v), args.output)
    return 0


def _instance_reports(name: str, v: ValuedComplex, seed: int) -> list[OracleReport]:
    reports: list[OracleReport] = []
    space = v.space
    dg = dual_graph(v)
    anchor = minima_dual_subgraph(v)
    grad = gvf(v)
    forest_g = induced_forest(grad, v)
    forest_k = msf_kruskal_relative(dg, anchor)

    same = forest_g.edges == forest_k.edges
    reports.append(OracleReport(
        f"{name}/forest-equality", same,
        "" if same else f"symmetric difference of size {len(forest_g.edges ^ forest_k.edges)}",
    ))

    if len(dg.vertices) <= 12:
        forests = oracle_msf(dg, anchor)
        ok = forests == {forest_g.edges} and forests == {forest_k.edges}
        reports.append(OracleReport(
            f"{name}/msf-exhaustive", ok,
            "" if ok else f"oracle found {len(forests)} optimal forests",
        ))

    cut = msf_cut(forest_g, dg)
    ws = oracle_watershed(v, cut.cut_faces)
    reports.append(OracleReport(f"{name}/{ws.claim}", ws.passed, ws.witness))

    cp = oracle_closed_paths(grad)
    reports.append(OracleReport(f"{name}/{cp.claim}", cp.passed, cp.witness))

    rng = random.Random(seed)
    tops = list(space.d_faces)
    sample = rng.sample(tops, rng.randrange(1, len(tops)))
    sub = closure(sample)
    collapsed = ultimate_d_collapse(sub, space.d)
    ex = oracle_extension_after_collapse(space, sub.faces, collapsed.faces)
    reports.append(OracleReport(f"{name}/{ex.claim}", ex.passed, ex.witness))
    return reports


def cmd_check(args) -> int:
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    for fam in families:
        if fam not in CHECK_FAMILIES:
            raise ValueError(f"unknown family {fam!r}; choose from {sorted(CHECK_FAMILIES)}")
    seeds = 50 if args.full else args.seeds
    failures = 0
    for fam in families:
        for n in CHECK_FAMILIES[fam]:
            for seed in range(seeds):
                name = f"{fam}-{n}-s{seed}"
                v = generate(GeneratorSpec(fam, n, seed))
                for report in _instance_reports(name, v, seed):
                    print(report.line())
                    if not report.passed:
                        failures += 1
    return 2 if failures else 0


_COMMANDS = {
    "validate": cmd_validate,
    "gvf": cmd_gvf,
    "msf": cmd_msf,
    "watershed": cmd_watershed,
    "collapse": cmd_collapse,
    "generate": cmd_generate,
    "check": cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StackParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PseudomanifoldViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StackViolation as exc:
        print(f"error: not a stack: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
