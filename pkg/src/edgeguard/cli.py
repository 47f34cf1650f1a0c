"""Command line surface for batch use.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
exhaustion.  Guard documents go to stdout (or -o); the human-readable
size/bound line goes to stderr so stdout stays parseable.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from itertools import combinations
from pathlib import Path

from .chromatic import (
    ColoringMismatch,
    QuadsTooClose,
    SeedConflict,
    Timeout,
    UntriangulatableFace,
    chromatic_guard,
    find_guard_coloring,
    three_hop_guard,
)
from .corpus import FAMILIES, GenerationFailed, GeneratorSpec, generate
from .embedding import (
    BudgetExceeded,
    EdgeGuardError,
    GuardSet,
    PlaneGraph,
    VerificationFailed,
    allowance,
    build_from_rotation,
    guard_set_from_doc,
)
from .oracle import Infeasible, minimum_guard_set
from .reductions import (
    NoConfiguration,
    NotTwoDegenerate,
    StepNotFound,
    guard_three_eighths,
    guard_two_degenerate,
    guard_two_fifths,
)
from .render import LayoutFailed, render_svg, report_figures


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


_ALGORITHMS = {
    "n3-degenerate": guard_two_degenerate,
    "2n5": guard_two_fifths,
    "3n8": guard_three_eighths,
    "chromatic": chromatic_guard,
    "3hop": three_hop_guard,
}

# raised when an algorithm simply does not apply to the instance
_INAPPLICABLE = (
    NotTwoDegenerate,
    NoConfiguration,
    StepNotFound,
    UntriangulatableFace,
    ColoringMismatch,
    QuadsTooClose,
    SeedConflict,
)


def _load_doc(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise _CliError(2, f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise _CliError(2, f"{path} is not valid JSON: {exc}")


def _load_graph(path) -> PlaneGraph:
    doc = _load_doc(path)
    try:
        return build_from_rotation(doc)
    except (EdgeGuardError, KeyError, TypeError, ValueError) as exc:
        raise _CliError(2, f"bad graph document {path}: {exc}")


def _load_guards(g: PlaneGraph, path) -> frozenset:
    doc = _load_doc(path)
    try:
        if isinstance(doc, dict) and "bound" in doc:
            return guard_set_from_doc(g, doc).edges
        return frozenset(g.edge_id(u, v) for u, v in doc["edges"])
    except (EdgeGuardError, KeyError, TypeError, ValueError) as exc:
        raise _CliError(2, f"bad guard document {path}: {exc}")


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def _quad_fids(g: PlaneGraph):
    return [
        f.id
        for f in g.faces
        if f.side_count == 4
        and len(f.walks) == 1
        and len({a for a, _ in f.walks[0]}) == 4
    ]


def _quads_far_apart(g: PlaneGraph) -> bool:
    quads = _quad_fids(g)
    return all(g.face_hop_distance(a, b) >= 3 for a, b in combinations(quads, 2))


def _run_best(g: PlaneGraph) -> GuardSet:
    best = None
    for name in ("n3-degenerate", "2n5", "3n8", "chromatic", "3hop"):
        if name == "3hop" and not _quads_far_apart(g):
            continue
        try:
            result = _ALGORITHMS[name](g)
        except _INAPPLICABLE + (Timeout, BudgetExceeded):
            continue
        if best is None or len(result.edges) < len(best.edges):
            best = result
    if best is None:
        raise _CliError(2, "no algorithm applies to this graph")
    return best


def _guard_report(g: PlaneGraph, result: GuardSet) -> str:
    return (
        f"{result.algorithm}: {len(result.edges)} guard edges, "
        f"bound {result.claimed_bound} allows {allowance(result.claimed_bound)}"
    )


def _cmd_guard(args) -> int:
    g = _load_graph(args.input)
    try:
        if args.algorithm == "best":
            result = _run_best(g)
        else:
            result = _ALGORITHMS[args.algorithm](g)
    except VerificationFailed as exc:
        raise _CliError(1, f"constructed set failed verification: {exc}")
    except (Timeout, BudgetExceeded) as exc:
        raise _CliError(3, str(exc))
    except _INAPPLICABLE as exc:
        raise _CliError(2, f"{args.algorithm} does not apply here: {exc}")
    _emit(json.dumps(result.to_doc(g), sort_keys=True), args.output)
    print(_guard_report(g, result), file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    g = _load_graph(args.input)
    guards = _load_guards(g, args.guards)
    report = g.verify_guard_set(guards)
    if report.ok:
        print(f"all {len(g.faces)} faces guarded")
        return 0
    for fid in report.unguarded:
        verts = sorted(g.face(fid).boundary_vertices)
        print(f"unguarded face {fid}: vertices {verts}")
    return 1


def _cmd_oracle(args) -> int:
    g = _load_graph(args.input)
    try:
        result = minimum_guard_set(g, upper_hint=args.limit, budget=args.budget)
    except BudgetExceeded as exc:
        raise _CliError(3, str(exc))
    except Infeasible as exc:
        raise _CliError(1, str(exc))
    _emit(json.dumps(result.to_doc(g), sort_keys=True), args.output)
    print(f"minimum: {len(result.edges)} guard edges", file=sys.stderr)
    return 0


def _cmd_stats(args) -> int:
    g = _load_graph(args.input)
    st = g.stats()
    print(f"n={st.n}")
    print(f"m={st.m}")
    print(f"f={st.f}")
    print(f"alpha={st.alpha}")
    print(f"components={st.c}")
    print(f"min_degree={st.min_degree}")
    print(f"max_degree={st.max_degree}")
    quads = _quad_fids(g)
    if len(quads) < 2:
        print("quad_hops: none")
    else:
        for a, b in combinations(quads, 2):
            print(f"quad_hop f{a} f{b} = {g.face_hop_distance(a, b)}")
    return 0


def _parse_options(pairs):
    opts = {}
    for pair in pairs or ():
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise _CliError(2, f"options look like key=value, got {pair!r}")
        for cast in (int, float):
            try:
                opts[key] = cast(raw)
                break
            except ValueError:
                continue
        else:
            opts[key] = raw
    return opts


def _generate(family, size, seed, options) -> PlaneGraph:
    try:
        return generate(GeneratorSpec(family, size, seed=seed, options=options))
    except GenerationFailed as exc:
        raise _CliError(3, str(exc))
    except ValueError as exc:
        raise _CliError(2, str(exc))


def _cmd_gen(args) -> int:
    g = _generate(args.family, args.size, args.seed, _parse_options(args.option))
    _emit(g.to_json(), args.output)
    st = g.stats()
    print(f"{args.family}: n={st.n} m={st.m} f={st.f}", file=sys.stderr)
    return 0


def _cmd_check_guard_coloring(args) -> int:
    g = _load_graph(args.input)
    try:
        coloring = find_guard_coloring(g)
    except BudgetExceeded as exc:
        raise _CliError(3, str(exc))
    if coloring is None:
        print("none")
    else:
        print(json.dumps({"colors": {str(v): c for v, c in sorted(coloring.colors.items())}},
                         sort_keys=True))
    return 0


def _cmd_render(args) -> int:
    g = _load_graph(args.input)
    guards = _load_guards(g, args.guards) if args.guards else frozenset()
    try:
        render_svg(g, args.output, guards=guards)
    except LayoutFailed as exc:
        raise _CliError(3, f"no usable layout: {exc}")
    print(f"wrote {args.output}", file=sys.stderr)
    return 0


def _cmd_report(args) -> int:
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    options = _parse_options(args.option)
    rows = []
    for i in range(args.count):
        seed = args.seed + i
        g = _generate(args.family, args.size, seed, options)
        try:
            if args.algorithm == "best":
                result = _run_best(g)
            else:
                result = _ALGORITHMS[args.algorithm](g)
        except (VerificationFailed, Timeout, BudgetExceeded) + _INAPPLICABLE as exc:
            raise _CliError(1, f"seed {seed}: {exc}")
        st = g.stats()
        rows.append({
            "seed": seed,
            "n": st.n,
            "m": st.m,
            "f": st.f,
            "alpha": st.alpha,
            "algorithm": result.algorithm,
            "guards": len(result.edges),
            "allowed": allowance(result.claimed_bound),
            "verified": g.verify_guard_set(result.edges).ok,
        })
    table = outdir / "report.csv"
    with open(table, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    figures = report_figures(rows, outdir)
    print(f"wrote {table} and {len(figures)} figures", file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgeguard",
        description="Edge guards for plane graphs: construction, verification, diagrams.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("guard", help="construct a guard set")
    p.add_argument("input")
    p.add_argument("--algorithm", choices=sorted(_ALGORITHMS) + ["best"], default="best")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_guard)

    p = sub.add_parser("verify", help="check a guard set against a graph")
    p.add_argument("input")
    p.add_argument("guards")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="exact minimum guard set")
    p.add_argument("input")
    p.add_argument("--limit", type=int, default=None,
                   help="size believed achievable; prunes the search")
    p.add_argument("--budget", type=int, default=64,
                   help="refuse graphs with more edges than this")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("stats", help="report n, m, f, alpha, degrees, quad spacing")
    p.add_argument("input")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("gen", help="generate a corpus graph")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--option", action="append", metavar="KEY=VALUE")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("check-guard-coloring",
                       help="search for a two-coloring whose classes both touch every face")
    p.add_argument("input")
    p.set_defaults(func=_cmd_check_guard_coloring)

    p = sub.add_parser("render", help="draw the graph to SVG")
    p.add_argument("input")
    p.add_argument("--guards")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("report", help="batch run: CSV plus figures")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algorithm", choices=sorted(_ALGORITHMS) + ["best"], default="best")
    p.add_argument("--option", action="append", metavar="KEY=VALUE")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
