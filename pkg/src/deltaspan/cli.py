"""Command-line interface.

Verbs:
  gen     write a seeded random point file
  build   construct a spanner and write its edge list (optionally an SVG)
  verify  measure the dilation of a graph file against a point file
  bench   run the experiment matrix, print the table, optionally write CSV
  render  draw an existing graph file as SVG
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .analysis import certify_spanner
from .construct import (
    DeltaGreedyParams,
    delta_greedy,
    gap_greedy,
    greedy_on_theta,
    path_greedy,
    theta_graph,
)
from .experiment import (
    ALGORITHMS,
    DELTA_RULES,
    ExperimentConfig,
    format_table,
    resolve_delta,
    run_experiment,
)
from .fileio import read_graph, read_points, render_svg, write_graph, write_points
from .pointgen import generate_points


def _add_input_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--points", help="read points from this file")
    sub.add_argument("--n", type=int, help="generate this many random points")
    sub.add_argument("--seed", type=int, default=1, help="generation seed (default 1)")


def _load_points(args: argparse.Namespace):
    if args.points:
        return read_points(args.points)
    if args.n is None:
        raise SystemExit("either --points or --n is required")
    return generate_points(args.n, args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltaspan",
        description="Geometric t-spanner construction, verification, and benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random point file")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=1)
    p_gen.add_argument("--out", required=True, help="output point file")

    p_build = sub.add_parser("build", help="construct a spanner")
    _add_input_args(p_build)
    p_build.add_argument("--algo", choices=ALGORITHMS, default="delta")
    p_build.add_argument("--t", type=float, required=True, help="stretch factor")
    p_build.add_argument(
        "--delta", default="t",
        help="delta value or rule (t, t^0.9, sqrt, or a number); "
             "for greedy-theta this sets the inner stretch (default sqrt)")
    p_build.add_argument("--scheduler", choices=("eager", "lazy"), default="eager")
    p_build.add_argument("--out", help="write the edge list here")
    p_build.add_argument("--svg", help="also render the spanner to this SVG file")

    p_verify = sub.add_parser("verify", help="measure dilation of a graph file")
    p_verify.add_argument("--points", required=True)
    p_verify.add_argument("--graph", required=True)
    p_verify.add_argument("--t", type=float, required=True)
    p_verify.add_argument(
        "--strict", action="store_true",
        help="exit nonzero when the graph is not a t-spanner")

    p_bench = sub.add_parser("bench", help="run the benchmark matrix")
    p_bench.add_argument("--n", type=int, required=True)
    p_bench.add_argument("--t", default="1.1,1.5,2",
                         help="comma-separated stretch factors (default 1.1,1.5,2)")
    p_bench.add_argument("--delta", default=",".join(DELTA_RULES),
                         help="comma-separated delta rules (default t,t^0.9,sqrt)")
    p_bench.add_argument("--algo", default="delta",
                         help=f"comma-separated algorithms from {ALGORITHMS}")
    p_bench.add_argument("--seeds", default="1,2,3,4,5",
                         help="comma-separated seeds (default 1,2,3,4,5)")
    p_bench.add_argument("--scheduler", choices=("eager", "lazy"), default="eager")
    p_bench.add_argument("--out", help="write averaged CSV rows here")
    p_bench.add_argument("--quiet", action="store_true", help="suppress progress lines")

    p_render = sub.add_parser("render", help="render a graph file to SVG")
    p_render.add_argument("--points", required=True)
    p_render.add_argument("--graph", required=True)
    p_render.add_argument("--out", required=True)

    return parser


def _cmd_gen(args: argparse.Namespace) -> int:
    points = generate_points(args.n, args.seed)
    write_points(points, args.out)
    print(f"wrote {len(points)} points to {args.out}")
    return 0


def _cmd_build(args: argparse.Namespace) -> int:
    points = _load_points(args)
    t = args.t
    if args.algo == "delta":
        delta = resolve_delta(args.delta, t)
        g, report = delta_greedy(
            points, DeltaGreedyParams(t=t, delta=delta, scheduler=args.scheduler))
    elif args.algo == "path":
        g, report = path_greedy(points, t)
    elif args.algo == "theta":
        g, report = theta_graph(points, t)
    elif args.algo == "greedy-theta":
        t_prime = resolve_delta(args.delta, t)
        if t_prime >= t:
            t_prime = resolve_delta("sqrt", t)
        g, report = greedy_on_theta(points, t, t_prime)
    else:
        g, report = gap_greedy(points, t, scheduler=args.scheduler)
    print(
        f"{report.algorithm}: n={report.n} t={report.t:g}"
        + (f" delta={report.delta:g}" if report.delta is not None else "")
        + f" edges={report.edges} weight/mst={report.weight_over_mst:.3f}"
        + f" max_degree={report.max_degree} queries={report.sp_queries}"
        + f" time={report.wall_time:.2f}s")
    if args.out:
        write_graph(g, args.out)
        print(f"wrote edge list to {args.out}")
    if args.svg:
        render_svg(g, args.svg)
        print(f"wrote SVG to {args.svg}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    points = read_points(args.points)
    g = read_graph(args.graph, points)
    ok, report = certify_spanner(g, points, args.t)
    witness = ""
    if report.witness is not None:
        witness = f" (witness pair {report.witness[0]}-{report.witness[1]})"
    print(f"max dilation {report.max_dilation:.9f}{witness}; "
          f"{'within' if ok else 'EXCEEDS'} t={args.t:g}")
    if args.strict and not ok:
        return 1
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(
        n=args.n,
        ts=tuple(float(s) for s in args.t.split(",") if s),
        delta_rules=tuple(s for s in args.delta.split(",") if s),
        algorithms=tuple(s for s in args.algo.split(",") if s),
        seeds=tuple(int(s) for s in args.seeds.split(",") if s),
        scheduler=args.scheduler,
        csv_path=args.out,
    )
    log = (lambda s: None) if args.quiet else lambda s: print(s, file=sys.stderr)
    rows = run_experiment(cfg, log=log)
    print(format_table(rows))
    if args.out:
        print(f"wrote CSV to {args.out}")
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    points = read_points(args.points)
    g = read_graph(args.graph, points)
    render_svg(g, args.out)
    print(f"wrote SVG to {args.out}")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "build": _cmd_build,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
    "render": _cmd_render,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
