"""Benchmark matrix runner: seeded runs, per-cell averaging, CSV and table
output.

A cell is one (algorithm, t, delta rule) combination; it is run once per
seed and the numeric columns are averaged across seeds. Machine output is
deliberately free of timing so identical configs produce byte-identical
files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .analysis import RunReport
from .construct import (
    DeltaGreedyParams,
    delta_greedy,
    gap_greedy,
    greedy_on_theta,
    path_greedy,
    theta_graph,
)
from .geometry import PointSet
from .pointgen import generate_points

DELTA_RULES = ("t", "t^0.9", "sqrt")

ALGORITHMS = ("delta", "path", "theta", "greedy-theta", "gap")

CSV_COLUMNS = (
    "algorithm", "n", "t", "delta_rule", "delta", "scheduler", "seeds",
    "edges", "total_weight", "weight_over_mst", "max_degree",
    "sp_queries", "visited_total", "max_point_queries", "error",
)


def resolve_delta(rule: str, t: float) -> float:
    """Turn a delta rule into a value: 't', 't^0.9', 'sqrt', or a number."""
    if rule == "t":
        return t
    if rule == "t^0.9":
        return t ** 0.9
    if rule in ("sqrt", "sqrt(t)", "t^0.5"):
        return math.sqrt(t)
    try:
        return float(rule)
    except ValueError:
        raise ValueError(f"unknown delta rule {rule!r}") from None


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark invocation: the full cell matrix and output options."""

    n: int
    ts: tuple[float, ...]
    delta_rules: tuple[str, ...] = DELTA_RULES
    algorithms: tuple[str, ...] = ("delta",)
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    scheduler: str = "eager"
    csv_path: Optional[str] = None

    def __post_init__(self) -> None:
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}")
        if not self.seeds:
            raise ValueError("at least one seed is required")


def _plan_cells(cfg: ExperimentConfig) -> list[tuple[str, float, Optional[str]]]:
    """Expand the matrix. Delta rules apply to the constructions that take a
    second stretch parameter; rules resolving to delta = t are skipped for
    the pruning construction, which requires t' < t."""
    cells: list[tuple[str, float, Optional[str]]] = []
    for algo in cfg.algorithms:
        for t in cfg.ts:
            if algo == "delta":
                for rule in cfg.delta_rules:
                    cells.append((algo, t, rule))
            elif algo == "greedy-theta":
                for rule in cfg.delta_rules:
                    if resolve_delta(rule, t) < t:
                        cells.append((algo, t, rule))
            else:
                cells.append((algo, t, None))
    return cells


def _run_cell(algo: str, points: PointSet, t: float,
              rule: Optional[str], scheduler: str) -> RunReport:
    if algo == "delta":
        delta = resolve_delta(rule, t) if rule is not None else t
        params = DeltaGreedyParams(t=t, delta=delta, scheduler=scheduler)
        return delta_greedy(points, params)[1]
    if algo == "path":
        return path_greedy(points, t)[1]
    if algo == "theta":
        return theta_graph(points, t)[1]
    if algo == "greedy-theta":
        t_prime = resolve_delta(rule, t) if rule is not None else None
        return greedy_on_theta(points, t, t_prime)[1]
    if algo == "gap":
        return gap_greedy(points, t, scheduler=scheduler)[1]
    raise ValueError(f"unknown algorithm {algo!r}")


def run_experiment(cfg: ExperimentConfig,
                   log: Callable[[str], None] = lambda s: None) -> list[dict]:
    """Run every cell of the matrix; one averaged row per cell.

    A failing cell yields a row with its error message and does not stop the
    others. Rows come out in deterministic cell order.
    """
    points_by_seed: dict[int, PointSet] = {}
    rows: list[dict] = []
    for algo, t, rule in _plan_cells(cfg):
        reports: list[RunReport] = []
        error = ""
        for seed in cfg.seeds:
            if seed not in points_by_seed:
                points_by_seed[seed] = generate_points(cfg.n, seed)
            log(f"run {algo} t={t} rule={rule or '-'} seed={seed}")
            try:
                reports.append(
                    _run_cell(algo, points_by_seed[seed], t, rule, cfg.scheduler))
            except Exception as exc:  # report the cell, continue the matrix
                error = f"{type(exc).__name__}: {exc}"
                break
        row: dict = {
            "algorithm": algo,
            "n": cfg.n,
            "t": t,
            "delta_rule": rule if rule is not None else "",
            "delta": "",
            "scheduler": cfg.scheduler,
            "seeds": len(reports),
            "edges": "",
            "total_weight": "",
            "weight_over_mst": "",
            "max_degree": "",
            "sp_queries": "",
            "visited_total": "",
            "max_point_queries": "",
            "error": error,
        }
        if reports:
            k = len(reports)
            if reports[0].delta is not None:
                row["delta"] = reports[0].delta
            row["edges"] = sum(r.edges for r in reports) / k
            row["total_weight"] = sum(r.total_weight for r in reports) / k
            row["weight_over_mst"] = sum(r.weight_over_mst for r in reports) / k
            row["max_degree"] = sum(r.max_degree for r in reports) / k
            row["sp_queries"] = sum(r.sp_queries for r in reports) / k
            row["visited_total"] = sum(r.visited_total for r in reports) / k
            row["max_point_queries"] = sum(r.max_point_queries for r in reports) / k
        rows.append(row)
    if cfg.csv_path:
        write_csv(rows, cfg.csv_path)
    return rows


def write_csv(rows: list[dict], path: str) -> None:
    """Machine output: full-precision values, no timing, LF endings."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_csv_cell(row[c]) for c in CSV_COLUMNS) + "\n")


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_table(rows: list[dict]) -> str:
    """Benchmark-table presentation: edges in thousands to one decimal,
    weight ratio and degree rounded to integers, queries in thousands."""
    header = f"{'Algorithm':<14} {'t':>5} {'delta':>7} {'edges(K)':>9} " \
             f"{'wt/MST':>7} {'degree':>7} {'queries(K)':>10}"
    lines = [header, "-" * len(header)]
    for row in rows:
        if row["error"]:
            lines.append(
                f"{row['algorithm']:<14} {row['t']:>5} {_fmt_delta(row):>7} "
                f"error: {row['error']}")
            continue
        lines.append(
            f"{row['algorithm']:<14} {row['t']:>5} {_fmt_delta(row):>7} "
            f"{row['edges'] / 1000:>9.1f} {round(row['weight_over_mst']):>7d} "
            f"{round(row['max_degree']):>7d} {round(row['sp_queries'] / 1000):>10d}")
    return "\n".join(lines)


def _fmt_delta(row: dict) -> str:
    if row["delta"] == "":
        return "-"
    return f"{row['delta']:.4g}"
