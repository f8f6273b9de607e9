"""Verification and metrics for constructed spanners.

Dilation is measured exactly: shortest-path distance over Euclidean
distance, maximized over all pairs. The all-pairs sweep uses scipy's
sparse-graph Dijkstra in source blocks to keep memory flat; the hand-rolled
single-source routine in graph.py stays the reference the tests compare
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .geometry import PointSet
from .graph import SpannerGraph, euclidean_mst_weight, full_dijkstra

DILATION_TOL = 1e-9


@dataclass(frozen=True)
class DilationReport:
    """Exact worst-case stretch of a graph over its point set.

    max_dilation is the maximum over all unordered pairs of graph distance
    divided by Euclidean distance; inf when the graph is disconnected.
    witness is a pair attaining the maximum (None when fewer than 2 points).
    """

    max_dilation: float
    witness: Optional[tuple[int, int]]


class QueryCounters:
    """Shortest-path query accounting for one construction run.

    sp_queries counts bounded Dijkstra invocations; visited_total sums their
    settled-vertex counts. per_point[i] counts the queries point i took part
    in (each pair query is charged to both endpoints).
    """

    __slots__ = ("sp_queries", "visited_total", "per_point")

    def __init__(self, n: int):
        self.sp_queries = 0
        self.visited_total = 0
        self.per_point = [0] * n

    def record(self, p: int, q: int, settled: int) -> None:
        self.sp_queries += 1
        self.visited_total += settled
        self.per_point[p] += 1
        self.per_point[q] += 1

    def max_per_point(self) -> int:
        return max(self.per_point) if self.per_point else 0


@dataclass(frozen=True)
class RunReport:
    """Construction-run summary: the benchmark-table columns plus context."""

    algorithm: str
    n: int
    t: float
    delta: Optional[float]
    edges: int
    total_weight: float
    weight_over_mst: float
    max_degree: int
    sp_queries: int
    visited_total: int
    queries_per_point: tuple[int, ...] = field(repr=False)
    wall_time: float = 0.0

    @property
    def max_point_queries(self) -> int:
        return max(self.queries_per_point) if self.queries_per_point else 0


def _graph_csr(g: SpannerGraph) -> csr_matrix:
    n = g.num_vertices
    us, vs, ws = g.edge_arrays()
    rows = np.concatenate((us, vs))
    cols = np.concatenate((vs, us))
    data = np.concatenate((ws, ws))
    return csr_matrix((data, (rows, cols)), shape=(n, n))


def measure_dilation(g: SpannerGraph, points: PointSet) -> DilationReport:
    """Exact maximum dilation over all pairs, with a witness pair.

    Runs a full single-source shortest-path sweep from every vertex,
    blocked to bound memory at a few tens of MB regardless of n.
    """
    n = len(points)
    if n < 2:
        return DilationReport(1.0, None)
    mat = _graph_csr(g)
    xs = points.xs
    ys = points.ys
    block = max(1, min(n, 4_000_000 // n))
    best = -1.0
    witness = (0, 1)
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        sp = _csgraph_dijkstra(mat, directed=False, indices=np.arange(lo, hi))
        eu = np.hypot(xs[np.newaxis, :] - xs[lo:hi, np.newaxis],
                      ys[np.newaxis, :] - ys[lo:hi, np.newaxis])
        # self-distances: 0/0 guarded by making the denominator harmless
        np.fill_diagonal(eu[:, lo:hi], np.inf)
        with np.errstate(invalid="ignore"):
            ratio = sp / eu
        flat = int(np.nanargmax(ratio))
        r = float(ratio.flat[flat])
        if r > best:
            best = r
            witness = (lo + flat // n, flat % n)
        if math.isinf(best):
            break
    p, q = witness
    if p > q:
        p, q = q, p
    return DilationReport(best, (p, q))


def pair_dilation(g: SpannerGraph, points: PointSet, p: int, q: int) -> float:
    """Dilation of one pair: graph distance / Euclidean distance."""
    if p == q:
        raise ValueError("dilation of a pair needs two distinct points")
    return full_dijkstra(g, p)[q] / points.distance(p, q)


def certify_spanner(g: SpannerGraph, points: PointSet, t: float) -> tuple[bool, DilationReport]:
    """True plus the measurement iff max dilation <= t within 1e-9."""
    report = measure_dilation(g, points)
    return report.max_dilation <= t + DILATION_TOL, report


def graphs_equal(g1: SpannerGraph, g2: SpannerGraph) -> bool:
    """True iff the edge sets match as unordered id pairs."""
    if g1.num_vertices != g2.num_vertices:
        raise ValueError(
            f"vertex count mismatch: {g1.num_vertices} vs {g2.num_vertices}")
    return g1.edge_set() == g2.edge_set()


def compute_report(
    g: SpannerGraph,
    points: PointSet,
    counters: QueryCounters,
    *,
    algorithm: str = "",
    t: float = 0.0,
    delta: Optional[float] = None,
    wall_time: float = 0.0,
    mst_weight: Optional[float] = None,
) -> RunReport:
    """Assemble the benchmark-table row for a finished construction.

    mst_weight may be passed in when the caller already computed it for this
    point set; otherwise it is computed here. An empty graph reports
    weight_over_mst = 0.
    """
    total = g.total_weight
    if total == 0.0:
        ratio = 0.0
    else:
        if mst_weight is None:
            mst_weight = euclidean_mst_weight(points)
        ratio = total / mst_weight if mst_weight > 0.0 else math.inf
    return RunReport(
        algorithm=algorithm,
        n=len(points),
        t=t,
        delta=delta,
        edges=g.num_edges,
        total_weight=total,
        weight_over_mst=ratio,
        max_degree=g.max_degree(),
        sp_queries=counters.sp_queries,
        visited_total=counters.visited_total,
        queries_per_point=tuple(counters.per_point),
        wall_time=wall_time,
    )
