"""The spanner constructions and their query accounting.

The central construction processes pairs in non-decreasing distance order,
skips pairs whose endpoints already cover each other with cones, and answers
the rest with a length-bounded shortest-path query: a path within delta
times the straight-line distance means no edge is needed; otherwise the edge
is added. Either way both endpoints record a cone whose width encodes the
detour quality found, which is what suppresses future queries in nearby
directions.

Baselines: the plain greedy construction, the cone graph (nearest projection
per angular sector), greedy pruning of the cone graph, and the gap rule.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import QueryCounters, RunReport, compute_report
from .geometry import TWO_PI, ConeCollection, PointSet, cone_half_angle
from .graph import SpannerGraph, full_dijkstra, make_query_engine
from .scheduler import LazyPairScheduler, covered_pair, eager_schedule

SCHEDULER_MODES = ("eager", "lazy")


@dataclass(frozen=True)
class DeltaGreedyParams:
    """Stretch target t, query cutoff delta with 1 < delta <= t, and the
    pair-scheduling mode."""

    t: float
    delta: float
    scheduler: str = "eager"

    def __post_init__(self) -> None:
        if not self.t > 1.0:
            raise ValueError(f"stretch must exceed 1, got t={self.t}")
        if not 1.0 < self.delta <= self.t:
            raise ValueError(
                f"delta must satisfy 1 < delta <= t, got delta={self.delta}, t={self.t}")
        if self.scheduler not in SCHEDULER_MODES:
            raise ValueError(f"unknown scheduler mode {self.scheduler!r}")


# Fraction of the k/sqrt(n) scan scale used as the first radius. Loading the
# full k/sqrt(n) disk up front makes the initial candidate streams hold two
# orders of magnitude more pairs than ever get queried; starting an eighth as
# wide and letting the doubling rule grow it keeps streams near the useful
# size, because refills past the first happen with cones already recorded and
# prefilter nearly everything. Construction output is invariant to this
# choice; only scan scheduling changes.
_RADIUS_SCALE = 0.125


def _initial_radius(points: PointSet, t: float, delta: float) -> float:
    """Starting scan radius for the lazy scheduler.

    Scaled from the expected per-point query count k = 1/(t/delta - 1) for
    points uniform in the bounding square: a k/sqrt(n) disk is expected to
    reach the points a query involves, and _RADIUS_SCALE trims it to keep the
    first candidate load small. When delta = t the k expression degenerates;
    the number of widest cones needed to span all directions takes over as
    the per-point pair estimate, which tracks observed query counts closely.
    """
    n = len(points)
    ratio = t / delta
    if ratio > 1.0:
        k = math.ceil(1.0 / (ratio - 1.0))
    else:
        k = math.ceil(math.pi / cone_half_angle(1.0, t))
    min_x, min_y, max_x, max_y = points.bounding_box()
    span = max(max_x - min_x, max_y - min_y)
    if span <= 0.0:
        span = 1.0
    return max(k, 1) * _RADIUS_SCALE / math.sqrt(max(n, 1)) * span


def _delta_step(
    points: PointSet,
    engine,
    cones: list[ConeCollection],
    counters: QueryCounters,
    t: float,
    delta: float,
    p: int,
    q: int,
) -> None:
    """Query one pair and record the outcome: maybe an edge, always cones."""
    pq = points.distance(p, q)
    res = engine.query(p, q, delta * pq)
    counters.record(p, q, res.settled)
    if res.found:
        d = res.path_length / pq
        # guard the division against last-ulp drift out of [1, delta]
        if d < 1.0:
            d = 1.0
        elif d > delta:
            d = delta
    else:
        engine.add_edge(p, q)
        d = 1.0
    half = cone_half_angle(d, t)
    a = points[p]
    b = points[q]
    cones[p].add(a, b, half)
    cones[q].add(b, a, half)


def delta_greedy(points: PointSet, params: DeltaGreedyParams) -> tuple[SpannerGraph, RunReport]:
    """Cone-pruned greedy spanner construction.

    Pairs arrive in non-decreasing distance order; a pair is skipped without
    any query when one endpoint lies in the other's cones. The output is a
    t-spanner; with delta = t it matches the plain greedy construction edge
    for edge.
    """
    start = time.perf_counter()
    n = len(points)
    g = SpannerGraph(points)
    engine = make_query_engine(g)
    cones = [ConeCollection(i) for i in range(n)]
    counters = QueryCounters(n)
    t = params.t
    delta = params.delta
    if n >= 2:
        if params.scheduler == "lazy":
            sched = LazyPairScheduler(
                points, cones, _initial_radius(points, t, delta))
            while True:
                item = sched.next_pair()
                if item is None:
                    break
                _delta_step(points, engine, cones, counters, t, delta, item[1], item[2])
        else:
            for _, p, q in eager_schedule(points):
                if covered_pair(points, cones, p, q):
                    continue
                _delta_step(points, engine, cones, counters, t, delta, p, q)
    report = compute_report(
        g, points, counters,
        algorithm="delta-greedy", t=t, delta=delta,
        wall_time=time.perf_counter() - start)
    return g, report


def path_greedy(points: PointSet, t: float, *,
                full_search: bool = False) -> tuple[SpannerGraph, RunReport]:
    """Plain greedy spanner: query every pair in distance order, add the
    edge iff the graph so far has no path within t times the distance.

    Queries all n(n-1)/2 pairs, so this is quadratic in queries by design.
    The bounded query decides pruning exactly; full_search switches to
    unbounded searches for auditing, without changing any decision.
    """
    if not t > 1.0:
        raise ValueError(f"stretch must exceed 1, got t={t}")
    start = time.perf_counter()
    n = len(points)
    g = SpannerGraph(points)
    engine = make_query_engine(g)
    counters = QueryCounters(n)
    for _, p, q in eager_schedule(points):
        pq = points.distance(p, q)
        if full_search:
            dist = full_dijkstra(g, p)[q]
            counters.record(p, q, n)
            keep = dist > t * pq
        else:
            res = engine.query(p, q, t * pq)
            counters.record(p, q, res.settled)
            keep = not res.found
        if keep:
            engine.add_edge(p, q)
    report = compute_report(
        g, points, counters,
        algorithm="path-greedy", t=t, delta=None,
        wall_time=time.perf_counter() - start)
    return g, report


def theta_graph(points: PointSet, t: float) -> tuple[SpannerGraph, RunReport]:
    """Cone graph: split directions around every point into equal sectors
    narrow enough for stretch t, and connect each point to the sector's
    nearest neighbor by bisector projection. No shortest-path queries."""
    start = time.perf_counter()
    theta_star = cone_half_angle(1.0, t)  # widest sector angle still giving stretch t
    k = math.ceil(TWO_PI / theta_star)
    width = TWO_PI / k
    n = len(points)
    g = SpannerGraph(points)
    counters = QueryCounters(n)
    xs = points.xs
    ys = points.ys
    if n >= 2:
        min_x, min_y, max_x, max_y = points.bounding_box()
        # sector-band separator for the combined sort key; any bound > max
        # projection works
        band = 2.0 * math.hypot(max_x - min_x, max_y - min_y) + 1.0
        for p in range(n):
            dx = xs - xs[p]
            dy = ys - ys[p]
            ang = np.arctan2(dy, dx)
            np.add(ang, TWO_PI, out=ang, where=ang < 0.0)
            sector = (ang / width).astype(np.int64)
            np.minimum(sector, k - 1, out=sector)
            sector[p] = k  # self goes to a discard bucket
            bis = (sector.astype(np.float64) + 0.5) * width
            proj = dx * np.cos(bis) + dy * np.sin(bis)
            key = sector * band + proj
            order = np.argsort(key, kind="stable")
            first = np.unique(sector[order], return_index=True)
            for s, fi in zip(first[0].tolist(), first[1].tolist()):
                if s == k:
                    continue
                q = int(order[fi])
                if not g.has_edge(p, q):
                    g.add_edge(p, q)
    report = compute_report(
        g, points, counters,
        algorithm="theta-graph", t=t, delta=None,
        wall_time=time.perf_counter() - start)
    return g, report


def greedy_on_theta(points: PointSet, t: float,
                    t_prime: Optional[float] = None) -> tuple[SpannerGraph, RunReport]:
    """Greedy pruning of a cone graph: build the cone graph for a smaller
    stretch t', then re-add its edges in length order only when the kept
    subgraph lacks a path within (t/t') times the edge length. One bounded
    query per cone-graph edge."""
    if t_prime is None:
        t_prime = math.sqrt(t)
    if not 1.0 < t_prime < t:
        raise ValueError(
            f"inner stretch must satisfy 1 < t' < t, got t'={t_prime}, t={t}")
    start = time.perf_counter()
    base, _ = theta_graph(points, t_prime)
    bound = t / t_prime
    n = len(points)
    g = SpannerGraph(points)
    engine = make_query_engine(g)
    counters = QueryCounters(n)
    edges = base.edges()
    edges.sort(key=lambda e: (e[2], e[0], e[1]))
    for u, v, w in edges:
        res = engine.query(u, v, bound * w)
        counters.record(u, v, res.settled)
        if not res.found:
            engine.add_edge(u, v)
    report = compute_report(
        g, points, counters,
        algorithm="greedy-theta", t=t, delta=t_prime,
        wall_time=time.perf_counter() - start)
    return g, report


def _gap_angle(t: float, w: float) -> float:
    """Largest direction separation theta with 1/(cos theta - sin theta - 2w)
    <= t, the admissible closeness of edge directions under the gap rule."""
    if not t > 1.0:
        raise ValueError(f"stretch must exceed 1, got t={t}")
    if w < 0.0:
        raise ValueError(f"gap factor must be nonnegative, got w={w}")
    arg = (1.0 / t + 2.0 * w) / math.sqrt(2.0)
    if arg >= math.sin(0.25 * math.pi):
        raise ValueError(f"no positive gap angle for t={t}, w={w}")
    return 0.25 * math.pi - math.asin(arg)


def gap_greedy(points: PointSet, t: float, w: float = 0.0,
               scheduler: str = "eager") -> tuple[SpannerGraph, RunReport]:
    """Gap-rule spanner: scan pairs in distance order and add an edge unless
    an existing edge runs in a nearly identical direction from nearly the
    same place.

    With w = 0 (the default) "nearly the same place" means the same point,
    so the rule reduces to per-endpoint direction cones of half-angle
    _gap_angle(t, 0), and either scheduler applies. With w > 0 rejection
    scans the edge list per pair, which is only practical for small inputs,
    and only the eager scheduler is supported. No shortest-path queries are
    made by this construction, so sp_queries stays 0.
    """
    theta_g = _gap_angle(t, w)
    if scheduler not in SCHEDULER_MODES:
        raise ValueError(f"unknown scheduler mode {scheduler!r}")
    if w > 0.0 and scheduler == "lazy":
        raise ValueError("lazy scheduling applies to the w=0 gap rule only")
    start = time.perf_counter()
    n = len(points)
    g = SpannerGraph(points)
    counters = QueryCounters(n)
    if w == 0.0:
        cones = [ConeCollection(i) for i in range(n)]

        def add(p: int, q: int) -> None:
            g.add_edge(p, q)
            a = points[p]
            b = points[q]
            cones[p].add(a, b, theta_g)
            cones[q].add(b, a, theta_g)

        if n >= 2:
            if scheduler == "lazy":
                sched = LazyPairScheduler(
                    points, cones, _initial_radius(points, t, t))
                while True:
                    item = sched.next_pair()
                    if item is None:
                        break
                    add(item[1], item[2])
            else:
                for _, p, q in eager_schedule(points):
                    if not covered_pair(points, cones, p, q):
                        add(p, q)
    else:
        # directed edge list as (source, target, direction, length)
        directed: list[tuple[int, int, float, float]] = []

        def direction_of(a: int, b: int) -> float:
            ang = math.atan2(points[b].y - points[a].y, points[b].x - points[a].x)
            return ang + TWO_PI if ang < 0.0 else ang

        def angdiff(a: float, b: float) -> float:
            d = math.fmod(a - b, TWO_PI)
            if d > math.pi:
                d -= TWO_PI
            elif d <= -math.pi:
                d += TWO_PI
            return abs(d)

        for dpq, p, q in eager_schedule(points):
            ang_pq = direction_of(p, q)
            ok = True
            for r, s, ang_rs, drs in directed:
                # closeness is scaled by the shorter of the two edges: the
                # stretch argument walks the shorter witness edge, so only a
                # gap small against that edge may reject
                near = w * min(dpq, drs)
                if angdiff(ang_pq, ang_rs) <= theta_g and (
                        points.distance(p, r) <= near
                        or points.distance(q, s) <= near):
                    ok = False
                    break
            if ok:
                g.add_edge(p, q)
                ang_qp = ang_pq - math.pi if ang_pq >= math.pi else ang_pq + math.pi
                directed.append((p, q, ang_pq, dpq))
                directed.append((q, p, ang_qp, dpq))
    report = compute_report(
        g, points, counters,
        algorithm="gap-greedy", t=t, delta=None,
        wall_time=time.perf_counter() - start)
    return g, report
