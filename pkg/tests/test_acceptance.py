"""End-to-end acceptance gate for the spanner construction pipeline.

Each test covers one numbered acceptance check and prints one PASS line
(visible under pytest -s); the two benchmark-scale checks are marked slow.
Reference statistics for the n=8000 uniform runs are the published
benchmark rows for these parameter settings, with distributional
tolerances because the original point sets are not reproducible.
"""

import itertools
import math
import random
import time

import numpy as np
import pytest

from deltaspan.analysis import certify_spanner, graphs_equal, measure_dilation
from deltaspan.construct import DeltaGreedyParams, delta_greedy, path_greedy
from deltaspan.geometry import PointSet, cone_half_angle
from deltaspan.graph import (
    SpannerGraph,
    bounded_astar,
    bounded_dijkstra,
    euclidean_mst_weight,
    full_dijkstra,
    mst_weight_prim,
)
from deltaspan.pointgen import generate_points

STRETCHES = (1.1, 1.5, 2.0)


def _delta_grid(t):
    return (t, t ** 0.9, math.sqrt(t))


# Shared corpus for acceptance 1 (stretch) and 3 (query bound): every
# (t, delta) cell over three sizes and ten seeds, built once.
_RUNS = None


def _certification_runs():
    global _RUNS
    if _RUNS is None:
        runs = []
        for n in (50, 200, 1000):
            for seed in range(10):
                pts = generate_points(n, seed=seed)
                for t in STRETCHES:
                    for delta in _delta_grid(t):
                        g, rep = delta_greedy(pts, DeltaGreedyParams(t=t, delta=delta))
                        runs.append((pts, t, delta, g, rep))
        _RUNS = runs
    return _RUNS


def test_acceptance_1_output_always_certifies_stretch():
    runs = _certification_runs()
    assert len(runs) == 3 * 10 * 3 * 3
    for pts, t, delta, g, rep in runs:
        ok, report = certify_spanner(g, pts, t)
        assert ok, (len(pts), t, delta, report.max_dilation)
        assert report.max_dilation <= t + 1e-9
    print(f"acceptance 1: PASS measured stretch <= t + 1e-9 on {len(runs)} runs")


def test_acceptance_2_delta_equal_t_matches_plain_greedy():
    checked = 0
    for n in (50, 100, 300):
        for seed in range(20):
            pts = generate_points(n, seed=seed)
            for t in (1.1, 2.0):
                g_delta, _ = delta_greedy(pts, DeltaGreedyParams(t=t, delta=t))
                g_plain, _ = path_greedy(pts, t)
                assert graphs_equal(g_delta, g_plain), (n, seed, t)
                checked += 1
    print(f"acceptance 2: PASS edge sets identical on {checked} runs")


def test_acceptance_3_per_point_query_bound():
    checked = 0
    for pts, t, delta, g, rep in _certification_runs():
        if delta >= t:
            continue
        width = math.pi / 4 - math.asin(delta / (math.sqrt(2.0) * t))
        bound = math.floor(2.0 * math.pi / width) + 1
        assert rep.max_point_queries <= bound, (len(pts), t, delta)
        checked += 1
    print(f"acceptance 3: PASS per-point query counts bounded on {checked} runs")


# n=8000 uniform reference rows, keyed by (t, delta):
# (edges in K, weight/MST, max degree, queries in K)
BENCH_ROWS = {
    (1.1, 1.1): (35.6, 10, 17, 254),
    (1.1, 1.1 ** 0.9): (37.8, 12, 18, 242),
    (1.1, math.sqrt(1.1)): (51.6, 19, 23, 204),
    (1.5, 1.5): (15.1, 3, 7, 82),
    (1.5, 1.5 ** 0.9): (16.0, 3, 8, 77),
    (1.5, math.sqrt(1.5)): (22.5, 5, 11, 63),
    (2.0, 2.0): (11.4, 2, 5, 55),
    (2.0, 2.0 ** 0.9): (11.9, 2, 5, 52),
    (2.0, math.sqrt(2.0)): (16.3, 3, 8, 44),
}


@pytest.mark.slow
def test_acceptance_4_benchmark_scale_statistics():
    seeds = (0, 1, 2)
    point_sets = [generate_points(8000, seed=s) for s in seeds]
    for (t, delta), (ref_edges_k, ref_ratio, ref_deg, ref_queries_k) in BENCH_ROWS.items():
        edges = []
        ratios = []
        degs = []
        queries = []
        for pts in point_sets:
            g, rep = delta_greedy(pts, DeltaGreedyParams(t=t, delta=delta, scheduler="lazy"))
            edges.append(rep.edges)
            ratios.append(rep.weight_over_mst)
            degs.append(rep.max_degree)
            queries.append(rep.sp_queries)
        mean_edges = sum(edges) / len(edges) / 1000.0
        mean_ratio = sum(ratios) / len(ratios)
        mean_deg = sum(degs) / len(degs)
        mean_queries = sum(queries) / len(queries) / 1000.0
        cell = (t, round(delta, 4))
        assert abs(mean_edges - ref_edges_k) <= 0.05 * ref_edges_k, (cell, mean_edges)
        assert abs(mean_deg - ref_deg) <= 3.0, (cell, mean_deg)
        assert abs(mean_ratio - ref_ratio) <= 0.20 * ref_ratio, (cell, mean_ratio)
        assert ref_queries_k / 2.0 <= mean_queries <= ref_queries_k * 2.0, (cell, mean_queries)
    print(f"acceptance 4: PASS 9 benchmark cells x {len(seeds)} seeds within tolerances")


def test_acceptance_5_lazy_and_eager_schedules_agree():
    checked = 0
    for n in (100, 500):
        for t in (1.5, 2.0):
            delta = t ** 0.9
            for seed in range(10):
                pts = generate_points(n, seed=seed)
                g_eager, _ = delta_greedy(
                    pts, DeltaGreedyParams(t=t, delta=delta, scheduler="eager"))
                g_lazy, _ = delta_greedy(
                    pts, DeltaGreedyParams(t=t, delta=delta, scheduler="lazy"))
                assert graphs_equal(g_eager, g_lazy), (n, t, seed)
                checked += 1
    print(f"acceptance 5: PASS identical edge sets on {checked} runs")


def test_acceptance_6a_cone_width_identity():
    rng = random.Random(618)
    for _ in range(100_000):
        t = 1.0 + 1e-9 + rng.random() * 9.0
        d = 1.0 + rng.random() * (t - 1.0)
        a = cone_half_angle(d, t)
        assert 0.0 <= a <= math.pi / 4
        assert abs((math.cos(a) - math.sin(a)) - d / t) <= 1e-12
    print("acceptance 6a: PASS cone width identity <= 1e-12 on 100000 samples")


def test_acceptance_6b_detour_inequality():
    # admissible triple: |pr| <= |pq| and the angle at p within the cone
    # width for (delta, t); routing delta*|pr| + t*|rq| must stay <= t*|pq|
    rng = random.Random(977)
    for _ in range(100_000):
        t = 1.0 + 1e-9 + rng.random() * 4.0
        delta = 1.0 + rng.random() * (t - 1.0)
        theta_max = math.pi / 4 - math.asin(delta / (math.sqrt(2.0) * t))
        theta = (2.0 * rng.random() - 1.0) * theta_max
        pq = 0.1 + rng.random() * 10.0
        pr = pq * rng.random()
        rx = pr * math.cos(theta)
        ry = pr * math.sin(theta)
        rq = math.hypot(pq - rx, ry)
        assert delta * pr + t * rq <= t * pq + 1e-9
    print("acceptance 6b: PASS detour inequality on 100000 admissible triples")


def _random_connected_graph(n, extra_edges, seed):
    pts = generate_points(n, seed=seed)
    g = SpannerGraph(pts)
    rng = random.Random(seed + 77)
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        g.add_edge(a, b)
    added = 0
    while added < extra_edges:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v and not g.has_edge(u, v):
            g.add_edge(u, v)
            added += 1
    return pts, g


def _mst_brute_force(points):
    # minimum over all spanning edge subsets; n <= 6 keeps this tiny
    n = len(points)
    if n < 2:
        return 0.0
    all_edges = [(points.distance(p, q), p, q) for p in range(n) for q in range(p + 1, n)]
    best = math.inf
    for subset in itertools.combinations(all_edges, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        joined = 0
        for _, p, q in subset:
            rp, rq = find(p), find(q)
            if rp != rq:
                parent[rp] = rq
                joined += 1
        if joined == n - 1:
            best = min(best, sum(w for w, _, _ in subset))
    return best


def _all_pairs_dilation(g, pts):
    # dense Floyd-Warshall oracle, independent of the sweep implementation
    n = g.num_vertices
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u, v, w in g.edges():
        dist[u, v] = min(dist[u, v], w)
        dist[v, u] = min(dist[v, u], w)
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    worst = 0.0
    for p in range(n):
        for q in range(p + 1, n):
            worst = max(worst, dist[p, q] / pts.distance(p, q))
    return worst


def test_acceptance_6c_search_mst_and_dilation_oracles():
    # bounded searches against the unbounded sweep
    rng = random.Random(3)
    for seed in range(5):
        pts, g = _random_connected_graph(60, 80, seed)
        full = full_dijkstra(g, seed)
        for target in range(60):
            if target == seed:
                continue
            want = full[target]
            for limit in (want * 0.999999, want, want * 1.000001, math.inf):
                for search in (bounded_dijkstra, bounded_astar):
                    res = search(g, seed, target, limit)
                    assert res.found == (want <= limit)
                    if res.found:
                        assert abs(res.path_length - want) <= 1e-9
    # spanning tree weight against subset enumeration
    for seed in range(30):
        n = 2 + seed % 5
        pts = generate_points(n, seed=seed)
        want = _mst_brute_force(pts)
        assert abs(euclidean_mst_weight(pts) - want) <= 1e-9
        assert abs(mst_weight_prim(pts) - want) <= 1e-9
    # dilation sweep against the dense oracle
    for seed in range(6):
        pts = generate_points(50, seed=seed)
        t = STRETCHES[seed % 3]
        g, _ = delta_greedy(pts, DeltaGreedyParams(t=t, delta=t ** 0.9))
        want = _all_pairs_dilation(g, pts)
        got = measure_dilation(g, pts).max_dilation
        assert abs(got - want) <= 1e-9
    print("acceptance 6c: PASS search, spanning-tree, and dilation oracles agree")


@pytest.mark.slow
def test_acceptance_7_scaling_growth_stays_subcubic():
    t = 1.5
    delta = t ** 0.9
    walls = []
    start = time.perf_counter()
    for n in (10_000, 20_000, 40_000):
        pts = generate_points(n, seed=0)
        t0 = time.perf_counter()
        delta_greedy(pts, DeltaGreedyParams(t=t, delta=delta, scheduler="lazy"))
        walls.append(time.perf_counter() - t0)
    total = time.perf_counter() - start
    for smaller, larger in zip(walls, walls[1:]):
        assert larger <= 3.0 * smaller, walls
    assert total < 600.0, walls
    print(f"acceptance 7: PASS walls {[f'{w:.1f}s' for w in walls]}, "
          f"growth <= 3x per doubling, total {total:.0f}s < 600s")
