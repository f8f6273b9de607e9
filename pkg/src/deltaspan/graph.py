"""Undirected Euclidean graphs and the shortest-path machinery.

The bounded query is the inner loop of the greedy constructions: it runs
Dijkstra from one endpoint but abandons the search as soon as no remaining
vertex can be reached within the given length budget, and stops early when
the target is settled.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .geometry import PointSet


@dataclass(frozen=True)
class BoundedQueryResult:
    """Outcome of a length-bounded point-to-point shortest path query.

    found is True iff a path of length <= limit reaches the target; a path of
    length exactly limit counts as found. path_length is the shortest path
    length when found, else inf. settled counts vertices finalized before the
    search stopped.
    """

    found: bool
    path_length: float
    settled: int


class SpannerGraph:
    """Undirected graph on a fixed PointSet with Euclidean edge weights.

    Vertices are the point ids 0..n-1. Parallel edges and self-loops are
    rejected. Edge weights are always the Euclidean distance between the
    endpoints, so total weight and path lengths are geometric quantities.
    """

    __slots__ = ("points", "adj", "_edges", "_total_weight",
                 "_dij_dist", "_dij_stamp", "_dij_gen")

    def __init__(self, points: PointSet):
        self.points = points
        self.adj: list[list[tuple[int, float]]] = [[] for _ in range(len(points))]
        self._edges: dict[tuple[int, int], float] = {}
        self._total_weight = 0.0
        # scratch for bounded_dijkstra, reused across queries: entries are
        # valid only where the stamp matches the current generation, so no
        # per-query clearing is needed
        n = len(points)
        self._dij_dist = [math.inf] * n
        self._dij_stamp = [0] * n
        self._dij_gen = 0

    @property
    def num_vertices(self) -> int:
        return len(self.points)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def total_weight(self) -> float:
        return self._total_weight

    def add_edge(self, u: int, v: int) -> float:
        """Insert edge {u, v}; returns its weight. Raises on self-loops,
        duplicates, and out-of-range ids."""
        n = len(self.points)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in self._edges:
            raise ValueError(f"duplicate edge {key}")
        w = self.points.distance(u, v)
        self._edges[key] = w
        self.adj[u].append((v, w))
        self.adj[v].append((u, w))
        self._total_weight += w
        return w

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._edges

    def edges(self) -> list[tuple[int, int, float]]:
        """Edges as (u, v, weight) with u < v, in insertion order."""
        return [(u, v, w) for (u, v), w in self._edges.items()]

    def edge_set(self) -> frozenset[tuple[int, int]]:
        """Frozen set of (u, v) pairs with u < v."""
        return frozenset(self._edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        if not self.adj:
            return 0
        return max(len(nbrs) for nbrs in self.adj)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(us, vs, ws) numpy views of the edge list, u < v rows."""
        m = len(self._edges)
        us = np.empty(m, dtype=np.int64)
        vs = np.empty(m, dtype=np.int64)
        ws = np.empty(m, dtype=np.float64)
        for i, ((u, v), w) in enumerate(self._edges.items()):
            us[i] = u
            vs[i] = v
            ws[i] = w
        return us, vs, ws


def bounded_dijkstra(graph: SpannerGraph, source: int, target: int, limit: float) -> BoundedQueryResult:
    """Shortest path from source to target, abandoned once every reachable
    remaining vertex is farther than limit.

    Stops as soon as the target is settled, or as soon as the smallest
    tentative distance in the queue exceeds limit (at that moment no path of
    length <= limit can still reach the target). Tentative distances above
    the limit are never enqueued.
    """
    if source == target:
        return BoundedQueryResult(True, 0.0, 1)
    dist = graph._dij_dist
    stamp = graph._dij_stamp
    graph._dij_gen += 1
    gen = graph._dij_gen
    dist[source] = 0.0
    stamp[source] = gen
    heap: list[tuple[float, int]] = [(0.0, source)]
    adj = graph.adj
    push = heapq.heappush
    pop = heapq.heappop
    settled = 0
    while heap:
        d, u = pop(heap)
        if d > limit:
            break
        if d > dist[u]:
            continue  # stale entry left behind by a later improvement
        settled += 1
        if u == target:
            return BoundedQueryResult(True, d, settled)
        for v, w in adj[u]:
            nd = d + w
            if nd <= limit:
                if stamp[v] != gen:
                    stamp[v] = gen
                    dist[v] = nd
                    push(heap, (nd, v))
                elif nd < dist[v]:
                    dist[v] = nd
                    push(heap, (nd, v))
    return BoundedQueryResult(False, math.inf, settled)


def bounded_astar(graph: SpannerGraph, source: int, target: int, limit: float) -> BoundedQueryResult:
    """bounded_dijkstra steered toward the target by the straight-line
    distance lower bound.

    Every edge weight is the Euclidean distance of its endpoints, so
    straight-line distance to the target never overestimates the remaining
    path; ordering the queue by distance-so-far plus that bound settles the
    same exact distances while expanding far fewer vertices. A vertex is
    enqueued only when the bound keeps some route to the target within the
    limit, which also replaces the early stop: when the queue drains, no
    admissible route remains. Found/not-found and the returned length match
    bounded_dijkstra; only the settled count is smaller.
    """
    if source == target:
        return BoundedQueryResult(True, 0.0, 1)
    xs = graph.points.xs
    ys = graph.points.ys
    tx = xs[target]
    ty = ys[target]
    if math.hypot(xs[source] - tx, ys[source] - ty) > limit:
        return BoundedQueryResult(False, math.inf, 0)
    dist = graph._dij_dist
    stamp = graph._dij_stamp
    graph._dij_gen += 1
    gen = graph._dij_gen
    dist[source] = 0.0
    stamp[source] = gen
    heap: list[tuple[float, float, int]] = [(0.0, 0.0, source)]
    adj = graph.adj
    hypot = math.hypot
    push = heapq.heappush
    pop = heapq.heappop
    settled = 0
    while heap:
        _, d, u = pop(heap)
        if d > dist[u]:
            continue  # stale entry left behind by a later improvement
        settled += 1
        if u == target:
            return BoundedQueryResult(True, d, settled)
        for v, w in adj[u]:
            nd = d + w
            if stamp[v] != gen:
                nf = nd + hypot(xs[v] - tx, ys[v] - ty)
                if nf <= limit:
                    stamp[v] = gen
                    dist[v] = nd
                    push(heap, (nf, nd, v))
            elif nd < dist[v]:
                dist[v] = nd
                push(heap, (nd + hypot(xs[v] - tx, ys[v] - ty), nd, v))
    return BoundedQueryResult(False, math.inf, settled)


def full_dijkstra(graph: SpannerGraph, source: int) -> list[float]:
    """Distances from source to every vertex; inf when unreachable."""
    n = graph.num_vertices
    dist = [math.inf] * n
    dist[source] = 0.0
    done = [False] * n
    heap: list[tuple[float, int]] = [(0.0, source)]
    adj = graph.adj
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


class DirectQueryEngine:
    """Answers bounded queries by searching the shared graph directly."""

    __slots__ = ("graph",)

    def __init__(self, graph: SpannerGraph):
        self.graph = graph

    def add_edge(self, u: int, v: int) -> float:
        return self.graph.add_edge(u, v)

    def query(self, source: int, target: int, limit: float) -> BoundedQueryResult:
        return bounded_astar(self.graph, source, target, limit)


# Relative slack on the gather radius below: a vertex on a float-summed path
# of length <= limit can sit a few ulps past the limit in recomputed
# coordinates, so the gathered region is inflated far beyond that drift.
# Inflating only ever adds vertices, which cannot change any distance.
_CLIP_MARGIN = 1e-12


class ClippedQueryEngine:
    """Bounded queries answered on a per-query local subgraph.

    Every vertex on a source-target path of length <= limit lies within the
    limit of the source, since straight-line distance never exceeds path
    length. Each query gathers the grid window covering that disk in a few
    slices, relabels the vertices, and runs the compiled sparse Dijkstra on
    the small matrix, so the cost scales with the searched region instead of
    the whole graph. Found/not-found and path lengths match bounded_dijkstra
    exactly; only the settled count differs (vertices reached within the
    limit among the gathered window, with no early stop at the target).

    Edges are mirrored into a fixed-capacity row table holding both arc
    directions, so the search can run in directed mode and skip the sparse
    transpose the undirected mode performs per call. Unused slots hold
    zero-weight self-loops that the search relaxes into nothing, and each
    search slices the table to the longest row in actual use.
    """

    __slots__ = ("graph", "points", "_grid", "_cap", "_ind", "_w", "_rowlen",
                 "_maxlen", "_inv", "_stamp", "_gen", "_rows", "_raw_csr")

    def __init__(self, graph: SpannerGraph, row_capacity: int = 16):
        from .scheduler import PointGrid

        self.graph = graph
        self.points = graph.points
        self._grid = PointGrid(graph.points)
        n = len(graph.points)
        cap = max(row_capacity, 2)
        self._cap = cap
        self._ind = np.repeat(np.arange(n, dtype=np.int32), cap).reshape(n, cap)
        self._w = np.zeros((n, cap))
        self._rowlen = np.zeros(n, dtype=np.int32)
        self._maxlen = 0
        self._inv = np.zeros(n, dtype=np.int32)
        self._stamp = np.zeros(n, dtype=np.int32)
        self._gen = 0
        self._rows = np.arange(n + 3, dtype=np.int32)
        self._raw_csr = self._raw_csr_works()
        for u, v, _ in graph.edges():
            self._mirror(u, v)

    @staticmethod
    def _make_raw_csr(data: np.ndarray, indices: np.ndarray,
                      indptr: np.ndarray, k: int) -> csr_matrix:
        """Assemble a csr matrix without the constructor's validation pass;
        the inputs are built to the format contract, so checking each query
        again only costs time."""
        m = csr_matrix.__new__(csr_matrix)
        m.data = data
        m.indices = indices
        m.indptr = indptr
        m._shape = (k, k)
        return m

    def _raw_csr_works(self) -> bool:
        """Probe the raw assembly path once: searches over a toy matrix must
        agree with the checked constructor, else fall back to it."""
        data = np.array([0.5, 0.0, 0.25, 0.0, 0.0, 0.0])
        indices = np.array([1, 0, 2, 1, 2, 2], dtype=np.int32)
        indptr = np.array([0, 2, 4, 6], dtype=np.int32)
        safe = _csgraph_dijkstra(
            csr_matrix((data, indices, indptr), shape=(3, 3)),
            directed=True, indices=0, limit=1.0)
        try:
            raw = self._make_raw_csr(data, indices, indptr, 3)
            fast = _csgraph_dijkstra(raw, directed=True, indices=0, limit=1.0)
            return bool(np.array_equal(safe, fast))
        except Exception:
            return False

    def _mirror(self, u: int, v: int) -> None:
        w = self.points.distance(u, v)
        for a, b in ((u, v), (v, u)):
            k = int(self._rowlen[a])
            if k == self._cap:
                self._grow()
            self._ind[a, k] = b
            self._w[a, k] = w
            self._rowlen[a] = k + 1
            if k + 1 > self._maxlen:
                self._maxlen = k + 1

    def _grow(self) -> None:
        n = len(self.points)
        cap = self._cap * 2
        ind = np.repeat(np.arange(n, dtype=np.int32), cap).reshape(n, cap)
        w = np.zeros((n, cap))
        ind[:, : self._cap] = self._ind
        w[:, : self._cap] = self._w
        self._ind = ind
        self._w = w
        self._cap = cap

    def add_edge(self, u: int, v: int) -> float:
        w = self.graph.add_edge(u, v)
        self._mirror(u, v)
        return w

    def query(self, source: int, target: int, limit: float) -> BoundedQueryResult:
        if source == target:
            return BoundedQueryResult(True, 0.0, 1)
        points = self.points
        pq = points.distance(source, target)
        if pq > limit:
            # straight line already too long: nothing can be within the limit
            return BoundedQueryResult(False, math.inf, 0)
        # Every vertex x on a walk of length <= limit satisfies
        # |sx| + |xt| <= limit: the ellipse with foci at the endpoints and
        # major axis equal to the limit. Gather the grid window of its
        # axis-aligned bounding box (the limit is capped by twice the bbox
        # diagonal, past which the ellipse covers every point anyway, so
        # unbounded limits stay finite for the window arithmetic) and keep
        # the ellipse.
        sp = points[source]
        tp = points[target]
        slack = limit * (1.0 + _CLIP_MARGIN)
        mx = (sp.x + tp.x) * 0.5
        my = (sp.y + tp.y) * 0.5
        diam2 = 2.0 * self._grid.diameter
        length = slack if slack < diam2 else diam2
        a2 = 0.25 * length * length
        b2 = a2 - 0.25 * pq * pq
        dx = tp.x - sp.x
        dy = tp.y - sp.y
        ex = math.sqrt(a2 * dx * dx + b2 * dy * dy) / pq * (1.0 + _CLIP_MARGIN)
        ey = math.sqrt(a2 * dy * dy + b2 * dx * dx) / pq * (1.0 + _CLIP_MARGIN)
        ids, xs, ys = self._grid.window_rect(mx, my, ex, ey)
        keep = np.hypot(xs - sp.x, ys - sp.y) + np.hypot(xs - tp.x, ys - tp.y) <= slack
        ids = ids[keep]
        # vertices with no incident edge cannot lie on a path; dropping them
        # shrinks the local graph without touching any distance
        ids = ids[self._rowlen[ids] > 0]
        k = ids.size + 2
        sub = np.empty(k, dtype=np.int64)
        sub[0] = source
        sub[1] = target
        sub[2:] = ids
        self._gen += 1
        gen = self._gen
        rows = self._rows[:k]
        inv = self._inv
        inv[sub] = rows
        self._stamp[sub] = gen
        # source and target appear a second time among the gathered ids; the
        # scalar writes repoint their labels at the fixed slots 0 and 1, so
        # every arc relabels to those and the duplicate rows stay unreachable
        inv[source] = 0
        inv[target] = 1
        m = self._maxlen
        cols = self._ind[sub, :m]
        inside = self._stamp[cols] == gen
        # arcs leaving the window become self-loops; their real weights can
        # stay, since a positive self-loop never relaxes into anything
        local_cols = np.where(inside, inv[cols], rows[:, None])
        local_w = self._w[sub, :m]
        indptr = self._rows[: k + 1] * m
        if self._raw_csr:
            local = self._make_raw_csr(
                local_w.ravel(), local_cols.ravel(), indptr, k)
        else:
            local = csr_matrix(
                (local_w.ravel(), local_cols.ravel(), indptr), shape=(k, k))
        out = _csgraph_dijkstra(local, directed=True, indices=0, limit=limit)
        dist = out[1]
        settled = int(np.count_nonzero(np.isfinite(out)))
        if dist <= limit:
            return BoundedQueryResult(True, float(dist), settled)
        return BoundedQueryResult(False, math.inf, settled)


# Size at which a construction switches to the clipped engine: below this the
# per-query setup outweighs plain searches on the whole graph.
CLIPPED_ENGINE_MIN_N = 2000


def make_query_engine(graph: SpannerGraph, *, min_clipped_n: int = CLIPPED_ENGINE_MIN_N):
    """Query strategy by instance size: direct searches for small point sets,
    per-query clipped subgraphs for large ones. Both return identical
    found/path_length answers for every query."""
    if graph.num_vertices >= min_clipped_n:
        return ClippedQueryEngine(graph)
    return DirectQueryEngine(graph)


def mst_weight_prim(points: PointSet) -> float:
    """Minimum spanning tree weight by dense Prim over the implicit complete
    graph: quadratic time, linear memory, no pair materialization."""
    n = len(points)
    if n <= 1:
        return 0.0
    xs = points.xs
    ys = points.ys
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    d0 = np.hypot(xs - xs[0], ys - ys[0])
    best = np.where(in_tree, np.inf, d0)
    total = 0.0
    for _ in range(n - 1):
        u = int(np.argmin(best))
        total += float(best[u])
        in_tree[u] = True
        du = np.hypot(xs - xs[u], ys - ys[u])
        np.minimum(best, du, out=best)
        best[in_tree] = np.inf
    return total


def euclidean_mst_weight(points: PointSet) -> float:
    """Total weight of the Euclidean minimum spanning tree.

    Large inputs go through the Delaunay triangulation (the Euclidean MST is
    a subgraph of it), reducing the tree computation to a sparse graph of
    ~3n edges. Small or degenerate inputs (e.g. all points collinear, where
    the triangulation does not exist) fall back to dense Prim; both paths
    compute the exact same tree weight.
    """
    n = len(points)
    if n <= 32:
        return mst_weight_prim(points)
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import minimum_spanning_tree
    from scipy.spatial import Delaunay, QhullError

    coords = np.column_stack((points.xs, points.ys))
    try:
        tri = Delaunay(coords)
    except QhullError:
        return mst_weight_prim(points)
    simp = tri.simplices
    e = np.vstack((simp[:, [0, 1]], simp[:, [1, 2]], simp[:, [0, 2]]))
    e.sort(axis=1)
    e = np.unique(e, axis=0)
    xs = points.xs
    ys = points.ys
    w = np.hypot(xs[e[:, 0]] - xs[e[:, 1]], ys[e[:, 0]] - ys[e[:, 1]])
    m = coo_matrix((w, (e[:, 0], e[:, 1])), shape=(n, n)).tocsr()
    return float(minimum_spanning_tree(m).sum())
