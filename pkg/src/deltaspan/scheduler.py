"""Pair scheduling for the greedy constructions.

Both construction styles consume unordered point pairs in non-decreasing
distance order, ties broken by (lower id, higher id). The eager schedule
sorts all pairs up front; fine through a few thousand points. The lazy
schedule discovers pairs incrementally through a uniform grid, per-point
candidate streams, and one main heap, and it suppresses pairs whose
endpoints are covered by each other's cone collections, so the number of
pairs it ever touches stays near-linear on uniform inputs.

Shared-order guarantees both paths rely on:
  - ordering keys are numpy float64 distances in both schedules;
  - cone checks that decide suppression go through covered_pair, the same
    scalar routine the eager construction loop uses.
"""

from __future__ import annotations

import heapq
import math
from typing import Iterator, Optional

import numpy as np

from .geometry import TWO_PI, ConeCollection, PointSet


def covered_pair(points: PointSet, cones: list[ConeCollection], p: int, q: int) -> bool:
    """True iff q lies in p's cones or p lies in q's cones.

    The single suppression predicate used everywhere: by the eager
    construction loop, by the lazy scheduler at emission, and by its
    stream-advance peeks. One code path keeps eager and lazy runs
    bit-identical in their decisions.
    """
    cp = cones[p]
    cq = cones[q]
    if not cp.cones and not cq.cones:
        return False
    xs = points.xs
    ys = points.ys
    ang = math.atan2(ys[q] - ys[p], xs[q] - xs[p])
    if ang < 0.0:
        ang += TWO_PI
    if cp.cones and cp.covers_angle(ang):
        return True
    if not cq.cones:
        return False
    rev = ang - math.pi if ang >= math.pi else ang + math.pi
    return cq.covers_angle(rev)


def eager_schedule(points: PointSet) -> Iterator[tuple[float, int, int]]:
    """Yield every unordered pair as (dist, p, q) with p < q, sorted by
    (dist, p, q).

    Materializes all n(n-1)/2 pairs; memory grows quadratically, so this is
    meant for point sets up to a few thousand.
    """
    n = len(points)
    if n < 2:
        return iter(())
    ps, qs = np.triu_indices(n, k=1)
    ps = ps.astype(np.int32)
    qs = qs.astype(np.int32)
    xs = points.xs
    ys = points.ys
    d = np.hypot(xs[qs] - xs[ps], ys[qs] - ys[ps])
    order = np.lexsort((qs, ps, d))
    return zip(d[order].tolist(), ps[order].tolist(), qs[order].tolist())


class PointGrid:
    """Uniform bucket grid over the bounding box for disk-range queries.

    Uses about sqrt(n) cells per side, so uniform inputs average one point
    per cell. Point ids are stored in one array ordered by cell raster index
    (row-major), which lets a disk query read one contiguous slice per grid
    row and filter it vectorized.
    """

    __slots__ = (
        "points", "n_side", "min_x", "min_y", "cell", "diameter",
        "order", "starts", "xs_ord", "ys_ord",
    )

    def __init__(self, points: PointSet):
        n = len(points)
        self.points = points
        self.n_side = 1 if n <= 1 else math.isqrt(n - 1) + 1
        min_x, min_y, max_x, max_y = points.bounding_box()
        self.min_x = min_x
        self.min_y = min_y
        w = max_x - min_x
        h = max_y - min_y
        span = max(w, h)
        self.cell = span / self.n_side if span > 0.0 else 1.0
        self.diameter = math.hypot(w, h)
        c = self.n_side
        if n == 0:
            self.order = np.empty(0, dtype=np.int64)
            self.starts = np.zeros(c * c + 1, dtype=np.int64)
            self.xs_ord = np.empty(0)
            self.ys_ord = np.empty(0)
            return
        cx = np.clip(((points.xs - min_x) / self.cell).astype(np.int64), 0, c - 1)
        cy = np.clip(((points.ys - min_y) / self.cell).astype(np.int64), 0, c - 1)
        raster = cy * c + cx
        self.order = np.argsort(raster, kind="stable")
        counts = np.bincount(raster, minlength=c * c)
        self.starts = np.concatenate(([0], np.cumsum(counts)))
        self.xs_ord = points.xs[self.order]
        self.ys_ord = points.ys[self.order]

    def window_points(self, x0: float, y0: float,
                      radius: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Ids and coordinates of every point whose cell intersects the
        square window covering the radius disk around (x0, y0). A superset
        of the disk, gathered without per-point arithmetic; callers filter.
        """
        return self.window_rect(x0, y0, radius, radius)

    def window_rect(self, x0: float, y0: float, rx: float,
                    ry: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """window_points with separate half-extents along x and y."""
        c = self.n_side
        cell = self.cell
        lo_cx = max(0, int((x0 - rx - self.min_x) / cell))
        hi_cx = min(c - 1, int((x0 + rx - self.min_x) / cell))
        lo_cy = max(0, int((y0 - ry - self.min_y) / cell))
        hi_cy = min(c - 1, int((y0 + ry - self.min_y) / cell))
        if lo_cx > hi_cx or lo_cy > hi_cy:
            # window entirely outside the bounding box
            empty = np.empty(0)
            return np.empty(0, dtype=np.int64), empty, empty
        starts = self.starts
        order = self.order
        xs_ord = self.xs_ord
        ys_ord = self.ys_ord
        if (lo_cx == 0 and hi_cx == c - 1) or lo_cy == hi_cy:
            # full-width or single-row windows are contiguous in raster
            # order: a plain slice covers them
            a = starts[lo_cy * c + lo_cx]
            b = starts[hi_cy * c + hi_cx + 1]
            return order[a:b], xs_ord[a:b], ys_ord[a:b]
        rows = np.arange(lo_cy, hi_cy + 1) * c
        a = starts[rows + lo_cx]
        b = starts[rows + hi_cx + 1]
        counts = b - a
        total = int(counts.sum())
        if total == 0:
            empty = np.empty(0)
            return np.empty(0, dtype=np.int64), empty, empty
        # flat index array covering [a_i, b_i) of every window row
        idx = np.repeat(b - np.cumsum(counts), counts) + np.arange(total)
        return order[idx], xs_ord[idx], ys_ord[idx]

    def neighbors(self, p: int, radius: float) -> tuple[np.ndarray, np.ndarray]:
        """Ids and distances of all q != p with distance(p, q) <= radius.

        Closed ball: a point exactly at the radius is included.
        """
        pt = self.points[p]
        ids, xs, ys = self.window_points(pt.x, pt.y, radius)
        d = np.hypot(xs - pt.x, ys - pt.y)
        keep = (d <= radius) & (ids != p)
        return ids[keep], d[keep]

    def ring_points(self, x0: float, y0: float, r_in: float,
                    r_out: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Ids and coordinates of every point in the r_out window around
        (x0, y0) whose cell is not fully inside the r_in disk.

        Covers all points with r_in < distance <= r_out while skipping the
        bulk of the inner disk, so a scan that grows a radius step by step
        gathers each point once instead of once per step. The exclusion test
        shrinks the inner disk by a relative margin, so float drift can only
        gather extra cells, never drop one. Callers filter by distance.
        """
        c = self.n_side
        cell = self.cell
        if r_in * (1.0 - 1e-12) < cell * 0.7071067811865476:
            # inner disk smaller than a cell circumradius: nothing to skip
            return self.window_points(x0, y0, r_out)
        lo_cx = max(0, int((x0 - r_out - self.min_x) / cell))
        hi_cx = min(c - 1, int((x0 + r_out - self.min_x) / cell))
        lo_cy = max(0, int((y0 - r_out - self.min_y) / cell))
        hi_cy = min(c - 1, int((y0 + r_out - self.min_y) / cell))
        if lo_cx > hi_cx or lo_cy > hi_cy:
            empty = np.empty(0)
            return np.empty(0, dtype=np.int64), empty, empty
        rows = np.arange(lo_cy, hi_cy + 1)
        # farthest |dy| of each row band from y0; a cell is fully inside the
        # inner disk iff its farthest corner is, giving per row a contiguous
        # excluded column interval [ilo, ihi]
        y_lo = self.min_y + rows * cell
        dy_max = np.maximum(np.abs(y_lo - y0), np.abs(y_lo + cell - y0))
        inner = r_in * (1.0 - 1e-12)
        half = np.sqrt(np.maximum(inner * inner - dy_max * dy_max, 0.0))
        half *= 1.0 - 1e-12
        ilo = np.ceil((x0 - half - self.min_x) / cell).astype(np.int64)
        ihi = np.floor((x0 + half - self.min_x) / cell).astype(np.int64) - 1
        ilo = np.maximum(ilo, lo_cx)
        ihi = np.minimum(ihi, hi_cx)
        has = ihi >= ilo
        # two column segments per row around the excluded middle; both
        # degenerate naturally (count 0) when the exclusion is empty or butts
        # against the window edge
        ilo = np.where(has, ilo, hi_cx + 1)
        s2_lo = np.where(has, ihi + 1, hi_cx + 1)
        base = rows * c
        starts = self.starts
        a = np.concatenate((starts[base + lo_cx], starts[base + s2_lo]))
        b = np.concatenate((starts[base + ilo], starts[base + hi_cx + 1]))
        counts = b - a
        total = int(counts.sum())
        if total == 0:
            empty = np.empty(0)
            return np.empty(0, dtype=np.int64), empty, empty
        idx = np.repeat(b - np.cumsum(counts), counts) + np.arange(total)
        return self.order[idx], self.xs_ord[idx], self.ys_ord[idx]

    def ring_points_pruned(
        self, x0: float, y0: float, r_in: float, r_out: float,
        cover: np.ndarray, margin: float,
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """ring_points that additionally skips aligned 4x4 blocks of cells
        whose whole direction span from (x0, y0) is already covered.

        cover is a flat sorted array of merged closed angle intervals
        [lo0, hi0, lo1, hi1, ...] over [0, 2*pi]. A block is skipped only
        when the min/max corner angle interval, widened by margin, sits
        inside one covered interval, so every point a direction prefilter
        with the same margin could keep is still gathered. Blocks straddling
        the 0/2*pi seam (corner span > pi) are never skipped, and the radial
        trims use the same margins as ring_points, so drift can only gather
        extra cells. Callers filter by distance and direction as usual.
        """
        if len(cover) == 0:
            return self.ring_points(x0, y0, r_in, r_out)
        c = self.n_side
        cell = self.cell
        bs = 4
        lo_cx = max(0, int((x0 - r_out - self.min_x) / cell))
        hi_cx = min(c - 1, int((x0 + r_out - self.min_x) / cell))
        lo_cy = max(0, int((y0 - r_out - self.min_y) / cell))
        hi_cy = min(c - 1, int((y0 + r_out - self.min_y) / cell))
        empty = np.empty(0)
        none = (np.empty(0, dtype=np.int64), empty, empty)
        if lo_cx > hi_cx or lo_cy > hi_cy:
            return none
        bx0 = lo_cx // bs
        by0 = lo_cy // bs
        nbx = hi_cx // bs - bx0 + 1
        nby = hi_cy // bs - by0 + 1
        # corner lattice of the grid-aligned block cover; edge blocks may
        # poke past the window, widening their intervals (conservative)
        dgx = self.min_x + (bx0 + np.arange(nbx + 1)) * (bs * cell) - x0
        dgy = self.min_y + (by0 + np.arange(nby + 1)) * (bs * cell) - y0
        ang = np.arctan2(dgy[:, None], dgx[None, :])
        np.add(ang, TWO_PI, out=ang, where=ang < 0.0)
        amin = np.minimum(np.minimum(ang[:-1, :-1], ang[:-1, 1:]),
                          np.minimum(ang[1:, :-1], ang[1:, 1:]))
        amax = np.maximum(np.maximum(ang[:-1, :-1], ang[:-1, 1:]),
                          np.maximum(ang[1:, :-1], ang[1:, 1:]))
        lo_q = (amin - margin).ravel()
        hi_q = (amax + margin).ravel()
        pos = np.searchsorted(cover, lo_q, side="right")
        # odd position = lower end inside an interval; block covered iff the
        # widened upper end stays below that interval's end
        covered = (pos & 1) == 1
        covered &= hi_q <= cover[np.minimum(pos, len(cover) - 1)]
        covered &= (amax - amin).ravel() <= math.pi
        covered = covered.reshape(nby, nbx)
        # radial trims at block granularity, same margins as ring_points
        far_x = np.maximum(np.abs(dgx[:-1]), np.abs(dgx[1:]))
        far_y = np.maximum(np.abs(dgy[:-1]), np.abs(dgy[1:]))
        near_x = np.maximum(np.maximum(dgx[:-1], -dgx[1:]), 0.0)
        near_y = np.maximum(np.maximum(dgy[:-1], -dgy[1:]), 0.0)
        inner = r_in * (1.0 - 1e-12)
        hi_r = r_out * _RING_SLACK * (1.0 + 1e-12)
        buried = far_y[:, None] ** 2 + far_x[None, :] ** 2 <= inner * inner
        beyond = near_y[:, None] ** 2 + near_x[None, :] ** 2 > hi_r * hi_r
        keep = ~(covered | buried | beyond)
        # horizontal runs of surviving blocks, all rows at once
        padded = np.zeros((nby, nbx + 2), dtype=np.int8)
        padded[:, 1:-1] = keep
        diff = np.diff(padded, axis=1)
        rs, cs = np.nonzero(diff == 1)
        ce = np.nonzero(diff == -1)[1]
        if rs.size == 0:
            return none
        # expand block runs into per-grid-row cell segments, clipped to the
        # window; start/end block halves clip independently but every run
        # still spans at least one window cell
        band_lo = np.maximum(lo_cy, (by0 + rs) * bs)
        band_hi = np.minimum(hi_cy, (by0 + rs) * bs + (bs - 1))
        a_col = np.maximum(lo_cx, (bx0 + cs) * bs)
        b_col = np.minimum(hi_cx, (bx0 + ce) * bs - 1)
        reps = band_hi - band_lo + 1
        tot = int(reps.sum())
        offs = np.arange(tot) - np.repeat(np.cumsum(reps) - reps, reps)
        rows_flat = (np.repeat(band_lo, reps) + offs) * c
        a = self.starts[rows_flat + np.repeat(a_col, reps)]
        b = self.starts[rows_flat + np.repeat(b_col, reps) + 1]
        counts = b - a
        total = int(counts.sum())
        if total == 0:
            return none
        idx = np.repeat(b - np.cumsum(counts), counts) + np.arange(total)
        return self.order[idx], self.xs_ord[idx], self.ys_ord[idx]


def grid_neighbors(grid: PointGrid, p: int, radius: float) -> list[int]:
    """Sorted ids of all points within the closed ball of the given radius
    around point p, excluding p itself."""
    ids, _ = grid.neighbors(p, radius)
    out = ids.tolist()
    out.sort()
    return out


class _Stream:
    """One point's pending candidate pairs, consumed in sorted order.

    dists/ids hold partners q > owner with scan_lo < distance <= scan_hi,
    sorted by (distance, q). pos is the read cursor. Refills replace the
    arrays wholesale; they only happen when the stream is exhausted, so no
    merging is ever needed.
    """

    __slots__ = ("dists", "ids", "pos", "size")

    def __init__(self) -> None:
        self.dists = np.empty(0)
        self.ids = np.empty(0, dtype=np.int64)
        self.pos = 0
        self.size = 0

    def load(self, dists: np.ndarray, ids: np.ndarray) -> None:
        self.dists = dists
        self.ids = ids
        self.pos = 0
        self.size = len(ids)


_PREFILTER_MARGIN = 1e-9  # radians; see LazyPairScheduler._refill

# Relative slack on the squared-distance ring boundaries in _refill. Scan
# rings partition pairs by dx*dx + dy*dy against (radius * slack)^2, while
# stream keys and the main heap use np.hypot. The slack keeps every pair
# whose hypot key is at most the scan radius inside that scan's ring despite
# the two roundings disagreeing in the last ulps; boundary stragglers whose
# key lands just past the radius simply wait at the end of their sorted
# batch, so the heap still emits strictly by key. Consecutive scans compute
# the shared boundary from the same floats, so the rings stay disjoint and
# exhaustive, and the slack also guarantees the final ring at the bounding
# box diagonal cannot round away the farthest real pair.
_RING_SLACK = 1.0 + 1e-12


class LazyPairScheduler:
    """Emit uncovered pairs in non-decreasing (dist, min_id, max_id) order
    without enumerating all pairs up front.

    Each pair is owned by its lower-id endpoint. Per owner there is a sorted
    candidate stream covering distances up to a per-point scan radius; the
    main heap holds at most one entry per owner: its stream head, or a
    sentinel at the scan radius when the stream is empty. A sentinel pop
    doubles the radius and refills from the grid, so no pair can be emitted
    out of order: any unscanned pair of p is farther than p's sentinel key.

    Suppression: a pair is dropped when one endpoint is covered by the
    other's cones. The binding check runs at emission time through
    covered_pair; stream advances and grid refills apply the same predicate
    (or a strictly conservative vectorized version) earlier, which is sound
    because cone collections only ever grow.
    """

    def __init__(self, points: PointSet, cones: list[ConeCollection], initial_radius: float):
        if initial_radius <= 0.0:
            raise ValueError(f"initial radius must be positive, got {initial_radius}")
        self.points = points
        self.cones = cones
        self.n = len(points)
        self.grid = PointGrid(points)
        self.heap: list[tuple] = []
        self.streams = [_Stream() for _ in range(self.n)]
        self.radius = [0.0] * self.n
        # owned candidates (ids > p) not yet swept by a refill; when this
        # hits zero and the stream drains, the point is done for good and
        # never stands another sentinel
        self.unseen = [self.n - 1 - p for p in range(self.n)]
        # emitted pair distances are capped by the bbox diagonal
        self.max_radius = self.grid.diameter
        r0 = min(initial_radius, self.max_radius) if self.max_radius > 0 else initial_radius
        for p in range(self.n - 1):  # point n-1 owns no pairs
            self._refill(p, r0)
            self._push_next(p)
        heapq.heapify(self.heap)

    def _refill(self, p: int, new_radius: float) -> None:
        """Scan the grid annulus (radius[p], new_radius] and load p's stream
        with owned, not-yet-covered candidates."""
        old_r = self.radius[p]
        self.radius[p] = new_radius
        pt = self.points[p]
        cp = self.cones[p]
        grid = self.grid
        if cp.cones and old_r >= 32.0 * grid.cell:
            # Wide annulus and established coverage: skip cell blocks whose
            # whole direction span is covered. Anything skipped would have
            # been dropped by the direction prefilter below (same margin),
            # so the loaded stream is identical. Skipped points go uncounted,
            # which can only delay the seen-everything stop, never fire it
            # early; such points still stop at max_radius.
            ids, xs, ys = grid.ring_points_pruned(
                pt.x, pt.y, old_r, new_radius, cp.bounds_array(),
                _PREFILTER_MARGIN)
        else:
            ids, xs, ys = grid.ring_points(pt.x, pt.y, old_r, new_radius)
        dx = xs - pt.x
        dy = ys - pt.y
        d2 = dx * dx + dy * dy
        hi = new_radius * _RING_SLACK
        keep = (ids > p) & (d2 <= hi * hi)
        if old_r > 0.0:
            lo = old_r * _RING_SLACK
            keep &= d2 > lo * lo
        ids = ids[keep]
        d = np.hypot(dx[keep], dy[keep])
        # counted as seen whether loaded or cone-suppressed below: either way
        # the pair needs no future scan
        self.unseen[p] -= len(ids)
        if len(ids) and cp.cones:
            # Vectorized prefilter against p's covered directions. Shrunk by
            # a margin so it never drops a pair the scalar check at emission
            # would keep: arctan2 here and atan2 there may differ in the last
            # ulp, which only matters within the margin of a cone boundary.
            angs = np.arctan2(self.points.ys[ids] - pt.y, self.points.xs[ids] - pt.x)
            np.add(angs, TWO_PI, out=angs, where=angs < 0.0)
            inside = cp.covers_angles(angs, shrink=_PREFILTER_MARGIN)
            if inside.any():
                outside = ~inside
                ids = ids[outside]
                d = d[outside]
        if len(ids):
            order = np.lexsort((ids, d))
            self.streams[p].load(d[order], ids[order])
        else:
            self.streams[p].load(np.empty(0), np.empty(0, dtype=np.int64))

    def _push_next(self, p: int) -> None:
        """Advance p's stream past covered pairs and push its head into the
        main heap, or a sentinel / nothing when the stream is exhausted."""
        st = self.streams[p]
        points = self.points
        cones = self.cones
        dists = st.dists
        ids = st.ids
        pos = st.pos
        size = st.size
        while pos < size:
            q = ids[pos]
            if not covered_pair(points, cones, p, q):
                st.pos = pos + 1
                heapq.heappush(self.heap, (dists[pos], p, int(q)))
                return
            pos += 1
        st.pos = pos
        # stream exhausted: stop this point for good, or stand a sentinel
        if self.unseen[p] <= 0:
            return
        if cones[p].covers_full_circle():
            return
        r = self.radius[p]
        if r >= self.max_radius:
            return
        heapq.heappush(self.heap, (r, self.n, p))

    def next_pair(self) -> Optional[tuple[float, int, int]]:
        """Next uncovered pair as (dist, p, q) with p < q, or None when no
        candidate remains."""
        heap = self.heap
        n = self.n
        while heap:
            entry = heapq.heappop(heap)
            if entry[1] == n:
                p = entry[2]
                self._refill(p, min(2.0 * self.radius[p], self.max_radius))
                self._push_next(p)
                continue
            d, p, q = entry
            self._push_next(p)
            # binding coverage check at emission time: cones may have grown
            # since this entry was pushed
            if covered_pair(self.points, self.cones, p, q):
                continue
            return float(d), p, q
        return None

    def __iter__(self) -> Iterator[tuple[float, int, int]]:
        while True:
            item = self.next_pair()
            if item is None:
                return
            yield item


def lazy_next(sched: LazyPairScheduler) -> Optional[tuple[float, int, int]]:
    """Functional form of LazyPairScheduler.next_pair."""
    return sched.next_pair()
