"""Planar points and the cone bookkeeping used by the greedy constructions.

A cone is an angular sector anchored at a point; a point's cone collection
records directions in which a good detour is already known to exist, so the
pair enumeration can skip those directions entirely.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


def distance(a: Point, b: Point) -> float:
    """Euclidean distance |ab|."""
    return math.hypot(a.x - b.x, a.y - b.y)


def direction(a: Point, b: Point) -> float:
    """Angle of the ray a->b in [0, 2*pi). Requires a != b."""
    if a.x == b.x and a.y == b.y:
        raise ValueError("direction undefined for coincident points")
    ang = math.atan2(b.y - a.y, b.x - a.x)
    return ang + TWO_PI if ang < 0.0 else ang


class PointSet(Sequence[Point]):
    """Immutable indexed set of distinct planar points.

    Ids are dense 0..n-1 in input order and stable for the lifetime of the
    set. Exact coordinate duplicates are rejected: a zero-distance pair
    breaks every path/|pq| ratio downstream.
    """

    __slots__ = ("_points", "_xs", "_ys")

    def __init__(self, points: Iterable[Point | tuple[float, float]]):
        pts: list[Point] = []
        seen: set[tuple[float, float]] = set()
        for i, p in enumerate(points):
            if not isinstance(p, Point):
                p = Point(float(p[0]), float(p[1]))
            key = (p.x, p.y)
            if key in seen:
                raise ValueError(f"duplicate point {key} at index {i}")
            seen.add(key)
            pts.append(p)
        self._points = tuple(pts)
        self._xs = np.array([p.x for p in pts], dtype=np.float64)
        self._ys = np.array([p.y for p in pts], dtype=np.float64)
        self._xs.setflags(write=False)
        self._ys.setflags(write=False)

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, i):  # type: ignore[override]
        return self._points[i]

    def __iter__(self):
        return iter(self._points)

    @property
    def xs(self) -> np.ndarray:
        return self._xs

    @property
    def ys(self) -> np.ndarray:
        return self._ys

    def distance(self, i: int, j: int) -> float:
        return distance(self._points[i], self._points[j])

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y); (0,0,0,0) for an empty set."""
        if not self._points:
            return (0.0, 0.0, 0.0, 0.0)
        return (
            float(self._xs.min()),
            float(self._ys.min()),
            float(self._xs.max()),
            float(self._ys.max()),
        )


def cone_half_angle(d: float, t: float) -> float:
    """Half-angle pi/4 - asin(d / (sqrt(2) * t)) of the cone recorded after a
    path query that found a detour of d times the straight-line distance.

    Satisfies 1 / (cos(theta) - sin(theta)) = t / d, so every point inside the
    cone inherits a t-bounded detour; see the detour inequality test oracle.
    """
    if t <= 1.0:
        raise ValueError(f"stretch must exceed 1, got t={t}")
    if d < 1.0 or d > t:
        raise ValueError(f"path ratio must satisfy 1 <= d <= t, got d={d}, t={t}")
    return 0.25 * math.pi - math.asin(d / (math.sqrt(2.0) * t))


@dataclass(frozen=True)
class Cone:
    """Closed angular sector: apex point id, bisector angle, half-angle.

    Membership is closed (deviation == half_angle counts as inside); covering
    more pairs only skips queries whose detour is already guaranteed.
    """

    apex: int
    bisector: float  # radians in [0, 2*pi)
    half_angle: float  # radians in [0, pi/4]

    def contains(self, apex_pt: Point, q: Point) -> bool:
        """True iff q's direction from the apex deviates from the bisector by
        at most half_angle. q must not coincide with the apex."""
        ang = direction(apex_pt, q)
        dev = math.fmod(ang - self.bisector, TWO_PI)
        if dev > math.pi:
            dev -= TWO_PI
        elif dev <= -math.pi:
            dev += TWO_PI
        return abs(dev) <= self.half_angle


@dataclass
class ConeCollection:
    """Mutable set of cones sharing one apex point.

    Coverage queries go through a live union of closed angular intervals,
    kept merged incrementally as cones are added, so a membership check is
    one binary search no matter how many cones accumulated. The union is the
    single source of truth for coverage during a construction run: both the
    eager loop and the lazy scheduler use it, which keeps their decisions
    bit-identical.
    """

    owner: int
    cones: list[Cone] = field(default_factory=list)
    # flattened merged closed intervals [lo0, hi0, lo1, hi1, ...] in [0, 2*pi]
    _bounds: list[float] = field(default_factory=list, repr=False)
    _full: bool = field(default=False, repr=False)

    def __len__(self) -> int:
        return len(self.cones)

    def add(self, apex_pt: Point, toward: Point, half_angle: float) -> None:
        """Append a cone with bisector apex->toward and fold it into the
        merged coverage intervals."""
        if not 0.0 <= half_angle <= 0.25 * math.pi + 1e-12:
            raise ValueError(f"half_angle out of range [0, pi/4]: {half_angle}")
        bisector = direction(apex_pt, toward)
        self.cones.append(Cone(self.owner, bisector, half_angle))
        lo = bisector - half_angle
        hi = bisector + half_angle
        if lo < 0.0:
            # wraps below 0: split at the seam
            self._insert_span(lo + TWO_PI, TWO_PI)
            self._insert_span(0.0, hi)
        elif hi > TWO_PI:
            self._insert_span(lo, TWO_PI)
            self._insert_span(0.0, hi - TWO_PI)
        else:
            self._insert_span(lo, hi)
        b = self._bounds
        self._full = len(b) == 2 and b[0] <= 0.0 and b[1] >= TWO_PI

    def _insert_span(self, lo: float, hi: float) -> None:
        """Merge the closed interval [lo, hi] into the flattened bounds.

        Touching counts as overlapping: an interval whose endpoint equals a
        neighbor's endpoint fuses with it, matching closed-cone membership.
        """
        b = self._bounds
        if not b:
            b[:] = (lo, hi)
            return
        il = bisect_left(b, lo)
        ir = bisect_right(b, hi)
        if il & 1:
            start = b[il - 1]
            del_from = il - 1
        else:
            start = lo
            del_from = il
        if ir & 1:
            end = b[ir]
            del_to = ir + 1
        else:
            end = hi
            del_to = ir
        b[del_from:del_to] = (start, end)

    def bounds_array(self) -> np.ndarray:
        """Merged coverage intervals as one flat sorted array
        [lo0, hi0, lo1, hi1, ...] over [0, 2*pi]; empty when no cones."""
        return np.array(self._bounds)

    def covers_angle(self, ang: float) -> bool:
        """True iff the angle (in [0, 2*pi)) lies in some cone."""
        if self._full:
            return True
        b = self._bounds
        if not b:
            return False
        i = bisect_left(b, ang)
        # odd index: strictly inside an interval; equal hit on a boundary is
        # inside too (closed cones).
        return (i & 1) == 1 or (i < len(b) and b[i] == ang)

    def covers(self, apex_pt: Point, q: Point) -> bool:
        """True iff q lies in some cone of the collection; empty -> False."""
        if not self.cones:
            return False
        return self.covers_angle(direction(apex_pt, q))

    def covers_angles(self, angs: np.ndarray, shrink: float = 0.0) -> np.ndarray:
        """Vectorized covers_angle over an array of angles in [0, 2*pi).

        With shrink > 0 each covered interval is narrowed by that many
        radians per side before testing, making the result conservative:
        True only for angles that covers_angle would also accept even if the
        inputs were perturbed by up to shrink. Used to prefilter candidates
        computed with a different arctangent routine.
        """
        if self._full:
            return np.ones(len(angs), dtype=bool)
        if not self._bounds:
            return np.zeros(len(angs), dtype=bool)
        b = np.array(self._bounds)
        if shrink > 0.0:
            b[0::2] += shrink
            b[1::2] -= shrink
            keep = b[0::2] <= b[1::2]
            if not keep.all():
                b = np.column_stack((b[0::2][keep], b[1::2][keep])).ravel()
            if len(b) == 0:
                return np.zeros(len(angs), dtype=bool)
        i = np.searchsorted(b, angs, side="left")
        inside = (i & 1) == 1
        on_edge = b[np.minimum(i, len(b) - 1)] == angs
        return inside | (on_edge & (i < len(b)))

    def covers_full_circle(self) -> bool:
        """True iff the union of cones spans all directions."""
        return self._full

    def coverage_bounds(self) -> list[float]:
        """Flattened merged interval boundaries [lo0, hi0, lo1, hi1, ...] of
        the covered directions, all within [0, 2*pi]. Empty when no cones."""
        return list(self._bounds)


def cone_contains(c: Cone, apex_pt: Point, q: Point) -> bool:
    """Functional form of Cone.contains."""
    return c.contains(apex_pt, q)


def collection_covers(coll: ConeCollection, apex_pt: Point, q: Point) -> bool:
    """Functional form of ConeCollection.covers."""
    return coll.covers(apex_pt, q)
