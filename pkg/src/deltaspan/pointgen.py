"""Deterministic random point generation.

Coordinates come from splitmix64, a counter-based 64-bit mixer, with the top
53 bits of each output mapped to a double in [0, 1). Pure integer
arithmetic, so a given (n, seed) produces bit-identical points on every
platform and Python version; results do not depend on any library RNG.
"""

from __future__ import annotations

from typing import Iterator

from .geometry import PointSet

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(x: int) -> int:
    """splitmix64 output mix of one 64-bit state word."""
    z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def uniform_stream(seed: int) -> Iterator[float]:
    """Endless stream of doubles in [0, 1) derived from the seed."""
    state = seed & _MASK
    while True:
        state = (state + _GAMMA) & _MASK
        yield (_mix(state) >> 11) * 2.0 ** -53


def generate_points(n: int, seed: int) -> PointSet:
    """n distinct points i.i.d. uniform in [0,1)^2, reproducible per seed.

    Coordinates are drawn as consecutive (x, y) stream values. If a drawn
    point exactly equals an earlier one (astronomically unlikely), that draw
    is discarded and the stream continues, keeping the set duplicate-free.
    """
    if n < 0:
        raise ValueError(f"point count must be nonnegative, got {n}")
    stream = uniform_stream(seed)
    pts: list[tuple[float, float]] = []
    seen: set[tuple[float, float]] = set()
    while len(pts) < n:
        x = next(stream)
        y = next(stream)
        if (x, y) in seen:
            continue
        seen.add((x, y))
        pts.append((x, y))
    return PointSet(pts)
