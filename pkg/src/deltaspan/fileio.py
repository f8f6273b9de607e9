"""Text formats for points and graphs, and SVG rendering.

Point files: first line the count, then one "x y" per line. Coordinates are
printed with Python's shortest round-trip float representation, so a
write/read cycle reproduces the exact same doubles.

Graph files: first line "n m", then one "u v" per line with u < v, sorted.
"""

from __future__ import annotations

from .geometry import PointSet
from .graph import SpannerGraph


def write_points(points: PointSet, path: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{len(points)}\n")
        for p in points:
            fh.write(f"{p.x!r} {p.y!r}\n")


def read_points(path: str) -> PointSet:
    """Parse a point file; errors name the offending line."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}:1: empty file, expected a point count")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"{path}:1: expected a point count, got {lines[0]!r}") from None
    if n < 0:
        raise ValueError(f"{path}:1: negative point count {n}")
    if len(lines) - 1 < n:
        raise ValueError(f"{path}: expected {n} coordinate lines, found {len(lines) - 1}")
    coords: list[tuple[float, float]] = []
    for i in range(1, n + 1):
        parts = lines[i].split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{i + 1}: expected 'x y', got {lines[i]!r}")
        try:
            x = float(parts[0])
            y = float(parts[1])
        except ValueError:
            raise ValueError(f"{path}:{i + 1}: non-numeric coordinate in {lines[i]!r}") from None
        coords.append((x, y))
    try:
        return PointSet(coords)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def write_graph(g: SpannerGraph, path: str) -> None:
    edges = sorted(g.edge_set())
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{g.num_vertices} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def read_graph(path: str, points: PointSet) -> SpannerGraph:
    """Parse an edge-list file against an existing point set."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}:1: empty file, expected 'n m'")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"{path}:1: expected 'n m', got {lines[0]!r}")
    try:
        n = int(head[0])
        m = int(head[1])
    except ValueError:
        raise ValueError(f"{path}:1: non-numeric header {lines[0]!r}") from None
    if n != len(points):
        raise ValueError(
            f"{path}: graph has {n} vertices but the point set has {len(points)}")
    if len(lines) - 1 < m:
        raise ValueError(f"{path}: expected {m} edge lines, found {len(lines) - 1}")
    g = SpannerGraph(points)
    for i in range(1, m + 1):
        parts = lines[i].split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{i + 1}: expected 'u v', got {lines[i]!r}")
        try:
            u = int(parts[0])
            v = int(parts[1])
        except ValueError:
            raise ValueError(f"{path}:{i + 1}: non-numeric edge {lines[i]!r}") from None
        try:
            g.add_edge(u, v)
        except ValueError as exc:
            raise ValueError(f"{path}:{i + 1}: {exc}") from None
    return g


def render_svg(g: SpannerGraph, path: str) -> None:
    """Draw the graph: points as dots, edges as segments, y axis up.

    Viewport is the bounding box with a 5% margin per side.
    """
    points = g.points
    min_x, min_y, max_x, max_y = points.bounding_box()
    w = max_x - min_x
    h = max_y - min_y
    span = max(w, h)
    if span <= 0.0:
        span = 1.0
    pad = 0.05 * span

    def flip(y: float) -> float:
        return min_y + max_y - y

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{min_x - pad:.6g} {min_y - pad:.6g} {w + 2 * pad:.6g} {h + 2 * pad:.6g}">'
    ]
    parts.append(f'<g stroke="#46608c" stroke-width="{span / 500:.6g}" stroke-linecap="round">')
    for u, v in sorted(g.edge_set()):
        a = points[u]
        b = points[v]
        parts.append(
            f'<line x1="{a.x!r}" y1="{flip(a.y)!r}" x2="{b.x!r}" y2="{flip(b.y)!r}"/>')
    parts.append("</g>")
    parts.append('<g fill="#b33939">')
    for p in points:
        parts.append(f'<circle cx="{p.x!r}" cy="{flip(p.y)!r}" r="{span / 250:.6g}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
