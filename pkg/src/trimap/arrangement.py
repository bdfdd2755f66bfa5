"""Three-line arrangements, their triangle, fixed points and boundary coordinates.

Indexing convention (0-based in Python, 1-based in JSON output):

* ``lines[0..2]`` are L1, L2, L3.
* vertex ``k`` is the intersection of the two lines other than ``k``, so
  A = L2 ∩ L3, B = L1 ∩ L3, C = L1 ∩ L2 and edge ``k`` lies opposite vertex ``k``.
* a point on line ``i`` is parameterized by arc length ``t`` from the first
  triangle vertex on that line (in A, B, C order) toward the other one, so the
  edge segment is ``0 <= t <= edge_length(i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal

from .errors import (
    ConcurrentLinesError,
    DegenerateTriangleError,
    DomainError,
    InputError,
    OffBoundaryError,
    ParallelLinesError,
)
from .geometry import (
    Line,
    Point,
    Similarity,
    apply_similarity_line,
    dist,
    intersect,
    line_from_point_angle,
    line_through,
    make_line,
)

PARALLEL_TOL = 1e-10
VERTEX_SEP_TOL = 1e-10
ON_EDGE_TOL = 1e-10
BOUNDARY_TOL = 1e-8


def other_lines(i: int) -> tuple[int, int]:
    return ((1, 2), (0, 2), (0, 1))[i]


def shared_vertex(i: int, j: int) -> int:
    """Index of the vertex where lines ``i`` and ``j`` meet."""
    return 3 - i - j


@dataclass(frozen=True)
class TriangleSpace:
    lines: tuple[Line, Line, Line]
    vertices: tuple[Point, Point, Point]
    angles: tuple[float, float, float]
    diameter: float
    # per-line parameterization: anchor vertex, unit direction, edge length
    anchors: tuple[Point, Point, Point] = field(repr=False)
    directions: tuple[tuple[float, float], ...] = field(repr=False)
    edge_lengths: tuple[float, float, float] = field(repr=False)
    ccw: bool = field(repr=False)

    @property
    def perimeter(self) -> float:
        return sum(self.edge_lengths)

    @property
    def is_obtuse(self) -> bool:
        return max(self.angles) > math.pi / 2

    def acute_angle(self, vertex: int) -> float:
        """Interior angle at ``vertex``, replaced by its supplement when obtuse."""
        a = self.angles[vertex]
        return math.pi - a if a > math.pi / 2 else a

    def point_at(self, i: int, t: float) -> Point:
        p, (dx, dy) = self.anchors[i], self.directions[i]
        return Point(p.x + t * dx, p.y + t * dy)

    def param_of(self, i: int, p: Point) -> float:
        a, (dx, dy) = self.anchors[i], self.directions[i]
        return (p.x - a.x) * dx + (p.y - a.y) * dy

    def on_edge(self, i: int, t: float, tol: float | None = None) -> bool:
        if tol is None:
            tol = ON_EDGE_TOL * self.diameter
        return -tol <= t <= self.edge_lengths[i] + tol

    def near_vertex(self, p: Point, tol: float | None = None) -> int | None:
        if tol is None:
            tol = 1e-10 * self.diameter
        for k, v in enumerate(self.vertices):
            if dist(p, v) <= tol:
                return k
        return None

    def transformed(self, s: Similarity) -> TriangleSpace:
        """Image of the arrangement under a similarity; line order is kept."""
        return build_space(*(apply_similarity_line(s, ln) for ln in self.lines))


def build_space(l1: Line, l2: Line, l3: Line) -> TriangleSpace:
    lines = (l1, l2, l3)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        cross = lines[i].a * lines[j].b - lines[j].a * lines[i].b
        if abs(cross) <= PARALLEL_TOL:
            raise ParallelLinesError(f"lines L{i + 1} and L{j + 1} are parallel")
    verts = tuple(intersect(*(lines[j] for j in other_lines(k))) for k in range(3))
    sides = (dist(verts[1], verts[2]), dist(verts[0], verts[2]), dist(verts[0], verts[1]))
    diameter = max(sides)
    if diameter == 0.0 or min(sides) <= VERTEX_SEP_TOL * diameter:
        raise ConcurrentLinesError("the three lines are (nearly) concurrent")

    angles = []
    for k in range(3):
        i, j = other_lines(k)
        v, p, q = verts[k], verts[i], verts[j]
        ux, uy = p.x - v.x, p.y - v.y
        wx, wy = q.x - v.x, q.y - v.y
        angles.append(math.atan2(abs(ux * wy - uy * wx), ux * wx + uy * wy))

    anchors, dirs = [], []
    for i in range(3):
        j, k = other_lines(i)  # the two vertices on line i, in A, B, C order
        a, b = verts[j], verts[k]
        anchors.append(a)
        dirs.append(((b.x - a.x) / sides[i], (b.y - a.y) / sides[i]))

    A, B, C = verts
    area2 = (B.x - A.x) * (C.y - A.y) - (B.y - A.y) * (C.x - A.x)
    return TriangleSpace(
        lines=lines,
        vertices=verts,
        angles=tuple(angles),
        diameter=diameter,
        anchors=tuple(anchors),
        directions=tuple(dirs),
        edge_lengths=sides,
        ccw=area2 > 0,
    )


def from_vertices(a: Point, b: Point, c: Point) -> TriangleSpace:
    diameter = max(dist(a, b), dist(b, c), dist(a, c))
    area2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    if diameter == 0.0 or abs(area2) / 2 <= 1e-12 * diameter**2:
        raise DegenerateTriangleError("vertices are collinear")
    return build_space(line_through(b, c), line_through(a, c), line_through(a, b))


def isosceles_family(alpha: float, base_length: float = 1 / 3) -> TriangleSpace:
    """Isosceles triangle with apex angle ``alpha`` at vertex A.

    The base BC lies on the x-axis centred at the origin with B on the left;
    the apex sits on the positive y-axis.
    """
    if not 0 < alpha < math.pi:
        raise DomainError(f"apex angle {alpha} outside (0, pi)")
    if not base_length > 0:
        raise DomainError("base length must be positive")
    half = base_length / 2
    height = half / math.tan(alpha / 2)
    return from_vertices(Point(0.0, height), Point(-half, 0.0), Point(half, 0.0))


@dataclass(frozen=True)
class FixedPoint:
    location: Point
    host_line: int
    kind: Literal["bisector", "exterior"]


def fixed_points(space: TriangleSpace) -> list[FixedPoint]:
    """All fixed points of the map, found as line/bisector intersections.

    A point of line ``i`` is fixed iff it is equidistant from the other two
    lines, i.e. it lies on one of the two angle bisectors of their pencil.
    """
    out: list[FixedPoint] = []
    tol = ON_EDGE_TOL * space.diameter
    for i in range(3):
        host = space.lines[i]
        lj, lk = (space.lines[j] for j in other_lines(i))
        for sign in (-1.0, 1.0):
            a, b, c = lj.a + sign * lk.a, lj.b + sign * lk.b, lj.c + sign * lk.c
            if math.hypot(a, b) < 1e-12:
                continue
            bis = make_line(a, b, c)
            if abs(bis.a * host.b - host.a * bis.b) <= 1e-12:
                continue  # bisector parallel to the host line
            p = intersect(host, bis)
            # snap onto the host line to kill intersection round-off
            t = space.param_of(i, p)
            p = space.point_at(i, t)
            if space.near_vertex(p) is not None:
                continue
            if any(f.host_line == i and dist(f.location, p) <= tol for f in out):
                continue
            kind = "bisector" if space.on_edge(i, t) else "exterior"
            out.append(FixedPoint(p, i, kind))
    return out


def bisector_points(space: TriangleSpace) -> list[FixedPoint]:
    return [f for f in fixed_points(space) if f.kind == "bisector"]


@dataclass(frozen=True)
class BoundaryCoord:
    s: float
    edge: int
    point: Point


def _boundary_edges(space: TriangleSpace, start: int = 0):
    """Edges in counterclockwise order starting at vertex ``start``.

    Yields ``(edge, from_vertex, to_vertex, offset)`` where ``offset`` is the
    arc length from ``start`` to ``from_vertex``.
    """
    order = [0, 1, 2] if space.ccw else [0, 2, 1]
    k = order.index(start)
    order = order[k:] + order[:k]
    offset = 0.0
    for n in range(3):
        u, v = order[n], order[(n + 1) % 3]
        edge = shared_vertex(u, v)  # the line through vertices u and v
        yield edge, u, v, offset
        offset += space.edge_lengths[edge]


def to_boundary_coord(space: TriangleSpace, p: Point, start: int = 0) -> BoundaryCoord:
    """Arc length of ``p`` along the boundary, counterclockwise from vertex ``start``."""
    best = None
    for edge, u, v, offset in _boundary_edges(space, start):
        a, b = space.vertices[u], space.vertices[v]
        length = space.edge_lengths[edge]
        w = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / length
        w = min(max(w, 0.0), length)
        q = Point(a.x + (b.x - a.x) * w / length, a.y + (b.y - a.y) * w / length)
        d = dist(p, q)
        if best is None or d < best[0]:
            best = (d, edge, offset + w)
    d, edge, s = best
    if d > BOUNDARY_TOL * space.diameter:
        raise OffBoundaryError(f"point {tuple(p)} is {d:g} away from the triangle boundary")
    s = math.fmod(s, space.perimeter)
    if s < 0:
        s += space.perimeter
    return BoundaryCoord(s, edge, from_boundary_coord(space, s, start))


def from_boundary_coord(space: TriangleSpace, s: float, start: int = 0) -> Point:
    s = math.fmod(s, space.perimeter)
    if s < 0:
        s += space.perimeter
    for edge, u, v, offset in _boundary_edges(space, start):
        length = space.edge_lengths[edge]
        if s <= offset + length:
            break
    # round-off can leave s a hair past the last edge; clamp onto it
    w = min(max(s - offset, 0.0), length) / length
    a, b = space.vertices[u], space.vertices[v]
    return Point(a.x + (b.x - a.x) * w, a.y + (b.y - a.y) * w)


def parse_spec(spec: dict[str, Any]) -> TriangleSpace:
    """Build a space from the JSON arrangement format.

    Accepted shapes::

        {"lines": [{"coeffs": [a, b, c]} | {"point": [x, y], "angle_deg": t}, x3]}
        {"vertices": [[x, y], x3]}
        {"isosceles": {"alpha_deg": a, "base": l}}
    """
    if not isinstance(spec, dict):
        raise InputError("arrangement spec must be a JSON object")
    keys = {"lines", "vertices", "isosceles"} & spec.keys()
    if len(keys) != 1:
        raise InputError("spec needs exactly one of 'lines', 'vertices', 'isosceles'")
    try:
        if "lines" in spec:
            entries = spec["lines"]
            if len(entries) != 3:
                raise InputError("'lines' must hold exactly three entries")
            lines = []
            for e in entries:
                if "coeffs" in e:
                    a, b, c = (float(v) for v in e["coeffs"])
                    lines.append(make_line(a, b, c))
                else:
                    x, y = (float(v) for v in e["point"])
                    lines.append(line_from_point_angle(Point(x, y), math.radians(float(e["angle_deg"]))))
            return build_space(*lines)
        if "vertices" in spec:
            vs = spec["vertices"]
            if len(vs) != 3:
                raise InputError("'vertices' must hold exactly three points")
            return from_vertices(*(Point(float(x), float(y)) for x, y in vs))
        iso = spec["isosceles"]
        return isosceles_family(math.radians(float(iso["alpha_deg"])), float(iso.get("base", 1 / 3)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed arrangement spec: {exc}") from exc
