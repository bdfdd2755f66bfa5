"""Planar primitives: points, normalized lines, perpendicular feet, similarities.

Everything here is an immutable value and every function is pure.  Plain
``math`` is used instead of numpy because the dynamics call these helpers one
point at a time in tight loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInputError, ParallelLinesError

# below this a line coefficient counts as zero when fixing the sign
_SIGN_EPS = 1e-12
PARALLEL_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateInputError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> Point:
        return Point(self.x * k, self.y * k)


def dist(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


@dataclass(frozen=True, slots=True)
class Line:
    """Line ``a*x + b*y + c = 0`` with ``(a, b)`` a unit normal.

    Use :func:`make_line` to build one from arbitrary coefficients; the
    constructor trusts its arguments.
    """

    a: float
    b: float
    c: float

    @property
    def normal(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def direction(self) -> tuple[float, float]:
        return (-self.b, self.a)

    def signed_distance(self, p: Point) -> float:
        return self.a * p.x + self.b * p.y + self.c

    def distance(self, p: Point) -> float:
        return abs(self.a * p.x + self.b * p.y + self.c)

    def contains(self, p: Point, tol: float = 1e-10) -> bool:
        return self.distance(p) <= tol

    def anchor(self) -> Point:
        """Point of the line closest to the origin."""
        return Point(-self.c * self.a, -self.c * self.b)


def make_line(a: float, b: float, c: float) -> Line:
    norm = math.hypot(a, b)
    if not math.isfinite(norm) or norm == 0.0 or not math.isfinite(c):
        raise DegenerateInputError(f"not a line: ({a}, {b}, {c})")
    a, b, c = a / norm, b / norm, c / norm
    if a < -_SIGN_EPS or (abs(a) <= _SIGN_EPS and b < 0):
        a, b, c = -a, -b, -c
    # -0.0 would make equal lines compare unequal in reprs and hashes
    return Line(a + 0.0, b + 0.0, c + 0.0)


def line_from_point_angle(p: Point, angle: float) -> Line:
    """Line through ``p`` whose direction makes ``angle`` radians with the x-axis."""
    dx, dy = math.cos(angle), math.sin(angle)
    return make_line(-dy, dx, dy * p.x - dx * p.y)


def line_through(p: Point, q: Point) -> Line:
    scale = max(abs(p.x), abs(p.y), abs(q.x), abs(q.y))
    d = dist(p, q)
    if d == 0.0 or d <= 1e-12 * scale:
        raise DegenerateInputError(f"coincident points {tuple(p)} and {tuple(q)}")
    dx, dy = q.x - p.x, q.y - p.y
    return make_line(-dy, dx, dy * p.x - dx * p.y)


def _cross(l1: Line, l2: Line) -> float:
    return l1.a * l2.b - l2.a * l1.b


def intersect(l1: Line, l2: Line) -> Point:
    det = _cross(l1, l2)
    if abs(det) <= PARALLEL_TOL:
        raise ParallelLinesError("lines are parallel")
    x = (l1.b * l2.c - l2.b * l1.c) / det
    y = (l2.a * l1.c - l1.a * l2.c) / det
    return Point(x, y)


def foot(p: Point, line: Line) -> Point:
    s = line.a * p.x + line.b * p.y + line.c
    return Point(p.x - s * line.a, p.y - s * line.b)


def angle_between(l1: Line, l2: Line) -> float:
    """Acute angle in (0, pi/2] between two nonparallel lines."""
    cross = abs(_cross(l1, l2))
    if cross <= PARALLEL_TOL:
        raise ParallelLinesError("lines are parallel")
    dot = abs(l1.a * l2.a + l1.b * l2.b)
    return math.atan2(cross, dot)


@dataclass(frozen=True, slots=True)
class Similarity:
    """Reflect across the x-axis (optional), rotate, scale, then translate."""

    rotation: float = 0.0
    scale: float = 1.0
    translation: tuple[float, float] = (0.0, 0.0)
    reflect: bool = False

    def __post_init__(self):
        if not self.scale > 0:
            raise DegenerateInputError("similarity scale must be positive")

    def __call__(self, p: Point) -> Point:
        return apply_similarity(self, p)


def apply_similarity(s: Similarity, p: Point) -> Point:
    x, y = p.x, (-p.y if s.reflect else p.y)
    cr, sr = math.cos(s.rotation), math.sin(s.rotation)
    x, y = cr * x - sr * y, sr * x + cr * y
    return Point(s.scale * x + s.translation[0], s.scale * y + s.translation[1])


def apply_similarity_line(s: Similarity, line: Line) -> Line:
    p = line.anchor()
    dx, dy = line.direction
    q = Point(p.x + dx, p.y + dy)
    return line_through(apply_similarity(s, p), apply_similarity(s, q))
