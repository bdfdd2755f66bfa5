"""The farthest-projection map, orbit classification and the induced return map.

States are points on one of the three lines, carried together with the host
line index and the arc-length parameter ``t`` along that line (see
:mod:`trimap.arrangement` for the parameterization).  All tolerances in
:class:`OrbitOptions` are relative and get multiplied by the triangle diameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .arrangement import (
    FixedPoint,
    TriangleSpace,
    fixed_points,
    other_lines,
    shared_vertex,
)
from .errors import (
    AttributionError,
    BranchError,
    DegenerateStateError,
    DomainError,
    IncomparablePairError,
    NoValidProjectionError,
    StaleBranchError,
)
from .geometry import Point, angle_between, dist, foot

TIE_TOL = 1e-9
VERTEX_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class PointOnLine:
    point: Point
    host: int
    t: float

    @classmethod
    def at(cls, space: TriangleSpace, host: int, t: float) -> PointOnLine:
        return cls(space.point_at(host, t), host, t)

    @classmethod
    def snap(cls, space: TriangleSpace, host: int, p: Point) -> PointOnLine:
        """Attach ``p`` to line ``host``, projecting away round-off."""
        t = space.param_of(host, p)
        return cls(space.point_at(host, t), host, t)


def locate(space: TriangleSpace, p: Point, tol: float = 1e-8) -> PointOnLine:
    """Find the line carrying ``p``; refuses vertices and off-arrangement points."""
    hits = [i for i in range(3) if space.lines[i].distance(p) <= tol * space.diameter]
    if len(hits) != 1:
        if len(hits) > 1:
            raise DegenerateStateError(f"{tuple(p)} is a triangle vertex")
        raise DomainError(f"{tuple(p)} lies on none of the three lines")
    return PointOnLine.snap(space, hits[0], p)


@dataclass(frozen=True, slots=True)
class StepOutcome:
    next: PointOnLine
    opposite_angle: float
    was_tie: bool


def _check_not_vertex(space: TriangleSpace, x: PointOnLine) -> None:
    tol = VERTEX_TOL * space.diameter
    if abs(x.t) <= tol or abs(x.t - space.edge_lengths[x.host]) <= tol:
        raise DegenerateStateError(f"state {tuple(x.point)} is a triangle vertex")


def step(space: TriangleSpace, x: PointOnLine, tie_tol: float = TIE_TOL) -> StepOutcome:
    """One application of the map on the full lines."""
    _check_not_vertex(space, x)
    j, k = other_lines(x.host)
    p = x.point
    dj, dk = space.lines[j].distance(p), space.lines[k].distance(p)
    if abs(dj - dk) <= tie_tol * space.diameter:
        return StepOutcome(x, 0.0, True)
    target = j if dj > dk else k
    nxt = PointOnLine.snap(space, target, foot(p, space.lines[target]))
    return StepOutcome(nxt, space.acute_angle(shared_vertex(x.host, target)), False)


def step_boundary(space: TriangleSpace, x: PointOnLine, tie_tol: float = TIE_TOL) -> StepOutcome:
    """One application of the map restricted to the triangle boundary.

    Feet falling outside their edge segment are discarded; with one foot left
    the map goes there even if the discarded foot was farther.
    """
    _check_not_vertex(space, x)
    p = x.point
    cands = []
    for j in other_lines(x.host):
        q = PointOnLine.snap(space, j, foot(p, space.lines[j]))
        if space.on_edge(j, q.t):
            cands.append((space.lines[j].distance(p), q))
    if not cands:
        raise NoValidProjectionError(f"no on-edge projection from {tuple(p)}")
    if len(cands) == 2:
        (dj, qj), (dk, qk) = cands
        if abs(dj - dk) <= tie_tol * space.diameter:
            return StepOutcome(x, 0.0, True)
        nxt = qj if dj > dk else qk
    else:
        nxt = cands[0][1]
    return StepOutcome(nxt, space.acute_angle(shared_vertex(x.host, nxt.host)), False)


# --- orbit classification -------------------------------------------------


@dataclass(frozen=True)
class FixedTie:
    point: PointOnLine
    kind = "FixedTie"


@dataclass(frozen=True)
class ConvergedToFixedPoint:
    """Degenerate limit: a fixed point, or a triangle vertex the orbit ran into.

    ``fixed_point`` is the nearest enumerated fixed point; ``vertex`` is set
    instead when the orbit landed on (or converged into) a vertex.
    """

    limit: Point
    fixed_point: FixedPoint | None = None
    vertex: int | None = None
    kind = "ConvergedToFixedPoint"


@dataclass(frozen=True)
class ConvergedToPeriodic:
    period: int
    orbit: tuple[PointOnLine, ...]
    factor: float
    certificate: ContractionCertificate | None = None
    kind = "ConvergedToPeriodic"


@dataclass(frozen=True)
class IndeterminateMaxIters:
    kind = "IndeterminateMaxIters"


Classification = Union[FixedTie, ConvergedToFixedPoint, ConvergedToPeriodic, IndeterminateMaxIters]


@dataclass(frozen=True)
class OrbitResult:
    trajectory: list[PointOnLine]
    itinerary: list[int]
    classification: Classification
    iterations_used: int

    @property
    def period(self) -> int | None:
        c = self.classification
        return c.period if isinstance(c, ConvergedToPeriodic) else None


@dataclass
class OrbitOptions:
    max_iters: int = 100_000
    tie_tol: float = TIE_TOL
    fix_tol: float = 1e-12
    cycle_tol: float = 1e-10
    restrict_boundary: bool = False
    n_max: int = 256
    # states kept at the head and at the tail of the reported trajectory
    keep_head: int = 1000
    keep_tail: int = 1000


def _nearest_fixed_point(space: TriangleSpace, p: Point) -> FixedPoint | None:
    fps = fixed_points(space)
    return min(fps, key=lambda f: dist(f.location, p)) if fps else None


def _periodic_symbols(hosts, end: int, n: int) -> bool:
    """Whether the 2n symbols ending at index ``end`` (inclusive) are n-periodic."""
    start = end - 2 * n + 1
    if start < 0:
        return False
    for i in range(start + n, end + 1):
        if hosts[i] != hosts[i - n]:
            return False
    return True


def _detect(xs: np.ndarray, ys: np.ndarray, hosts, k: int, n_max: int, tol: float) -> int | None:
    lo = max(0, k - n_max)
    if k - lo < 2:
        return None
    # gaps[m] is the distance from x_k to x_{k-n} with n = k - lo - m
    gaps = np.hypot(xs[lo:k] - xs[k], ys[lo:k] - ys[k])
    close = np.nonzero(gaps[::-1] < tol)[0]
    for idx in close:
        n = int(idx) + 1
        if hosts[k - n] == hosts[k] and _periodic_symbols(hosts, k, n):
            return n
    return None


def detect_period(
    itinerary: Sequence[int],
    tail_points: Sequence[PointOnLine],
    cycle_tol: float,
    n_max: int = 256,
) -> int | None:
    """Smallest n with an n-periodic symbol tail of length 2n and geometric closure.

    ``itinerary[i]`` must be the host of ``tail_points[i]``; both sequences
    end at the most recent state.  ``cycle_tol`` is absolute.
    """
    if len(itinerary) != len(tail_points):
        raise ValueError("itinerary and tail_points differ in length")
    if len(tail_points) < 2:
        return None
    xs = np.array([p.point.x for p in tail_points])
    ys = np.array([p.point.y for p in tail_points])
    return _detect(xs, ys, list(itinerary), len(tail_points) - 1, n_max, cycle_tol)


def run_orbit(space: TriangleSpace, x0: PointOnLine, opts: OrbitOptions | None = None) -> OrbitResult:
    """Iterate the map from ``x0`` until the orbit can be classified."""
    opts = opts or OrbitOptions()
    diam = space.diameter
    fix_tol, cycle_tol = opts.fix_tol * diam, opts.cycle_tol * diam
    stepper = step_boundary if opts.restrict_boundary else step

    cap = opts.max_iters + 1
    xs, ys = np.empty(cap), np.empty(cap)
    hosts: list[int] = []
    states: list[PointOnLine] = []

    def record(x: PointOnLine, k: int):
        xs[k], ys[k] = x.point.x, x.point.y
        hosts.append(x.host)
        if k < opts.keep_head:
            states.append(x)
        else:
            tail.append(x)
            if len(tail) > 2 * opts.keep_tail:
                del tail[: opts.keep_tail]

    tail: list[PointOnLine] = []

    def result(cls: Classification, k: int) -> OrbitResult:
        if tail:
            keep = tail[-opts.keep_tail :]
            traj = states + keep
        else:
            traj = states
        return OrbitResult(list(traj), hosts[: k + 1], cls, k)

    x = x0
    record(x, 0)
    retry_at = 0
    for k in range(1, cap):
        try:
            out = stepper(space, x, opts.tie_tol)
        except DegenerateStateError:
            if k == 1:
                raise
            v = space.near_vertex(x.point, 2 * VERTEX_TOL * diam)
            return result(ConvergedToFixedPoint(space.vertices[v], None, v), k - 1)
        if out.was_tie:
            return result(FixedTie(x), k - 1)
        prev, x = x, out.next
        record(x, k)
        if dist(prev.point, x.point) < fix_tol:
            fp = _nearest_fixed_point(space, x.point)
            return result(ConvergedToFixedPoint(x.point, fp), k)
        if k < retry_at:
            continue
        n = _detect(xs, ys, hosts, k, opts.n_max, cycle_tol)
        if n is None:
            continue
        itin = hosts[k - n : k + 1]
        try:
            m = build_induced_map(space, x, itin)
            sol = solve_periodic(space, m, opts)
        except StaleBranchError as exc:
            if exc.tie_point is not None:
                fp = _nearest_fixed_point(space, exc.tie_point.point)
                return result(ConvergedToFixedPoint(exc.tie_point.point, fp), k)
            retry_at = k + n
            continue
        orbit = _canonical_rotation(sol.orbit)
        cls = ConvergedToPeriodic(n, orbit, sol.certificate.factor, sol.certificate)
        return result(cls, k)
    return result(IndeterminateMaxIters(), opts.max_iters)


def _canonical_rotation(orbit: Sequence[PointOnLine]) -> tuple[PointOnLine, ...]:
    i = min(range(len(orbit)), key=lambda j: (orbit[j].host, orbit[j].t))
    return tuple(orbit[i:]) + tuple(orbit[:i])


# --- induced return map ---------------------------------------------------


@dataclass(frozen=True)
class InducedAffineMap:
    """``t -> slope * t + offset`` in the host line's parameter."""

    host: int
    slope: float
    offset: float
    itinerary: tuple[int, ...]

    def __call__(self, t: float) -> float:
        return self.slope * t + self.offset

    def fixed_parameter(self) -> float:
        return self.offset / (1 - self.slope)

    @property
    def period(self) -> int:
        return len(self.itinerary)


@dataclass(frozen=True)
class ContractionCertificate:
    k1: int
    k2: int
    k3: int
    factor: float
    lipschitz_bound: float

    @property
    def exponents(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)


@dataclass(frozen=True)
class PeriodicSolution:
    point: PointOnLine
    certificate: ContractionCertificate
    orbit: tuple[PointOnLine, ...]
    induced: InducedAffineMap


def _projection_affine(space: TriangleSpace, i: int, j: int) -> tuple[float, float]:
    """Slope and offset of the projection from line ``i`` onto line ``j`` in parameters."""
    ai, (dix, diy) = space.anchors[i], space.directions[i]
    aj, (djx, djy) = space.anchors[j], space.directions[j]
    slope = dix * djx + diy * djy
    offset = (ai.x - aj.x) * djx + (ai.y - aj.y) * djy
    return slope, offset


def _closed_cycle(host: int, itinerary: Sequence[int]) -> tuple[int, ...]:
    itin = tuple(int(h) for h in itinerary)
    if len(itin) < 2:
        raise BranchError("itinerary too short")
    if itin[0] != itin[-1]:
        itin = itin + (itin[0],)
    if itin[0] != host:
        raise BranchError(f"itinerary starts on L{itin[0] + 1}, state is on L{host + 1}")
    for a, b in zip(itin, itin[1:]):
        if a == b or not (0 <= a <= 2 and 0 <= b <= 2):
            raise BranchError(f"invalid transition L{a + 1} -> L{b + 1}")
    return itin


def build_induced_map(space: TriangleSpace, x: PointOnLine, itinerary: Sequence[int]) -> InducedAffineMap:
    """Compose the projections along ``itinerary`` into one affine map.

    ``itinerary`` lists hosts starting at ``x.host``; the return to
    ``x.host`` at the end may be written out or left implicit.
    """
    itin = _closed_cycle(x.host, itinerary)
    slope, offset = 1.0, 0.0
    for i, j in zip(itin, itin[1:]):
        a, b = _projection_affine(space, i, j)
        slope, offset = a * slope, a * offset + b
    return InducedAffineMap(x.host, slope, offset, itin[:-1])


def certificate_for(space: TriangleSpace, itinerary: Sequence[int]) -> ContractionCertificate:
    """Exponents of the cosine product for a closed itinerary (return implicit)."""
    itin = tuple(itinerary) + (itinerary[0],)
    ks = [0, 0, 0]
    for i, j in zip(itin, itin[1:]):
        v = shared_vertex(i, j)
        theta = angle_between(space.lines[i], space.lines[j])
        if abs(theta - space.acute_angle(v)) > 1e-9:
            raise AttributionError(f"step angle {theta} matches no interior angle")
        ks[v] += 1
    cosines = [math.cos(space.acute_angle(v)) for v in range(3)]
    factor = cosines[0] ** ks[0] * cosines[1] ** ks[1] * cosines[2] ** ks[2]
    return ContractionCertificate(ks[0], ks[1], ks[2], factor, max(cosines))


def solve_periodic(
    space: TriangleSpace, m: InducedAffineMap, opts: OrbitOptions | None = None
) -> PeriodicSolution:
    """Fixed point of the induced map and the periodic orbit through it.

    The orbit is re-simulated from the closed-form point; if the map does not
    follow ``m.itinerary`` from there the branch was stale and
    :class:`StaleBranchError` is raised.  Its ``tie_point`` attribute is set
    when the re-simulation stopped on a fixed point.
    """
    opts = opts or OrbitOptions()
    if not abs(m.slope) < 1:
        raise BranchError(f"induced map slope {m.slope} is not contracting")
    t_star = m.fixed_parameter()
    x = PointOnLine.at(space, m.host, t_star)
    stepper = step_boundary if opts.restrict_boundary else step
    orbit = [x]
    cur = x
    for i, expected in enumerate(m.itinerary[1:] + (m.host,)):
        try:
            out = stepper(space, cur, opts.tie_tol)
        except DegenerateStateError as exc:
            raise StaleBranchError(f"periodic candidate hits a vertex: {exc}") from exc
        if out.was_tie:
            raise StaleBranchError("periodic candidate sits on a fixed point", tie_point=cur)
        if out.next.host != expected:
            raise StaleBranchError(f"step {i + 1} leaves the itinerary")
        cur = out.next
        orbit.append(cur)
    closure = dist(cur.point, x.point)
    if closure > max(opts.cycle_tol, 1e-10) * space.diameter:
        raise StaleBranchError(f"re-simulated orbit misses its start by {closure:g}")
    cert = certificate_for(space, m.itinerary)
    return PeriodicSolution(x, cert, tuple(orbit[:-1]), m)


def two_point_contraction(
    space: TriangleSpace,
    x: PointOnLine,
    y: PointOnLine,
    s: int,
    restrict_boundary: bool = False,
    tie_tol: float = TIE_TOL,
) -> float:
    """Ratio d(T^s x, T^s y) / d(x, y) for two states sharing an itinerary."""
    if x.host != y.host:
        raise IncomparablePairError("states lie on different lines")
    d0 = dist(x.point, y.point)
    if d0 == 0:
        raise IncomparablePairError("states coincide")
    stepper = step_boundary if restrict_boundary else step
    for i in range(s):
        ox, oy = stepper(space, x, tie_tol), stepper(space, y, tie_tol)
        if ox.was_tie or oy.was_tie or ox.next.host != oy.next.host:
            raise IncomparablePairError(f"itineraries diverge at step {i + 1}")
        x, y = ox.next, oy.next
    return dist(x.point, y.point) / d0


# --- preimages -------------------------------------------------------------


@dataclass(frozen=True)
class PreimageNode:
    state: PointOnLine
    children: tuple[PreimageNode, ...] = field(default_factory=tuple)

    def walk(self, depth: int = 0):
        yield self, depth
        for c in self.children:
            yield from c.walk(depth + 1)


def preimages_boundary(
    space: TriangleSpace, y: PointOnLine, depth: int, tie_tol: float = TIE_TOL
) -> PreimageNode:
    """Boundary preimages of ``y`` up to ``depth`` levels, as a tree rooted at ``y``."""
    if not 1 <= depth <= 12:
        raise DomainError("preimage depth must be in 1..12")
    return PreimageNode(y, _preimage_children(space, y, depth, tie_tol))


def _preimage_children(space: TriangleSpace, y: PointOnLine, depth: int, tie_tol: float):
    if depth == 0:
        return ()
    tol = 1e-10 * space.diameter
    dx, dy = space.lines[y.host].normal
    kids = []
    for e in other_lines(y.host):
        # the perpendicular to y's line through y, met with line e
        line = space.lines[e]
        denom = line.a * dx + line.b * dy
        if abs(denom) < 1e-15:
            continue
        s = -line.signed_distance(y.point) / denom
        cand = PointOnLine.snap(space, e, Point(y.point.x + s * dx, y.point.y + s * dy))
        if not space.on_edge(e, cand.t) or space.near_vertex(cand.point) is not None:
            continue
        try:
            out = step_boundary(space, cand, tie_tol)
        except (DegenerateStateError, NoValidProjectionError):
            continue
        if out.was_tie or out.next.host != y.host or dist(out.next.point, y.point) > tol:
            continue
        kids.append(PreimageNode(cand, _preimage_children(space, cand, depth - 1, tie_tol)))
    return tuple(kids)
