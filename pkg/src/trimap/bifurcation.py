"""Apex-angle sweeps of the isosceles family and bifurcation refinement.

The family puts the apex A on the positive y-axis and the base BC on the
x-axis, so the reflection ``x -> -x`` is a symmetry of every member.  It fixes
the base line (L1) and swaps the legs L2 = AC and L3 = AB; in line parameters
it sends ``(0, t)`` to ``(0, base - t)`` and ``(1, t)`` <-> ``(2, t)``.

Periodic points are reported by arc length ``s`` measured counterclockwise
from the left base vertex B, so the base occupies ``0 <= s <= base``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

from .arrangement import (
    FixedPoint,
    TriangleSpace,
    bisector_points,
    isosceles_family,
    to_boundary_coord,
)
from .dynamics import (
    ConvergedToFixedPoint,
    ConvergedToPeriodic,
    FixedTie,
    OrbitOptions,
    PointOnLine,
    build_induced_map,
    run_orbit,
    solve_periodic,
    step_boundary,
)
from .errors import (
    DomainError,
    InvalidBracketError,
    OrientationError,
    StaleBranchError,
    TrimapError,
)
from .geometry import dist

BASE_LENGTH = 1 / 3
FAN_PER_EDGE = 8
ORBIT_MATCH_TOL = 1e-9
LONG_ORBIT_ITERS = 100_000
MAX_CONTINUATION = 400


@dataclass(frozen=True)
class PeriodicPointRecord:
    s: float
    s_norm: float
    edge: int
    x: float
    y: float


@dataclass(frozen=True)
class BifurcationSample:
    alpha_deg: float
    period: int | None
    points: tuple[PeriodicPointRecord, ...] = ()
    orientation: Literal["primary", "mirrored"] = "primary"
    factor: float | None = None
    error: str | None = None
    # the periodic orbit as states, in dynamical order
    orbit: tuple[PointOnLine, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class BifurcationPoint:
    alpha_deg: float
    period_below: int | None
    period_above: int | None
    limit_bisector: FixedPoint
    limit_distance: float
    diameter: float
    bracket: tuple[float, float] = (math.nan, math.nan)


def _opts(opts: OrbitOptions | None) -> OrbitOptions:
    return replace(opts or OrbitOptions(), restrict_boundary=True)


def family(alpha_deg: float, base: float = BASE_LENGTH) -> TriangleSpace:
    if not 0 < alpha_deg < 180:
        raise DomainError(f"apex angle {alpha_deg} deg outside (0, 180)")
    return isosceles_family(math.radians(alpha_deg), base)


def fan(space: TriangleSpace, per_edge: int = FAN_PER_EDGE) -> list[PointOnLine]:
    """Equispaced starts, offset by half a spacing so no vertex or midpoint is hit."""
    return [
        PointOnLine.at(space, e, (k + 0.5) / per_edge * space.edge_lengths[e])
        for e in range(3)
        for k in range(per_edge)
    ]


def reflect_state(space: TriangleSpace, x: PointOnLine) -> PointOnLine:
    if x.host == 0:
        return PointOnLine.at(space, 0, space.edge_lengths[0] - x.t)
    return PointOnLine.at(space, 3 - x.host, x.t)


def _same_orbit(space: TriangleSpace, a: Sequence[PointOnLine], b: Sequence[PointOnLine]) -> bool:
    if len(a) != len(b):
        return False
    tol = ORBIT_MATCH_TOL * space.diameter
    return all(any(p.host == q.host and dist(p.point, q.point) <= tol for q in b) for p in a)


def _records(space: TriangleSpace, orbit: Sequence[PointOnLine]) -> tuple[PeriodicPointRecord, ...]:
    per = space.perimeter
    recs = []
    for x in orbit:
        bc = to_boundary_coord(space, x.point, start=1)
        recs.append(PeriodicPointRecord(bc.s, bc.s / per, x.host, x.point.x, x.point.y))
    return tuple(recs)


def _is_isosceles(space: TriangleSpace) -> bool:
    return abs(space.angles[1] - space.angles[2]) <= 1e-10


def mirror_orbit(space: TriangleSpace, sample: BifurcationSample) -> BifurcationSample:
    """The other orientation of an odd-period orbit, checked to be invariant."""
    if not _is_isosceles(space):
        raise DomainError("mirror_orbit needs an isosceles space with apex at A")
    if sample.period is None or not sample.orbit:
        raise OrientationError("sample carries no periodic orbit")
    if sample.period % 2 == 0:
        raise OrientationError(f"period {sample.period} is even; even orbits are self-mirrored")
    mirrored = _reflect_orbit(space, sample.orbit)
    orientation = "primary" if sample.orientation == "mirrored" else "mirrored"
    return replace(sample, orbit=mirrored, points=_records(space, mirrored), orientation=orientation)


def _reflect_orbit(space: TriangleSpace, orbit: Sequence[PointOnLine]) -> tuple[PointOnLine, ...]:
    mirrored = tuple(reflect_state(space, x) for x in orbit)
    tol = 1e-9 * space.diameter
    n = len(mirrored)
    for i, x in enumerate(mirrored):
        out = step_boundary(space, x)
        target = mirrored[(i + 1) % n]
        if out.was_tie or out.next.host != target.host or dist(out.next.point, target.point) > tol:
            raise OrientationError("reflected orbit is not invariant under the map")
    return mirrored


def sample_alpha(
    alpha_deg: float,
    base: float = BASE_LENGTH,
    opts: OrbitOptions | None = None,
    per_edge: int = FAN_PER_EDGE,
) -> list[BifurcationSample]:
    """All distinct attracting periodic orbits reached from the starting fan."""
    opts = _opts(opts)
    try:
        space = family(alpha_deg, base)
    except TrimapError as exc:
        return [BifurcationSample(alpha_deg, None, error=f"{exc.code}: {exc}")]

    found: list[ConvergedToPeriodic] = []
    errors: list[str] = []
    for x0 in fan(space, per_edge):
        try:
            res = run_orbit(space, x0, opts)
        except TrimapError as exc:
            errors.append(f"{exc.code}: {exc}")
            continue
        c = res.classification
        if isinstance(c, ConvergedToPeriodic) and not any(_same_orbit(space, c.orbit, f.orbit) for f in found):
            found.append(c)

    if not found:
        err = errors[0] if errors and len(errors) == len(fan(space, per_edge)) else None
        return [BifurcationSample(alpha_deg, None, error=err)]

    # pair every orbit with its reflection; odd orbits whose mirror the fan
    # missed get it constructed
    orbits = [(c.period, c.orbit, c.factor) for c in found]
    groups: list[list[tuple]] = []
    for entry in orbits:
        mirrored = tuple(reflect_state(space, x) for x in entry[1])
        for g in groups:
            if _same_orbit(space, mirrored, g[0][1]):
                g.append(entry)
                break
        else:
            groups.append([entry])

    samples = []
    for g in groups:
        period, orbit, factor = g[0]
        if len(g) == 1 and not _same_orbit(space, orbit, _reflect_orbit(space, orbit)):
            g.append((period, _reflect_orbit(space, orbit), factor))
        if len(g) == 1:
            samples.append(_sample(space, alpha_deg, period, orbit, factor, "primary"))
            continue
        a, b = (_sample(space, alpha_deg, p, o, f, "primary") for p, o, f in g[:2])
        if min(r.s for r in b.points) < min(r.s for r in a.points):
            a, b = b, a
        samples += [a, replace(b, orientation="mirrored")]
    samples.sort(key=lambda s: (s.period, s.orientation != "primary", min(r.s for r in s.points)))
    return samples


def _sample(space, alpha_deg, period, orbit, factor, orientation) -> BifurcationSample:
    # list points from the one nearest B, keeping dynamical order
    recs = _records(space, orbit)
    i = min(range(len(recs)), key=lambda j: recs[j].s)
    orbit = tuple(orbit[i:]) + tuple(orbit[:i])
    return BifurcationSample(alpha_deg, period, recs[i:] + recs[:i], orientation, factor, None, orbit)


def alpha_grid(alpha_min: float, alpha_max: float, steps: int) -> list[float]:
    # multiply before dividing so refined grids reproduce coarse points bit for bit
    span = alpha_max - alpha_min
    return [alpha_min + span * i / (steps - 1) for i in range(steps)]


def _sample_args(args):
    return sample_alpha(*args)


def sweep(
    alpha_min: float,
    alpha_max: float,
    steps: int,
    opts: OrbitOptions | None = None,
    base: float = BASE_LENGTH,
    workers: int = 1,
    per_edge: int = FAN_PER_EDGE,
) -> list[BifurcationSample]:
    """Samples on a uniform grid of apex angles (degrees), ordered by angle."""
    if not 0 < alpha_min < alpha_max < 180:
        raise DomainError("need 0 < alpha_min < alpha_max < 180")
    if steps < 2:
        raise DomainError("need at least two grid points")
    grid = alpha_grid(alpha_min, alpha_max, steps)
    args = [(a, base, opts, per_edge) for a in grid]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_sample_args, args, chunksize=8))
    else:
        chunks = [_sample_args(a) for a in args]
    return [s for chunk in chunks for s in chunk]


def period_set(samples: Sequence[BifurcationSample]) -> tuple[int, ...]:
    return tuple(sorted({s.period for s in samples if s.period is not None}))


def group_by_alpha(samples: Sequence[BifurcationSample]) -> dict[float, list[BifurcationSample]]:
    out: dict[float, list[BifurcationSample]] = {}
    for s in samples:
        out.setdefault(s.alpha_deg, []).append(s)
    return out


def period_changes(samples: Sequence[BifurcationSample]) -> list[tuple[float, float]]:
    """Adjacent grid pairs whose sets of attracting periods differ."""
    by_alpha = group_by_alpha(samples)
    alphas = sorted(by_alpha)
    return [
        (a, b)
        for a, b in zip(alphas, alphas[1:])
        if period_set(by_alpha[a]) != period_set(by_alpha[b])
    ]


# --- refinement ------------------------------------------------------------


def _track(alpha_deg: float, base: float, host: int, t: float, itinerary, opts: OrbitOptions):
    """Closed-form periodic orbit with the given itinerary at ``alpha_deg``, or None."""
    space = family(alpha_deg, base)
    x = PointOnLine.at(space, host, t)
    try:
        return solve_periodic(space, build_induced_map(space, x, itinerary), opts)
    except (StaleBranchError, TrimapError):
        return None


def refine_bifurcation(
    alpha_lo: float,
    alpha_hi: float,
    tol_deg: float = 1e-6,
    base: float = BASE_LENGTH,
    opts: OrbitOptions | None = None,
) -> BifurcationPoint:
    """Locate where the set of attracting periods changes inside a bracket.

    A periodic orbit present at one end with a period absent at the other is
    followed by its itinerary: the closed-form periodic point is recomputed
    for each trial angle, and bisection finds where the orbit stops following
    that itinerary.  The long orbit is then run at the end of the final
    bracket where the tracked cycle still exists.
    """
    opts = _opts(opts)
    if not alpha_lo < alpha_hi:
        raise InvalidBracketError("need alpha_lo < alpha_hi")
    lo_samples, hi_samples = sample_alpha(alpha_lo, base, opts), sample_alpha(alpha_hi, base, opts)
    set_lo, set_hi = period_set(lo_samples), period_set(hi_samples)
    if set_lo == set_hi:
        raise InvalidBracketError(f"same periods {set_lo} at both bracket ends")

    candidates = [(s.period, 0, s) for s in lo_samples if s.period is not None and s.period not in set_hi]
    candidates += [(s.period, 1, s) for s in hi_samples if s.period is not None and s.period not in set_lo]
    if not candidates:
        raise InvalidBracketError("period sets differ only by degenerate samples")
    period, side, tracked = min(candidates, key=lambda c: (c[0], c[1]))
    anchor = tracked.orbit[0]
    itinerary = [x.host for x in tracked.orbit]

    valid_end, other_end = (alpha_lo, alpha_hi) if side == 0 else (alpha_hi, alpha_lo)
    t = anchor.t
    # the fan can miss an orbit whose basin shrank; follow it outward until it
    # really ceases to exist
    width = other_end - valid_end
    for _ in range(MAX_CONTINUATION):
        sol = _track(other_end, base, anchor.host, t, itinerary, opts)
        if sol is None:
            break
        valid_end, t = other_end, sol.point.t
        other_end = valid_end + width
        if not 0 < other_end < 180:
            raise InvalidBracketError(f"period-{period} orbit persists to the end of the family")
    else:
        raise InvalidBracketError(f"period-{period} orbit persists beyond the continuation budget")
    while abs(valid_end - other_end) >= tol_deg:
        mid = 0.5 * (valid_end + other_end)
        sol = _track(mid, base, anchor.host, t, itinerary, opts)
        if sol is None:
            other_end = mid
        else:
            valid_end, t = mid, sol.point.t

    space = family(valid_end, base)
    long_opts = replace(opts, max_iters=LONG_ORBIT_ITERS)
    res = run_orbit(space, PointOnLine.at(space, anchor.host, t), long_opts)
    limit_pts = _limit_points(res)
    bps = bisector_points(space)
    d, bp = min(((dist(p, f.location), f) for p in limit_pts for f in bps), key=lambda e: e[0])

    # what the neighbourhood of the dead cycle falls into just past the boundary
    past = family(other_end, base)
    try:
        other_period = run_orbit(past, PointOnLine.at(past, anchor.host, t), opts).period
    except TrimapError:
        other_period = None
    if other_period is None or other_period == period:
        # the ghost fell into a vertex or a tie; fall back to the fan
        rest = [p for p in period_set(sample_alpha(other_end, base, opts)) if p != period]
        other_period = rest[0] if rest else None
    below, above = (period, other_period) if valid_end < other_end else (other_period, period)
    return BifurcationPoint(valid_end, below, above, bp, d, space.diameter, (min(valid_end, other_end), max(valid_end, other_end)))


def _limit_points(res):
    c = res.classification
    if isinstance(c, ConvergedToPeriodic):
        return [x.point for x in c.orbit]
    if isinstance(c, FixedTie):
        return [c.point.point]
    if isinstance(c, ConvergedToFixedPoint):
        return [c.limit]
    return [x.point for x in res.trajectory[-512:]]


def refine_all(
    samples: Sequence[BifurcationSample],
    tol_deg: float = 1e-6,
    base: float = BASE_LENGTH,
    opts: OrbitOptions | None = None,
) -> list[BifurcationPoint]:
    return [refine_bifurcation(a, b, tol_deg, base, opts) for a, b in period_changes(samples)]
