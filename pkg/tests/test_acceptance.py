"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line (visible even when
output is captured) before re-raising any failure.
"""

import contextlib
import math
import random
import time

import numpy as np
import pytest

from conftest import SQ3, random_space
from oracles import brute_orbit, equidistance_sign_changes
from trimap.arrangement import fixed_points, from_vertices
from trimap.bifurcation import (
    family,
    group_by_alpha,
    period_changes,
    period_set,
    refine_bifurcation,
    sample_alpha,
    sweep,
)
from trimap.dynamics import (
    ConvergedToPeriodic,
    IndeterminateMaxIters,
    OrbitOptions,
    PointOnLine,
    preimages_boundary,
    run_orbit,
    step,
    step_boundary,
    two_point_contraction,
)
from trimap.errors import IncomparablePairError
from trimap.geometry import Point, Similarity, apply_similarity, dist, intersect


@pytest.fixture
def report(request, capsys):
    @contextlib.contextmanager
    def _report(n, detail=""):
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}{'  ' + detail if detail else ''}")
    return _report


def same_set(found, expected, tol):
    return len(found) == len(expected) and all(min(dist(p, q) for q in found) <= tol for p in expected)


# shared by criteria 4 and 5
_totality = {}


def totality_runs():
    if not _totality:
        rng = random.Random(20240501)
        runs, t0 = [], time.perf_counter()
        for _ in range(500):
            sp = random_space(rng, 20, 140)
            for _ in range(5):
                while True:
                    host = rng.randrange(3)
                    x0 = PointOnLine.at(sp, host, rng.uniform(0.001, 0.999) * sp.edge_lengths[host])
                    if not step(sp, x0).was_tie:
                        break
                runs.append((sp, run_orbit(sp, x0, OrbitOptions(max_iters=100_000))))
        _totality["runs"], _totality["elapsed"] = runs, time.perf_counter() - t0
    return _totality["runs"], _totality["elapsed"]


def test_criterion_01_equilateral_orbit(report, equilateral):
    with report(1):
        x0 = PointOnLine.snap(equilateral, 2, Point(0.25, 0))
        run_orbit(equilateral, x0)  # warm caches before timing
        t0 = time.perf_counter()
        res = run_orbit(equilateral, x0)
        elapsed = time.perf_counter() - t0
        c = res.classification
        assert isinstance(c, ConvergedToPeriodic) and c.period == 3
        expected = [Point(1 / 3, 0), Point(5 / 6, SQ3 / 6), Point(1 / 3, SQ3 / 3)]
        assert same_set([x.point for x in c.orbit], expected, 1e-9)
        assert abs(c.factor - 1 / 8) <= 1e-12
        assert res.iterations_used < 200
        assert elapsed < 0.010
        tail = brute_orbit([tuple(v) for v in equilateral.vertices], 2, (0.25, 0), 200)[-3:]
        assert same_set([Point(*p) for _, p in tail], expected, 1e-9)


def test_criterion_02_right_isosceles_orbit(report, right):
    with report(2):
        res = run_orbit(right, PointOnLine.snap(right, 1, Point(0, 0.2)))
        c = res.classification
        assert isinstance(c, ConvergedToPeriodic) and c.period == 4
        expected = [Point(0, 1 / 3), Point(1 / 3, 2 / 3), Point(1 / 3, 0), Point(2 / 3, 1 / 3)]
        assert same_set([x.point for x in c.orbit], expected, 1e-9)
        assert abs(c.factor - math.cos(math.pi / 4) ** 4) <= 1e-12


def test_criterion_03_fixed_points(report, right):
    with report(3):
        r2 = math.sqrt(2)
        expected = [Point(0.5, 0.5), Point(r2 - 1, 0), Point(0, r2 - 1), Point(-(1 + r2), 0), Point(0, -(1 + r2))]
        fps = fixed_points(right)
        assert same_set([f.location for f in fps], expected, 1e-10)
        verts = [tuple(v) for v in right.vertices]
        span = 5 * right.diameter
        scanned = []
        for host in range(3):
            lo, hi = -span, right.edge_lengths[host] + span
            for t in equidistance_sign_changes(verts, host, lo, hi, 10_000):
                p = right.point_at(host, float(t))
                if right.near_vertex(p, 1e-3) is None:
                    scanned.append(p)
        # every scanned crossing is one of the enumerated points, and vice versa
        assert all(min(dist(p, f.location) for f in fps) < 1e-2 for p in scanned)
        assert all(min(dist(p, f.location) for p in scanned) < 1e-2 for f in fps)


def test_criterion_04_totality(report):
    with report(4) as _:
        runs, elapsed = totality_runs()
        stuck = [r for _, r in runs if isinstance(r.classification, IndeterminateMaxIters)]
        assert len(runs) == 2500
        assert not stuck
        assert elapsed < 60


def _contraction_ratio(sp, x, n):
    h = 1e-6 * sp.diameter
    for _ in range(6):
        for sign in (1, -1):
            y = PointOnLine.at(sp, x.host, x.t + sign * h)
            try:
                return two_point_contraction(sp, x, y, n)
            except IncomparablePairError:
                pass
        h *= 0.1
    raise IncomparablePairError("no comparable neighbour")


def test_criterion_05_contraction(report):
    with report(5):
        runs, _ = totality_runs()
        checked = 0
        for sp, res in runs:
            c = res.classification
            if not isinstance(c, ConvergedToPeriodic):
                continue
            cert = c.certificate
            assert sum(cert.exponents) == c.period
            phi = math.prod(math.cos(sp.acute_angle(v)) ** k for v, k in enumerate(cert.exponents))
            assert abs(phi - cert.factor) <= 1e-12
            assert abs(_contraction_ratio(sp, c.orbit[0], c.period) - cert.factor) <= 1e-8
            checked += 1
        assert checked > 0


def test_criterion_06_step_invariant(report):
    with report(6):
        rng = random.Random(6)
        spaces = [random_space(rng, 5, 170) for _ in range(100)]
        worst = 0.0
        done = 0
        while done < 100_000:
            sp = spaces[done % 100]
            host = rng.randrange(3)
            length = sp.edge_lengths[host]
            x = PointOnLine.at(sp, host, rng.uniform(-2 * length, 3 * length))
            out = step(sp, x)
            if out.was_tie:
                continue
            v = intersect(sp.lines[x.host], sp.lines[out.next.host])
            want = math.cos(out.opposite_angle) * dist(x.point, v)
            worst = max(worst, abs(dist(out.next.point, v) - want) / max(want, 1e-300))
            done += 1
        assert worst <= 1e-10


_sweeps = {}


def coarse_sweep():
    if "coarse" not in _sweeps:
        t0 = time.perf_counter()
        _sweeps["coarse"] = sweep(30, 150, 481)
        _sweeps["elapsed"] = time.perf_counter() - t0
    return _sweeps["coarse"], _sweeps["elapsed"]


@pytest.mark.slow
def test_criterion_07_bifurcation_sweep(report):
    with report(7):
        coarse, elapsed = coarse_sweep()
        assert elapsed < 300
        by = group_by_alpha(coarse)
        assert period_set(by[60.0]) == (3,)
        assert period_set(by[90.0]) == (4,)
        changes = period_changes(coarse)
        assert 0 < len(changes) < 480
        fine = group_by_alpha(sweep(30, 150, 961))
        # refinement inserts samples without altering existing ones
        for a, samples in by.items():
            assert period_set(fine[a]) == period_set(samples)
        fine_changes = period_changes([s for v in fine.values() for s in v])
        assert len(fine_changes) == len(changes)
        assert all(lo <= a <= b <= hi for (a, b), (lo, hi) in zip(fine_changes, changes))


@pytest.mark.slow
def test_criterion_08_bisector_signature(report):
    with report(8):
        coarse, _ = coarse_sweep()
        changes = period_changes(coarse)
        assert changes
        for lo, hi in changes:
            bp = refine_bifurcation(lo, hi)
            space = family(bp.alpha_deg)
            assert bp.limit_distance < 1e-4 * space.diameter, (lo, hi, bp)
            assert bp.period_below != bp.period_above


def test_criterion_09_odd_orientations(report):
    with report(9):
        sp = family(60.0)
        base = sp.edge_lengths[0]
        found = []
        for frac in (0.25, 0.75):
            c = run_orbit(sp, PointOnLine.at(sp, 0, frac * base)).classification
            assert isinstance(c, ConvergedToPeriodic) and c.period == 3
            found.append(c)
            for x in c.orbit:
                cur = x
                for _ in range(3):
                    cur = step_boundary(sp, cur).next
                assert dist(cur.point, x.point) <= 1e-9
        base_pts = sorted(x.t / base for c in found for x in c.orbit if x.host == 0)
        assert base_pts == pytest.approx([1 / 3, 2 / 3], abs=1e-9)


def test_criterion_10_equivariance(report):
    with report(10):
        rng = random.Random(10)
        for _ in range(100):
            sp = random_space(rng, 20, 140)
            host = rng.randrange(3)
            x0 = PointOnLine.at(sp, host, rng.uniform(0.01, 0.99) * sp.edge_lengths[host])
            s = Similarity(rng.uniform(-math.pi, math.pi), rng.uniform(0.1, 10),
                           (rng.uniform(-50, 50), rng.uniform(-50, 50)), rng.random() < 0.5)
            moved = sp.transformed(s)
            y0 = PointOnLine.snap(moved, host, apply_similarity(s, x0.point))
            a, b = run_orbit(sp, x0), run_orbit(moved, y0)
            assert a.itinerary == b.itinerary
            assert a.classification.kind == b.classification.kind
            if isinstance(a.classification, ConvergedToPeriodic):
                for p, q in zip(a.classification.orbit, b.classification.orbit):
                    assert dist(apply_similarity(s, p.point), q.point) <= 1e-9 * moved.diameter


def test_criterion_11_preimages(report):
    with report(11):
        rng = random.Random(11)
        nodes_checked = 0
        for _ in range(100):
            sp = random_space(rng, 20, 140)
            host = rng.randrange(3)
            root = PointOnLine.at(sp, host, rng.uniform(0.01, 0.99) * sp.edge_lengths[host])
            for node, depth in preimages_boundary(sp, root, 4).walk():
                cur = node.state
                for _ in range(depth):
                    cur = step_boundary(sp, cur).next
                assert cur.host == root.host
                assert dist(cur.point, root.point) <= 1e-10 * sp.diameter
                nodes_checked += 1
        assert nodes_checked > 100
