import math
import os
import random

import hypothesis
import pytest

from trimap.arrangement import from_vertices
from trimap.geometry import Point

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SQ3 = math.sqrt(3)


@pytest.fixture
def right():
    return from_vertices(Point(0, 0), Point(1, 0), Point(0, 1))


@pytest.fixture
def equilateral():
    return from_vertices(Point(0, 0), Point(1, 0), Point(0.5, SQ3 / 2))


def random_angles(rng: random.Random, lo=20.0, hi=140.0):
    """Interior angles (radians) with every angle in [lo, hi] degrees."""
    while True:
        a, b = rng.uniform(lo, hi), rng.uniform(lo, hi)
        c = 180.0 - a - b
        if lo <= c <= hi:
            return tuple(math.radians(v) for v in (a, b, c))


def triangle_from_angles(angles, scale=1.0, rotation=0.0, offset=(0.0, 0.0)):
    """Vertices with the given angles at A, B, C; side AB has length ``scale``."""
    a, b, c = angles
    ac = scale * math.sin(b) / math.sin(c)
    pts = [(0.0, 0.0), (scale, 0.0), (ac * math.cos(a), ac * math.sin(a))]
    cr, sr = math.cos(rotation), math.sin(rotation)
    return [Point(cr * x - sr * y + offset[0], sr * x + cr * y + offset[1]) for x, y in pts]


def random_space(rng: random.Random, lo=20.0, hi=140.0):
    verts = triangle_from_angles(
        random_angles(rng, lo, hi),
        scale=rng.uniform(0.5, 3.0),
        rotation=rng.uniform(0, 2 * math.pi),
        offset=(rng.uniform(-2, 2), rng.uniform(-2, 2)),
    )
    return from_vertices(*verts)
