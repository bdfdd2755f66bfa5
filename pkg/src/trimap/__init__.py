"""Farthest-perpendicular-projection dynamics on three-line arrangements."""

from .geometry import (
    Line,
    Point,
    Similarity,
    angle_between,
    apply_similarity,
    apply_similarity_line,
    foot,
    intersect,
    line_through,
    make_line,
)

__version__ = "0.1.0"
