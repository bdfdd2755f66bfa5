"""Deterministic SVG 1.1 output for orbits and bifurcation diagrams.

Coordinates are written with a fixed number of decimals so identical input
always yields byte-identical files.
"""

from __future__ import annotations

import math
from typing import Sequence

WIDTH, HEIGHT = 640, 480
MARGIN = 48

_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
    '<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>\n'
)


def _f(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


class _Frame:
    """Affine map from data coordinates to the SVG canvas (y pointing up)."""

    def __init__(self, xmin, xmax, ymin, ymax, equal_aspect: bool):
        if xmax - xmin <= 0:
            xmin, xmax = xmin - 0.5, xmax + 0.5
        if ymax - ymin <= 0:
            ymin, ymax = ymin - 0.5, ymax + 0.5
        sx = (WIDTH - 2 * MARGIN) / (xmax - xmin)
        sy = (HEIGHT - 2 * MARGIN) / (ymax - ymin)
        if equal_aspect:
            sx = sy = min(sx, sy)
        self.xmin, self.ymin, self.sx, self.sy = xmin, ymin, sx, sy
        # centre the drawing when the aspect ratio is locked
        self.ox = MARGIN + ((WIDTH - 2 * MARGIN) - sx * (xmax - xmin)) / 2
        self.oy = MARGIN + ((HEIGHT - 2 * MARGIN) - sy * (ymax - ymin)) / 2

    def __call__(self, x: float, y: float) -> tuple[str, str]:
        px = self.ox + (x - self.xmin) * self.sx
        py = HEIGHT - (self.oy + (y - self.ymin) * self.sy)
        return _f(px), _f(py)


def _path(frame: _Frame, pts: Sequence[tuple[float, float]], close: bool) -> str:
    parts = []
    for i, (x, y) in enumerate(pts):
        px, py = frame(x, y)
        parts.append(f"{'M' if i == 0 else 'L'}{px},{py}")
    if close:
        parts.append("Z")
    return " ".join(parts)


def orbit_svg(
    vertices: Sequence[tuple[float, float]],
    transient: Sequence[tuple[float, float]],
    periodic: Sequence[tuple[float, float]],
) -> str:
    """Triangle in black, converging iterates in red, the limit cycle in blue."""
    pts = list(vertices) + list(transient) + list(periodic)
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-12)
    frame = _Frame(min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad, equal_aspect=True)

    out = [_HEADER.format(w=WIDTH, h=HEIGHT)]
    out.append(
        f'<path id="triangle" d="{_path(frame, vertices, True)}" '
        'fill="none" stroke="black" stroke-width="1.5"/>\n'
    )
    if len(transient) > 1:
        out.append(
            f'<path id="transient" d="{_path(frame, transient, False)}" '
            'fill="none" stroke="red" stroke-width="0.75"/>\n'
        )
    if len(periodic) > 1:
        out.append(
            f'<path id="periodic" d="{_path(frame, periodic, True)}" '
            'fill="none" stroke="blue" stroke-width="1.5"/>\n'
        )
    for x, y in periodic:
        px, py = frame(x, y)
        out.append(f'<circle cx="{px}" cy="{py}" r="2.5" fill="blue"/>\n')
    out.append("</svg>\n")
    return "".join(out)


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    step = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(step))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= step), default=10 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    out, v = [], first
    while v <= hi + 1e-9 * step:
        out.append(round(v, 10))
        v += step
    return out


def bifurcation_svg(
    points: Sequence[tuple[float, float, str]],
    alpha_range: tuple[float, float] | None = None,
) -> str:
    """Scatter of ``(alpha_deg, s_norm, orientation)``; axes are always drawn."""
    if alpha_range is None:
        alphas = [p[0] for p in points]
        alpha_range = (min(alphas), max(alphas)) if alphas else (0.0, 180.0)
    lo, hi = alpha_range
    if hi <= lo:
        lo, hi = lo - 1.0, hi + 1.0
    frame = _Frame(lo, hi, 0.0, 1.0, equal_aspect=False)

    out = [_HEADER.format(w=WIDTH, h=HEIGHT)]
    x0, y0 = frame(lo, 0.0)
    x1, _ = frame(hi, 0.0)
    _, y1 = frame(lo, 1.0)
    out.append(f'<path id="axes" d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>\n')
    for t in _ticks(lo, hi):
        px, py = frame(t, 0.0)
        out.append(f'<path d="M{px},{py} L{px},{_f(float(py) + 4)}" stroke="black"/>\n')
        out.append(
            f'<text x="{px}" y="{_f(float(py) + 16)}" font-size="10" text-anchor="middle">{t:g}</text>\n'
        )
    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        px, py = frame(lo, t)
        out.append(f'<path d="M{_f(float(px) - 4)},{py} L{px},{py}" stroke="black"/>\n')
        out.append(
            f'<text x="{_f(float(px) - 6)}" y="{_f(float(py) + 3)}" font-size="10" text-anchor="end">{t:g}</text>\n'
        )
    out.append(
        f'<text x="{_f(WIDTH / 2)}" y="{_f(HEIGHT - 8)}" font-size="12" text-anchor="middle">'
        "apex angle (degrees)</text>\n"
    )
    out.append(
        f'<text x="12" y="{_f(HEIGHT / 2)}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 12 {_f(HEIGHT / 2)})">perimeter position / perimeter</text>\n'
    )
    colours = {"primary": "black", "mirrored": "crimson"}
    out.append('<g id="points">\n')
    for a, s, orientation in points:
        px, py = frame(a, s)
        out.append(f'<circle cx="{px}" cy="{py}" r="0.8" fill="{colours.get(orientation, "gray")}"/>\n')
    out.append("</g>\n</svg>\n")
    return "".join(out)
