"""JSON and CSV encodings of orbits, fixed points and bifurcation output.

Floats are always written with 17 significant digits so that values survive
a text round trip exactly.  Line indices are 1-based in every encoding.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Sequence

from .arrangement import FixedPoint, TriangleSpace
from .bifurcation import BifurcationPoint, BifurcationSample
from .dynamics import (
    ConvergedToFixedPoint,
    ConvergedToPeriodic,
    FixedTie,
    OrbitResult,
    PointOnLine,
)

CSV_HEADER = [
    "alpha_deg", "period", "orientation", "point_index", "edge",
    "s_coord", "s_norm", "x", "y", "factor", "error",
]
ITINERARY_TAIL = 64


def fmt(v: float) -> str:
    v = float(v) + 0.0  # drop negative zero
    return format(v, ".17g")


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """``json.dumps`` look-alike that writes floats with 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def fixed_point_record(f: FixedPoint) -> dict:
    return {"x": f.location.x, "y": f.location.y, "host_line": f.host_line + 1, "kind": f.kind}


def _state(x: PointOnLine) -> dict:
    return {"x": x.point.x, "y": x.point.y, "host": x.host + 1}


def orbit_record(space: TriangleSpace, res: OrbitResult) -> dict:
    c = res.classification
    rec: dict[str, Any] = {"classification": c.kind, "period": None, "orbit": [], "factor": None}
    if isinstance(c, ConvergedToPeriodic):
        rec.update(period=c.period, orbit=[_state(x) for x in c.orbit], factor=c.factor)
        if c.certificate is not None:
            rec["exponents"] = list(c.certificate.exponents)
    elif isinstance(c, FixedTie):
        rec["orbit"] = [_state(c.point)]
    elif isinstance(c, ConvergedToFixedPoint):
        rec["limit"] = {"x": c.limit.x, "y": c.limit.y}
        if c.vertex is not None:
            rec["limit"]["vertex"] = "ABC"[c.vertex]
    rec["iterations_used"] = res.iterations_used
    rec["itinerary_tail"] = [h + 1 for h in res.itinerary[-ITINERARY_TAIL:]]
    rec["triangle"] = [[v.x, v.y] for v in space.vertices]
    rec["trajectory"] = [[x.point.x, x.point.y] for x in res.trajectory]
    return rec


def samples_to_csv(samples: Sequence[BifurcationSample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in samples:
        if s.period is None or not s.points:
            w.writerow([fmt(s.alpha_deg), "", s.orientation, "", "", "", "", "", "", "", s.error or ""])
            continue
        for i, p in enumerate(s.points):
            w.writerow([
                fmt(s.alpha_deg), s.period, s.orientation, i, p.edge + 1,
                fmt(p.s), fmt(p.s_norm), fmt(p.x), fmt(p.y), fmt(s.factor), "",
            ])
    return buf.getvalue()


def bifurcation_point_record(bp: BifurcationPoint) -> dict:
    f = bp.limit_bisector
    return {
        "alpha_deg": bp.alpha_deg,
        "period_below": bp.period_below,
        "period_above": bp.period_above,
        "bisector": {"x": f.location.x, "y": f.location.y, "host_line": f.host_line + 1},
        "limit_distance": bp.limit_distance,
        "diameter": bp.diameter,
        "bracket": list(bp.bracket),
    }


def read_csv_points(text: str) -> tuple[list[tuple[float, float, str]], list[float]]:
    """Periodic-point rows as ``(alpha_deg, s_norm, orientation)`` plus every row's angle."""
    if not text.strip():
        return [], []
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"alpha_deg", "s_norm"} <= set(reader.fieldnames):
        raise ValueError("not a bifurcation CSV")
    points, alphas = [], []
    for row in reader:
        a = float(row["alpha_deg"])
        alphas.append(a)
        if row.get("s_norm"):
            points.append((a, float(row["s_norm"]), row.get("orientation") or "primary"))
    return points, alphas
