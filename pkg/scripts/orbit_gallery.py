"""Orbit drawings for a few reference triangles (JSON + SVG per case)."""

import argparse
import math
from pathlib import Path

from trimap import serialize, svg
from trimap.arrangement import from_vertices, isosceles_family
from trimap.dynamics import OrbitOptions, PointOnLine, run_orbit
from trimap.geometry import Point

CASES = {
    "equilateral": (lambda: from_vertices(Point(0, 0), Point(1, 0), Point(0.5, math.sqrt(3) / 2)), 2, 0.25),
    "right_isosceles": (lambda: from_vertices(Point(0, 0), Point(1, 0), Point(0, 1)), 1, 0.2),
    "apex_35": (lambda: isosceles_family(math.radians(35)), 0, 0.05),
    "apex_44": (lambda: isosceles_family(math.radians(44)), 0, 0.05),
    "apex_120": (lambda: isosceles_family(math.radians(120)), 0, 0.1),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default="runs/gallery")
    p.add_argument("--restrict-boundary", action="store_true")
    args = p.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    opts = OrbitOptions(restrict_boundary=args.restrict_boundary)
    for name, (make, host, t) in CASES.items():
        space = make()
        res = run_orbit(space, PointOnLine.at(space, host, t), opts)
        rec = serialize.orbit_record(space, res)
        (out / f"{name}.json").write_text(serialize.dumps(rec) + "\n")
        periodic = [(s["x"], s["y"]) for s in rec["orbit"]]
        (out / f"{name}.svg").write_text(svg.orbit_svg([tuple(v) for v in rec["triangle"]], rec["trajectory"], periodic))
        print(f"{name:16s} {res.classification.kind:22s} period={res.period} iters={res.iterations_used}")


if __name__ == "__main__":
    main()
