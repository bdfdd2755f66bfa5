"""Sweep the isosceles apex angle, refine every period change, draw the diagram.

    python3 scripts/reproduce_bifurcation.py --out-dir runs/bif
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from trimap import bifurcation as bif
from trimap import serialize, svg


@dataclass
class SweepConfig:
    alpha_min: float = 30.0
    alpha_max: float = 150.0
    step_deg: float = 0.25
    base: float = bif.BASE_LENGTH
    tol_deg: float = 1e-6
    workers: int = 1

    @property
    def steps(self) -> int:
        return round((self.alpha_max - self.alpha_min) / self.step_deg) + 1


def main():
    cfg = SweepConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in asdict(cfg).items():
        p.add_argument("--" + name.replace("_", "-"), type=type(val), default=val)
    p.add_argument("--out-dir", default="runs/bifurcation")
    args = p.parse_args()
    cfg = SweepConfig(**{k: getattr(args, k) for k in asdict(cfg)})
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    samples = bif.sweep(cfg.alpha_min, cfg.alpha_max, cfg.steps, base=cfg.base, workers=cfg.workers)
    print(f"sweep: {cfg.steps} angles in {time.perf_counter() - t0:.1f}s")
    csv_text = serialize.samples_to_csv(samples)
    (out / "sweep.csv").write_text(csv_text)

    by = bif.group_by_alpha(samples)
    runs, prev = [], None
    for a in sorted(by):
        ps = bif.period_set(by[a])
        if ps != prev:
            runs.append((a, ps))
            prev = ps
    for a, ps in runs:
        print(f"  from {a:7.2f} deg: periods {list(ps) or 'none'}")

    points = []
    for lo, hi in bif.period_changes(samples):
        bp = bif.refine_bifurcation(lo, hi, cfg.tol_deg, cfg.base)
        print(f"  change near {bp.alpha_deg:.7f} deg: {bp.period_below} -> {bp.period_above}, "
              f"limit {bp.limit_distance / bp.diameter:.2e} diameters from a bisector point")
        points.append(serialize.bifurcation_point_record(bp))
    (out / "bifurcations.json").write_text(serialize.dumps(points) + "\n")

    pts, alphas = serialize.read_csv_points(csv_text)
    (out / "diagram.svg").write_text(svg.bifurcation_svg(pts, (min(alphas), max(alphas))))
    (out / "config.json").write_text(json.dumps(asdict(cfg), indent=2) + "\n")


if __name__ == "__main__":
    main()
