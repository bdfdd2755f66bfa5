"""Command-line entry point.

Exit codes: 0 success, 2 usage or input error, 3 numeric/convergence error.
Errors are reported on stderr as ``{"error": <code>, "message": <text>}``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import bifurcation as bif
from . import serialize, svg
from .arrangement import TriangleSpace, fixed_points, parse_spec
from .dynamics import OrbitOptions, PointOnLine, locate, run_orbit
from .errors import DegenerateStateError, InputError, TrimapError
from .geometry import Point

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int = EXIT_USAGE):
        super().__init__(message)
        self.code, self.exit_code = code, exit_code


def load_spec(source: str) -> TriangleSpace:
    """Arrangement from a JSON file path or an inline JSON object."""
    text = source if source.lstrip().startswith("{") else _read(source)
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("invalid_input", f"spec is not valid JSON: {exc}") from exc
    return parse_spec(spec)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError("invalid_input", f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_fixed_points(args) -> int:
    space = load_spec(args.spec)
    recs = [serialize.fixed_point_record(f) for f in fixed_points(space)]
    _emit(serialize.dumps(recs) + "\n", args.out)
    return EXIT_OK


def _start_state(space: TriangleSpace, args) -> PointOnLine:
    by_param = args.line is not None or args.t is not None
    by_point = args.x is not None or args.y is not None
    if by_param == by_point:
        raise CliError("invalid_input", "give exactly one of --line/--t or --x/--y")
    if by_param:
        if args.line is None or args.t is None:
            raise CliError("invalid_input", "--line and --t go together")
        if args.line not in (1, 2, 3):
            raise CliError("invalid_input", "--line must be 1, 2 or 3")
        return PointOnLine.at(space, args.line - 1, args.t)
    if args.x is None or args.y is None:
        raise CliError("invalid_input", "--x and --y go together")
    return locate(space, Point(args.x, args.y))


def render_orbit_record(rec: dict) -> str:
    try:
        verts = [tuple(map(float, v)) for v in rec["triangle"]]
        traj = [tuple(map(float, p)) for p in rec.get("trajectory", [])]
        periodic = [(float(p["x"]), float(p["y"])) for p in rec.get("orbit", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError("invalid_input", f"malformed orbit JSON: {exc}") from exc
    if len(verts) != 3:
        raise CliError("invalid_input", "orbit JSON needs three triangle vertices")
    if rec.get("classification") != "ConvergedToPeriodic":
        periodic = periodic[:1]
    return svg.orbit_svg(verts, traj, periodic)


def cmd_orbit(args) -> int:
    space = load_spec(args.spec)
    x0 = _start_state(space, args)
    opts = OrbitOptions(max_iters=args.max_iters, restrict_boundary=args.restrict_boundary)
    res = run_orbit(space, x0, opts)
    rec = serialize.orbit_record(space, res)
    _emit(serialize.dumps(rec) + "\n", args.out)
    if args.svg:
        Path(args.svg).write_text(render_orbit_record(rec))
    if res.classification.kind == "IndeterminateMaxIters":
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_bifurcate(args) -> int:
    if args.steps < 2:
        raise CliError("usage", "--steps must be at least 2")
    if not 0 < args.alpha_min < args.alpha_max < 180:
        raise CliError("usage", "need 0 < --alpha-min < --alpha-max < 180")
    if args.refine and not args.out:
        raise CliError("usage", "--refine writes a JSON sidecar next to --out; give --out")
    samples = bif.sweep(args.alpha_min, args.alpha_max, args.steps, base=args.base, workers=args.workers)
    _emit(serialize.samples_to_csv(samples), args.out)
    if args.refine:
        points = []
        for lo, hi in bif.period_changes(samples):
            try:
                bp = bif.refine_bifurcation(lo, hi, args.tol_deg, args.base)
            except TrimapError as exc:
                print(json.dumps({"warning": exc.code, "bracket": [lo, hi], "message": str(exc)}), file=sys.stderr)
                continue
            points.append(serialize.bifurcation_point_record(bp))
        Path(refine_path(args.out)).write_text(serialize.dumps(points) + "\n")
    return EXIT_OK if any(s.period is not None for s in samples) else EXIT_NUMERIC


def refine_path(out: str) -> str:
    p = Path(out)
    return str(p.with_name(p.stem + ".bifurcations.json"))


def cmd_render(args) -> int:
    text = _read(args.input)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            rec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError("invalid_input", f"malformed orbit JSON: {exc}") from exc
        out = render_orbit_record(rec)
    else:
        try:
            points, alphas = serialize.read_csv_points(text)
        except (ValueError, KeyError) as exc:
            raise CliError("invalid_input", f"malformed bifurcation CSV: {exc}") from exc
        if not all(math.isfinite(v) for p in points for v in p[:2]):
            raise CliError("invalid_input", "non-finite values in CSV")
        rng = (min(alphas), max(alphas)) if alphas else None
        out = svg.bifurcation_svg(points, rng)
    _emit(out, args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trimap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fp = sub.add_parser("fixed-points", help="list the fixed points of an arrangement")
    fp.add_argument("spec", help="arrangement JSON file or inline JSON")
    fp.add_argument("--out")
    fp.set_defaults(func=cmd_fixed_points)

    orb = sub.add_parser("orbit", help="iterate the map and classify the orbit")
    orb.add_argument("spec", help="arrangement JSON file or inline JSON")
    orb.add_argument("--line", type=int, help="host line (1-3) of the start")
    orb.add_argument("--t", type=float, help="arc-length parameter of the start on --line")
    orb.add_argument("--x", type=float)
    orb.add_argument("--y", type=float)
    orb.add_argument("--max-iters", type=int, default=100_000)
    orb.add_argument("--restrict-boundary", action="store_true")
    orb.add_argument("--svg", help="also write an SVG drawing here")
    orb.add_argument("--out")
    orb.set_defaults(func=cmd_orbit)

    bf = sub.add_parser("bifurcate", help="sweep the isosceles apex angle")
    bf.add_argument("--alpha-min", type=float, required=True)
    bf.add_argument("--alpha-max", type=float, required=True)
    bf.add_argument("--steps", type=int, required=True)
    bf.add_argument("--refine", action="store_true", help="bisect every period change")
    bf.add_argument("--tol-deg", type=float, default=1e-6)
    bf.add_argument("--base", type=float, default=bif.BASE_LENGTH)
    bf.add_argument("--workers", type=int, default=1)
    bf.add_argument("--out")
    bf.set_defaults(func=cmd_bifurcate)

    rd = sub.add_parser("render", help="draw an orbit JSON or bifurcation CSV as SVG")
    rd.add_argument("input")
    rd.add_argument("--out")
    rd.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        code, message, status = exc.code, str(exc), exc.exit_code
    except DegenerateStateError as exc:
        code, message, status = exc.code, str(exc), EXIT_USAGE
    except InputError as exc:
        code, message, status = exc.code, str(exc), EXIT_USAGE
    except TrimapError as exc:
        code, message, status = exc.code, str(exc), EXIT_NUMERIC
    print(json.dumps({"error": code, "message": message}), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
