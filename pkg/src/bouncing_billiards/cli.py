"""Command line interface.

    bouncing-billiards orbit --config scenario.json --out orbit.csv --svg orbit.svg
    bouncing-billiards sweep --config sweep.json --threads 0 --out rows.csv
    bouncing-billiards fixed-points --config scenario.json --radius 2
    bouncing-billiards rotation --h 1 --a 0.6
    bouncing-billiards verify --quick
    bouncing-billiards plot --config scenario.json --svg figure.svg

Exit status: 0 on success, 1 for usage, schema or validation errors, 2 when
``verify`` finds failing claims.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .analysis import find_fixed_points, fixed_point_residual
from .errors import SchemaError, ValidationError
from .export import export_orbit_csv, orbit_report_json, write_text
from .runner import run_scenario
from .scenario import parse_scenario, parse_sweep
from .segment_theory import b_from_a, rho_closed_form, rotation_number
from .svg import SvgStyle, render_svg
from .sweep import run_sweep

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2
NUDGE = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read_config(path):
    if path is None:
        raise UsageError("--config PATH is required")
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _numbered(path: str, i: int, n: int) -> str:
    if n == 1:
        return path
    p = Path(path)
    return str(p.with_name(f"{p.stem}-{i}{p.suffix}"))


def _scenario(args):
    cfg = parse_scenario(_read_config(args.config))
    if getattr(args, "nudge_restart", False):
        cfg = cfg.replace(nudge=NUDGE)
    return cfg


def cmd_orbit(args):
    cfg = _scenario(args)
    if cfg.nudge > 0.0:
        print(f"note: corner hits restart with a {cfg.nudge:g} rad nudge (not the canonical map)",
              file=sys.stderr)
    records = run_scenario(cfg, args.steps)
    csv_path = args.out or cfg.output["csv"]
    if csv_path:
        for i, rec in enumerate(records):
            write_text(_numbered(csv_path, i, len(records)), export_orbit_csv(rec))
    svg_path = args.svg or cfg.output["svg"]
    if svg_path:
        write_text(svg_path, render_svg(cfg.build_shape(), records))
    report = orbit_report_json(records)
    if cfg.output["json"]:
        write_text(cfg.output["json"], report)
    sys.stdout.write(report)
    return EXIT_OK


def cmd_plot(args):
    cfg = _scenario(args)
    svg_path = args.svg or cfg.output["svg"]
    if not svg_path:
        raise UsageError("plot needs --svg PATH (or output.svg in the config)")
    records = run_scenario(cfg, args.steps)
    style = SvgStyle(dot_radius=args.dot_radius, max_points=args.max_points, title=cfg.id or None)
    write_text(svg_path, render_svg(cfg.build_shape(), records, style))
    return EXIT_OK


def cmd_sweep(args):
    cfg = parse_sweep(_read_config(args.config))
    report = run_sweep(cfg, threads=args.threads)
    text = report.to_csv()
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fixed_points(args):
    cfg = parse_scenario(_read_config(args.config))
    shape = cfg.build_shape()
    out = []
    for R in args.radius or [1.5, 2.0, 3.0]:
        found = find_fixed_points(shape, R, n_samples=args.samples)
        out.append({"radius": R, "count": len(found),
                    "points": [{"x": p.x, "y": p.y, "angle": p.angle,
                                "residual": fixed_point_residual(shape, p)} for p in found]})
    text = json.dumps(out, indent=2) + "\n"
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_rotation(args):
    h, a, b = args.h, args.a, args.b
    given = sum(v is not None for v in (h, a, b))
    if given == 1 and h is not None:
        if h <= 0.0:
            raise UsageError("--h must be positive")
        res = {"h": h, "phi_min": math.pi, "rho": rho_closed_form(h)}
    elif given == 2:
        if a is None:
            a = b / math.sqrt(h * h + b * b)
        elif b is None:
            if not 0.0 < a < 1.0 or h <= 0.0:
                raise UsageError("need 0 < a < 1 and h > 0")
            b = float(b_from_a(a, h))
        if a <= 0.0 or b <= 0.0:
            raise UsageError("semi-axes must be positive")
        rot = rotation_number(a, b)
        res = {"h": h, "a": a, "b": b, "phi": rot.phi, "phi_prime": rot.phi_prime}
    else:
        raise UsageError("give --h alone, or two of --h, --a, --b")
    text = json.dumps(res, indent=2) + "\n"
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args):
    from .verify import verify_suite

    report = verify_suite("quick" if args.quick else "full")
    sys.stdout.write(report.to_text())
    if args.out:
        write_text(args.out, report.to_json())
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser():
    p = _Parser(prog="bouncing-billiards", description="Bouncing outer billiard experiments.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, steps=False, svg=False):
        sp.add_argument("--config", metavar="PATH")
        sp.add_argument("--out", metavar="PATH")
        if steps:
            sp.add_argument("--steps", metavar="N", type=int, help="override the step count")
        if svg:
            sp.add_argument("--svg", metavar="PATH")

    sp = sub.add_parser("orbit", help="iterate a scenario and export the orbits")
    common(sp, steps=True, svg=True)
    sp.add_argument("--nudge-restart", action="store_true",
                    help="non-canonical: turn by 1e-9 rad and retry on corner hits")
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("plot", help="render a scenario as SVG")
    common(sp, steps=True, svg=True)
    sp.add_argument("--dot-radius", type=float, default=1.0)
    sp.add_argument("--max-points", type=int, default=None, help="thin each orbit to N dots")
    sp.add_argument("--nudge-restart", action="store_true",
                    help="non-canonical: turn by 1e-9 rad and retry on corner hits")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("sweep", help="run a parameter sweep")
    common(sp)
    sp.add_argument("--threads", metavar="N", type=int, default=1, help="workers; 0 means one per CPU")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("fixed-points", help="fixed points on loops around the shape")
    common(sp)
    sp.add_argument("--radius", type=float, action="append", help="loop radius (repeatable)")
    sp.add_argument("--samples", type=int, default=720)
    sp.set_defaults(func=cmd_fixed_points)

    sp = sub.add_parser("rotation", help="rotation number of a segment invariant ellipse")
    sp.add_argument("--out", metavar="PATH")
    sp.add_argument("--h", type=float)
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.set_defaults(func=cmd_rotation)

    sp = sub.add_parser("verify", help="run the verification battery")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--out", metavar="PATH", help="write the JSON report here")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 0) is not None and getattr(args, "threads", 0) < 0:
            raise UsageError("--threads must be >= 0")
        if getattr(args, "steps", None) is not None and args.steps < 0:
            raise UsageError("--steps must be >= 0")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SchemaError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
