"""Long orbits around the ellipse (1, 0.4) and the parabola arcs of height 0.3, 0.5, 1.

Run:  python3 demos/smooth_figures.py [OUTDIR] [STEPS]

Uses the shipped figure scenarios, writes one SVG per shape and prints the
largest distance from the origin reached by each orbit.
"""
import sys
from pathlib import Path

from bouncing_billiards import orbit, render_svg
from bouncing_billiards.corpus import figure_scenarios
from bouncing_billiards.svg import SvgStyle


def main(outdir, steps):
    outdir.mkdir(parents=True, exist_ok=True)
    for sc in figure_scenarios():
        shape = sc.build_shape()
        recs = [orbit(shape, pp, steps, record_every=max(1, steps // 20000))
                for pp in sc.phase_points()]
        worst = max(r.summary["max_radius"] for r in recs)
        path = outdir / f"{sc.id}.svg"
        path.write_text(render_svg(shape, recs, SvgStyle(dot_radius=0.5, title=sc.id)),
                        encoding="utf-8")
        print(f"{sc.id:14s} orbits={len(recs)} max |p| = {worst:.4f}  -> {path}")


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demos/out")
    main(out, int(sys.argv[2]) if len(sys.argv) > 2 else 100_000)
