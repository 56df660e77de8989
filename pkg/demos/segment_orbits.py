"""Orbits above the unit segment: invariant ellipses, M/W period-4 loci, a period-7 orbit.

Run:  python3 demos/segment_orbits.py [OUTDIR]

Writes segment_orbits.svg and segment_mw.svg and prints the rotation
numbers measured along a few orbits next to the closed form.
"""
import math
import sys
from pathlib import Path

import numpy as np

from bouncing_billiards import (EllipseCoords, Segment, SegmentState, build_periodic_orbit,
                                invariants, measured_rotation, orbit, render_svg,
                                rotation_number, step_segment, to_ellipse_coords)
from bouncing_billiards.dynamics import OrbitRecord
from bouncing_billiards.segment_theory import period_four_extremes
from bouncing_billiards.svg import SvgStyle


def main(outdir):
    outdir.mkdir(parents=True, exist_ok=True)
    seg = Segment()

    print("x      theta   a        b        measured    closed form")
    recs = []
    for x, theta in ((0.1, 0.1), (0.3, 0.25), (0.5, 0.4), (-0.2, 0.55)):
        s = SegmentState(x, 1.0, theta)
        e = to_ellipse_coords(s)
        inv = invariants(e)
        phi = rotation_number(inv.a, inv.b).phi
        print(f"{x:5.2f}  {theta:5.2f}   {inv.a:.5f}  {inv.b:.5f}  "
              f"{measured_rotation(e, 5000):.9f} {phi:.9f}")
        recs.append(orbit(seg, s.to_phase_point(), 400))

    s7 = build_periodic_orbit(1.0, 10 * math.pi / 7)
    rec7 = orbit(seg, s7.to_phase_point(), 7)
    s = s7
    for _ in range(7):
        s = step_segment(s)
    print(f"period 7 at h = 1: closure {math.hypot(s.x - s7.x, s.theta - s7.theta):.2e}")
    recs.append(rec7)
    (outdir / "segment_orbits.svg").write_text(
        render_svg(seg, recs, SvgStyle(dot_radius=1.5, title="segment orbits")), encoding="utf-8")

    clouds = []
    for phase in (0.0, -math.pi / 4):
        pts = []
        for h in np.linspace(0.05, 0.95, 19):
            ext = period_four_extremes(h, phase)
            pts += [(x, h, 0.0) for x, _ in ext]
        z = np.array(pts)
        clouds.append(OrbitRecord(z, np.zeros((len(z), 2)), np.arange(len(z))))
    (outdir / "segment_mw.svg").write_text(
        render_svg(seg, clouds, SvgStyle(dot_radius=3.0, title="M and W period-4 loci")),
        encoding="utf-8")
    print(f"wrote {outdir / 'segment_orbits.svg'} and {outdir / 'segment_mw.svg'}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demos/out"))
