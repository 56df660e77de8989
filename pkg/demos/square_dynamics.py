"""The unit square: a chaotic orbit and the spectra of shipped periodic orbits.

Run:  python3 demos/square_dynamics.py [OUTDIR]

Prints each periodic seed with its period, monodromy eigenvalues and the
distance of the nearest eigenvalue to 1, then the Lyapunov estimate of the
first chaotic seed, and writes square_chaos.svg.
"""
import sys
from pathlib import Path

import numpy as np

from bouncing_billiards import detect_periodic, lyapunov_exponent, orbit, render_svg, square
from bouncing_billiards.corpus import square_chaotic_seeds, square_periodic_seeds
from bouncing_billiards.svg import SvgStyle


def main(outdir):
    outdir.mkdir(parents=True, exist_ok=True)
    sq = square()
    print("period  |det|-1      dist to 1   eigenvalues")
    for s in square_periodic_seeds():
        rep = detect_periodic(sq, (s["x"], s["y"], s["angle"]), 16, 1e-6)
        ev = rep.eigenvalues
        flag = "" if np.min(np.abs(ev - 1)) < 1e-4 else "   <- no eigenvalue at 1"
        print(f"{rep.period:6d}  {abs(rep.determinant) - 1:+.2e}  {np.min(np.abs(ev - 1)):.2e}   "
              + " ".join(f"{z.real:+.5f}{z.imag:+.5f}i" for z in ev) + flag)

    pp = square_chaotic_seeds()[0]
    print(f"Lyapunov estimate over 20000 steps: {lyapunov_exponent(sq, pp, 20_000):.4f}")
    rec = orbit(sq, pp, 200_000, record_every=10)
    path = outdir / "square_chaos.svg"
    path.write_text(render_svg(sq, [rec], SvgStyle(dot_radius=0.4, title="square")), encoding="utf-8")
    print(f"wrote {path} ({rec.termination})")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demos/out"))
