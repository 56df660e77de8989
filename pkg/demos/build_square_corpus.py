"""Rebuild the square seed corpus shipped in ``bouncing_billiards/data``.

Random launches are polished into periodic points by Gauss-Newton.  An orbit is
kept only when its finite-difference monodromy is trustworthy: every iterate
stays clear of the lines where the visual cone changes its supporting vertex
(edge lines and diagonals of the square), no bounce lands near a corner, and
the monodromy agrees between two stencil widths.  A few chaotic launches with
a clearly positive Lyapunov estimate are added for the chaos check.

Run:  python3 demos/build_square_corpus.py
"""
import json
import math
import random
from pathlib import Path

import numpy as np

from bouncing_billiards.analysis import (detect_periodic, lyapunov_exponent,
                                         monodromy, polish_periodic_point)
from bouncing_billiards.dynamics import apply_map
from bouncing_billiards.geometry import square, wrap_angle

OUT = Path(__file__).resolve().parents[1] / "src" / "bouncing_billiards" / "data" / "square_seeds.json"
SQ = square()
CLEARANCE = 1e-3


def clear_of_kinks(pts):
    for x, y, a in pts:
        if min(abs(abs(x) - 1.0), abs(abs(y) - 1.0), abs(x - y), abs(x + y)) < CLEARANCE:
            return False
        w = SQ._hit(x, y, a)
        if w is None or min(math.hypot(w[0] - cx, w[1] - cy)
                            for cx in (-1, 1) for cy in (-1, 1)) < CLEARANCE:
            return False
    return True


def random_launch(rng):
    while True:
        r = rng.uniform(1.2, 3.5)
        t = rng.uniform(0.0, 2.0 * math.pi)
        x, y = r * math.cos(t), r * math.sin(t)
        if not SQ.contains(x, y):
            break
    h, k, _ = SQ._cone(x, y)
    return x, y, wrap_angle(h + rng.uniform(0.05, 0.95) * wrap_angle(k - h))


def periodic_seeds(rng, trials):
    kept, keys = [], set()
    for _ in range(trials):
        z = random_launch(rng)
        q = rng.choice([1, 2, 3, 4, 5, 6, 8, 12])
        try:
            zs, res = polish_periodic_point(SQ, z, q, max_rounds=30)
        except Exception:
            continue
        if res > 1e-11:
            continue
        rep = detect_periodic(SQ, zs, 16, 1e-8, polish=False)
        if rep is None or not clear_of_kinks(rep.points):
            continue
        try:
            m2 = monodromy(SQ, zs, rep.period, eps=1e-7)
        except Exception:
            continue
        if np.max(np.abs(m2 - rep.monodromy)) > 1e-4 * max(1.0, np.max(np.abs(m2))):
            continue
        if abs(rep.determinant - 1.0) > 1e-4:
            continue
        ev = rep.eigenvalues
        mags = np.sort(np.abs(ev))
        kind = "hyperbolic" if rep.is_hyperbolic else "elliptic"
        # one representative per (period, kind, spectrum)
        key = (rep.period, kind, round(float(mags[-1]), 3))
        if key in keys:
            continue
        keys.add(key)
        kept.append({"x": zs[0], "y": zs[1], "angle": zs[2], "period": rep.period,
                     "kind": kind, "max_abs_eigenvalue": float(mags[-1])})
        print(rep.period, kind, np.round(ev, 5), flush=True)
    return kept


def chaotic_seeds(rng, wanted, n=3000):
    kept = []
    while len(kept) < wanted:
        z = random_launch(rng)
        try:
            lam = lyapunov_exponent(SQ, z, n)
        except Exception:
            continue
        if lam > 0.2:
            kept.append({"x": z[0], "y": z[1], "angle": z[2], "lyapunov_3000": lam})
            print("chaotic", z, round(lam, 3), flush=True)
    return kept


def main():
    rng = random.Random(20240917)
    periodic = periodic_seeds(rng, 600)
    periodic.sort(key=lambda s: (s["period"], s["kind"], s["max_abs_eigenvalue"]))
    chaotic = chaotic_seeds(rng, 4)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"shape": SQ.to_dict(), "periodic": periodic,
                               "chaotic": chaotic}, indent=1) + "\n")
    print(f"{len(periodic)} periodic and {len(chaotic)} chaotic seeds -> {OUT}")


if __name__ == "__main__":
    main()
