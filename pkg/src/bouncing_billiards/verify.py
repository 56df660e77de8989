"""The verification battery: every checkable claim with its tolerance.

Each check returns a :class:`Claim` holding pass/fail and the measured
values.  ``verify_suite("full")`` runs the stated iteration counts,
``verify_suite("quick")`` a reduced budget meant to finish in seconds.
Random draws come from fixed seeds, so reports are reproducible.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .analysis import (ArcSpec, OrbitTerminated, bounce_jacobian_closed_form, detect_periodic,
                       find_fixed_points, finite_diff_jacobian, fixed_point_residual,
                       lemma_quadrature, lyapunov_exponent)
from .corpus import figure_scenarios, square_chaotic_seeds, square_periodic_seeds
from .dynamics import PhasePoint, SegmentState, _advance, orbit, segment_map, step_segment
from .errors import BilliardError
from .geometry import Disc, Ellipse, Segment, Shape, square, wrap_angle
from .scenario import sweep_from_dict
from .segment_theory import (b_from_a, build_periodic_orbit, invariant_values, rho_closed_form,
                             rho_numeric, rotation_number)
from .sweep import run_sweep

TWO_PI = 2.0 * math.pi

BUDGETS = {
    "full": dict(inv_orbits=100, inv_steps=100_000, rot_ellipses=50, rot_steps=10_000,
                 oracle_states=10_000, det_points=100, disc_orbits=20, disc_steps=10_000,
                 fp_radii=(1.5, 2.0, 3.0), inequality_arcs=20, square_seeds=None,
                 lyap_orbits=8, lyap_steps=10_000, chaos_steps=100_000, figure_steps=1_000_000),
    "quick": dict(inv_orbits=20, inv_steps=10_000, rot_ellipses=10, rot_steps=2_000,
                  oracle_states=1_000, det_points=10, disc_orbits=5, disc_steps=2_000,
                  fp_radii=(2.0,), inequality_arcs=5, square_seeds=6,
                  lyap_orbits=1, lyap_steps=10_000, chaos_steps=10_000, figure_steps=10_000),
}


@dataclass
class Claim:
    key: str
    title: str
    passed: bool
    measured: Dict[str, object] = field(default_factory=dict)
    seconds: float = 0.0

    def __post_init__(self):
        self.passed = bool(self.passed)

    def line(self) -> str:
        vals = ", ".join(f"{k}={_short(v)}" for k, v in self.measured.items())
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.key} {self.title} ({self.seconds:.2f} s) {vals}"


def _short(v):
    if isinstance(v, float):
        return f"{v:.4g}"
    if isinstance(v, (list, tuple)) and len(v) > 6:
        return f"[{len(v)} items]"
    return str(v)


@dataclass
class VerifyReport:
    level: str
    claims: List[Claim]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    @property
    def failures(self) -> List[Claim]:
        return [c for c in self.claims if not c.passed]

    def to_text(self) -> str:
        lines = [c.line() for c in self.claims]
        lines.append(f"{sum(c.passed for c in self.claims)}/{len(self.claims)} claims passed")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        def clean(v):
            if isinstance(v, np.generic):
                v = v.item()
            if isinstance(v, float) and not math.isfinite(v):
                return None
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            return v
        body = {"level": self.level, "passed": self.passed,
                "claims": [{"key": c.key, "title": c.title, "passed": c.passed,
                            "seconds": c.seconds, "measured": clean(c.measured)}
                           for c in self.claims]}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# random draws

def random_segment_states(rng, n, h_range=(0.2, 2.0), x_range=(-1.0, 1.0), w_max=0.95):
    """(x, h, theta) arrays whose rays hit the segment at |w| <= w_max."""
    h = rng.uniform(*h_range, n)
    x = rng.uniform(*x_range, n)
    w = rng.uniform(-w_max, w_max, n)
    return x, h, np.arctan((w - x) / h)


def random_visibility_points(shape: Shape, rng, n, r_range=(1.3, 3.0)):
    """Phase points outside ``shape`` aimed strictly inside the visual cone."""
    out = []
    c = shape.centroid
    scale = 0.5 * shape.diameter
    while len(out) < n:
        r = rng.uniform(*r_range) * scale
        t = rng.uniform(0.0, TWO_PI)
        x, y = c[0] + r * math.cos(t), c[1] + r * math.sin(t)
        if shape.contains(x, y):
            continue
        try:
            h, k, _ = shape._cone(x, y)
        except BilliardError:
            continue
        width = wrap_angle(k - h) % TWO_PI
        a = wrap_angle(h + rng.uniform(0.05, 0.95) * width)
        out.append(PhasePoint(x, y, a))
    return out


# ---------------------------------------------------------------------------
# claims

def check_invariants(n_orbits, n_steps, seed=1):
    """Drift of a^2 and membership in the invariant ellipse along segment orbits."""
    rng = np.random.default_rng(seed)
    x, h, th = random_segment_states(rng, n_orbits)
    d = h * np.tan(th)
    a0, b0 = invariant_values(x + d, h, d)
    drift = 0.0
    member = 0.0
    for _ in range(n_steps):
        x, th = segment_map(x, h, th)
        d = h * np.tan(th)
        w = x + d
        a_sq, _ = invariant_values(w, h, d)
        drift = max(drift, float(np.max(np.abs(a_sq / a0 - 1.0))))
        member = max(member, float(np.max(np.abs(w * w / a0 + d * d / b0 - 1.0))))
    return [
        Claim("1", "invariant a^2 conserved", drift < 1e-9,
              {"orbits": n_orbits, "steps": n_steps, "max_rel_drift": drift}),
        Claim("2", "orbits stay on the invariant ellipse", member < 1e-9,
              {"orbits": n_orbits, "steps": n_steps, "max_membership_error": member}),
    ]


def check_rotation(n_ellipses, n_steps, phi_fn: Optional[Callable] = None, seed=2):
    """Measured mean rotation against the closed form, and rigidity of the steps."""
    phi_fn = phi_fn or (lambda a, b: rotation_number(a, b).phi)
    rng = np.random.default_rng(seed)
    h = rng.uniform(0.2, 2.0, n_ellipses)
    a = rng.uniform(0.05, 0.95, n_ellipses)
    b = b_from_a(a, h)
    # start at the vertex (w, d) = (a, 0): x = a, theta = 0
    x, th = a.copy(), np.zeros(n_ellipses)
    phase = np.zeros(n_ellipses)
    incs = np.empty((n_steps, n_ellipses))
    for i in range(n_steps):
        x, th = segment_map(x, h, th)
        d = h * np.tan(th)
        new = np.arctan2(d / b, (x + d) / a)
        incs[i] = np.mod(new - phase, TWO_PI)
        phase = new
    ref = incs[0]
    unwrapped = ref + np.remainder(incs - ref + math.pi, TWO_PI) - math.pi
    measured = unwrapped.mean(axis=0)
    predicted = np.array([phi_fn(ai, bi) for ai, bi in zip(a, b)])
    err = float(np.max(np.abs(measured - predicted)))
    spread = float(np.max(unwrapped.max(axis=0) - unwrapped.min(axis=0)))
    return Claim("3", "rotation number formula", err < 1e-4 and spread < 1e-9,
                 {"ellipses": n_ellipses, "steps": n_steps, "max_phi_error": err,
                  "max_increment_spread": spread})


def check_derivative(phi_fn: Optional[Callable] = None):
    phi_fn = phi_fn or (lambda a, b: rotation_number(a, b).phi)
    worst = 0.0
    for a in np.linspace(0.05, 3.0, 40):
        for b in np.linspace(0.07, 3.0, 25):
            delta = 1e-6 * max(1.0, a)
            fd = (phi_fn(a + delta, b) - phi_fn(a - delta, b)) / (2.0 * delta)
            worst = max(worst, abs(fd - 2.0 * b / (b * b + a * a)))
    return Claim("4", "d phi / d a at fixed b", worst < 1e-6, {"grid": 1000, "max_error": worst})


def check_thresholds():
    ok = {
        "3pi/2 at h=0.99": build_periodic_orbit(0.99, 1.5 * math.pi) is not None,
        "3pi/2 at h=1.01": build_periodic_orbit(1.01, 1.5 * math.pi) is None,
        "4pi/3 at h=1.7": build_periodic_orbit(1.7, 4.0 * math.pi / 3.0) is not None,
        "4pi/3 at h=1.75": build_periodic_orbit(1.75, 4.0 * math.pi / 3.0) is None,
    }
    gap = max(abs(rho_closed_form(h) - rho_numeric(h)) for h in np.linspace(0.1, 5.0, 20))
    measured = {k: ("ok" if v else "wrong") for k, v in ok.items()}
    measured["max_rho_gap"] = gap
    return Claim("5", "period thresholds", all(ok.values()) and gap < 1e-9, measured)


def check_mw_loci():
    cfg = sweep_from_dict({"task": "period4",
                           "grid": {"h": [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]}})
    rows = run_sweep(cfg).rows
    m_rows = [r for r in rows if r["phase"] == 0.0]
    w_rows = [r for r in rows if r["phase"] != 0.0]
    m_err = max(r["circle_residual"] for r in m_rows)
    w_err = max(r["ellipse_residual"] for r in w_rows)
    sym = max(abs(r["x_left"] + r["x_right"]) for r in rows)
    return Claim("6", "M/W period-4 loci", m_err < 1e-8 and w_err < 1e-8 and sym < 1e-8,
                 {"heights": len(m_rows), "circle_error": m_err, "ellipse_error": w_err,
                  "asymmetry": sym})


def check_period_seven():
    s0 = build_periodic_orbit(1.0, 10.0 * math.pi / 7.0)
    if s0 is None:
        return Claim("7", "period-7 orbit at h=1", False, {"built": False})
    s = s0
    early = math.inf
    for k in range(1, 8):
        s = step_segment(s)
        dist = math.hypot(s.x - s0.x, wrap_angle(s.theta - s0.theta))
        if k < 7:
            early = min(early, dist)
    return Claim("7", "period-7 orbit at h=1", dist < 1e-8 and early > 1e-6,
                 {"closure_error": dist, "min_early_return": early})


def check_oracle(n_states, seed=8):
    rng = np.random.default_rng(seed)
    x, h, th = random_segment_states(rng, n_states, h_range=(0.1, 3.0), x_range=(-3.0, 3.0),
                                     w_max=0.99)
    seg = Segment()
    worst = 0.0
    for xi, hi, ti in zip(x, h, th):
        s = SegmentState(float(xi), float(hi), float(ti))
        pp = s.to_phase_point()
        qx, qy, qa, _, _ = _advance(seg, pp.x, pp.y, pp.angle)
        general = SegmentState.from_phase_point(PhasePoint(qx, qy, qa))
        closed = step_segment(s)
        worst = max(worst, abs(general.x - closed.x), abs(wrap_angle(general.theta - closed.theta)))
    return Claim("8", "general map equals closed form on the segment", worst < 1e-10,
                 {"states": n_states, "max_difference": worst})


def check_measure(n_points, seed=9):
    rng = np.random.default_rng(seed)
    worst = {}
    for name, shape in (("disc", Disc()), ("ellipse", Ellipse(1.0, 0.4))):
        errs = [abs(float(np.linalg.det(finite_diff_jacobian(shape, pp))) - 1.0)
                for pp in random_visibility_points(shape, rng, n_points)]
        worst[f"{name}_max_det_error"] = max(errs)
    cf = max(abs(float(np.linalg.det(bounce_jacobian_closed_form(
        rng.uniform(0.0, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(0.2, 2.0)))) + 1.0)
        for _ in range(100))
    worst["closed_form_det_error"] = cf
    ok = worst["disc_max_det_error"] < 1e-5 and worst["ellipse_max_det_error"] < 1e-5 and cf < 1e-12
    return Claim("9", "measure preservation", ok, dict(points=n_points, **worst))


def check_disc_rigidity(n_orbits, n_steps, seed=10):
    rng = np.random.default_rng(seed)
    disc = Disc()
    worst = 0.0
    stopped = 0
    for pp in random_visibility_points(disc, rng, n_orbits):
        rec = orbit(disc, pp, n_steps)
        stopped += rec.termination != "completed"
        r = np.hypot(rec.points[:, 0], rec.points[:, 1])
        worst = max(worst, float(np.max(np.abs(r / r[0] - 1.0))))
    return Claim("10", "distance to the disc centre conserved", worst < 1e-9 and stopped == 0,
                 {"orbits": n_orbits, "steps": n_steps, "max_rel_drift": worst,
                  "terminated": stopped})


def check_fixed_points(radii):
    shape = Ellipse(1.0, 0.4)
    counts, worst_res, axis_ok = [], 0.0, True
    for R in radii:
        found = find_fixed_points(shape, R)
        counts.append(len(found))
        for p in found:
            worst_res = max(worst_res, fixed_point_residual(shape, p))
        for ax, ay in ((R, 0.0), (-R, 0.0), (0.0, R), (0.0, -R)):
            if not any(math.hypot(p.x - ax, p.y - ay) < 1e-6 for p in found):
                axis_ok = False
    ok = min(counts) >= 4 and worst_res < 1e-8 and axis_ok
    return Claim("11", "fixed-point families on the ellipse", ok,
                 {"radii": list(radii), "counts": counts, "max_residual": worst_res,
                  "axis_points_found": axis_ok})


def check_curvature_inequality(n_arcs, seed=12):
    rng = np.random.default_rng(seed)
    margins = []
    for _ in range(n_arcs):
        A = rng.uniform(1.0, 2.0)
        B = rng.uniform(0.3, 0.9) * A
        s0 = rng.uniform(0.6, 0.5 * math.pi)
        s2 = rng.uniform(0.0, s0 - 0.3)
        res = lemma_quadrature(ArcSpec(Ellipse(A, B), s0, s2))
        margins.append(res.rhs - res.lhs)
    circ = 0.0
    for _ in range(n_arcs):
        disc = Disc((rng.uniform(-1, 1), rng.uniform(-1, 1)), rng.uniform(0.3, 3.0))
        s0 = rng.uniform(0.0, TWO_PI)
        res = lemma_quadrature(ArcSpec(disc, s0, s0 + rng.uniform(0.2, 3.0)))
        circ = max(circ, abs(res.lhs - res.rhs))
    ok = min(margins) > 0.0 and circ < 1e-8
    return Claim("12", "curvature inequality by quadrature", ok,
                 {"arcs": n_arcs, "min_rhs_minus_lhs": min(margins), "circular_max_gap": circ})


def check_square_eigenvalues(n_seeds=None):
    sq = square()
    seeds = square_periodic_seeds()
    if n_seeds is not None:
        seeds = seeds[:: max(1, len(seeds) // n_seeds)][:n_seeds]
    detected, bad = 0, []
    hyperbolic = 0
    worst_one = worst_det = worst_pair = 0.0
    for s in seeds:
        rep = detect_periodic(sq, (s["x"], s["y"], s["angle"]), 16, 1e-6)
        if rep is None:
            continue
        detected += 1
        ev = rep.eigenvalues
        mags = np.abs(ev)
        one = float(np.min(np.abs(ev - 1.0)))
        det = abs(abs(rep.determinant) - 1.0)
        pair = abs(float(mags.max() * mags.min()) - 1.0) if rep.is_hyperbolic else 0.0
        hyperbolic += rep.is_hyperbolic
        worst_one, worst_det, worst_pair = max(worst_one, one), max(worst_det, det), max(worst_pair, pair)
        if one > 1e-4 or det > 1e-3 or pair > 1e-3:
            bad.append({"period": rep.period, "seed": [s["x"], s["y"], s["angle"]],
                        "eigenvalues": [[float(z.real), float(z.imag)] for z in ev]})
    ok = detected > 0 and not bad
    return Claim("13", "square periodic orbits: unit eigenvalue and volume", ok,
                 {"seeds": len(seeds), "detected": detected, "hyperbolic": hyperbolic,
                  "max_dist_to_1": worst_one, "max_det_error": worst_det,
                  "max_pair_error": worst_pair, "violations": bad})


def _lyap(shape, pp, n):
    try:
        return lyapunov_exponent(shape, pp, n)
    except OrbitTerminated as exc:
        return exc.partial


def check_lyapunov(n_orbits, n_steps, chaos_steps, seed=14):
    rng = np.random.default_rng(seed)
    x, h, th = random_segment_states(rng, n_orbits, h_range=(0.3, 2.0), w_max=0.9)
    seg = [_lyap(Segment(), SegmentState(float(a), float(b), float(c)).to_phase_point(), n_steps)
           for a, b, c in zip(x, h, th)]
    disc = [_lyap(Disc(), pp, n_steps) for pp in random_visibility_points(Disc(), rng, n_orbits)]
    chaos = max(_lyap(square(), pp, chaos_steps) for pp in square_chaotic_seeds()[:1])
    seg_max = max(abs(v) for v in seg)
    disc_max = max(abs(v) for v in disc)
    ok = seg_max < 1e-3 and disc_max < 1e-3 and chaos > 0.01
    return Claim("14", "Lyapunov: integrable vs chaotic", ok,
                 {"orbits": n_orbits, "steps": n_steps, "segment_max_abs": seg_max,
                  "disc_max_abs": disc_max, "square_chaotic": chaos, "chaos_steps": chaos_steps})


def check_boundedness(n_steps):
    radii = {}
    completed = True
    for sc in figure_scenarios():
        shape = sc.build_shape()
        worst = 0.0
        for pp in sc.phase_points():
            rec = orbit(shape, pp, n_steps, record_every=max(1, n_steps // 1000))
            completed &= rec.termination == "completed"
            worst = max(worst, rec.summary["max_radius"])
        radii[sc.id] = worst
    ok = completed and max(radii.values()) < 10.0
    return Claim("15", "figure orbits stay bounded", ok,
                 dict(steps=n_steps, all_completed=completed, **{f"max_r_{k}": v for k, v in radii.items()}))


# ---------------------------------------------------------------------------

def verify_suite(level: str = "quick", phi_fn: Optional[Callable] = None,
                 only=None) -> VerifyReport:
    """Run the battery at ``level`` ("quick" or "full").

    ``phi_fn(a, b)`` replaces the closed-form rotation number in the
    rotation checks; it exists so a deliberately wrong formula can be
    shown to fail.  ``only`` restricts the run to the listed claim keys.
    """
    if level not in BUDGETS:
        raise ValueError(f"level must be one of {sorted(BUDGETS)}")
    B = BUDGETS[level]
    jobs = [
        (("1", "2"), lambda: check_invariants(B["inv_orbits"], B["inv_steps"])),
        (("3",), lambda: check_rotation(B["rot_ellipses"], B["rot_steps"], phi_fn)),
        (("4",), lambda: check_derivative(phi_fn)),
        (("5",), check_thresholds),
        (("6",), check_mw_loci),
        (("7",), check_period_seven),
        (("8",), lambda: check_oracle(B["oracle_states"])),
        (("9",), lambda: check_measure(B["det_points"])),
        (("10",), lambda: check_disc_rigidity(B["disc_orbits"], B["disc_steps"])),
        (("11",), lambda: check_fixed_points(B["fp_radii"])),
        (("12",), lambda: check_curvature_inequality(B["inequality_arcs"])),
        (("13",), lambda: check_square_eigenvalues(B["square_seeds"])),
        (("14",), lambda: check_lyapunov(B["lyap_orbits"], B["lyap_steps"], B["chaos_steps"])),
        (("15",), lambda: check_boundedness(B["figure_steps"])),
    ]
    claims = []
    for keys, fn in jobs:
        if only is not None and not set(keys) & set(only):
            continue
        t0 = time.perf_counter()
        try:
            out = fn()
        except Exception as exc:  # a crashing check is a failed claim, not a crashed suite
            out = [Claim(k, "check raised", False, {"error": f"{type(exc).__name__}: {exc}"})
                   for k in keys]
        out = out if isinstance(out, list) else [out]
        dt = time.perf_counter() - t0
        for c in out:
            c.seconds = dt
            claims.append(c)
    return VerifyReport(level, claims)
