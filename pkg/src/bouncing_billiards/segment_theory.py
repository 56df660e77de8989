"""Integrable structure of the billiard on the segment [-1, 1].

In the coordinates w = x + h tan(theta) (bounce abscissa) and d = h tan(theta)
every orbit of height h lies on an ellipse w^2/a^2 + d^2/b^2 = 1 with

    a^2 = (h^2 w^2 + d^2) / (h^2 + d^2),   b^2 = (h^2 w^2 + d^2) / (1 - w^2),

and the map restricted to the ellipse, read through r(t) = (a cos t, b sin t),
is the rigid rotation t -> t + phi(a, b).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .dynamics import SegmentState, segment_map
from .errors import DegenerateOrbit

TWO_PI = 2.0 * math.pi
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EllipseCoords:
    w: float
    h: float
    d: float

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError("h must be positive")
        if abs(self.w) > 1.0 + 1e-12:
            raise ValueError("w must lie in [-1, 1]")


class Invariants(NamedTuple):
    a_sq: float
    b_sq: float

    @property
    def a(self) -> float:
        return math.sqrt(self.a_sq)

    @property
    def b(self) -> float:
        return math.sqrt(self.b_sq)


class RotationData(NamedTuple):
    phi: float
    phi_prime: float


def to_ellipse_coords(s: SegmentState) -> EllipseCoords:
    d = s.h * math.tan(s.theta)
    return EllipseCoords(s.x + d, s.h, d)


def from_ellipse_coords(e: EllipseCoords) -> SegmentState:
    return SegmentState(e.w - e.d, e.h, math.atan(e.d / e.h))


def ellipse_map(w, h, d):
    """Rational form of the segment map in (w, d); works on floats and arrays."""
    den = w * w - d * d - h * h - 1.0
    dn = (d ** 3 + 2.0 * h * h * w + 2.0 * d * d * w + d * w * w + h * h * d - d) / den
    wn = (w ** 3 + d * d * w + h * h * w + 2.0 * d * w * w - w - 2.0 * d) / den
    return wn, dn


def step_ellipse(e: EllipseCoords) -> EllipseCoords:
    wn, dn = ellipse_map(e.w, e.h, e.d)
    return EllipseCoords(wn, e.h, dn)


def invariant_values(w, h, d):
    """(a^2, b^2) on floats or arrays, with no degeneracy check."""
    num = h * h * w * w + d * d
    return num / (h * h + d * d), num / (1.0 - w * w)


def invariants(e: EllipseCoords) -> Invariants:
    """The conserved pair (a^2, b^2) of the orbit through ``e``.

    Raises DegenerateOrbit on the fixed-point family w = d = 0, where both
    vanish and the ellipse collapses to a point.
    """
    if e.w == 0.0 and e.d == 0.0:
        raise DegenerateOrbit("w = d = 0 is a fixed point; both invariants vanish")
    a_sq, b_sq = invariant_values(e.w, e.h, e.d)
    return Invariants(a_sq, b_sq)


def ellipse_membership(e: EllipseCoords, inv: Invariants) -> float:
    return e.w * e.w / inv.a_sq + e.d * e.d / inv.b_sq


def b_from_a(a, h):
    """Semi-axis b of the invariant ellipse with semi-axis a at height h."""
    return h * a / np.sqrt(1.0 - a * a)


def rotation_number(a: float, b: float) -> RotationData:
    """Rotation angle of the map on the invariant ellipse with semi-axes a, b.

    The a > b branch of the arctangent is negative and is shifted by 2 pi,
    so every value lies in (pi, 2 pi).
    """
    if not (a > 0.0 and b > 0.0):
        raise ValueError("semi-axes must be positive")
    if a == b:
        phi = 1.5 * math.pi
    elif a < b:
        phi = math.atan(2.0 * a * b / (b * b - a * a)) + math.pi
    else:
        phi = math.atan(2.0 * a * b / (b * b - a * a)) + TWO_PI
    return RotationData(phi, 2.0 * b / (b * b + a * a))


def _phi_at_height(a, h):
    return rotation_number(a, b_from_a(a, h)).phi


def rho_closed_form(h: float) -> float:
    return TWO_PI - 2.0 * math.atan(h)


def rho_numeric(h: float, tol: float = 1e-13) -> float:
    """Supremum of phi over a in (0, 1) at height h, by golden-section search."""
    lo, hi = 1e-9, 1.0 - 1e-9
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = _phi_at_height(x1, h), _phi_at_height(x2, h)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = _phi_at_height(x1, h)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = _phi_at_height(x2, h)
    # phi is monotone in a, so the supremum sits at an end of (0, 1)
    best = max(f1, f2, _phi_at_height(lo, h), _phi_at_height(hi, h))
    return best


def rotation_range(h: float) -> tuple:
    """Interval (pi, rho(h)) of rotation numbers available at height h."""
    if not h > 0.0:
        raise ValueError("h must be positive")
    return math.pi, rho_closed_form(h)


def solve_invariant_a(h: float, target_phi: float, tol: float = 1e-12,
                      max_iter: int = 200) -> Optional[float]:
    """Semi-axis a in (0, 1) with phi(a, b(a, h)) = target_phi, or None.

    phi decreases strictly in a along a fixed height, which makes bisection safe.
    """
    if not math.pi < target_phi < rho_closed_form(h):
        return None
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= 0.0 or mid >= 1.0:
            break
        if _phi_at_height(mid, h) > target_phi:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    a = 0.5 * (lo + hi)
    return a if 0.0 < a < 1.0 else None


def build_periodic_orbit(h: float, target_phi: float) -> Optional[SegmentState]:
    """Segment state at height h rotating by ``target_phi`` per step.

    The state sits at the ellipse vertex (w, d) = (a, 0).  Returns None when
    ``target_phi`` is outside (pi, rho(h)).
    """
    a = solve_invariant_a(h, target_phi)
    if a is None:
        return None
    return from_ellipse_coords(EllipseCoords(a, h, 0.0))


def ellipse_phase(w, d, a, b):
    """Angle t with (w, d) = (a cos t, b sin t)."""
    return np.arctan2(d / b, w / a)


def rotation_increments(e: EllipseCoords, n: int) -> np.ndarray:
    """Successive phase increments, in [0, 2 pi), along n steps of the orbit."""
    inv = invariants(e)
    a, b = inv.a, inv.b
    w, d, h = e.w, e.d, e.h
    phases = np.empty(n + 1)
    phases[0] = math.atan2(d / b, w / a)
    for i in range(1, n + 1):
        w, d = ellipse_map(w, h, d)
        phases[i] = math.atan2(d / b, w / a)
    return np.mod(np.diff(phases), TWO_PI)


def measured_rotation(e: EllipseCoords, n: int) -> float:
    """Mean phase advance per step over n steps.

    Raises DegenerateOrbit at fixed points, where no phase exists.
    """
    return float(np.mean(rotation_increments(e, n)))


def period_four_extremes(h: float, phase: float) -> np.ndarray:
    """Positions (x, h) of the four iterates of the a = b orbit started at ``phase``."""
    a = math.sqrt(1.0 - h * h)
    w, d = a * math.cos(phase), a * math.sin(phase)
    s = from_ellipse_coords(EllipseCoords(w, h, d))
    pts = np.empty((4, 2))
    x, t = s.x, s.theta
    for i in range(4):
        pts[i] = (x, h)
        x, t = segment_map(x, h, t)
    return pts
