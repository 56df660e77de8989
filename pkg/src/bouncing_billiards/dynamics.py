"""The bouncing outer billiard map and its closed form on the segment.

One step of the map takes a phase point (p, v), with v the direction of a ray
that meets the shape, and

1. reflects the ray specularly at the first boundary point w,
2. moves p to the point p' on the reflected ray with |p' - w| = |p - w|,
3. reflects the direction u from p' back to w across the bisector of the
   cone of directions from p' to the shape.

On the segment [-1, 1] x {0} the map has the closed form

    x' = x + 2 h tan(theta)
    theta' = theta + arctan((1 - x') / h) + arctan((-1 - x') / h)

in coordinates (x, h, theta) with theta = arg(v) + pi/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import BounceOffSegment, DegenerateBounce, InsideShape, LeftVisibility
from .geometry import (BounceData, Segment, Shape, Vec2, VisualCone, unit_vector,
                       ray_intersect, wrap_angle)

HALF_PI = 0.5 * math.pi


class PhasePoint(NamedTuple):
    """A point of the visibility domain: position (x, y) and direction angle."""

    x: float
    y: float
    angle: float

    @property
    def p(self) -> Vec2:
        return Vec2(self.x, self.y)


@dataclass(frozen=True)
class SegmentState:
    """Segment coordinates: abscissa x, height h > 0, theta = arg(v) + pi/2."""

    x: float
    h: float
    theta: float

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError("segment states live in the upper half plane (h > 0)")
        if not -HALF_PI < self.theta < HALF_PI:
            raise ValueError("theta must lie in (-pi/2, pi/2)")

    @property
    def bounce(self) -> float:
        """Abscissa of the point where the ray meets the x-axis."""
        return self.x + self.h * math.tan(self.theta)

    def to_phase_point(self) -> PhasePoint:
        return PhasePoint(self.x, self.h, wrap_angle(self.theta - HALF_PI))

    @classmethod
    def from_phase_point(cls, pp: PhasePoint) -> "SegmentState":
        return cls(pp.x, pp.y, wrap_angle(pp.angle + HALF_PI))


@dataclass(frozen=True)
class StepTrace:
    input: PhasePoint
    bounce: BounceData
    reflected_dir: float
    p_prime: Vec2
    u: float
    cone: VisualCone
    output: PhasePoint


def _advance(shape: Shape, px: float, py: float, angle: float):
    """One application of the map on raw floats.

    Returns (px', py', angle', wx, wy).  This is the hot loop of every orbit,
    so it avoids building intermediate objects.
    """
    hit = shape._hit(px, py, angle)
    if hit is None:
        raise LeftVisibility(f"ray from ({px}, {py}) at angle {angle} misses the shape")
    return _advance_from_hit(shape, px, py, angle, hit)


def _advance_from_hit(shape, px, py, angle, hit):
    wx, wy, tau, _, _ = hit
    refl = 2.0 * tau - angle
    dist = math.hypot(px - wx, py - wy)
    ux, uy = unit_vector(refl)
    qx = wx + dist * ux
    qy = wy + dist * uy
    try:
        _, _, bis = shape._cone(qx, qy)
    except InsideShape as exc:
        raise LeftVisibility(str(exc)) from exc
    u = refl + math.pi
    return qx, qy, wrap_angle(2.0 * bis - u), wx, wy


def in_visibility_domain(shape: Shape, pp) -> bool:
    x, y, angle = (float(c) for c in pp)
    if shape.contains(x, y):
        return False
    try:
        return shape._hit(x, y, angle) is not None
    except DegenerateBounce:
        return False


def step(shape: Shape, pp) -> StepTrace:
    """Apply the map once, keeping every intermediate quantity.

    Raises
    ------
    LeftVisibility
        If the ray misses the shape or the new point cannot see it.
    DegenerateBounce
        If the ray hits a corner.
    """
    pp = PhasePoint(*(float(c) for c in pp))
    bounce = ray_intersect(shape, pp.p, pp.angle)
    if bounce is None:
        raise LeftVisibility(f"{pp} is not in the visibility domain")
    w = bounce.point
    refl = wrap_angle(2.0 * bounce.tangent_dir - pp.angle)
    dist = math.hypot(pp.x - w.x, pp.y - w.y)
    ux, uy = unit_vector(refl)
    q = Vec2(w.x + dist * ux, w.y + dist * uy)
    try:
        cone = VisualCone(*shape._cone(q.x, q.y))
    except InsideShape as exc:
        raise LeftVisibility(str(exc)) from exc
    u = wrap_angle(refl + math.pi)
    out = PhasePoint(q.x, q.y, wrap_angle(2.0 * cone.bisector - u))
    return StepTrace(pp, bounce, refl, q, u, cone, out)


def apply_map(shape: Shape, pp) -> PhasePoint:
    """F(pp) as a PhasePoint."""
    x, y, angle, _, _ = _advance(shape, float(pp[0]), float(pp[1]), float(pp[2]))
    return PhasePoint(x, y, angle)


def iterate_map(shape: Shape, pp, n: int) -> PhasePoint:
    x, y, a = (float(c) for c in pp)
    for _ in range(n):
        x, y, a, _, _ = _advance(shape, x, y, a)
    return PhasePoint(x, y, a)


def segment_map(x, h, theta):
    """Closed-form segment map on floats or numpy arrays; returns (x', theta')."""
    xn = x + 2.0 * h * np.tan(theta)
    tn = theta + np.arctan((1.0 - xn) / h) + np.arctan((-1.0 - xn) / h)
    return xn, tn


def step_segment(s: SegmentState) -> SegmentState:
    """One step of the closed-form segment map.

    Raises BounceOffSegment if the ray of ``s`` misses [-1, 1].
    """
    t = math.tan(s.theta)
    if abs(s.x + s.h * t) > 1.0 + 1e-12:
        raise BounceOffSegment(f"bounce abscissa {s.x + s.h * t} is off the segment")
    xn = s.x + 2.0 * s.h * t
    tn = s.theta + math.atan((1.0 - xn) / s.h) + math.atan((-1.0 - xn) / s.h)
    return SegmentState(xn, s.h, tn)


@dataclass
class OrbitRecord:
    """Recorded iterates of one orbit.

    ``points`` has rows (x, y, angle); ``bounces`` has the matching bounce
    points (where the ray of that phase point hits the boundary); ``steps``
    holds the iteration index of each row.
    """

    points: np.ndarray
    bounces: np.ndarray
    steps: np.ndarray
    termination: str = "completed"
    terminated_at: Optional[int] = None
    summary: dict = field(default_factory=dict)
    scenario_id: str = ""

    def __len__(self):
        return len(self.points)


def orbit(shape: Shape, pp, n_steps: int, record_every: int = 1,
          nudge: float = 0.0) -> OrbitRecord:
    """Iterate the map ``n_steps`` times, recording every ``record_every``-th point.

    Errors never propagate: the first DegenerateBounce or LeftVisibility stops
    the iteration and is reported in ``termination``.  With ``nudge > 0`` a
    corner hit instead turns the direction by ``nudge`` radians and retries;
    this is not the canonical map, and the number of nudges is reported in
    the summary.
    """
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    x, y, a = (float(c) for c in pp)
    pts, bnc, idx = [], [], []
    x0, y0 = x, y
    max_r = math.hypot(x, y)
    max_dy = 0.0
    termination, stopped = "completed", None
    is_segment = isinstance(shape, Segment)
    a_sq0 = _segment_a_sq(x, y, a) if is_segment else None
    max_da = 0.0
    k = 0
    nudges = 0
    while True:
        try:
            hit = shape._hit(x, y, a)
            if hit is None:
                raise LeftVisibility("ray misses the shape")
        except DegenerateBounce:
            if nudge > 0.0 and nudges < 1000:
                a = wrap_angle(a + nudge)
                nudges += 1
                continue
            termination, stopped = "degenerate_bounce", k
            break
        except LeftVisibility:
            termination, stopped = "left_domain", k
            break
        if k % record_every == 0:
            pts.append((x, y, a))
            bnc.append((hit[0], hit[1]))
            idx.append(k)
        if k == n_steps:
            break
        try:
            x, y, a, _, _ = _advance_from_hit(shape, x, y, a, hit)
        except DegenerateBounce:
            termination, stopped = "degenerate_bounce", k
            break
        except LeftVisibility:
            termination, stopped = "left_domain", k
            break
        k += 1
        r = math.hypot(x, y)
        if r > max_r:
            max_r = r
        dy = abs(y - y0)
        if dy > max_dy:
            max_dy = dy
        if a_sq0 is not None and a_sq0 > 0.0:
            da = abs(_segment_a_sq(x, y, a) / a_sq0 - 1.0)
            if da > max_da:
                max_da = da
    summary = {"steps_done": k, "max_radius": max_r}
    if nudge > 0.0:
        summary["nudges"] = nudges
    if is_segment:
        summary["height_drift"] = max_dy
        summary["invariant_drift"] = max_da if a_sq0 else 0.0
    return OrbitRecord(np.array(pts, dtype=float).reshape(-1, 3),
                       np.array(bnc, dtype=float).reshape(-1, 2),
                       np.array(idx, dtype=int), termination, stopped, summary)


def _segment_a_sq(x, y, angle):
    # a^2 = (h^2 w^2 + d^2) / (h^2 + d^2) with d = h tan(theta); y may be negative
    h = abs(y)
    theta = wrap_angle(angle + HALF_PI) if y > 0 else wrap_angle(HALF_PI - angle)
    if abs(theta) >= HALF_PI:
        return math.nan
    d = h * math.tan(theta)
    xw = x + d
    return (h * h * xw * xw + d * d) / (h * h + d * d)


__all__ = [
    "PhasePoint", "SegmentState", "StepTrace", "OrbitRecord", "in_visibility_domain",
    "step", "apply_map", "iterate_map", "step_segment", "segment_map", "orbit",
]
