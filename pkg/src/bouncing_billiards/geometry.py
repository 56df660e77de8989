"""Convex shapes and the geometric primitives used by the billiard map.

Every shape answers four questions: where does a ray first hit the boundary,
which cone of directions does a point outside the shape see, what is the
boundary like at a given parameter, and does the closed shape contain a point.

Angles are plain floats in radians.  Anything returned as an angle is wrapped
into (-pi, pi] with :func:`wrap_angle`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import DegenerateBounce, InsideShape, OnCorner

TWO_PI = 2.0 * math.pi

TOL_BOUNDARY = 1e-12
TOL_CORNER = 1e-9
TOL_TANGENT = 1e-12


def wrap_angle(angle: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    r = math.remainder(angle, TWO_PI)
    return math.pi if r == -math.pi else r


# |cos| of the double nearest a quarter turn is about 6e-17; anything this small is an axis
AXIS_SNAP = 4e-16


def unit_vector(angle: float):
    """(cos, sin) of ``angle``, exact for the four axis directions.

    Without the snap a ray sent straight down would drift sideways by
    about 1e-16 per step, so fixed points would not reproduce bit for bit.
    """
    c, s = math.cos(angle), math.sin(angle)
    if abs(c) < AXIS_SNAP:
        return 0.0, math.copysign(1.0, s)
    if abs(s) < AXIS_SNAP:
        return math.copysign(1.0, c), 0.0
    return c, s


class Vec2(NamedTuple):
    x: float
    y: float


class BounceData(NamedTuple):
    """Where a ray meets the boundary.

    ``tangent_dir`` is the direction of the boundary tangent at ``point``
    (either orientation; reflection does not care), ``curvature`` is
    non-negative and ``boundary_param`` locates the point for
    :func:`boundary_data`.
    """

    point: Vec2
    tangent_dir: float
    curvature: float
    boundary_param: float


class VisualCone(NamedTuple):
    """Closed cone of directions from an apex to the shape.

    ``ray_h`` is the clockwise edge, ``ray_k`` the counterclockwise edge.
    """

    ray_h: float
    ray_k: float
    bisector: float

    @property
    def width(self) -> float:
        return wrap_angle(self.ray_k - self.ray_h) % TWO_PI


def _cone_from_directions(px, py, targets, ref):
    """Cone spanned by the directions from (px, py) to the ``targets`` points."""
    rem, atan2 = math.remainder, math.atan2
    rels = [rem(atan2(ty - py, tx - px) - ref, TWO_PI) for tx, ty in targets]
    lo = min(rels)
    hi = max(rels)
    return (wrap_angle(ref + lo), wrap_angle(ref + hi),
            wrap_angle(ref + 0.5 * (lo + hi)))


class Shape:
    """Common interface; concrete shapes override the underscore methods."""

    kind = "shape"
    smooth = False

    def contains(self, x: float, y: float) -> bool:
        raise NotImplementedError

    def _hit(self, px, py, angle):
        """Nearest boundary hit as a tuple (wx, wy, tangent, curvature, param) or None."""
        raise NotImplementedError

    def _cone(self, px, py):
        """(ray_h, ray_k, bisector) from an exterior apex; raises InsideShape."""
        raise NotImplementedError

    def boundary_data(self, param: float) -> BounceData:
        raise NotImplementedError

    def outline(self, n: int = 256) -> np.ndarray:
        """Points along the boundary, shape (m, 2), for plotting."""
        raise NotImplementedError

    def sample_boundary(self, n: int) -> np.ndarray:
        return self.outline(n)

    @property
    def centroid(self) -> Vec2:
        return Vec2(0.0, 0.0)

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Segment(Shape):
    """The segment [-1, 1] x {0}.  All segments are similar, so no parameters."""

    kind = "segment"
    half_length: float = field(default=1.0, init=False)

    def contains(self, x, y):
        return abs(y) <= TOL_BOUNDARY and abs(x) <= 1.0

    def _hit(self, px, py, angle):
        if abs(py) <= TOL_BOUNDARY:
            return None
        dx, dy = unit_vector(angle)
        if dy * py >= 0.0:
            return None
        t = -py / dy
        wx = px + t * dx
        if abs(wx) > 1.0:
            if abs(wx) > 1.0 + TOL_BOUNDARY:
                return None
            wx = math.copysign(1.0, wx)
        return (wx, 0.0, 0.0, 0.0, wx)

    def _cone(self, px, py):
        if self.contains(px, py):
            raise InsideShape(f"({px}, {py}) lies on the segment")
        if abs(py) <= TOL_BOUNDARY:
            raise InsideShape(f"({px}, {py}) is on the segment's line and sees it edge-on")
        ref = math.atan2(-py, -px)
        return _cone_from_directions(px, py, ((-1.0, 0.0), (1.0, 0.0)), ref)

    def boundary_data(self, param):
        if not -1.0 <= param <= 1.0:
            raise ValueError("segment parameter must lie in [-1, 1]")
        return BounceData(Vec2(float(param), 0.0), 0.0, 0.0, float(param))

    def outline(self, n=2):
        return np.array([[-1.0, 0.0], [1.0, 0.0]])

    def sample_boundary(self, n):
        xs = np.linspace(-1.0, 1.0, n)
        return np.column_stack([xs, np.zeros_like(xs)])

    @property
    def diameter(self):
        return 2.0

    def to_dict(self):
        return {"type": "segment"}


@dataclass(frozen=True)
class Polygon(Shape):
    """Strictly convex polygon with counterclockwise vertices.

    The boundary parameter runs over [0, n): edge ``i`` is parameter
    ``i + s`` with ``s`` the fraction along the edge from vertex ``i``.
    """

    vertices: tuple
    kind = "polygon"

    def __post_init__(self):
        verts = tuple(Vec2(float(x), float(y)) for x, y in self.vertices)
        if len(verts) < 3:
            raise ValueError("a polygon needs at least three vertices")
        n = len(verts)
        for i in range(n):
            a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x)
            if not cross > 0.0:
                raise ValueError("polygon vertices must be strictly convex and counterclockwise")
        object.__setattr__(self, "vertices", verts)
        edges = []
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            ex, ey = b.x - a.x, b.y - a.y
            edges.append((a.x, a.y, ex, ey, math.hypot(ex, ey), math.atan2(ey, ex)))
        object.__setattr__(self, "_edges", tuple(edges))

    @property
    def centroid(self):
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return Vec2(sum(xs) / len(xs), sum(ys) / len(ys))

    @property
    def diameter(self):
        return max(math.hypot(a.x - b.x, a.y - b.y)
                   for a in self.vertices for b in self.vertices)

    def contains(self, x, y):
        for ax, ay, ex, ey, _, _ in self._edges:
            if ex * (y - ay) - ey * (x - ax) < 0.0:
                return False
        return True

    def _hit(self, px, py, angle):
        dx, dy = unit_vector(angle)
        best = None
        for i, (ax, ay, ex, ey, length, tau) in enumerate(self._edges):
            denom = dx * ey - dy * ex
            # only edges facing the origin can be the first hit
            if denom >= 0.0:
                continue
            qx, qy = ax - px, ay - py
            t = (qx * ey - qy * ex) / denom
            if t <= 0.0:
                continue
            s = (qx * dy - qy * dx) / denom
            if s < -TOL_CORNER / length or s > 1.0 + TOL_CORNER / length:
                continue
            if best is None or t < best[0]:
                best = (t, i, s, length, tau)
        if best is None:
            return None
        t, i, s, length, tau = best
        if s * length < TOL_CORNER or (1.0 - s) * length < TOL_CORNER:
            raise DegenerateBounce(f"ray hits polygon vertex near edge {i}, s={s:.3e}")
        return (px + t * dx, py + t * dy, tau, 0.0, i + s)

    def _cone(self, px, py):
        if self.contains(px, py):
            raise InsideShape(f"({px}, {py}) is inside the polygon")
        c = self.centroid
        ref = math.atan2(c.y - py, c.x - px)
        return _cone_from_directions(px, py, self.vertices, ref)

    def boundary_data(self, param):
        n = len(self.vertices)
        i = int(math.floor(param)) % n
        s = param - math.floor(param)
        ax, ay, ex, ey, length, tau = self._edges[i]
        if s * length < TOL_CORNER or (1.0 - s) * length < TOL_CORNER:
            raise OnCorner(f"parameter {param} is a polygon vertex")
        return BounceData(Vec2(ax + s * ex, ay + s * ey), tau, 0.0, float(param))

    def outline(self, n=0):
        pts = np.array(self.vertices + (self.vertices[0],))
        return pts

    def sample_boundary(self, n):
        m = len(self.vertices)
        s = np.linspace(0.0, m, n, endpoint=False)
        i = np.floor(s).astype(int)
        f = s - i
        v = np.array(self.vertices)
        return v[i] + f[:, None] * (v[(i + 1) % m] - v[i])

    def to_dict(self):
        return {"type": "polygon", "vertices": [[v.x, v.y] for v in self.vertices]}


def square(half_side: float = 1.0) -> Polygon:
    """Axis-aligned square [-s, s]^2, whose sides are congruent to the unit segment."""
    s = float(half_side)
    return Polygon(((-s, -s), (s, -s), (s, s), (-s, s)))


@dataclass(frozen=True)
class Disc(Shape):
    center: Vec2 = Vec2(0.0, 0.0)
    radius: float = 1.0
    kind = "disc"
    smooth = True

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("disc radius must be positive")
        object.__setattr__(self, "center", Vec2(float(self.center[0]), float(self.center[1])))

    @property
    def centroid(self):
        return self.center

    @property
    def diameter(self):
        return 2.0 * self.radius

    def contains(self, x, y):
        return math.hypot(x - self.center.x, y - self.center.y) <= self.radius

    def _hit(self, px, py, angle):
        dx, dy = unit_vector(angle)
        fx = px - self.center.x
        fy = py - self.center.y
        b = fx * dx + fy * dy
        if b >= 0.0:
            return None
        c = fx * fx + fy * fy - self.radius * self.radius
        disc = b * b - c
        if disc < 0.0:
            if disc < -TOL_TANGENT * b * b:
                return None
            disc = 0.0
        t = -b - math.sqrt(disc)
        wx = px + t * dx
        wy = py + t * dy
        phi = math.atan2(wy - self.center.y, wx - self.center.x)
        return (wx, wy, wrap_angle(phi + 0.5 * math.pi), 1.0 / self.radius, phi)

    def _cone(self, px, py):
        dx = self.center.x - px
        dy = self.center.y - py
        dist = math.hypot(dx, dy)
        if dist <= self.radius:
            raise InsideShape(f"({px}, {py}) is inside the disc")
        ref = math.atan2(dy, dx)
        half = math.asin(self.radius / dist)
        return wrap_angle(ref - half), wrap_angle(ref + half), ref

    def curvature(self, t):
        return np.full_like(np.asarray(t, dtype=float), 1.0 / self.radius)

    def speed(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.radius)

    def boundary_data(self, param):
        c, r = self.center, self.radius
        pt = Vec2(c.x + r * math.cos(param), c.y + r * math.sin(param))
        return BounceData(pt, wrap_angle(param + 0.5 * math.pi), 1.0 / r, float(param))

    def outline(self, n=256):
        t = np.linspace(0.0, TWO_PI, n + 1)
        return np.column_stack([self.center.x + self.radius * np.cos(t),
                                self.center.y + self.radius * np.sin(t)])

    def to_dict(self):
        return {"type": "disc", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Ellipse(Shape):
    """Axis-aligned ellipse x^2/A^2 + y^2/B^2 <= 1 with A >= B > 0.

    The boundary parameter is the eccentric anomaly t: (A cos t, B sin t).
    """

    semi_major: float = 1.0
    semi_minor: float = 0.4
    kind = "ellipse"
    smooth = True

    def __post_init__(self):
        if not self.semi_major >= self.semi_minor > 0.0:
            raise ValueError("ellipse needs semi_major >= semi_minor > 0")

    @property
    def diameter(self):
        return 2.0 * self.semi_major

    def contains(self, x, y):
        return (x / self.semi_major) ** 2 + (y / self.semi_minor) ** 2 <= 1.0

    def _hit(self, px, py, angle):
        A, B = self.semi_major, self.semi_minor
        Px, Py = px / A, py / B
        ux, uy = unit_vector(angle)
        Dx, Dy = ux / A, uy / B
        qa = Dx * Dx + Dy * Dy
        qb = Px * Dx + Py * Dy
        if qb >= 0.0:
            return None
        qc = Px * Px + Py * Py - 1.0
        disc = qb * qb - qa * qc
        if disc < 0.0:
            if disc < -TOL_TANGENT * qb * qb:
                return None
            disc = 0.0
        # stable smaller root: qc / (-qb + sqrt(disc))
        t = qc / (-qb + math.sqrt(disc))
        wx = px + t * ux
        wy = py + t * uy
        te = math.atan2(wy / B, wx / A)
        st, ct = math.sin(te), math.cos(te)
        tau = math.atan2(B * ct, -A * st)
        k = A * B / (A * A * st * st + B * B * ct * ct) ** 1.5
        return (wx, wy, tau, k, te)

    def tangent_points(self, px, py):
        """Boundary parameters of the two tangency points seen from (px, py)."""
        A, B = self.semi_major, self.semi_minor
        Px, Py = px / A, py / B
        rho = math.hypot(Px, Py)
        if rho <= 1.0:
            raise InsideShape(f"({px}, {py}) is inside the ellipse")
        alpha = math.atan2(Py, Px)
        beta = math.acos(1.0 / rho)
        return alpha - beta, alpha + beta

    def _cone(self, px, py):
        A, B = self.semi_major, self.semi_minor
        t1, t2 = self.tangent_points(px, py)
        ref = math.atan2(-py, -px)
        pts = ((A * math.cos(t1), B * math.sin(t1)), (A * math.cos(t2), B * math.sin(t2)))
        return _cone_from_directions(px, py, pts, ref)

    def curvature(self, t):
        A, B = self.semi_major, self.semi_minor
        return A * B / (A * A * np.sin(t) ** 2 + B * B * np.cos(t) ** 2) ** 1.5

    def speed(self, t):
        """|d/dt (A cos t, B sin t)|, the arc-length density."""
        A, B = self.semi_major, self.semi_minor
        return np.sqrt(A * A * np.sin(t) ** 2 + B * B * np.cos(t) ** 2)

    def boundary_data(self, param):
        A, B = self.semi_major, self.semi_minor
        st, ct = math.sin(param), math.cos(param)
        return BounceData(Vec2(A * ct, B * st), math.atan2(B * ct, -A * st),
                          float(self.curvature(param)), float(param))

    def outline(self, n=256):
        t = np.linspace(0.0, TWO_PI, n + 1)
        return np.column_stack([self.semi_major * np.cos(t), self.semi_minor * np.sin(t)])

    def to_dict(self):
        return {"type": "ellipse", "A": self.semi_major, "B": self.semi_minor}


@dataclass(frozen=True)
class ParabolaArc(Shape):
    """The arc y = a(1 - x^2), |x| <= 1, seen only from above.

    A boundary point counts as hit only if the segment from the origin of the
    ray stays strictly above the whole parabola, so the underside is never
    visible.  The boundary parameter is the abscissa x.
    """

    height: float = 0.3
    kind = "parabola"
    smooth = True

    def __post_init__(self):
        if not self.height > 0.0:
            raise ValueError("parabola height must be positive")

    @property
    def centroid(self):
        return Vec2(0.0, 0.5 * self.height)

    @property
    def diameter(self):
        return max(2.0, math.hypot(1.0, self.height))

    def f(self, x):
        return self.height * (1.0 - x * x)

    def contains(self, x, y):
        return abs(x) <= 1.0 and y <= self.f(x)

    def _hit(self, px, py, angle):
        a = self.height
        gap = py - a * (1.0 - px * px)
        if gap <= 0.0:
            return None
        dx, dy = unit_vector(angle)
        qa = a * dx * dx
        qb = 2.0 * a * px * dx + dy
        if qb >= 0.0:
            return None
        disc = qb * qb - 4.0 * qa * gap
        if disc < 0.0:
            if disc < -TOL_TANGENT * qb * qb:
                return None
            disc = 0.0
        # smaller positive root of qa t^2 + qb t + gap = 0
        t = 2.0 * gap / (-qb + math.sqrt(disc))
        wx = px + t * dx
        if abs(wx) > 1.0 + TOL_CORNER:
            return None
        if 1.0 - abs(wx) < TOL_CORNER:
            raise DegenerateBounce(f"ray hits the parabola endpoint x={wx:.12g}")
        wy = py + t * dy
        tau = math.atan2(-2.0 * a * wx, 1.0)
        k = 2.0 * a / (1.0 + 4.0 * a * a * wx * wx) ** 1.5
        return (wx, wy, tau, k, wx)

    def visible_range(self, px, py):
        """Abscissa interval of the arc visible from (px, py)."""
        a = self.height
        if py - a * (1.0 - px * px) <= 0.0:
            raise InsideShape(f"({px}, {py}) is not above the parabola")
        r = math.sqrt(px * px - 1.0 + py / a)
        lo = max(-1.0, px - r)
        hi = min(1.0, px + r)
        if lo >= hi:
            raise InsideShape(f"({px}, {py}) cannot see the parabola arc")
        return lo, hi

    def _cone(self, px, py):
        lo, hi = self.visible_range(px, py)
        mid = 0.5 * (lo + hi)
        ref = math.atan2(self.f(mid) - py, mid - px)
        return _cone_from_directions(px, py, ((lo, self.f(lo)), (hi, self.f(hi))), ref)

    def curvature(self, x):
        a = self.height
        return 2.0 * a / (1.0 + 4.0 * a * a * x * x) ** 1.5

    def speed(self, x):
        return np.sqrt(1.0 + 4.0 * self.height ** 2 * x * x)

    def boundary_data(self, param):
        x = float(param)
        if 1.0 - abs(x) < TOL_CORNER:
            raise OnCorner(f"x={x} is an endpoint of the parabola arc")
        if abs(x) > 1.0:
            raise ValueError("parabola parameter must lie in [-1, 1]")
        a = self.height
        k = 2.0 * a / (1.0 + 4.0 * a * a * x * x) ** 1.5
        return BounceData(Vec2(x, self.f(x)), math.atan2(-2.0 * a * x, 1.0), k, x)

    def outline(self, n=256):
        xs = np.linspace(-1.0, 1.0, n + 1)
        return np.column_stack([xs, self.f(xs)])

    def to_dict(self):
        return {"type": "parabola", "height": self.height}


def ray_intersect(shape: Shape, origin, direction: float) -> Optional[BounceData]:
    """Nearest point where the ray from ``origin`` along ``direction`` meets the boundary.

    Returns None when the ray misses.  Raises DegenerateBounce when the hit is
    within ``TOL_CORNER`` of a polygon vertex or of a parabola endpoint.
    """
    hit = shape._hit(float(origin[0]), float(origin[1]), float(direction))
    if hit is None:
        return None
    wx, wy, tau, k, param = hit
    return BounceData(Vec2(wx, wy), wrap_angle(tau), k, param)


def visual_cone(shape: Shape, apex) -> VisualCone:
    """Cone of directions from ``apex`` to the (visible part of the) shape.

    Raises
    ------
    InsideShape
        If the apex lies in the closed shape or sees none of it.
    """
    return VisualCone(*shape._cone(float(apex[0]), float(apex[1])))


def bisector_direction(shape: Shape, p) -> float:
    return visual_cone(shape, p).bisector


def boundary_data(shape: Shape, boundary_param: float) -> BounceData:
    return shape.boundary_data(boundary_param)


def contains(shape: Shape, p) -> bool:
    return shape.contains(float(p[0]), float(p[1]))
