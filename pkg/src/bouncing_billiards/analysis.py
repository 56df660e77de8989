"""Fixed points, measure preservation, Lyapunov exponents and periodic orbits."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from .dynamics import PhasePoint, _advance
from .errors import BilliardError, NotMonotone, PerturbationLeftDomain
from .geometry import Shape, Vec2, wrap_angle

TWO_PI = 2.0 * math.pi


class OrbitTerminated(BilliardError):
    """The orbit stopped early; ``partial`` holds the estimate so far."""

    def __init__(self, message, partial, steps):
        super().__init__(message)
        self.partial = partial
        self.steps = steps


def phase_distance(z1, z2) -> float:
    """Distance in the visibility domain: Euclidean in position plus wrapped angle."""
    return math.sqrt((z1[0] - z2[0]) ** 2 + (z1[1] - z2[1]) ** 2
                     + wrap_angle(z1[2] - z2[2]) ** 2)


def _map3(shape, z):
    x, y, a, _, _ = _advance(shape, z[0], z[1], z[2])
    return (x, y, a)


def _diff3(z1, z0):
    return (z1[0] - z0[0], z1[1] - z0[1], wrap_angle(z1[2] - z0[2]))


# ---------------------------------------------------------------------------
# fixed points

def retro_deviation(shape: Shape, p) -> float:
    """Signed angle between the bounced bisector ray and the way back to ``p``.

    Launch the ray from ``p`` along the bisector of its visual cone and reflect
    it at the boundary.  The result is zero exactly when the reflected ray
    heads back through ``p``, which makes (p, bisector) a fixed point.
    """
    px, py = float(p[0]), float(p[1])
    _, _, bis = shape._cone(px, py)
    hit = shape._hit(px, py, bis)
    if hit is None:
        raise PerturbationLeftDomain(f"bisector ray from {p} misses the shape")
    wx, wy, tau, _, _ = hit
    back = math.atan2(py - wy, px - wx)
    return wrap_angle(2.0 * tau - bis - back)


def fixed_point_residual(shape: Shape, pp) -> float:
    return phase_distance(_map3(shape, tuple(pp)), tuple(pp))


def find_fixed_points(shape: Shape, radius: float, center=None, n_samples: int = 720,
                      tol: float = 1e-10, max_residual: float = 1e-8) -> List[PhasePoint]:
    """Fixed points on the circle of ``radius`` around ``center``.

    The retro-deviation is sampled at ``n_samples`` equally spaced points;
    every sign change is refined by bisection in the loop angle down to
    ``tol``.  Candidates whose step residual exceeds ``max_residual`` are
    discarded: those are jumps of the wrapped angle rather than roots.
    """
    c = shape.centroid if center is None else Vec2(*center)

    def point(t):
        return (c[0] + radius * math.cos(t), c[1] + radius * math.sin(t))

    def dev(t):
        return retro_deviation(shape, point(t))

    ts = [TWO_PI * i / n_samples for i in range(n_samples)]
    vals = [dev(t) for t in ts]
    roots = []
    for i in range(n_samples):
        if vals[i] == 0.0:
            roots.append(ts[i])
            continue
        j = (i + 1) % n_samples
        if vals[i] * vals[j] < 0.0:
            lo, hi = ts[i], ts[i] + TWO_PI / n_samples
            flo = vals[i]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fm = dev(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fm < 0.0) == (flo < 0.0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    found = []
    for t in roots:
        px, py = point(t)
        pp = PhasePoint(px, py, shape._cone(px, py)[2])
        try:
            res = fixed_point_residual(shape, pp)
        except BilliardError:
            continue
        if res < max_residual:
            found.append(pp)
    return found


# ---------------------------------------------------------------------------
# the curvature inequality behind the fixed-point families

@dataclass(frozen=True)
class ArcSpec:
    """Boundary arc of a smooth shape traversed from parameter s0 to s2."""

    shape: Shape
    s0: float
    s2: float

    @property
    def direction(self) -> int:
        return 1 if self.s2 > self.s0 else -1


class QuadratureResult(NamedTuple):
    lhs: float
    rhs: float
    s1: float
    total_turn: float


def _gauss_panels(a, b, n_panels, order):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mids[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def lemma_quadrature(arc: ArcSpec, n_nodes: int = 512, order: int = 16,
                     n_check: int = 256) -> QuadratureResult:
    """Both sides of the curvature inequality on an arc.

    With K(s) the turning of the tangent from the start of the arc (arc
    length s) and s1 the point where K reaches half its total, returns

        lhs = int_{s1}^{s2} sin(K(s2) - K(s)) ds,   rhs = int_{s0}^{s1} sin(K(s)) ds.

    Increasing curvature gives lhs < rhs, decreasing gives lhs > rhs and a
    circular arc gives equality.

    Raises
    ------
    NotMonotone
        If sampled curvature both rises and falls along the arc.
    """
    shape = arc.shape
    span = arc.s2 - arc.s0
    length_scale = abs(span)

    def t_of(u):
        return arc.s0 + u * span

    def density(u):
        return shape.speed(t_of(u)) * length_scale

    def turning_density(u):
        t = t_of(u)
        return shape.curvature(t) * shape.speed(t) * length_scale

    ks = np.asarray(shape.curvature(t_of(np.linspace(0.0, 1.0, n_check))), dtype=float)
    dk = np.diff(ks)
    flat = np.abs(dk) <= 1e-12 * np.max(np.abs(ks))
    if not (np.all(flat) or np.all(dk > 0.0) or np.all(dk < 0.0)):
        raise NotMonotone("curvature is not monotone along the arc")

    gx, gw = np.polynomial.legendre.leggauss(order)
    n_sub = 8

    def K(u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        total = np.zeros_like(u)
        for j in range(n_sub):
            a = u * j / n_sub
            b = u * (j + 1) / n_sub
            half = 0.5 * (b - a)
            mid = 0.5 * (a + b)
            nodes = mid[:, None] + half[:, None] * gx[None, :]
            total += half * (turning_density(nodes) @ gw)
        return total

    k_total = float(K(1.0)[0])
    if not 0.0 < k_total < math.pi:
        raise ValueError("arc turns by pi or more; its end tangents do not meet")
    lo, hi = 0.0, 1.0
    target = 0.5 * k_total
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        if K(mid)[0] < target:
            lo = mid
        else:
            hi = mid
    u1 = 0.5 * (lo + hi)
    n_panels = max(1, n_nodes // order)
    nodes, weights = _gauss_panels(u1, 1.0, n_panels, order)
    lhs = float(np.sum(weights * np.sin(k_total - K(nodes)) * density(nodes)))
    nodes, weights = _gauss_panels(0.0, u1, n_panels, order)
    rhs = float(np.sum(weights * np.sin(K(nodes)) * density(nodes)))
    return QuadratureResult(lhs, rhs, float(t_of(u1)), k_total)


# ---------------------------------------------------------------------------
# differentials

def bounce_jacobian_closed_form(k: float, a: float, b: float) -> np.ndarray:
    """Differential of the bounce-and-return part of the map in a bounce-centred frame.

    The frame has its origin at the bounce point, x along the boundary
    tangent and y along the outward normal; (a, b) is the starting point and
    the third coordinate the direction angle.  Its determinant is -1.
    """
    c2 = a * a + b * b
    return np.array([
        [1.0 + 2.0 * k * b, -2.0 * k * a - 2.0 * a / b, 2.0 * c2 / b + 2.0 * k * c2],
        [2.0 * k * a, 1.0 - 2.0 * k * a * a / b, 2.0 * k * a * c2 / b],
        [-2.0 * k, 2.0 * k * a / b, -1.0 - 2.0 * k * c2 / b],
    ])


def _central_jacobian(fn, z, eps):
    J = np.empty((3, 3))
    for j in range(3):
        zp = list(z)
        zm = list(z)
        zp[j] += eps
        zm[j] -= eps
        try:
            fp = fn(tuple(zp))
            fm = fn(tuple(zm))
        except BilliardError as exc:
            raise PerturbationLeftDomain(f"probe {j} of size {eps} failed: {exc}") from exc
        J[:, j] = np.array(_diff3(fp, fm)) / (2.0 * eps)
    return J


def finite_diff_jacobian(shape: Shape, pp, eps: float = 1e-6,
                         richardson: bool = True) -> np.ndarray:
    """Central-difference differential of the map in (x, y, angle).

    With ``richardson`` the estimates at ``eps`` and ``eps / 2`` are combined
    to cancel the leading truncation error.
    """
    z = tuple(float(c) for c in pp)

    def fn(q):
        return _map3(shape, q)

    J = _central_jacobian(fn, z, eps)
    if richardson:
        J = (4.0 * _central_jacobian(fn, z, 0.5 * eps) - J) / 3.0
    return J


def bounce_frame(shape: Shape, pp):
    """Local frame of the bounce of ``pp``: (origin, tangent axis, normal axis, curvature)."""
    x, y, ang = (float(c) for c in pp)
    hit = shape._hit(x, y, ang)
    if hit is None:
        raise PerturbationLeftDomain(f"{pp} does not hit the shape")
    wx, wy, tau, k, _ = hit
    nx, ny = -math.sin(tau), math.cos(tau)
    if nx * (x - wx) + ny * (y - wy) < 0.0:
        nx, ny = -nx, -ny
    ex, ey = ny, -nx
    return (wx, wy), (ex, ey), (nx, ny), k


def bounce_return_map(shape: Shape, pp):
    """(p', reflected direction) after the bounce, before the cone reflection."""
    x, y, ang = (float(c) for c in pp)
    hit = shape._hit(x, y, ang)
    if hit is None:
        raise PerturbationLeftDomain(f"{pp} does not hit the shape")
    wx, wy, tau, _, _ = hit
    refl = 2.0 * tau - ang
    dist = math.hypot(x - wx, y - wy)
    return (wx + dist * math.cos(refl), wy + dist * math.sin(refl), wrap_angle(refl))


def local_bounce_jacobian(shape: Shape, pp, eps: float = 1e-6) -> np.ndarray:
    """Finite-difference differential of :func:`bounce_return_map` in the bounce frame.

    Comparable entry by entry with :func:`bounce_jacobian_closed_form`.
    """
    z = tuple(float(c) for c in pp)

    def fn(q):
        return bounce_return_map(shape, q)

    J = _central_jacobian(fn, z, eps)
    J = (4.0 * _central_jacobian(fn, z, 0.5 * eps) - J) / 3.0
    _, (ex, ey), (nx, ny), _ = bounce_frame(shape, pp)
    T = np.array([[ex, ey, 0.0], [nx, ny, 0.0], [0.0, 0.0, 1.0]])
    return T @ J @ T.T


def local_coordinates(shape: Shape, pp):
    """(k, a, b, theta0) of ``pp`` in its bounce frame."""
    (wx, wy), (ex, ey), (nx, ny), k = bounce_frame(shape, pp)
    dx, dy = pp[0] - wx, pp[1] - wy
    return k, dx * ex + dy * ey, dx * nx + dy * ny, wrap_angle(pp[2] - math.atan2(ey, ex))


# ---------------------------------------------------------------------------
# Lyapunov exponent

def _tangent_push(shape, z, v, eps):
    """Directional derivative DF(z) v by Richardson-extrapolated central differences."""
    def probe(h):
        zp = (z[0] + h * v[0], z[1] + h * v[1], z[2] + h * v[2])
        zm = (z[0] - h * v[0], z[1] - h * v[1], z[2] - h * v[2])
        d = _diff3(_map3(shape, zp), _map3(shape, zm))
        return np.array(d) / (2.0 * h)

    try:
        d1 = probe(eps)
        d2 = probe(0.5 * eps)
    except BilliardError as exc:
        raise PerturbationLeftDomain(str(exc)) from exc
    return (4.0 * d2 - d1) / 3.0


def lyapunov_exponent(shape: Shape, pp, n: int, eps: float = 1e-7,
                      v0=(1.0, 1.0, 1.0)) -> float:
    """Largest Lyapunov exponent along the orbit of ``pp`` over ``n`` steps.

    A tangent vector is pushed forward by the differential at every step and
    renormalised; the exponent is the mean log growth per step.  If the
    orbit stops early an :class:`OrbitTerminated` carrying the partial
    estimate is raised.
    """
    z = tuple(float(c) for c in pp)
    v = np.asarray(v0, dtype=float)
    v = v / np.linalg.norm(v)
    total = 0.0
    for i in range(n):
        try:
            dv = _tangent_push(shape, z, v, eps)
            z = _map3(shape, z)
        except BilliardError as exc:
            partial = total / i if i else math.nan
            raise OrbitTerminated(f"orbit stopped at step {i}: {exc}", partial, i) from exc
        g = float(np.linalg.norm(dv))
        total += math.log(g)
        v = dv / g
    return total / n


# ---------------------------------------------------------------------------
# periodic orbits

def cubic_roots(c2: float, c1: float, c0: float) -> np.ndarray:
    """Roots of x^3 + c2 x^2 + c1 x + c0.

    One real root comes from Cardano's formula with a Newton polish; the
    other two solve the deflated quadratic, whose constant term is taken as
    -c0 / r so that the product and sum of the roots match the coefficients
    even when roots coalesce.
    """
    def poly(x):
        return ((x + c2) * x + c1) * x + c0

    def dpoly(x):
        return (3.0 * x + 2.0 * c2) * x + c1

    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0
    disc = q * q / 4.0 + p ** 3 / 27.0
    if disc >= 0.0:
        sq = math.sqrt(disc)
        u3 = -q / 2.0 - sq if q > 0.0 else -q / 2.0 + sq
        u = math.copysign(abs(u3) ** (1.0 / 3.0), u3)
        r = u - p / (3.0 * u) if u != 0.0 else 0.0
    else:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = max(-1.0, min(1.0, 3.0 * q / (p * m)))
        r = m * math.cos(math.acos(arg) / 3.0)
    r -= c2 / 3.0
    for _ in range(3):
        d = dpoly(r)
        if d == 0.0:
            break
        nxt = r - poly(r) / d
        if abs(poly(nxt)) >= abs(poly(r)):
            break
        r = nxt
    b = c2 + r
    c = -c0 / r if r != 0.0 else c1
    dq = complex(b * b - 4.0 * c)
    sq = cmath.sqrt(dq)
    t = -0.5 * (b + sq if b >= 0.0 else b - sq)
    if t != 0:
        pair = [t, c / t]
    else:
        pair = [0j, 0j]
    out = np.array([complex(r)] + pair, dtype=complex)
    if np.all(np.abs(out.imag) <= 1e-12 * np.maximum(1.0, np.abs(out.real))):
        out = out.real.astype(complex)
    return out


def eigenvalues3(M) -> np.ndarray:
    """Eigenvalues of a real 3x3 matrix from its characteristic cubic."""
    M = np.asarray(M, dtype=float)
    tr = np.trace(M)
    minors = (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
              + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
              + M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        det = float(np.linalg.det(M))
    return cubic_roots(-tr, minors, -det)


@dataclass
class PeriodicOrbitReport:
    period: int
    points: List[PhasePoint]
    monodromy: np.ndarray
    eigenvalues: np.ndarray
    closure_error: float

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.monodromy))

    @property
    def is_hyperbolic(self) -> bool:
        return bool(np.max(np.abs(self.eigenvalues)) > 1.0 + 1e-3)


def _iterate3(shape, z, q):
    for _ in range(q):
        z = _map3(shape, z)
    return z


def polish_periodic_point(shape: Shape, z, q: int, max_rounds: int = 100,
                          tol: float = 1e-12):
    """Refine an approximate period-q point by damped Gauss-Newton on F^q(z) - z.

    The correction solves (DF^q - I) dz = -(F^q(z) - z) in the least-squares,
    minimum-norm sense, which copes with the unit eigenvalue every polygon
    orbit carries; steps are halved until the residual drops.
    """
    z = tuple(float(c) for c in z)
    res = phase_distance(_iterate3(shape, z, q), z)
    for _ in range(max_rounds):
        if res < tol:
            break
        M = monodromy(shape, z, q)
        r = np.array(_diff3(_iterate3(shape, z, q), z))
        dz, *_ = np.linalg.lstsq(M - np.eye(3), -r, rcond=1e-10)
        lam = 1.0
        improved = False
        while lam > 1e-4:
            cand = (z[0] + lam * dz[0], z[1] + lam * dz[1], z[2] + lam * dz[2])
            try:
                rc = phase_distance(_iterate3(shape, cand, q), cand)
            except BilliardError:
                rc = math.inf
            if rc < res:
                z, res, improved = cand, rc, True
                break
            lam *= 0.5
        if not improved:
            break
    return z, res


def monodromy(shape: Shape, z, q: int, eps: float = 1e-6) -> np.ndarray:
    """Product of per-step finite-difference differentials along q steps from z."""
    M = np.eye(3)
    z = tuple(float(c) for c in z)
    for _ in range(q):
        M = finite_diff_jacobian(shape, z, eps) @ M
        z = _map3(shape, z)
    return M


def detect_periodic(shape: Shape, pp, max_period: int = 16, tol: float = 1e-6,
                    polish: bool = True) -> Optional[PeriodicOrbitReport]:
    """Smallest period q <= max_period with a near return of the orbit of ``pp``.

    The approximate periodic point is polished, the monodromy matrix built
    from per-step differentials and its eigenvalues taken from the
    characteristic cubic.  Returns None if the orbit does not come back
    within ``tol`` or cannot be iterated.
    """
    z0 = tuple(float(c) for c in pp)
    z = z0
    q = None
    try:
        for k in range(1, max_period + 1):
            z = _map3(shape, z)
            if phase_distance(z, z0) < tol:
                q = k
                break
    except BilliardError:
        return None
    if q is None:
        return None
    zs = z0
    if polish:
        zs, _ = polish_periodic_point(shape, z0, q)
    try:
        M = monodromy(shape, zs, q)
        pts = [PhasePoint(*zs)]
        z = zs
        for _ in range(q - 1):
            z = _map3(shape, z)
            pts.append(PhasePoint(*z))
        closure = phase_distance(_map3(shape, z), zs)
    except BilliardError:
        return None
    return PeriodicOrbitReport(q, pts, M, eigenvalues3(M), closure)
