import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from bouncing_billiards.errors import DegenerateBounce, InsideShape, OnCorner
from bouncing_billiards.geometry import (Disc, Ellipse, ParabolaArc, Polygon, Segment, Vec2,
                                         bisector_direction, boundary_data, contains,
                                         ray_intersect, square, visual_cone, wrap_angle)

from conftest import angle_close

SHAPES = {
    "segment": Segment(),
    "square": square(),
    "triangle": Polygon(((0.0, -1.0), (1.5, 0.5), (-0.7, 0.9))),
    "disc": Disc((0.3, -0.2), 0.8),
    "ellipse": Ellipse(1.0, 0.4),
    "parabola": ParabolaArc(0.5),
}


def apexes(shape):
    c = shape.centroid
    s = 0.5 * shape.diameter

    @st.composite
    def draw(draw_):
        r = draw_(st.floats(1.05, 4.0)) * s
        t = draw_(st.floats(0.0, 2.0 * math.pi))
        x, y = c[0] + r * math.cos(t), c[1] + r * math.sin(t)
        assume(not shape.contains(x, y))
        if isinstance(shape, ParabolaArc):
            assume(y > shape.height * (1.0 - x * x) + 1e-6)
        try:
            shape._cone(x, y)
        except InsideShape:
            assume(False)
        return x, y
    return draw()


# ---------------------------------------------------------------- examples

def test_wrap_angle_range():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-0.5) == -0.5


def test_segment_vertical_drop():
    b = ray_intersect(Segment(), (0.0, 1.0), -math.pi / 2)
    assert b.point == pytest.approx((0.0, 0.0), abs=1e-15)
    assert b.curvature == 0.0
    assert angle_close(b.tangent_dir, 0.0, 1e-15) or angle_close(b.tangent_dir, math.pi, 1e-15)


def test_segment_slanted_hit_matches_ray_marching():
    theta = math.pi / 6
    b = ray_intersect(Segment(), (0.0, 1.0), theta - math.pi / 2)
    assert b.point.x == pytest.approx(0.5773502691896257, abs=1e-12)
    # oracle: march along the ray until y changes sign
    t = np.linspace(0.0, 2.0, 2_000_001)
    ys = 1.0 + t * math.sin(theta - math.pi / 2)
    i = np.argmax(ys <= 0.0)
    assert t[i] * math.cos(theta - math.pi / 2) == pytest.approx(b.point.x, abs=2e-6)


def test_disc_radial_ray():
    b = ray_intersect(Disc(), (2.0, 0.0), math.pi)
    assert b.point == pytest.approx((1.0, 0.0))
    assert b.curvature == pytest.approx(1.0)


def test_parabola_from_below_is_absent():
    # (0.9, 0.05) lies under the graph, so the arc is not visible from there
    d = math.atan2(0.19 - 0.05, -0.9 - 0.9)
    assert ray_intersect(ParabolaArc(1.0), (0.9, 0.05), d) is None


def test_parabola_chord_must_clear_the_graph():
    P = ParabolaArc(1.0)
    # from the left, aiming at the far side of the hump: the first crossing is the near slope
    b = ray_intersect(P, (-1.5, 0.5), math.atan2(0.19 - 0.5, 0.9 + 1.5))
    assert b is not None and b.point.x < 0.0


def test_polygon_vertex_hit_is_degenerate():
    with pytest.raises(DegenerateBounce):
        ray_intersect(square(), (2.0, 2.0), -3 * math.pi / 4)


def test_segment_cone():
    c = visual_cone(Segment(), (0.0, 1.0))
    assert c.ray_h == pytest.approx(-3 * math.pi / 4)
    assert c.ray_k == pytest.approx(-math.pi / 4)
    assert c.bisector == pytest.approx(-math.pi / 2)


def test_disc_cone():
    c = visual_cone(Disc(), (2.0, 0.0))
    assert c.width == pytest.approx(math.pi / 3)
    assert angle_close(c.bisector, math.pi, 1e-15)


def test_ellipse_cone_against_tangency_quadratic():
    E = Ellipse(1.0, 0.4)
    c = visual_cone(E, (2.0, 0.0))
    assert angle_close(c.bisector, math.pi, 1e-14)
    # lines through (2, 0) with slope m touch x^2 + y^2/0.16 = 1 iff 4 m^2 = m^2 + 0.16
    m = math.sqrt(0.16 / 3.0)
    slopes = sorted(math.tan(r) for r in (c.ray_h, c.ray_k))
    assert slopes == pytest.approx([-m, m], abs=1e-13)


def test_bisector_examples():
    assert bisector_direction(Segment(), (0.3, 2.5)) != -math.pi / 2
    assert bisector_direction(Segment(), (0.0, 0.7)) == pytest.approx(-math.pi / 2)
    assert bisector_direction(Ellipse(1.0, 0.4), (0.0, 2.0)) == pytest.approx(-math.pi / 2)
    c = visual_cone(Ellipse(1.0, 0.4), (2.0, 0.5))
    b = bisector_direction(Ellipse(1.0, 0.4), (2.0, 0.5))
    lo, hi = sorted((c.ray_h % (2 * math.pi), c.ray_k % (2 * math.pi)))
    assert lo < b % (2 * math.pi) < hi


def test_cone_from_inside_raises():
    with pytest.raises(InsideShape):
        visual_cone(Disc(), (0.2, 0.1))
    with pytest.raises(InsideShape):
        visual_cone(Ellipse(1.0, 0.4), (0.5, 0.1))


def test_boundary_data_curvatures():
    assert boundary_data(Disc(radius=2.5), 1.234).curvature == pytest.approx(0.4)
    bd = boundary_data(Ellipse(1.0, 0.4), 0.0)
    assert bd.point == pytest.approx((1.0, 0.0))
    assert bd.curvature == pytest.approx(6.25)
    assert boundary_data(square(), 1.37).curvature == 0.0
    with pytest.raises(OnCorner):
        boundary_data(square(), 2.0)


def test_ellipse_curvature_matches_tangent_turning():
    E = Ellipse(1.0, 0.4)
    for t in (0.0, 0.4, 1.1, 2.5):
        h = 1e-5
        t1, t2 = boundary_data(E, t - h).tangent_dir, boundary_data(E, t + h).tangent_dir
        arc = 0.5 * (E.speed(t - h) + E.speed(t + h)) * 2 * h
        assert abs(wrap_angle(t2 - t1)) / arc == pytest.approx(boundary_data(E, t).curvature, rel=1e-6)


def test_contains_examples():
    assert contains(Disc(), (0.5, 0.0))
    assert not contains(Segment(), (0.0, 0.1))
    assert not contains(Ellipse(1.0, 0.4), (0.9, 0.3))


def test_polygon_must_be_strictly_convex_and_ccw():
    with pytest.raises(ValueError):
        Polygon(((0, 0), (1, 0), (2, 0)))
    with pytest.raises(ValueError):
        Polygon(((0, 0), (0, 1), (1, 0)))


def test_shape_parameter_validation():
    with pytest.raises(ValueError):
        Disc(radius=0.0)
    with pytest.raises(ValueError):
        Ellipse(0.4, 1.0)
    with pytest.raises(ValueError):
        ParabolaArc(-1.0)


# ---------------------------------------------------------------- properties

@pytest.mark.parametrize("name", sorted(SHAPES))
def test_boundary_directions_inside_cone(name):
    shape = SHAPES[name]
    pts = shape.sample_boundary(1000)

    @settings(max_examples=60, deadline=None)
    @given(apexes(shape))
    def check(apex):
        x, y = apex
        c = visual_cone(shape, apex)
        width = wrap_angle(c.ray_k - c.ray_h) % (2 * math.pi)
        assert 0.0 < width < math.pi
        if isinstance(shape, ParabolaArc):
            lo, hi = shape.visible_range(x, y)
            sel = (pts[:, 0] >= lo) & (pts[:, 0] <= hi)
            vis = pts[sel]
        else:
            vis = pts
        rel = np.remainder(np.arctan2(vis[:, 1] - y, vis[:, 0] - x) - c.ray_h, 2 * math.pi)
        rel = np.where(rel > 2 * math.pi - 1e-9, 0.0, rel)
        assert np.all(rel <= width + 1e-9)

    check()


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_bisector_is_equidistant_and_hits(name):
    shape = SHAPES[name]

    @settings(max_examples=80, deadline=None)
    @given(apexes(shape))
    def check(apex):
        c = visual_cone(shape, apex)
        assert abs(wrap_angle(c.bisector - c.ray_h) - wrap_angle(c.ray_k - c.bisector)) < 1e-12
        try:
            assert ray_intersect(shape, apex, c.bisector) is not None
        except DegenerateBounce:
            pass

    check()


@settings(max_examples=200, deadline=None)
@given(st.floats(1.01, 20.0), st.floats(0.0, 2 * math.pi), st.floats(0.1, 3.0))
def test_disc_half_width(dist, t, r):
    d = Disc((0.5, -1.0), r)
    apex = (0.5 + dist * r * math.cos(t), -1.0 + dist * r * math.sin(t))
    c = visual_cone(d, apex)
    assert 0.5 * c.width == pytest.approx(math.asin(1.0 / dist), abs=1e-10)


@settings(max_examples=300, deadline=None)
@given(st.floats(-2.5, 2.5), st.floats(0.01, 3.0), st.floats(-math.pi, math.pi),
       st.sampled_from([0.3, 0.5, 1.0]))
def test_parabola_occlusion(x, lift, angle, height):
    P = ParabolaArc(height)
    y = P.f(x) + lift
    try:
        b = ray_intersect(P, (x, y), angle)
    except DegenerateBounce:
        return
    if b is None:
        return
    assert abs(b.point.x) <= 1.0
    assert b.point.y == pytest.approx(P.f(b.point.x), abs=1e-12)
    mx, my = 0.5 * (x + b.point.x), 0.5 * (y + b.point.y)
    assert my > height * (1.0 - mx * mx)
