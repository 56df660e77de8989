import math
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bouncing_billiards.dynamics import OrbitRecord, SegmentState, orbit
from bouncing_billiards.export import (CSV_HEADER, export_orbit_csv, fmt, orbit_report_json,
                                       read_orbit_csv, write_text)
from bouncing_billiards.geometry import Disc, Ellipse, ParabolaArc, Segment, square
from bouncing_billiards.segment_theory import period_four_extremes
from bouncing_billiards.svg import SvgStyle, render_svg


def test_csv_fixed_point_rows():
    rec = orbit(Disc(), (2.0, 0.0, math.pi), 2)
    text = export_orbit_csv(rec)
    lines = text.split("\n")
    assert lines[0] == CSV_HEADER
    assert lines[-1] == ""
    rows = [l.split(",", 1)[1] for l in lines[1:-1]]
    assert len(rows) == 3 and len(set(rows)) == 1
    assert "\r" not in text


def test_csv_segment_height_column():
    pp = SegmentState(0.2, 0.7, 0.3).to_phase_point()
    rec = orbit(Segment(), pp, 500)
    back = read_orbit_csv(export_orbit_csv(rec))
    assert np.max(np.abs(back.points[:, 1] - 0.7)) < 1e-12


def test_csv_round_trip_bit_exact():
    rec = orbit(Ellipse(1.0, 0.4), (1.4, 0.9, -2.3), 300, record_every=3)
    back = read_orbit_csv(export_orbit_csv(rec))
    assert np.array_equal(back.points, rec.points)
    assert np.array_equal(back.bounces, rec.bounces)
    assert np.array_equal(back.steps, rec.steps)


@settings(max_examples=1000)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips(v):
    s = fmt(v)
    assert float(s) == v
    assert "," not in s


def test_write_text_uses_lf(tmp_path):
    p = tmp_path / "x.csv"
    write_text(p, "a\nb\n")
    assert p.read_bytes() == b"a\nb\n"


def test_report_json_has_no_nan():
    rec = orbit(square(), (2.0, 2.0, -3 * math.pi / 4), 5)
    rec.summary["lyapunov"] = float("nan")
    text = orbit_report_json([rec])
    assert "NaN" not in text and '"lyapunov": null' in text


# ---------------------------------------------------------------- svg

def _parse(text):
    return ET.fromstring(text.split("\n", 1)[1])


def test_svg_empty_records_draws_outline_only():
    for shape in (Segment(), square(), Disc(), Ellipse(1.0, 0.4), ParabolaArc(0.5)):
        root = _parse(render_svg(shape))
        ns = "{http://www.w3.org/2000/svg}"
        assert len(root.findall(f"{ns}path")) == 1
        assert root.findall(f".//{ns}circle") == []


def test_svg_deterministic_and_fitted():
    recs = [orbit(Ellipse(1.0, 0.4), (1.4, 0.9, -2.3), 200),
            orbit(Ellipse(1.0, 0.4), (0.0, 2.0, -math.pi / 2), 10)]
    a = render_svg(Ellipse(1.0, 0.4), recs)
    b = render_svg(Ellipse(1.0, 0.4), recs)
    assert a == b
    root = _parse(a)
    ns = "{http://www.w3.org/2000/svg}"
    w, h = float(root.get("width")), float(root.get("height"))
    circles = root.findall(f".//{ns}circle")
    assert len(circles) == 201 + 11
    xs = [float(c.get("cx")) for c in circles]
    ys = [float(c.get("cy")) for c in circles]
    assert min(xs) >= 0.0 and max(xs) <= w and min(ys) >= 0.0 and max(ys) <= h
    # 5% margin on each side of the data extent
    pts = np.vstack([r.points[:, :2] for r in recs] + [Ellipse(1.0, 0.4).outline()])
    span = pts[:, 0].max() - pts[:, 0].min()
    assert min(xs) == pytest.approx(800 * 0.05 * span / (1.1 * span), abs=1e-2)
    assert len(root.findall(f"{ns}g")) == 2
    for c in circles:
        assert re.fullmatch(r"\d+\.\d{3}", c.get("cx")) and re.fullmatch(r"\d+\.\d{3}", c.get("cy"))


def test_svg_style_options():
    rec = orbit(Disc(), (1.7, 0.4, math.pi - 0.3), 100)
    text = render_svg(Disc(), [rec], SvgStyle(dot_radius=2.5, max_points=10, title="a<b"))
    assert text.count("<circle") == 10
    assert 'r="2.500"' in text
    assert "<title>a&lt;b</title>" in text


def test_svg_m_and_w_overlay_smoke():
    recs = []
    for h in np.linspace(0.2, 0.9, 8):
        for phase in (0.0, -math.pi / 4):
            pts = period_four_extremes(h, phase)
            z = np.column_stack([pts[:, 0], np.full(len(pts), h), np.zeros(len(pts))])
            recs.append(OrbitRecord(z, np.zeros((len(pts), 2)), np.arange(len(pts))))
    text = render_svg(Segment(), recs)
    assert text.startswith("<?xml")
    assert text.count("<circle") == sum(len(r) for r in recs)
