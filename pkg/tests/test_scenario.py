import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from bouncing_billiards.errors import SchemaError, ValidationError
from bouncing_billiards.geometry import Ellipse, Segment
from bouncing_billiards.scenario import (ScenarioConfig, parse_scenario, parse_sweep,
                                         scenario_from_dict, sweep_from_dict)

MINIMAL = {"shape": {"type": "segment"}, "initial": [{"x": 0, "h": 1, "theta": 0}], "steps": 100}


def test_minimal_scenario_defaults():
    cfg = parse_scenario(json.dumps(MINIMAL))
    assert cfg.record_every == 1
    assert cfg.steps == 100
    assert cfg.version == 1
    assert cfg.analysis == {"lyapunov": False, "periodic": False, "jacobian": False,
                            "rotation": False, "max_period": 16}
    assert cfg.output == {"csv": None, "svg": None, "json": None}
    assert isinstance(cfg.build_shape(), Segment)
    pp = cfg.phase_points()[0]
    assert (pp.x, pp.y) == (0.0, 1.0)
    assert pp.angle == pytest.approx(-math.pi / 2)


def test_ellipse_scenario_is_valid():
    cfg = parse_scenario(json.dumps({"shape": {"type": "ellipse", "A": 1, "B": 0.4},
                                     "initial": [{"x": 2, "y": 0.5, "angle": 3.0}],
                                     "steps": 10}))
    shape = cfg.build_shape()
    assert isinstance(shape, Ellipse)
    assert shape.to_dict() == {"type": "ellipse", "A": 1.0, "B": 0.4}


@pytest.mark.parametrize("shape", [
    {"type": "polygon", "vertices": [[0, 0], [1, 0], [2, 0]]},
    {"type": "disc", "radius": -1},
    {"type": "parabola", "height": 0},
    {"type": "ellipse", "A": 0.3, "B": 0.4},
])
def test_invalid_shapes(shape):
    with pytest.raises(ValidationError):
        scenario_from_dict(dict(MINIMAL, shape=shape))


def test_no_initial_conditions():
    with pytest.raises(ValidationError):
        scenario_from_dict(dict(MINIMAL, initial=[]))


@pytest.mark.parametrize("obj, path", [
    (dict(MINIMAL, colour="red"), "colour"),
    (dict(MINIMAL, shape={"type": "disc", "radius": 1, "r": 2}), "shape.r"),
    (dict(MINIMAL, analysis={"lyapunov": True, "fft": True}), "analysis.fft"),
    (dict(MINIMAL, initial=[{"x": 0, "h": 1, "theta": 0, "y": 3}]), "initial[0].y"),
    (dict(MINIMAL, steps="many"), "steps"),
    (dict(MINIMAL, steps=-1), "steps"),
    (dict(MINIMAL, shape={"type": "blob"}), "shape.type"),
    (dict(MINIMAL, initial=[{"x": 0, "h": 1}]), "initial[0]"),
    (dict(MINIMAL, version=2), "version"),
])
def test_schema_errors_name_the_path(obj, path):
    with pytest.raises(SchemaError) as info:
        scenario_from_dict(obj)
    assert info.value.path == path


def test_bad_json_is_schema_error():
    with pytest.raises(SchemaError):
        parse_scenario("{not json")


def test_theta_and_angle_tags():
    cfg = scenario_from_dict(dict(MINIMAL, initial=[
        {"x": 0.3, "h": 1.0, "theta": 0.2}, {"x": 0.3, "y": 1.0, "angle": 0.2 - math.pi / 2}]))
    a, b = cfg.phase_points()
    assert (a.x, a.y) == (b.x, b.y)
    assert a.angle == pytest.approx(b.angle, abs=1e-15)


def test_segment_state_must_hit():
    with pytest.raises(ValidationError):
        scenario_from_dict(dict(MINIMAL, initial=[{"x": 0, "h": 0, "theta": 0}]))


shapes = st.one_of(
    st.just({"type": "segment"}),
    st.builds(lambda r, cx, cy: {"type": "disc", "radius": r, "center": [cx, cy]},
              st.floats(0.1, 5.0), st.floats(-3, 3), st.floats(-3, 3)),
    st.builds(lambda a, f: {"type": "ellipse", "A": a, "B": a * f},
              st.floats(0.2, 5.0), st.floats(0.05, 1.0)),
    st.builds(lambda h: {"type": "parabola", "height": h}, st.floats(0.05, 3.0)),
    st.just({"type": "polygon", "vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1]]}),
)
initials = st.lists(st.one_of(
    st.builds(lambda x, h, t: {"x": x, "h": h, "theta": t},
              st.floats(-3, 3), st.floats(0.1, 3), st.floats(-1.5, 1.5)),
    st.builds(lambda x, y, a: {"x": x, "y": y, "angle": a},
              st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))), min_size=1, max_size=4)


@settings(max_examples=200, deadline=None)
@given(shapes, initials, st.integers(0, 10**6), st.integers(1, 50), st.booleans(), st.text(max_size=8))
def test_parse_emit_identity(shape, initial, steps, every, lyap, sid):
    obj = {"shape": shape, "initial": initial, "steps": steps, "record_every": every,
           "analysis": {"lyapunov": lyap}, "id": sid}
    cfg = scenario_from_dict(obj)
    again = parse_scenario(cfg.to_json())
    assert again == cfg
    assert again.to_json() == cfg.to_json()


def test_replace_revalidates():
    cfg = scenario_from_dict(MINIMAL)
    assert cfg.replace(steps=7).steps == 7
    with pytest.raises(SchemaError):
        cfg.replace(steps=-7)
    assert isinstance(cfg, ScenarioConfig)


# ---------------------------------------------------------------- sweeps

def test_sweep_cells_order_and_count():
    cfg = sweep_from_dict({"task": "rotation", "grid": {"h": [1, 2], "a": [0.1, 0.2, 0.3]}})
    assert cfg.n_cells == 6
    cells = cfg.cells()
    assert [c["a"] for c in cells[:3]] == [0.1, 0.2, 0.3]
    assert [c["h"] for c in cells] == [1, 1, 1, 2, 2, 2]


def test_sweep_validation():
    with pytest.raises(ValidationError):
        sweep_from_dict({"task": "rotation", "grid": {"a": list(range(1, 20))}, "fixed": {"h": 1},
                         "max_cells": 10})
    with pytest.raises(SchemaError):
        sweep_from_dict({"task": "rotation", "grid": {"radius": [1]}})
    with pytest.raises(SchemaError):
        sweep_from_dict({"task": "orbit", "grid": {"h": [1]}})
    with pytest.raises(ValidationError):
        sweep_from_dict({"task": "rotation", "grid": {"a": []}, "fixed": {"h": 1}})
    with pytest.raises(ValidationError):
        sweep_from_dict({"task": "rotation", "grid": {"a": [0.5]}, "fixed": {"a": 1, "h": 1}})


def test_sweep_round_trip():
    obj = {"task": "orbit", "grid": {"h": [0.5, 1.0]}, "base": MINIMAL, "summary": ["max_radius"]}
    cfg = sweep_from_dict(obj)
    assert parse_sweep(json.dumps(cfg.to_dict())) == cfg
