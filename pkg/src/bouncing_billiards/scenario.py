"""Scenario and sweep configuration: JSON in, validated dataclasses out.

A scenario looks like::

    {"version": 1,
     "shape": {"type": "ellipse", "A": 1, "B": 0.4},
     "initial": [{"x": 2, "y": 0.5, "angle": 3.0}, {"x": 0, "h": 1, "theta": 0.2}],
     "steps": 1000}

Initial conditions tagged with ``theta`` are segment states (x, h, theta);
those tagged with ``angle`` are phase points with an absolute direction.
Every optional key is filled in by :func:`parse_scenario`, so the emitted
dictionary of a parsed config parses back to the same config.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

from .dynamics import PhasePoint, SegmentState
from .errors import SchemaError, ValidationError
from .geometry import Disc, Ellipse, ParabolaArc, Polygon, Segment, Shape

SCHEMA_VERSION = 1

SHAPE_KEYS = {
    "segment": {},
    "polygon": {"vertices": None},
    "disc": {"radius": 1.0, "center": [0.0, 0.0]},
    "ellipse": {"A": 1.0, "B": 0.4},
    "parabola": {"height": 0.3},
}

ANALYSIS_DEFAULTS = {"lyapunov": False, "periodic": False, "jacobian": False,
                     "rotation": False, "max_period": 16}
OUTPUT_DEFAULTS = {"csv": None, "svg": None, "json": None}

SWEEP_TASKS = {
    "orbit": ("h", "theta", "angle", "a"),
    "rotation": ("h", "a", "b"),
    "period4": ("h", "phase"),
    "fixed_points": ("radius",),
}


# ---------------------------------------------------------------------------
# small typed readers

def _reject_unknown(obj: dict, allowed, path: str):
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}" if path else key, "unknown key")


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {type(value).__name__}")
    v = float(value)
    if not math.isfinite(v):
        raise SchemaError(path, "expected a finite number")
    return v


def _count(value, path, minimum=0):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {type(value).__name__}")
    if value < minimum:
        raise SchemaError(path, f"must be >= {minimum}")
    return value


def _flag(value, path):
    if not isinstance(value, bool):
        raise SchemaError(path, "expected true or false")
    return value


def _object(value, path):
    if not isinstance(value, dict):
        raise SchemaError(path or "$", "expected an object")
    return value


def _optional_str(value, path):
    if value is not None and not isinstance(value, str):
        raise SchemaError(path, "expected a string or null")
    return value


# ---------------------------------------------------------------------------
# shapes and initial conditions

def parse_shape(obj, path: str = "shape") -> dict:
    """Validated shape description with every default filled in."""
    obj = _object(obj, path)
    if "type" not in obj:
        raise SchemaError(f"{path}.type", "missing")
    kind = obj["type"]
    if kind not in SHAPE_KEYS:
        raise SchemaError(f"{path}.type", f"unknown shape type {kind!r}")
    defaults = SHAPE_KEYS[kind]
    _reject_unknown(obj, set(defaults) | {"type"}, path)
    out = {"type": kind}
    if kind == "polygon":
        if "vertices" not in obj:
            raise SchemaError(f"{path}.vertices", "missing")
        verts = obj["vertices"]
        if not isinstance(verts, list):
            raise SchemaError(f"{path}.vertices", "expected a list of [x, y] pairs")
        vs = []
        for i, v in enumerate(verts):
            if not isinstance(v, list) or len(v) != 2:
                raise SchemaError(f"{path}.vertices[{i}]", "expected [x, y]")
            vs.append([_number(v[0], f"{path}.vertices[{i}][0]"),
                       _number(v[1], f"{path}.vertices[{i}][1]")])
        out["vertices"] = vs
    elif kind == "disc":
        out["radius"] = _number(obj.get("radius", defaults["radius"]), f"{path}.radius")
        c = obj.get("center", defaults["center"])
        if not isinstance(c, list) or len(c) != 2:
            raise SchemaError(f"{path}.center", "expected [x, y]")
        out["center"] = [_number(c[0], f"{path}.center[0]"), _number(c[1], f"{path}.center[1]")]
    else:
        for key, default in defaults.items():
            out[key] = _number(obj.get(key, default), f"{path}.{key}")
    build_shape(out)
    return out


def build_shape(spec: dict) -> Shape:
    """Shape object for a validated description; bad parameters raise ValidationError."""
    kind = spec["type"]
    try:
        if kind == "segment":
            return Segment()
        if kind == "polygon":
            return Polygon(tuple(tuple(v) for v in spec["vertices"]))
        if kind == "disc":
            return Disc(tuple(spec["center"]), spec["radius"])
        if kind == "ellipse":
            return Ellipse(spec["A"], spec["B"])
        return ParabolaArc(spec["height"])
    except ValueError as exc:
        raise ValidationError(f"invalid {kind}: {exc}") from exc


def parse_initial(obj, path: str) -> dict:
    obj = _object(obj, path)
    if "theta" in obj:
        _reject_unknown(obj, ("x", "h", "theta"), path)
        keys = ("x", "h", "theta")
    elif "angle" in obj:
        _reject_unknown(obj, ("x", "y", "angle"), path)
        keys = ("x", "y", "angle")
    else:
        raise SchemaError(path, "needs either 'theta' (segment state) or 'angle' (phase point)")
    out = {}
    for k in keys:
        if k not in obj:
            raise SchemaError(f"{path}.{k}", "missing")
        out[k] = _number(obj[k], f"{path}.{k}")
    if "theta" in out:
        try:
            SegmentState(out["x"], out["h"], out["theta"])
        except ValueError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
    return out


def initial_to_phase_point(ic: dict) -> PhasePoint:
    if "theta" in ic:
        return SegmentState(ic["x"], ic["h"], ic["theta"]).to_phase_point()
    return PhasePoint(ic["x"], ic["y"], ic["angle"])


# ---------------------------------------------------------------------------
# scenarios

@dataclass(frozen=True)
class ScenarioConfig:
    shape: dict
    initial: Tuple[dict, ...]
    steps: int
    record_every: int = 1
    seed: int = 0
    nudge: float = 0.0
    id: str = ""
    analysis: Dict[str, Any] = field(default_factory=lambda: dict(ANALYSIS_DEFAULTS))
    output: Dict[str, Any] = field(default_factory=lambda: dict(OUTPUT_DEFAULTS))
    version: int = SCHEMA_VERSION

    def build_shape(self) -> Shape:
        return build_shape(self.shape)

    def phase_points(self) -> List[PhasePoint]:
        return [initial_to_phase_point(ic) for ic in self.initial]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "id": self.id,
            "shape": copy.deepcopy(self.shape),
            "initial": [dict(ic) for ic in self.initial],
            "steps": self.steps,
            "record_every": self.record_every,
            "seed": self.seed,
            "nudge": self.nudge,
            "analysis": dict(self.analysis),
            "output": dict(self.output),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def replace(self, **changes) -> "ScenarioConfig":
        d = self.to_dict()
        d.update(changes)
        return scenario_from_dict(d)


SCENARIO_KEYS = ("version", "id", "shape", "initial", "steps", "record_every", "seed",
                 "nudge", "analysis", "output")


def scenario_from_dict(obj, path: str = "") -> ScenarioConfig:
    """Validate a decoded scenario object; see :func:`parse_scenario`."""
    obj = _object(obj, path)
    _reject_unknown(obj, SCENARIO_KEYS, path)
    p = (lambda k: f"{path}.{k}" if path else k)
    version = _count(obj.get("version", SCHEMA_VERSION), p("version"))
    if version != SCHEMA_VERSION:
        raise SchemaError(p("version"), f"unsupported version {version}")
    for key in ("shape", "initial", "steps"):
        if key not in obj:
            raise SchemaError(p(key), "missing")
    shape = parse_shape(obj["shape"], p("shape"))
    if not isinstance(obj["initial"], list):
        raise SchemaError(p("initial"), "expected a list")
    initial = tuple(parse_initial(ic, f"{p('initial')}[{i}]") for i, ic in enumerate(obj["initial"]))
    if not initial:
        raise ValidationError("at least one initial condition is required")
    steps = _count(obj["steps"], p("steps"))
    record_every = _count(obj.get("record_every", 1), p("record_every"), 1)
    seed = _count(obj.get("seed", 0), p("seed"))
    nudge = _number(obj.get("nudge", 0.0), p("nudge"))
    if nudge < 0.0:
        raise ValidationError("nudge must be non-negative")
    sid = obj.get("id", "")
    if not isinstance(sid, str):
        raise SchemaError(p("id"), "expected a string")

    an_in = _object(obj.get("analysis", {}), p("analysis"))
    _reject_unknown(an_in, ANALYSIS_DEFAULTS, p("analysis"))
    analysis = dict(ANALYSIS_DEFAULTS)
    for k, v in an_in.items():
        kp = f"{p('analysis')}.{k}"
        analysis[k] = _count(v, kp, 1) if k == "max_period" else _flag(v, kp)

    out_in = _object(obj.get("output", {}), p("output"))
    _reject_unknown(out_in, OUTPUT_DEFAULTS, p("output"))
    output = dict(OUTPUT_DEFAULTS)
    for k, v in out_in.items():
        output[k] = _optional_str(v, f"{p('output')}.{k}")

    return ScenarioConfig(shape, initial, steps, record_every, seed, nudge, sid,
                          analysis, output, version)


def _decode(text) -> Any:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from exc


def parse_scenario(text) -> ScenarioConfig:
    """Parse scenario JSON text into a validated :class:`ScenarioConfig`.

    Raises
    ------
    SchemaError
        Malformed JSON, a missing or unknown key, or a value of the wrong type;
        ``path`` names the key.
    ValidationError
        Well-formed input with meaningless values (non-convex polygon,
        non-positive radius, no initial conditions, ...).
    """
    return scenario_from_dict(_decode(text))


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepConfig:
    """A grid of one or two parameters evaluated by one task.

    ``task`` is one of ``orbit`` (runs ``base`` with the cell's h, theta,
    angle or a substituted into every initial condition), ``rotation``
    (rotation number of the invariant ellipse given by two of h, a, b),
    ``period4`` (extreme points of the a = b orbit at height h) and
    ``fixed_points`` (search on the loop of the cell's radius around the
    shape of ``base``).
    """

    task: str
    grid: Tuple[Tuple[str, Tuple[float, ...]], ...]
    fixed: Dict[str, float] = field(default_factory=dict)
    base: ScenarioConfig = None
    summary: Tuple[str, ...] = ()
    max_cells: int = 10000
    id: str = ""
    version: int = SCHEMA_VERSION

    @property
    def n_cells(self) -> int:
        n = 1
        for _, values in self.grid:
            n *= len(values)
        return n

    def cells(self) -> List[dict]:
        """Parameter dict of every cell; the last grid axis varies fastest."""
        out = [dict(self.fixed)]
        for name, values in self.grid:
            out = [dict(c, **{name: v}) for c in out for v in values]
        return out

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "id": self.id,
            "task": self.task,
            "grid": {name: list(values) for name, values in self.grid},
            "fixed": dict(self.fixed),
            "base": self.base.to_dict() if self.base is not None else None,
            "summary": list(self.summary),
            "max_cells": self.max_cells,
        }


SWEEP_KEYS = ("version", "id", "task", "grid", "fixed", "base", "summary", "max_cells")


def sweep_from_dict(obj) -> SweepConfig:
    obj = _object(obj, "")
    _reject_unknown(obj, SWEEP_KEYS, "")
    version = _count(obj.get("version", SCHEMA_VERSION), "version")
    if version != SCHEMA_VERSION:
        raise SchemaError("version", f"unsupported version {version}")
    task = obj.get("task")
    if task not in SWEEP_TASKS:
        raise SchemaError("task", f"expected one of {sorted(SWEEP_TASKS)}")
    allowed = SWEEP_TASKS[task]

    grid_in = _object(obj.get("grid"), "grid")
    if not 1 <= len(grid_in) <= 2:
        raise ValidationError("grid must vary one or two parameters")
    grid = []
    for name, values in grid_in.items():
        if name not in allowed:
            raise SchemaError(f"grid.{name}", f"task {task!r} accepts {list(allowed)}")
        if not isinstance(values, list) or not values:
            raise ValidationError(f"grid.{name} needs at least one value")
        grid.append((name, tuple(_number(v, f"grid.{name}[{i}]") for i, v in enumerate(values))))

    fixed_in = _object(obj.get("fixed", {}), "fixed")
    fixed = {}
    for name, v in fixed_in.items():
        if name not in allowed:
            raise SchemaError(f"fixed.{name}", f"task {task!r} accepts {list(allowed)}")
        if name in grid_in:
            raise ValidationError(f"{name} is both fixed and swept")
        fixed[name] = _number(v, f"fixed.{name}")

    base = None
    if obj.get("base") is not None:
        base = scenario_from_dict(obj["base"], "base")
    if task in ("orbit", "fixed_points") and base is None:
        raise SchemaError("base", f"task {task!r} needs a base scenario")
    if task == "rotation" and len(set(fixed) | set(grid_in)) != 2:
        raise ValidationError("rotation sweeps need exactly two of h, a, b")
    if task == "period4" and "h" not in grid_in and "h" not in fixed:
        raise ValidationError("period4 sweeps need h")

    summary = obj.get("summary", [])
    if not isinstance(summary, list) or not all(isinstance(s, str) for s in summary):
        raise SchemaError("summary", "expected a list of column names")
    max_cells = _count(obj.get("max_cells", 10000), "max_cells", 1)
    sid = obj.get("id", "")
    if not isinstance(sid, str):
        raise SchemaError("id", "expected a string")
    cfg = SweepConfig(task, tuple(grid), fixed, base, tuple(summary), max_cells, sid, version)
    if cfg.n_cells > max_cells:
        raise ValidationError(f"{cfg.n_cells} cells exceed max_cells = {max_cells}")
    return cfg


def parse_sweep(text) -> SweepConfig:
    return sweep_from_dict(_decode(text))
