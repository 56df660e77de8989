"""Deterministic parameter sweeps.

Every grid cell is evaluated independently, possibly in a worker process,
and the rows are put back in cell order, so the report does not depend on
the number of workers.  An exception inside a cell becomes an ``error``
entry of that cell's rows.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List

from .analysis import find_fixed_points, fixed_point_residual
from .export import fmt
from .geometry import wrap_angle
from .runner import run_orbit
from .scenario import ScenarioConfig, SweepConfig
from .segment_theory import b_from_a, period_four_extremes, rotation_number

HALF_PI = 0.5 * math.pi
BASE_COLUMNS = ("cell", "orbit", "error")


@dataclass
class SweepReport:
    columns: List[str]
    rows: List[dict]

    def column(self, name: str) -> list:
        return [r.get(name) for r in self.rows]

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for r in self.rows:
            lines.append(",".join(_cell_text(r.get(c)) for c in self.columns))
        return "\n".join(lines) + "\n"


def _cell_text(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return '"' + " ".join(_cell_text(x) for x in v) + '"'
    return str(v)


# ---------------------------------------------------------------------------
# one cell per task

def _substitute(base: ScenarioConfig, params: dict) -> ScenarioConfig:
    initial = []
    for ic in base.initial:
        ic = dict(ic)
        seg = "theta" in ic
        if "a" in params:
            if not seg:
                raise ValueError("parameter a needs segment-state initial conditions")
            # vertex (w, d) = (a, 0) of the invariant ellipse
            ic["x"], ic["theta"] = params["a"], 0.0
        if "h" in params:
            ic["h" if seg else "y"] = params["h"]
        if "theta" in params:
            if seg:
                ic["theta"] = params["theta"]
            else:
                ic["angle"] = wrap_angle(params["theta"] - HALF_PI)
        if "angle" in params:
            if seg:
                ic["theta"] = wrap_angle(params["angle"] + HALF_PI)
            else:
                ic["angle"] = params["angle"]
        initial.append(ic)
    return base.replace(initial=initial)


def _orbit_rows(cfg: SweepConfig, params: dict) -> List[dict]:
    sc = _substitute(cfg.base, params)
    rows = []
    shape = sc.build_shape()
    for i, pp in enumerate(sc.phase_points()):
        rec = run_orbit(sc, i, shape, pp)
        row = {"orbit": i, "termination": rec.termination,
               "terminated_at": rec.terminated_at, "records": len(rec)}
        row.update(rec.summary)
        rows.append(row)
    return rows


def _rotation_rows(cfg: SweepConfig, params: dict) -> List[dict]:
    h, a, b = params.get("h"), params.get("a"), params.get("b")
    if a is None:
        a = b / math.sqrt(h * h + b * b)
    elif b is None:
        if not 0.0 < a < 1.0:
            raise ValueError("a must lie in (0, 1) at a given height")
        b = float(b_from_a(a, h))
    elif h is None:
        h = b * math.sqrt(1.0 - a * a) / a if 0.0 < a < 1.0 else None
    rot = rotation_number(a, b)
    return [{"h": h, "a": a, "b": b, "phi": rot.phi, "phi_prime": rot.phi_prime}]


def _period4_rows(cfg: SweepConfig, params: dict) -> List[dict]:
    h = params["h"]
    phases = [params["phase"]] if "phase" in params else [0.0, -0.25 * math.pi]
    rows = []
    for phase in phases:
        pts = period_four_extremes(h, phase)
        xs = pts[:, 0]
        x_ext = float(max(abs(xs.min()), abs(xs.max())))
        rows.append({
            "phase": phase, "x_left": float(xs.min()), "x_right": float(xs.max()),
            "extreme_x": x_ext,
            "circle_residual": abs(x_ext * x_ext + h * h - 1.0),
            "ellipse_residual": abs(0.5 * x_ext * x_ext + h * h - 1.0),
        })
    return rows


def _fixed_point_rows(cfg: SweepConfig, params: dict) -> List[dict]:
    shape = cfg.base.build_shape()
    found = find_fixed_points(shape, params["radius"])
    res = [fixed_point_residual(shape, p) for p in found]
    return [{"count": len(found), "max_residual": max(res) if res else None,
             "points": [c for p in found for c in (p.x, p.y)]}]


TASKS = {"orbit": _orbit_rows, "rotation": _rotation_rows,
         "period4": _period4_rows, "fixed_points": _fixed_point_rows}


def _evaluate(args):
    cfg, index, params = args
    try:
        rows = TASKS[cfg.task](cfg, params)
    except Exception as exc:  # recorded, never raised: one bad cell must not stop the sweep
        rows = [{"error": f"{type(exc).__name__}: {exc}"}]
    out = []
    for r in rows:
        row = {"cell": index}
        row.update(params)
        row.update(r)
        out.append(row)
    return out


def resolve_workers(threads: int) -> int:
    """Worker count for ``threads``: 0 means one per CPU."""
    if threads < 0:
        raise ValueError("threads must be >= 0")
    return threads or (os.cpu_count() or 1)


def run_sweep(cfg: SweepConfig, threads: int = 1) -> SweepReport:
    """Evaluate every cell of ``cfg`` and return the rows in cell order.

    ``threads`` worker processes are used (0 means one per CPU); with one
    worker everything runs in the calling process.
    """
    cells = cfg.cells()
    jobs = [(cfg, i, p) for i, p in enumerate(cells)]
    workers = min(resolve_workers(threads), len(jobs))
    if workers <= 1:
        chunks = [_evaluate(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_evaluate, jobs))
    rows = [r for chunk in chunks for r in chunk]
    if cfg.summary:
        keep = set(cfg.summary) | {"cell", "orbit", "error"} | {n for n, _ in cfg.grid} | set(cfg.fixed)
        rows = [{k: v for k, v in r.items() if k in keep} for r in rows]
    columns = ["cell"]
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    return SweepReport(columns, rows)
