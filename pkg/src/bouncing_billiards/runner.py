"""Run the orbits of a scenario and fill in the optional summary fields."""
from __future__ import annotations

import math
from typing import List

import numpy as np

from .analysis import OrbitTerminated, detect_periodic, finite_diff_jacobian, lyapunov_exponent
from .dynamics import OrbitRecord, SegmentState, orbit
from .errors import BilliardError
from .geometry import Segment
from .scenario import ScenarioConfig
from .segment_theory import measured_rotation, rotation_number, to_ellipse_coords, invariants


def _segment_rotation(pp, n):
    """Measured and predicted rotation for a segment orbit above the segment."""
    if pp[1] <= 0.0:
        return None
    state = SegmentState.from_phase_point(pp)
    e = to_ellipse_coords(state)
    inv = invariants(e)
    return measured_rotation(e, n), rotation_number(inv.a, inv.b).phi


def run_orbit(cfg: ScenarioConfig, index: int = 0, shape=None, pp=None,
              steps: int = None) -> OrbitRecord:
    """Orbit of initial condition ``index`` with the analyses the config asks for."""
    shape = shape if shape is not None else cfg.build_shape()
    pp = pp if pp is not None else cfg.phase_points()[index]
    n = cfg.steps if steps is None else steps
    rec = orbit(shape, pp, n, cfg.record_every, nudge=cfg.nudge)
    rec.scenario_id = f"{cfg.id}#{index}" if cfg.id else f"#{index}"
    an = cfg.analysis
    s = rec.summary
    if an["rotation"] and isinstance(shape, Segment) and n > 0:
        try:
            got = _segment_rotation(pp, n)
        except BilliardError as exc:
            s["rotation_error"] = type(exc).__name__
        else:
            if got is not None:
                s["measured_rotation"], s["predicted_rotation"] = got
    if an["lyapunov"] and n > 0:
        try:
            s["lyapunov"] = lyapunov_exponent(shape, pp, n)
        except OrbitTerminated as exc:
            s["lyapunov"] = exc.partial
            s["lyapunov_partial_steps"] = exc.steps
        except BilliardError as exc:
            s["lyapunov"] = math.nan
            s["lyapunov_error"] = type(exc).__name__
    if an["jacobian"]:
        try:
            J = finite_diff_jacobian(shape, pp)
            s["jacobian_det"] = float(np.linalg.det(J))
        except BilliardError as exc:
            s["jacobian_error"] = type(exc).__name__
    if an["periodic"]:
        rep = detect_periodic(shape, pp, an["max_period"])
        if rep is None:
            s["period"] = None
        else:
            s["period"] = rep.period
            s["eigenvalues"] = [[float(z.real), float(z.imag)] for z in rep.eigenvalues]
            s["monodromy_det"] = rep.determinant
    return rec


def run_scenario(cfg: ScenarioConfig, steps: int = None) -> List[OrbitRecord]:
    shape = cfg.build_shape()
    return [run_orbit(cfg, i, shape, pp, steps) for i, pp in enumerate(cfg.phase_points())]
