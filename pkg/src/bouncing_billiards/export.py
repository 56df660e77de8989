"""Orbit persistence: CSV rows and JSON reports.

Numbers are written with 17 significant digits, which is enough for every
double to read back bit for bit, and always with a '.' decimal point.
"""
from __future__ import annotations

import io
import json
import math

import numpy as np

from .dynamics import OrbitRecord

CSV_HEADER = "step,px,py,angle,wx,wy"


def fmt(value: float) -> str:
    """Locale-independent 17-digit representation of a float."""
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def export_orbit_csv(rec: OrbitRecord) -> str:
    """CSV text with one row per recorded iterate, LF line endings."""
    lines = [CSV_HEADER]
    for k, (x, y, a), (wx, wy) in zip(rec.steps, rec.points, rec.bounces):
        lines.append(f"{int(k)},{fmt(x)},{fmt(y)},{fmt(a)},{fmt(wx)},{fmt(wy)}")
    return "\n".join(lines) + "\n"


def read_orbit_csv(text: str) -> OrbitRecord:
    """Inverse of :func:`export_orbit_csv` (summary and termination are not stored)."""
    rows = text.splitlines()
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    data = [r.split(",") for r in rows[1:] if r]
    steps = np.array([int(r[0]) for r in data], dtype=int)
    vals = np.array([[float(c) for c in r[1:]] for r in data], dtype=float).reshape(-1, 5)
    return OrbitRecord(vals[:, :3].copy(), vals[:, 3:].copy(), steps)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def orbit_report(rec: OrbitRecord, include_points: bool = False) -> dict:
    out = {
        "scenario_id": rec.scenario_id,
        "records": len(rec),
        "termination": rec.termination,
        "terminated_at": rec.terminated_at,
        "summary": _jsonable(rec.summary),
    }
    if include_points:
        out["points"] = _jsonable(rec.points)
        out["bounces"] = _jsonable(rec.bounces)
    return out


def orbit_report_json(records, include_points: bool = False) -> str:
    reports = [orbit_report(r, include_points) for r in records]
    return json.dumps(reports, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(path, text: str):
    """Write UTF-8 text with LF line endings regardless of platform."""
    with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
