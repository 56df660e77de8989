"""Standalone SVG 1.1 figures: the shape outline plus one dot cloud per orbit."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import ParabolaArc, Segment, Shape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22")


@dataclass
class SvgStyle:
    width: float = 800.0
    dot_radius: float = 1.0
    margin: float = 0.05
    shape_color: str = "#000000"
    shape_stroke: float = 1.5
    background: Optional[str] = "#ffffff"
    max_points: Optional[int] = None
    colors: Sequence[str] = PALETTE
    title: Optional[str] = None


def _num(v: float) -> str:
    # fixed precision keeps files small and identical across runs and locales
    s = format(float(v), ".3f")
    return "0.000" if s == "-0.000" else s


def _thin(pts: np.ndarray, max_points):
    if max_points is None or len(pts) <= max_points:
        return pts
    idx = np.linspace(0, len(pts) - 1, max_points).round().astype(int)
    return pts[idx]


def render_svg(shape: Shape, records=(), style: SvgStyle = None) -> str:
    """SVG text of ``shape`` and the positions recorded in ``records``.

    The view box fits the outline and every dot with a margin of
    ``style.margin`` times the data extent on each side, at equal scale on
    both axes.  Output depends only on the inputs.
    """
    style = style or SvgStyle()
    outline = np.asarray(shape.outline(), dtype=float)
    clouds = [_thin(np.asarray(r.points, dtype=float)[:, :2], style.max_points) for r in records]
    allpts = np.vstack([outline] + [c for c in clouds if len(c)])
    finite = allpts[np.all(np.isfinite(allpts), axis=1)]
    lo, hi = finite.min(axis=0), finite.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    lo = lo - style.margin * span
    hi = hi + style.margin * span
    span = hi - lo
    scale = style.width / span[0]
    height = span[1] * scale

    def px(x):
        return (x - lo[0]) * scale

    def py(y):
        return (hi[1] - y) * scale

    out = ['<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{_num(style.width)}" height="{_num(height)}" '
           f'viewBox="0 0 {_num(style.width)} {_num(height)}">']
    if style.title:
        out.append(f"<title>{_escape(style.title)}</title>")
    if style.background:
        out.append(f'<rect x="0" y="0" width="{_num(style.width)}" height="{_num(height)}" '
                   f'fill="{style.background}"/>')

    cmds = [f"M{_num(px(outline[0, 0]))},{_num(py(outline[0, 1]))}"]
    cmds += [f"L{_num(px(x))},{_num(py(y))}" for x, y in outline[1:]]
    closed = not isinstance(shape, (Segment, ParabolaArc))
    path = " ".join(cmds) + (" Z" if closed else "")
    fill = "#e8e8e8" if closed else "none"
    out.append(f'<path d="{path}" fill="{fill}" stroke="{style.shape_color}" '
               f'stroke-width="{_num(style.shape_stroke)}"/>')

    r = _num(style.dot_radius)
    for i, cloud in enumerate(clouds):
        color = style.colors[i % len(style.colors)]
        out.append(f'<g fill="{color}" stroke="none">')
        for x, y in cloud:
            if np.isfinite(x) and np.isfinite(y):
                out.append(f'<circle cx="{_num(px(x))}" cy="{_num(py(y))}" r="{r}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
