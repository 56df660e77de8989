"""Seed lists shipped with the package."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import List

from .dynamics import PhasePoint
from .scenario import ScenarioConfig, scenario_from_dict


@lru_cache(maxsize=None)
def _load(name: str) -> dict:
    text = resources.files("bouncing_billiards").joinpath("data", name).read_text("utf-8")
    return json.loads(text)


def square_periodic_seeds() -> List[dict]:
    """Periodic points of the unit square, with period and stability class."""
    return [dict(s) for s in _load("square_seeds.json")["periodic"]]


def square_chaotic_seeds() -> List[PhasePoint]:
    return [PhasePoint(s["x"], s["y"], s["angle"]) for s in _load("square_seeds.json")["chaotic"]]


def figure_scenarios() -> List[ScenarioConfig]:
    """Long-run scenarios for the ellipse and the three parabola heights."""
    return [scenario_from_dict(d) for d in _load("figure_seeds.json")["figures"]]
