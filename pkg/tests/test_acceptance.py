"""Acceptance battery at full budgets, one test per criterion.

Each test records a one-line PASS/FAIL summary with the measured values;
the lines are printed together at the end of the pytest run.
"""
import time

import pytest

from bouncing_billiards import verify
from bouncing_billiards.corpus import figure_scenarios
from bouncing_billiards.dynamics import orbit
from bouncing_billiards.svg import SvgStyle, render_svg

from conftest import ACCEPTANCE_LINES

FULL = verify.BUDGETS["full"]


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    dt = time.perf_counter() - t0
    for c in out if isinstance(out, list) else [out]:
        c.seconds = dt
    return out


def _record(claim):
    line = claim.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert claim.passed, line


@pytest.fixture(scope="module")
def invariant_claims():
    return _timed(verify.check_invariants, FULL["inv_orbits"], FULL["inv_steps"])


def test_criterion_01_invariant_conservation(invariant_claims):
    _record(invariant_claims[0])


def test_criterion_02_invariant_ellipse_membership(invariant_claims):
    _record(invariant_claims[1])


def test_criterion_03_rotation_number_formula():
    _record(_timed(verify.check_rotation, FULL["rot_ellipses"], FULL["rot_steps"]))


def test_criterion_04_rotation_derivative():
    _record(_timed(verify.check_derivative))


def test_criterion_05_period_thresholds():
    _record(_timed(verify.check_thresholds))


def test_criterion_06_m_and_w_loci():
    _record(_timed(verify.check_mw_loci))


def test_criterion_07_period_seven():
    _record(_timed(verify.check_period_seven))


def test_criterion_08_oracle_equivalence():
    _record(_timed(verify.check_oracle, FULL["oracle_states"]))


def test_criterion_09_measure_preservation():
    _record(_timed(verify.check_measure, FULL["det_points"]))


def test_criterion_10_disc_rigidity():
    _record(_timed(verify.check_disc_rigidity, FULL["disc_orbits"], FULL["disc_steps"]))


def test_criterion_11_fixed_point_families():
    _record(_timed(verify.check_fixed_points, FULL["fp_radii"]))


def test_criterion_12_curvature_inequality():
    _record(_timed(verify.check_curvature_inequality, FULL["inequality_arcs"]))


def test_criterion_13_polygon_eigenvalues():
    _record(_timed(verify.check_square_eigenvalues, FULL["square_seeds"]))


def test_criterion_14_lyapunov_chaos_vs_integrable():
    _record(_timed(verify.check_lyapunov, FULL["lyap_orbits"], FULL["lyap_steps"],
                   FULL["chaos_steps"]))


def test_criterion_15_boundedness():
    _record(_timed(verify.check_boundedness, FULL["figure_steps"]))


@pytest.mark.parametrize("scenario", figure_scenarios(), ids=lambda s: s.id)
def test_figure_svg_smoke(scenario, tmp_path):
    # renders the long-run figures; nothing about the picture is asserted
    shape = scenario.build_shape()
    recs = [orbit(shape, pp, 20_000, record_every=4) for pp in scenario.phase_points()]
    (tmp_path / f"{scenario.id}.svg").write_text(
        render_svg(shape, recs, SvgStyle(dot_radius=0.6, title=scenario.id)), encoding="utf-8")
