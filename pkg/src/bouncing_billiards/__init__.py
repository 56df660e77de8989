"""Bouncing outer billiards on convex shapes.

A phase point is a position outside the shape together with a direction
that sees it.  One step bounces the ray off the boundary, moves the point
to the same distance along the reflected ray and reflects the return
direction across the bisector of the visual cone.
"""
from .errors import (BilliardError, BounceOffSegment, DegenerateBounce, DegenerateOrbit,
                     InsideShape, LeftVisibility, NotMonotone, OnCorner,
                     PerturbationLeftDomain, SchemaError, ValidationError)
from .geometry import (BounceData, Disc, Ellipse, ParabolaArc, Polygon, Segment, Shape, Vec2,
                       VisualCone, bisector_direction, boundary_data, contains, ray_intersect,
                       square, visual_cone, wrap_angle)
from .dynamics import (OrbitRecord, PhasePoint, SegmentState, StepTrace, apply_map,
                       in_visibility_domain, iterate_map, orbit, segment_map, step, step_segment)
from .segment_theory import (EllipseCoords, Invariants, build_periodic_orbit, ellipse_map,
                             from_ellipse_coords, invariants, measured_rotation, rho_closed_form,
                             rho_numeric, rotation_number, rotation_range, step_ellipse,
                             to_ellipse_coords)
from .analysis import (ArcSpec, PeriodicOrbitReport, bounce_jacobian_closed_form,
                       detect_periodic, find_fixed_points, finite_diff_jacobian,
                       lemma_quadrature, lyapunov_exponent)
from .scenario import ScenarioConfig, SweepConfig, parse_scenario, parse_sweep
from .export import export_orbit_csv, read_orbit_csv
from .svg import SvgStyle, render_svg
from .sweep import run_sweep

__version__ = "0.1.0"
