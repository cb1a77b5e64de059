"""Sub-Riemannian geodesics on SE(2).

Thin Python layer over the C++ engine: Hamiltonian flow, two-point shooting,
isoenergetic fans, orientation lift of images and curve reports.
"""

import json as _json

from ._core import (  # noqa: F401
    BvpOptions,
    BvpSolution,
    ConfigPoint,
    GeodesicCurve,
    IrregularPoint,
    MomentumFrame,
    NoConvergence,
    NonFiniteState,
    ParseError,
    PhasePoint,
    ShootingParams,
    ZeroEnergy,
    ZeroGradient,
    angle_dist,
    angle_wrap,
    contact_form_eval,
    endpoint_residual,
    frame_at,
    from_momentum_frame,
    from_pendulum,
    geodesic_fan,
    hamilton_rhs_reduced,
    hamiltonian,
    integrate,
    lift,
    shoot,
    solve_bvp,
    theta_closed_form,
    to_momentum_frame,
    to_pendulum,
)
from ._core import curve_report_json as _curve_report_json


def analyze(curve):
    """Curve report as a dict (see the JSON schema in the README)."""
    return _json.loads(_curve_report_json(curve))


__version__ = "0.1.0"
