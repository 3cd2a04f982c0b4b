"""Integer factorization with (2,2)-decomposable genus-2 curves.

Stage 1 runs a Montgomery-style ladder on a Kummer surface given by squared
theta constants; the result is mapped to the two underlying elliptic curves,
where a gcd test and a simple stage 2 look for a factor.
"""

from hecm.curvegen import CurveParams, build_curve_system, curve_stream
from hecm.driver import RunConfig, hecm_run, hecm_stage1
from hecm.modring import FactorSignal, OpCounter, Ring
from hecm.multiplier import lcm_multiplier

__all__ = [
    "CurveParams", "FactorSignal", "OpCounter", "Ring", "RunConfig",
    "build_curve_system", "curve_stream", "hecm_run", "hecm_stage1", "lcm_multiplier",
]
