"""Multiple-correction continued fraction approximations with exact coefficients."""

from .algebra import Poly, RationalFunction, as_rational, ratfn_collapse_cf
from .contfrac import CorrectionState, GeneralizedCF, Layer, McPoint, convergent, detect_mc_point, eval_cf, state_to_cf, to_simplified_form
from .engine import FunctionSpec, rate_of_convergence, relative_error, run_corrections, solve_next_layer, solve_phi0
from .series import AsymptoticSeries, series_order

__version__ = "0.1.0"

__all__ = [
    "AsymptoticSeries",
    "CorrectionState",
    "FunctionSpec",
    "GeneralizedCF",
    "Layer",
    "McPoint",
    "Poly",
    "RationalFunction",
    "as_rational",
    "convergent",
    "detect_mc_point",
    "eval_cf",
    "rate_of_convergence",
    "ratfn_collapse_cf",
    "relative_error",
    "run_corrections",
    "series_order",
    "solve_next_layer",
    "solve_phi0",
    "state_to_cf",
    "to_simplified_form",
]
