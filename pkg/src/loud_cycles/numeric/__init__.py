"""Numeric oracle: Cartesian half-returns, displacement, cycle location and pseudo-Hopf runs."""

from .checks import ClosureRecord, ConstructionCheck, closure_sweep, verify_construction
from .displacement import (
    CycleZero,
    DisplacementSample,
    EpsilonScaling,
    displacement,
    displacement_grid,
    epsilon_scaling,
    jet_prediction,
    locate_cycles,
    loglog_slope,
    oracle_sweep,
)
from .flow import (
    CONTACT_THRESHOLD,
    HalfReturn,
    NumericParams,
    PiecewiseField,
    closure_error,
    contact_profile,
    full_return,
    half_return,
    sliding_segment,
)
from .pseudo_hopf import PseudoHopfReport, pseudo_hopf_demo

__all__ = [
    "ClosureRecord",
    "ConstructionCheck",
    "closure_sweep",
    "verify_construction",
    "CycleZero",
    "DisplacementSample",
    "EpsilonScaling",
    "displacement",
    "displacement_grid",
    "epsilon_scaling",
    "jet_prediction",
    "locate_cycles",
    "loglog_slope",
    "oracle_sweep",
    "CONTACT_THRESHOLD",
    "HalfReturn",
    "NumericParams",
    "PiecewiseField",
    "closure_error",
    "contact_profile",
    "full_return",
    "half_return",
    "sliding_segment",
    "PseudoHopfReport",
    "pseudo_hopf_demo",
]
