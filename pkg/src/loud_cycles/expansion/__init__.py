"""Exact jets of the half-return solutions and of the difference function."""

from .difference import (
    PSI2_DISPLAY,
    DifferenceJet,
    check_invariants,
    difference,
    epsilon_absorb,
    published_convention,
    published_display,
    reflect_pi,
    universal_psi_1_1,
    universal_psi_2_1,
)
from .jets import Jet, degree_caps, expand, expand_order0, expand_order1, expand_order2
from .symbolic import (
    SymbolicDifferenceJet,
    TauRational,
    difference_symbolic_tau,
    substitute_line,
)

__all__ = [
    "DifferenceJet",
    "check_invariants",
    "difference",
    "PSI2_DISPLAY",
    "epsilon_absorb",
    "published_convention",
    "published_display",
    "reflect_pi",
    "universal_psi_1_1",
    "universal_psi_2_1",
    "Jet",
    "degree_caps",
    "expand",
    "expand_order0",
    "expand_order1",
    "expand_order2",
    "SymbolicDifferenceJet",
    "TauRational",
    "difference_symbolic_tau",
    "substitute_line",
]
