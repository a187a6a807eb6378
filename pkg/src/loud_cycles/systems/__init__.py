"""Loud centers, perturbation templates and piecewise assembly."""

from .planar import (
    BUILTIN_NAMES,
    PlanarQuadratic,
    builtin_system,
    linear_center,
    perturbation_template,
    system_by_name,
)
from .polar import DISPLAY_SCALES, HalfSystemPolar, polar_components, to_polar
from .piecewise import (
    REGISTRY,
    PiecewiseCenter,
    case_name,
    make_case,
    make_piecewise,
    resolve_case,
)

__all__ = [
    "BUILTIN_NAMES",
    "PlanarQuadratic",
    "builtin_system",
    "linear_center",
    "perturbation_template",
    "system_by_name",
    "DISPLAY_SCALES",
    "HalfSystemPolar",
    "polar_components",
    "to_polar",
    "REGISTRY",
    "PiecewiseCenter",
    "case_name",
    "make_case",
    "make_piecewise",
    "resolve_case",
]
