"""Exact trigonometric computer-algebra kernel."""

from .fourier import (
    COS,
    SIN,
    ThetaFourierPoly,
    ZERO_TF,
    ensure_within,
    line_angle,
    tf_add,
    tf_derivative,
    tf_eval_numeric,
    tf_eval_pi,
    tf_from_power_basis,
    tf_integrate,
    tf_mul,
    tf_rotate,
    tf_rotate_symbolic,
    tf_scale,
    tf_sub,
    tf_sum,
)
from .pipoly import PI_FIELD, PiPoly, parameter_pi_coefficients, pi_split
from .rings import (
    KERNEL_RING,
    PARAMETER_NAMES,
    SIDE_PARAMETERS,
    display_name,
    gen,
    parse_fraction,
)

__all__ = [
    "COS",
    "SIN",
    "ThetaFourierPoly",
    "ZERO_TF",
    "ensure_within",
    "line_angle",
    "tf_add",
    "tf_derivative",
    "tf_eval_numeric",
    "tf_eval_pi",
    "tf_from_power_basis",
    "tf_integrate",
    "tf_mul",
    "tf_rotate",
    "tf_rotate_symbolic",
    "tf_scale",
    "tf_sub",
    "tf_sum",
    "PI_FIELD",
    "PiPoly",
    "parameter_pi_coefficients",
    "pi_split",
    "KERNEL_RING",
    "PARAMETER_NAMES",
    "SIDE_PARAMETERS",
    "display_name",
    "gen",
    "parse_fraction",
]
