"""Center test for mixed piecewise pairs via first integrals and landing series."""

from .integrals import FirstIntegral, first_integral
from .sigma import (
    CENTER_CERTIFIED,
    NOT_CENTER,
    CenterVerdict,
    SigmaSeries,
    is_piecewise_center,
    line_direction,
    sigma_series,
)

__all__ = [
    "FirstIntegral",
    "first_integral",
    "CENTER_CERTIFIED",
    "NOT_CENTER",
    "CenterVerdict",
    "SigmaSeries",
    "is_piecewise_center",
    "line_direction",
    "sigma_series",
]
