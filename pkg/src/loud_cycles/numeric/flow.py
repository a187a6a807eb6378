"""Cartesian flow of a perturbed piecewise quadratic field and its half-returns to the line.

The line through the origin has direction ``u = (cos a, sin a)`` with
``cos a = (1 - tau^2)/(1 + tau^2)`` and ``sin a = 2 tau/(1 + tau^2)``; the plus
half acts where ``n . (x, y) > 0`` for the normal ``n = (-sin a, cos a)``.
A signed radius ``r`` denotes the line point ``r u``.
"""

import math
from fractions import Fraction
from typing import Dict, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..config.settings import settings
from ..errors import EscapeError, NumericIntegrationError, SlidingError
from ..systems.piecewise import case_name, resolve_case
from ..systems.planar import PlanarQuadratic, system_by_name
from ..trigcalc.rings import ETAS, PARAMETER_NAMES, parameter_name, parse_fraction
from ..utils.logger import get_logger

logger = get_logger(__name__)

Side = Literal["plus", "minus"]

# Smallest |d/dt (n . z)| accepted at a crossing.
CONTACT_THRESHOLD = 1e-8


class NumericParams(BaseModel):
    """Concrete perturbation, small parameter and integrator settings."""

    values: Dict[str, float] = Field(
        default_factory=dict, description="Perturbation parameters; missing ones are zero"
    )
    eps: float = Field(default=0.0, ge=0.0, description="Size of the perturbation")
    tau: Fraction = Field(default=Fraction(1, 2), description="Line parameter")
    b: float = Field(default=0.0, description="Constant added to the minus field along n")
    rtol: float = Field(default_factory=lambda: settings.integrator_rtol, gt=0)
    atol: float = Field(default_factory=lambda: settings.integrator_atol, gt=0)
    method: str = Field(default_factory=lambda: settings.integrator_method)
    escape_radius: float = Field(default=2.0, gt=0, description="Radius treated as escape")
    max_time: float = Field(default=4 * math.pi, gt=0, description="Time budget of one half-turn")

    model_config = ConfigDict(frozen=True)

    @field_validator("values")
    @classmethod
    def validate_values(cls, v: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(v) - set(PARAMETER_NAMES))
        if unknown:
            raise ValueError(f"unknown perturbation parameters: {unknown}")
        return {name: float(value) for name, value in v.items()}

    @field_validator("tau", mode="before")
    @classmethod
    def validate_tau(cls, v) -> Fraction:
        tau = parse_fraction(v)
        if not -1 <= tau < 1:
            raise ValueError(f"tau must lie in [-1, 1), got {tau}")
        return tau

    def noise(self, r: float) -> float:
        """Displacement magnitude indistinguishable from integration error at radius ``r``."""
        return 100.0 * (self.atol + self.rtol * abs(r))


class HalfReturn(BaseModel):
    """One half-turn from the line point ``r u`` back to the line."""

    side: str = Field(..., description="plus or minus")
    start: float = Field(..., description="Signed starting radius")
    landing: float = Field(..., description="Signed landing radius")
    time: float = Field(..., description="Elapsed time (absolute value)")
    point: Tuple[float, float] = Field(..., description="Landing point")
    contact: float = Field(..., description="d/dt (n . z) at the landing point")

    @property
    def radius(self) -> float:
        return abs(self.landing)


class PiecewiseField:
    """Two perturbed quadratic fields glued along the line of ``params.tau``."""

    def __init__(
        self, name: str, plus: PlanarQuadratic, minus: PlanarQuadratic, params: NumericParams
    ) -> None:
        self.name = name
        self.plus = plus
        self.minus = minus
        self.params = params
        tau = params.tau
        norm = 1 + tau * tau
        c, s = float((1 - tau * tau) / norm), float(2 * tau / norm)
        self.direction = np.array([c, s])
        self.normal = np.array([-s, c])
        self._perturbation = {
            side: (
                np.array([params.values.get(parameter_name("a", side, eta), 0.0) for eta in ETAS]),
                np.array([params.values.get(parameter_name("b", side, eta), 0.0) for eta in ETAS]),
            )
            for side in ("plus", "minus")
        }

    @classmethod
    def from_case(cls, tag: str, params: NumericParams) -> "PiecewiseField":
        """Field of a registry case (``s1`` .. ``s4``, ``s1s2``, ``linear``)."""
        plus_name, minus_name = resolve_case(tag)
        return cls.from_pair(plus_name, minus_name, params)

    @classmethod
    def from_pair(cls, plus_name: str, minus_name: str, params: NumericParams) -> "PiecewiseField":
        plus, minus = system_by_name(plus_name), system_by_name(minus_name)
        return cls(case_name(plus.name, minus.name), plus, minus, params)

    def with_params(self, **update) -> "PiecewiseField":
        """Same halves with some numeric parameters replaced."""
        return PiecewiseField(self.name, self.plus, self.minus, self.params.model_copy(update=update))

    def half(self, side: Side) -> PlanarQuadratic:
        if side == "plus":
            return self.plus
        if side == "minus":
            return self.minus
        raise NumericIntegrationError(f"unknown side {side!r}")

    def vector(self, side: Side, x: float, y: float) -> np.ndarray:
        """``Z^side + eps Z_1^side`` (plus ``b n`` on the minus side) at ``(x, y)``."""
        px, qy = self.half(side).evaluate(x, y)
        monomials = np.array([x, y, x * x, x * y, y * y])
        a, b = self._perturbation[side]
        value = np.array([px, qy]) + self.params.eps * np.array([a @ monomials, b @ monomials])
        if side == "minus" and self.params.b:
            value = value + self.params.b * self.normal
        return value

    def switching(self, point) -> float:
        """``h(x, y) = n . (x, y)``, positive on the plus side."""
        return float(self.normal @ np.asarray(point))

    def contact(self, side: Side, point) -> float:
        """Derivative of ``h`` along the flow of one half."""
        return float(self.normal @ self.vector(side, point[0], point[1]))

    def line_point(self, r: float) -> np.ndarray:
        return r * self.direction

    def _flow_to_line(self, side: Side, start: np.ndarray, backward: bool) -> HalfReturn:
        params = self.params
        time_sign = -1.0 if backward else 1.0
        side_sign = 1.0 if side == "plus" else -1.0
        initial = time_sign * side_sign * self.contact(side, start)
        if initial <= CONTACT_THRESHOLD:
            raise SlidingError(
                f"{self.name}: {side} flow does not enter its half-plane at "
                f"({start[0]:.6g}, {start[1]:.6g}) (contact {initial:.3e})"
            )

        def rhs(t, z):
            return time_sign * self.vector(side, z[0], z[1])

        def crossing(t, z):
            return self.switching(z)

        crossing.terminal = True
        crossing.direction = -side_sign

        def escape(t, z):
            return params.escape_radius - math.hypot(z[0], z[1])

        escape.terminal = True
        escape.direction = -1

        solution = solve_ivp(
            rhs,
            (0.0, params.max_time),
            start,
            method=params.method,
            rtol=params.rtol,
            atol=params.atol,
            events=[crossing, escape],
        )
        if solution.status == -1:
            raise NumericIntegrationError(f"{self.name}: {side} integration failed: {solution.message}")
        if solution.t_events[1].size:
            raise EscapeError(
                f"{self.name}: {side} trajectory from r={start @ self.direction:.6g} "
                f"left the disc of radius {params.escape_radius}"
            )
        if not solution.t_events[0].size:
            raise NumericIntegrationError(
                f"{self.name}: {side} trajectory did not return to the line within t={params.max_time:.3g}"
            )
        point = solution.y_events[0][0]
        contact = self.contact(side, point)
        if abs(contact) <= CONTACT_THRESHOLD:
            raise SlidingError(f"{self.name}: {side} trajectory meets the line tangentially")
        return HalfReturn(
            side=side,
            start=float(start @ self.direction),
            landing=float(point @ self.direction),
            time=float(solution.t_events[0][0]),
            point=(float(point[0]), float(point[1])),
            contact=contact,
        )


def half_return(field: PiecewiseField, r: float, side: Side) -> HalfReturn:
    """Flow from ``r u`` (``r > 0``) through one half-plane back to the line.

    The plus half is integrated forward in time through ``h > 0``; the minus
    half backward through ``h < 0``. Both land on the opposite ray, so the
    signed landing radius is negative.
    """
    if r <= 0:
        raise NumericIntegrationError(f"starting radius must be positive, got {r}")
    result = field._flow_to_line(side, field.line_point(r), backward=(side == "minus"))
    logger.debug(
        "Half-return",
        system=field.name,
        side=side,
        r=r,
        landing=result.landing,
        time=result.time,
    )
    return result


def full_return(field: PiecewiseField, r: float) -> float:
    """Forward full turn: plus half from ``r u``, then minus half back to the starting ray."""
    first = half_return(field, r, "plus")
    second = field._flow_to_line("minus", np.array(first.point), backward=False)
    return second.landing


def closure_error(field: PiecewiseField, r: float) -> float:
    """``|full-turn return - r|``; zero up to integration error for a center."""
    error = abs(full_return(field, r) - r)
    logger.debug("Center closure", system=field.name, tau=str(field.params.tau), r=r, error=error)
    return error


def contact_profile(field: PiecewiseField, radii) -> Dict[str, np.ndarray]:
    """Contacts of both halves along the line at the signed radii."""
    radii = np.asarray(radii, dtype=float)
    return {
        side: np.array([field.contact(side, field.line_point(s)) for s in radii])
        for side in ("plus", "minus")
    }


def sliding_segment(field: PiecewiseField, span: Optional[float] = None) -> Optional[Tuple[float, float]]:
    """Signed-radius interval near the origin where the two halves point to opposite sides."""
    b = field.params.b
    if not b:
        return None
    span = span or 4 * abs(b)

    def minus_contact(s):
        return field.contact("minus", field.line_point(s))

    def plus_contact(s):
        return field.contact("plus", field.line_point(s))

    try:
        end = brentq(minus_contact, -span, span, xtol=1e-15)
        start = brentq(plus_contact, -span, span, xtol=1e-15)
    except ValueError as e:
        raise NumericIntegrationError(f"{field.name}: no contact point within {span:.3g} of the origin") from e
    return (min(start, end), max(start, end))
