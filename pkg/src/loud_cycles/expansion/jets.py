"""Taylor-in-r jets of the half-return solutions, order by order in epsilon.

For one half, ``phi(theta, r, eps) = sum_i eps^i phi_i(theta, r)`` solves
``dr/dtheta = sum_i eps^i F_i(theta, r)`` with ``phi(0) = r`` and each
``phi_i = sum_j xi_{i,j}(theta) r^j``. The coefficient ODEs are triangular in
``j`` and every ``xi_{i,j}`` is obtained by closed-form integration.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..config.settings import settings
from ..errors import ExpansionError, KernelError
from ..systems.piecewise import PiecewiseCenter
from ..systems.polar import HalfSystemPolar
from ..trigcalc.fourier import (
    ZERO_TF,
    ThetaFourierPoly,
    ensure_within,
    tf_add,
    tf_integrate,
    tf_mul,
    tf_sum,
)
from ..trigcalc.rings import SIDES
from ..utils.logger import get_logger
from .series import (
    ONE_TF,
    RSeries,
    compose_polynomial,
    derivative_coefficients,
    reciprocal_one_plus,
    series_add,
    series_mul,
    series_powers,
    series_scale,
)

logger = get_logger(__name__)


class Jet(BaseModel):
    """Coefficients ``xi[side][i][j]`` for ``i <= order`` and ``j <= n``; index 0 of each series is ``r^0``."""

    system: str = Field(..., description="Case tag of the piecewise center")
    rotation: Optional[str] = Field(default=None, description="Line parameter or 'symbolic'")
    order: int = Field(..., description="Highest epsilon order present")
    n: int = Field(..., description="Truncation order in r")
    xi: Dict[str, List[RSeries]] = Field(..., description="Per side, the series phi_0..phi_order")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def series(self, side: str, i: int) -> RSeries:
        if i > self.order:
            raise ExpansionError(f"jet of {self.system} stops at order {self.order}, asked for {i}")
        return self.xi[side][i]

    def coefficient(self, side: str, i: int, j: int) -> ThetaFourierPoly:
        return self.series(side, i)[j]

    def extend(self, phi: Dict[str, RSeries]) -> "Jet":
        """The jet with one more epsilon order appended."""
        return self.model_copy(
            update={
                "order": self.order + 1,
                "xi": {side: self.xi[side] + [phi[side]] for side in SIDES},
            }
        )


def degree_caps(n: int) -> Tuple[int, int]:
    """Theta-power and harmonic caps for truncation order ``n``."""
    return n + settings.theta_cap_offset, settings.harmonic_cap_factor * (n + 2)


def _unperturbed(half: HalfSystemPolar) -> Tuple[ThetaFourierPoly, ThetaFourierPoly]:
    if len(half.f0) != 1 or len(half.g0) != 1:
        raise ExpansionError(
            f"{half.name}: unperturbed data must not depend on r for this expansion"
        )
    return half.true_f0()[0], half.g0[0]


def _integrate(derivative: ThetaFourierPoly, caps: Tuple[int, int]) -> ThetaFourierPoly:
    try:
        return ensure_within(tf_integrate(derivative), *caps)
    except KernelError as e:
        raise ExpansionError(f"series cap exceeded: {e}") from e


class _SideSeries:
    """Parameter-free series of one side built from its order-0 solution."""

    def __init__(self, half: HalfSystemPolar, phi0: RSeries, n: int) -> None:
        a, b = _unperturbed(half)
        self.half = half
        self.n = n
        self.b = b
        degree = max(len(half.f[i]) for i in half.f) - 1
        self.phi_powers = series_powers(phi0, max(degree, 2), n)
        # u = (1 + r g0)^(-1) along the solution
        u = reciprocal_one_plus(series_scale(phi0, b), n)
        self.u_powers = series_powers(u, max(half.l.values()) + 1, n)
        phi_u = series_mul(phi0, u, n)
        phi2_u2 = series_mul(self.phi_powers[2], self.u_powers[2], n)
        # dF0/dr = A (2 r u - r^2 g0 u^2)
        self.d1 = series_scale(
            series_add(series_scale(phi_u, 2), series_scale(phi2_u2, -b)), a
        )
        # d2F0/dr2 = A (2 u - 4 r g0 u^2 + 2 r^2 g0^2 u^3)
        phi_u2 = series_mul(phi0, self.u_powers[2], n)
        phi2_u3 = series_mul(self.phi_powers[2], self.u_powers[3], n)
        self.d2 = series_scale(
            series_add(
                series_scale(u, 2),
                series_scale(phi_u2, -4 * b),
                series_scale(phi2_u3, 2 * tf_mul(b, b)),
            ),
            a,
        )

    def along_solution(self, i: int) -> RSeries:
        """``F_i(theta, phi_0)``."""
        f_i = self.half.true_f(i)
        composed = compose_polynomial(f_i, self.phi_powers, self.n)
        return series_mul(composed, self.u_powers[self.half.l[i]], self.n)

    def derivative_along_solution(self, i: int) -> RSeries:
        """``dF_i/dr(theta, phi_0)``, differentiated before composition."""
        f_i = self.half.true_f(i)
        l_i = self.half.l[i]
        first = series_mul(
            compose_polynomial(derivative_coefficients(f_i), self.phi_powers, self.n),
            self.u_powers[l_i],
            self.n,
        )
        second = series_mul(
            compose_polynomial(f_i, self.phi_powers, self.n), self.u_powers[l_i + 1], self.n
        )
        return series_add(first, series_scale(second, -l_i * self.b))

    def solve_linear(self, forcing: RSeries, caps: Tuple[int, int]) -> RSeries:
        """Solve ``y' = forcing + (dF0/dr) y`` with ``y(0) = 0`` coefficientwise in r."""
        y = [ZERO_TF] * (self.n + 1)
        for j in range(1, self.n + 1):
            derivative = tf_add(
                forcing[j],
                tf_sum(tf_mul(self.d1[a], y[j - a]) for a in range(1, j) if y[j - a]),
            )
            y[j] = _integrate(derivative, caps)
        return y


def _check_n(n: int) -> None:
    if n < 2:
        raise ExpansionError(f"truncation order N must be at least 2, got {n}")


def _order0_side(half: HalfSystemPolar, n: int, caps: Tuple[int, int]) -> RSeries:
    """``(1 + phi g0) phi' = phi^2 f0`` solved for ``xi_{0,2..n}``."""
    a, b = _unperturbed(half)
    xi = [ZERO_TF, ONE_TF]
    dxi = [ZERO_TF, ZERO_TF]
    for j in range(2, n + 1):
        square = tf_sum(tf_mul(xi[k], xi[j - k]) for k in range(1, j))
        cross = tf_sum(tf_mul(xi[k], dxi[j - k]) for k in range(1, j - 1))
        derivative = tf_add(tf_mul(a, square), -tf_mul(b, cross))
        dxi.append(derivative)
        xi.append(_integrate(derivative, caps))
        logger.debug("Order 0 coefficient", system=half.name, side=half.side, j=j, terms=len(xi[-1]))
    return xi


def expand_order0(center: PiecewiseCenter, n: int) -> Jet:
    """Unperturbed solution jets ``xi_{0,j}`` for both sides."""
    _check_n(n)
    caps = degree_caps(n)
    logger.info("Expansion started", system=center.name, order=0, n=n)
    xi = {side: [_order0_side(center.half(side), n, caps)] for side in SIDES}
    logger.info(
        "Expansion finished",
        system=center.name,
        order=0,
        n=n,
        terms=sum(len(t) for side in SIDES for t in xi[side][0]),
    )
    return Jet(
        system=center.name,
        rotation=center.plus.rotation,
        order=0,
        n=n,
        xi=xi,
    )


def _check_jet(center: PiecewiseCenter, jet: Jet, order: int, n: int) -> None:
    if jet.system != center.name or jet.n != n:
        raise ExpansionError(
            f"jet ({jet.system}, N={jet.n}) does not belong to ({center.name}, N={n})"
        )
    if jet.order != order:
        raise ExpansionError(f"expected a jet of order {order}, got {jet.order}")


def expand_order1(center: PiecewiseCenter, jet0: Jet, n: int) -> Jet:
    """First-order jets: ``phi_1' = F_1(phi_0) + dF_0/dr(phi_0) phi_1``."""
    _check_jet(center, jet0, 0, n)
    caps = degree_caps(n)
    logger.info("Expansion started", system=center.name, order=1, n=n)
    phi1 = {}
    for side in SIDES:
        context = _SideSeries(center.half(side), jet0.series(side, 0), n)
        phi1[side] = context.solve_linear(context.along_solution(1), caps)
    logger.info(
        "Expansion finished",
        system=center.name,
        order=1,
        n=n,
        terms=sum(len(t) for side in SIDES for t in phi1[side]),
    )
    return jet0.extend(phi1)


def expand_order2(center: PiecewiseCenter, jet0: Jet, jet1: Jet, n: int) -> Jet:
    """Second-order jets from ``F_2``, ``dF_1/dr phi_1``, ``d2F_0/dr2 phi_1^2 / 2`` and ``dF_0/dr phi_2``."""
    if center.is_symbolic:
        raise ExpansionError("second order is only available for a fixed rational tau")
    _check_jet(center, jet1, 1, n)
    if jet0.system != center.name or jet0.n != n:
        raise ExpansionError(f"order-0 jet does not belong to ({center.name}, N={n})")
    caps = degree_caps(n)
    logger.info("Expansion started", system=center.name, order=2, n=n)
    phi2 = {}
    for side in SIDES:
        half = center.half(side)
        if 2 not in half.f:
            raise ExpansionError(f"{half.name} carries no second-order data")
        context = _SideSeries(half, jet0.series(side, 0), n)
        phi1 = jet1.series(side, 1)
        forcing = series_add(
            context.along_solution(2),
            series_mul(context.derivative_along_solution(1), phi1, n),
            series_scale(series_mul(context.d2, series_mul(phi1, phi1, n), n), Fraction(1, 2)),
        )
        phi2[side] = context.solve_linear(forcing, caps)
        logger.debug("Order 2 side finished", system=center.name, side=side)
    logger.info(
        "Expansion finished",
        system=center.name,
        order=2,
        n=n,
        terms=sum(len(t) for side in SIDES for t in phi2[side]),
    )
    return jet1.extend(phi2)


def expand(center: PiecewiseCenter, order: int, n: int) -> Jet:
    """Jets up to ``order`` (0, 1 or 2)."""
    if order not in (0, 1, 2):
        raise ExpansionError(f"order must be 0, 1 or 2, got {order}")
    jet = expand_order0(center, n)
    if order >= 1:
        jet = expand_order1(center, jet, n)
    if order >= 2:
        jet = expand_order2(center, jet, jet, n)
    return jet
