"""Half-map landing series and the center test for mixed piecewise pairs.

Along a line ``L_v(lam) = lam v`` through the origin, a point at ``lam > 0``
returns to the line at ``sigma(lam) < 0`` with ``H(L_v(lam)) = H(L_v(sigma))``.
Two halves glue into a center exactly when their landing series coincide.
"""

from fractions import Fraction
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from ..errors import SystemDefinitionError
from ..systems.planar import system_by_name
from ..trigcalc.fourier import line_angle
from ..trigcalc.rings import from_qq, parse_fraction, to_qq
from ..utils.logger import get_logger
from .integrals import LAM, PLANE_RING, FirstIntegral, first_integral

logger = get_logger(__name__)

Direction = Tuple[Fraction, Fraction]

CENTER_CERTIFIED = "center-certified-to-order"
NOT_CENTER = "not-center"


class SigmaSeries(BaseModel):
    """``sigma(lam) = -lam + sum_{k>=2} s_k lam^k`` truncated at ``order``."""

    name: str = Field(..., description="System tag of the first integral")
    direction: Direction = Field(..., description="Line direction v")
    coefficients: List[Fraction] = Field(
        ..., description="s_0..s_order with s_0 = 0 and s_1 = -1"
    )

    model_config = ConfigDict(frozen=True)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, lam: float) -> float:
        return sum(float(c) * lam**k for k, c in enumerate(self.coefficients))

    def compose(self, other: "SigmaSeries") -> List[Fraction]:
        """Coefficients of ``self(other(lam))`` up to the common order."""
        order = min(self.order, other.order)
        inner = PLANE_RING.zero
        for k, c in enumerate(other.coefficients[: order + 1]):
            inner += to_qq(c) * LAM**k
        outer = PLANE_RING.zero
        for k, c in enumerate(self.coefficients[: order + 1]):
            outer += to_qq(c) * LAM**k
        composed = outer.compose(LAM, inner)
        return [from_qq(composed.coeff_wrt(LAM, k).const()) for k in range(order + 1)]


class CenterVerdict(BaseModel):
    """Outcome of comparing two landing series."""

    plus: str = Field(..., description="Plus half system")
    minus: str = Field(..., description="Minus half system")
    tau: Fraction = Field(..., description="Line parameter")
    order: int = Field(..., description="Series order compared")
    is_center: bool = Field(..., description="True when the series agree to order")
    first_difference: Optional[int] = Field(
        default=None, description="Lowest power of lam where the series differ"
    )

    @property
    def verdict(self) -> str:
        return CENTER_CERTIFIED if self.is_center else NOT_CENTER


def line_direction(tau: Union[Fraction, int, str]) -> Direction:
    """Unit rational direction ``(cos a, sin a)`` of the line with parameter ``tau``."""
    return line_angle(parse_fraction(tau))


def sigma_series(h: FirstIntegral, v: Tuple[object, object], order: int) -> SigmaSeries:
    """Landing series solved by undetermined coefficients.

    With ``F(lam, s) = N(lam v) D(s v) - N(s v) D(lam v)`` the coefficient of
    ``lam^(k+1)`` in ``F(lam, sigma)`` is linear in ``s_k`` with slope
    ``2 n_2 d_0``; every other contribution comes from lower coefficients.
    """
    if order < 2:
        raise SystemDefinitionError(f"sigma order must be at least 2, got {order}")
    direction = (Fraction(v[0]), Fraction(v[1]))
    numerator, denominator = h.on_line(direction)
    if not denominator:
        raise SystemDefinitionError(
            f"denominator of H for {h.name} vanishes on the line {direction}"
        )
    if numerator.coeff_wrt(LAM, 0) or numerator.coeff_wrt(LAM, 1):
        raise SystemDefinitionError(f"H for {h.name} is not quadratic at the origin")
    n2 = numerator.coeff_wrt(LAM, 2).const()
    d0 = denominator.coeff_wrt(LAM, 0).const()
    slope = 2 * n2 * d0
    if not slope:
        raise SystemDefinitionError(f"degenerate direction {direction} for {h.name}")

    coefficients = [Fraction(0), Fraction(-1)]
    sigma = -LAM
    for k in range(2, order + 1):
        n_sigma = numerator.compose(LAM, sigma)
        d_sigma = denominator.compose(LAM, sigma)
        residual = numerator * d_sigma - n_sigma * denominator
        s_k = -residual.coeff_wrt(LAM, k + 1).const() / slope
        coefficients.append(from_qq(s_k))
        sigma += s_k * LAM**k
        logger.debug("Sigma coefficient", system=h.name, k=k, value=str(coefficients[-1]))

    return SigmaSeries(name=h.name, direction=direction, coefficients=coefficients)


def is_piecewise_center(
    i: Union[int, str], j: Union[int, str], tau: Union[Fraction, int, str], order: int = 12
) -> CenterVerdict:
    """Compare the landing series of ``S_i`` and ``S_j`` along the line of ``tau``.

    A ``not-center`` verdict is exact; a center verdict holds to ``order``.
    """
    plus = system_by_name(f"S{i}" if isinstance(i, int) else i).name
    minus = system_by_name(f"S{j}" if isinstance(j, int) else j).name
    tau = parse_fraction(tau)
    if tau == 0 or plus == minus:
        verdict = CenterVerdict(plus=plus, minus=minus, tau=tau, order=order, is_center=True)
        logger.info("Center check short-circuit", plus=plus, minus=minus, tau=str(tau))
        return verdict

    direction = line_direction(tau)
    sigma_plus = sigma_series(first_integral(plus), direction, order)
    sigma_minus = sigma_series(first_integral(minus), direction, order)
    first_difference = next(
        (
            k
            for k, (a, b) in enumerate(zip(sigma_plus.coefficients, sigma_minus.coefficients))
            if a != b
        ),
        None,
    )
    verdict = CenterVerdict(
        plus=plus,
        minus=minus,
        tau=tau,
        order=order,
        is_center=first_difference is None,
        first_difference=first_difference,
    )
    logger.info(
        "Center check finished",
        plus=plus,
        minus=minus,
        tau=str(tau),
        order=order,
        verdict=verdict.verdict,
        first_difference=first_difference,
    )
    return verdict
