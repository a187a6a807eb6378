"""Polar canonical data of one half of a perturbed quadratic center.

For ``x' = -y + p(x, y) + eps P1``, ``y' = x + q(x, y) + eps Q1`` the radial
equation ``dr/dtheta = sum_i eps^i F_i(theta, r)`` has

    F_0 = r^2 f_0 / (1 + r g_0),    F_i = f_i / (1 + r g_0)^(i + 1).

With ``A = c p_2 + s q_2``, ``B = c q_2 - s p_2`` (unperturbed quadratic part
divided by ``r^2``), ``rho_1 = (c P1 + s Q1)/r`` and ``rho_2 = (c Q1 - s P1)/r``
the numerators are ``n_i = (-1)^(i-1) rho_2^(i-1) [r rho_1 (1 + r B) - r^2 A rho_2]``.
The stored forms carry per-system display scales ``kappa_i`` (``f_i = kappa_i n_i``)
so that they read exactly as printed in the literature; the expansion always
divides them out.
"""

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from ..errors import SystemDefinitionError
from ..trigcalc.fourier import (
    ThetaFourierPoly,
    ZERO_TF,
    tf_add,
    tf_eval_numeric,
    tf_from_power_basis,
    tf_map_coefficients,
    tf_mul,
    tf_rotate,
    tf_rotate_symbolic,
    tf_scale,
    tf_sub,
)
from ..trigcalc.rings import substitute_parameters
from ..utils.logger import get_logger
from .planar import PlanarQuadratic, PolynomialXY, perturbation_template

logger = get_logger(__name__)

RSeriesTF = List[ThetaFourierPoly]

DISPLAY_SCALES: Dict[str, Tuple[Fraction, Fraction, Fraction]] = {
    "S1": (Fraction(1), Fraction(-1), Fraction(1)),
    "S2": (Fraction(1), Fraction(1), Fraction(1)),
    "S3": (Fraction(1), Fraction(1), Fraction(1)),
    "S4": (Fraction(9), Fraction(-9), Fraction(1)),
}
UNIT_SCALES = (Fraction(1), Fraction(1), Fraction(1))

COS1 = ThetaFourierPoly.cos(1)
SIN1 = ThetaFourierPoly.sin(1)


class HalfSystemPolar(BaseModel):
    """Stored polar data ``(f0, g0, f1, f2, l1, l2)`` of one half, as lists by r-power."""

    name: str = Field(..., description="System tag of this half")
    side: str = Field(..., description="plus or minus")
    f0: List[ThetaFourierPoly] = Field(..., description="f0 by r-power")
    g0: List[ThetaFourierPoly] = Field(..., description="g0 by r-power")
    f: Dict[int, List[ThetaFourierPoly]] = Field(..., description="f_i by r-power")
    l: Dict[int, int] = Field(..., description="Denominator exponents l_i")
    scales: Tuple[Fraction, Fraction, Fraction] = Field(
        default=UNIT_SCALES, description="Display scales kappa_0..kappa_2"
    )
    rotation: Optional[str] = Field(
        default=None, description="Applied line rotation: a p/q string, 'symbolic' or None"
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def order(self) -> int:
        return max(self.f)

    def true_f0(self) -> RSeriesTF:
        return [tf_scale(t, 1 / self.scales[0]) for t in self.f0]

    def true_f(self, i: int) -> RSeriesTF:
        """``f_i`` with the display scale divided out."""
        if i not in self.f:
            raise SystemDefinitionError(f"order {i} data not available for {self.name}")
        return [tf_scale(t, 1 / self.scales[i]) for t in self.f[i]]

    def _map(self, func, rotation: Optional[str]) -> "HalfSystemPolar":
        return self.model_copy(
            update={
                "f0": [func(t) for t in self.f0],
                "g0": [func(t) for t in self.g0],
                "f": {i: [func(t) for t in series] for i, series in self.f.items()},
                "rotation": rotation,
            }
        )

    def rotate(self, tau: Union[Fraction, int]) -> "HalfSystemPolar":
        """Apply ``theta -> theta + a`` for the line angle of ``tau``."""
        if self.rotation is not None:
            raise SystemDefinitionError("polar data already rotated")
        tau = Fraction(tau)
        return self._map(lambda t: tf_rotate(t, tau), f"{tau.numerator}/{tau.denominator}")

    def rotate_symbolic(self) -> "HalfSystemPolar":
        """Rotation with ``cos a``, ``sin a`` kept as the symbols ``C``, ``S``."""
        if self.rotation is not None:
            raise SystemDefinitionError("polar data already rotated")
        return self._map(tf_rotate_symbolic, "symbolic")

    def specialize(self, values: Mapping[str, Union[int, Fraction]]) -> "HalfSystemPolar":
        """Substitute exact values (typically zeros) for perturbation symbols."""
        if not values:
            return self
        return self._map(
            lambda t: tf_map_coefficients(t, lambda c: substitute_parameters(c, dict(values))),
            self.rotation,
        )

    def radial_rate(
        self, theta: float, r: float, eps: float, values: Mapping[str, float], order: int = 2
    ) -> float:
        """Floating point ``sum_{i<=order} eps^i F_i(theta, r)`` from the stored data."""

        def series(items: RSeriesTF) -> float:
            return sum(tf_eval_numeric(t, theta, values) * r**k for k, t in enumerate(items))

        denominator = 1 + r * series(self.g0)
        total = r * r * series(self.true_f0()) / denominator
        for i in range(1, order + 1):
            total += eps**i * series(self.true_f(i)) / denominator ** self.l[i]
        return total


def _power_form(poly: Mapping[Tuple[int, int], object], degree: int) -> ThetaFourierPoly:
    """Homogeneous degree-``degree`` part of ``poly(x, y)`` at ``(cos, sin)``."""
    return tf_from_power_basis({eta: c for eta, c in poly.items() if sum(eta) == degree})


def _series_mul(a: RSeriesTF, b: RSeriesTF) -> RSeriesTF:
    out = [ZERO_TF] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = tf_add(out[i + j], tf_mul(x, y))
    return out


def polar_components(
    p2: Mapping[Tuple[int, int], object],
    q2: Mapping[Tuple[int, int], object],
    p1: PolynomialXY,
    q1: PolynomialXY,
) -> Dict[str, ThetaFourierPoly]:
    """The building blocks ``A, B, L1, L2, M1, M2`` in the harmonic basis."""
    p_quad, q_quad = _power_form(p2, 2), _power_form(q2, 2)
    components = {
        "A": tf_add(tf_mul(COS1, p_quad), tf_mul(SIN1, q_quad)),
        "B": tf_sub(tf_mul(COS1, q_quad), tf_mul(SIN1, p_quad)),
    }
    for degree in (1, 2):
        pd, qd = _power_form(p1, degree), _power_form(q1, degree)
        components[f"L{degree}"] = tf_add(tf_mul(COS1, pd), tf_mul(SIN1, qd))
        components[f"M{degree}"] = tf_sub(tf_mul(COS1, qd), tf_mul(SIN1, pd))
    return components


def to_polar(
    v: PlanarQuadratic,
    side: str,
    scales: Optional[Tuple[Fraction, Fraction, Fraction]] = None,
) -> HalfSystemPolar:
    """Polar canonical data of ``v`` perturbed by the quadratic template of ``side``."""
    if not v.is_canonical:
        raise SystemDefinitionError(
            f"system {v.name} is not in canonical form: linear part must be (-y, x)"
        )
    if scales is None:
        scales = DISPLAY_SCALES.get(v.name, UNIT_SCALES)
    p2, q2 = v.quadratic_part()
    p1, q1 = perturbation_template(side)
    parts = polar_components(p2, q2, p1, q1)
    a, b = parts["A"], parts["B"]
    l1, l2, m1, m2 = parts["L1"], parts["L2"], parts["M1"], parts["M2"]

    # n1 = r L1 + r^2 (L2 + L1 B - A M1) + r^3 (L2 B - A M2)
    n1 = [
        ZERO_TF,
        l1,
        tf_sub(tf_add(l2, tf_mul(l1, b)), tf_mul(a, m1)),
        tf_sub(tf_mul(l2, b), tf_mul(a, m2)),
    ]
    # n2 = -rho2 n1 with rho2 = M1 + r M2
    n2 = [-t for t in _series_mul([m1, m2], n1)]

    half = HalfSystemPolar(
        name=v.name,
        side=side,
        f0=[tf_scale(a, scales[0])],
        g0=[b],
        f={1: [tf_scale(t, scales[1]) for t in n1], 2: [tf_scale(t, scales[2]) for t in n2]},
        l={1: 2, 2: 3},
        scales=scales,
    )
    logger.debug(
        "Polar data built",
        system=v.name,
        side=side,
        f1_terms=sum(len(t) for t in n1),
        f2_terms=sum(len(t) for t in n2),
    )
    return half
