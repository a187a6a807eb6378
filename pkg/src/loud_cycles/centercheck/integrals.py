"""Rational first integrals of the quadratic isochronous centers."""

from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field
from sympy import QQ
from sympy.polys.rings import PolyElement, ring

from ..errors import SystemDefinitionError
from ..systems.planar import PlanarQuadratic, system_by_name
from ..trigcalc.rings import from_qq, to_qq
from ..utils.logger import get_logger

logger = get_logger(__name__)

# x, y for the plane and lam for the parameter along a line through the origin
PLANE_RING, X, Y, LAM = ring("x,y,lam", QQ)

_INTEGRALS: Dict[str, Tuple[PolyElement, PolyElement]] = {
    "L": (X**2 + Y**2, PLANE_RING.one),
    "S1": (X**2 + Y**2, 1 + 2 * Y),
    "S2": (X**2 + Y**2, (1 + Y) ** 2),
    "S3": (9 * (X**2 + Y**2) - 24 * X**2 * Y + 16 * X**4, 16 * Y - 3),
    "S4": (9 * (X**2 + Y**2) + 24 * Y**3 + 16 * Y**4, (3 + 8 * Y) ** 4),
}


def field_polynomials(v: PlanarQuadratic) -> Tuple[PolyElement, PolyElement]:
    """``(P, Q)`` of a planar quadratic as polynomials in ``x, y``."""
    monomials = {(1, 0): X, (0, 1): Y, (2, 0): X**2, (1, 1): X * Y, (0, 2): Y**2}
    p = PLANE_RING.zero
    q = PLANE_RING.zero
    for (i, j), m in monomials.items():
        p += m * to_qq(getattr(v, f"p{i}{j}"))
        q += m * to_qq(getattr(v, f"q{i}{j}"))
    return p, q


class FirstIntegral(BaseModel):
    """``H = numerator / denominator``, constant along the orbits of ``system``."""

    name: str = Field(..., description="System tag")
    numerator: PolyElement = Field(..., description="Numerator polynomial in x, y")
    denominator: PolyElement = Field(..., description="Denominator polynomial in x, y")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def invariance_defect(self, system: PlanarQuadratic) -> PolyElement:
        """Numerator of ``grad H . Z``; zero exactly when ``H`` is a first integral."""
        p, q = field_polynomials(system)
        n, d = self.numerator, self.denominator
        n_dot = n.diff(X) * p + n.diff(Y) * q
        d_dot = d.diff(X) * p + d.diff(Y) * q
        return n_dot * d - n * d_dot

    def on_line(self, direction: Tuple[object, object]) -> Tuple[PolyElement, PolyElement]:
        """Numerator and denominator restricted to ``lam * direction``."""
        v1, v2 = to_qq(direction[0]), to_qq(direction[1])
        substitution = [(X, LAM * v1), (Y, LAM * v2)]
        return self.numerator.compose(substitution), self.denominator.compose(substitution)

    def evaluate(self, x: float, y: float) -> float:
        point = [x, y, 0.0]

        def value(poly: PolyElement) -> float:
            total = 0.0
            for monom, coeff in poly.iterterms():
                term = float(from_qq(coeff))
                for base, exponent in zip(point, monom):
                    term *= base**exponent
                total += term
            return total

        return value(self.numerator) / value(self.denominator)


def first_integral(name: str) -> FirstIntegral:
    """The rational first integral ``H_i`` of ``S_i``, verified as ``grad H . Z = 0``."""
    system = system_by_name(name)
    numerator, denominator = _INTEGRALS[system.name]
    integral = FirstIntegral(name=system.name, numerator=numerator, denominator=denominator)
    defect = integral.invariance_defect(system)
    if defect:
        logger.error("First integral check failed", system=system.name, terms=len(defect))
        raise SystemDefinitionError(f"H for {system.name} is not invariant under its field")
    return integral
