"""Quadratic planar centers and the generic quadratic perturbation."""

from fractions import Fraction
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field
from sympy.polys.rings import PolyElement

from ..errors import SystemDefinitionError
from ..trigcalc.rings import ETAS, SIDES, gen, parameter_name

Monomial = Tuple[int, int]
PolynomialXY = Dict[Monomial, PolyElement]


class PlanarQuadratic(BaseModel):
    """Quadratic field ``x' = P(x, y)``, ``y' = Q(x, y)`` with exact rational coefficients.

    ``P = p10 x + p01 y + p20 x^2 + p11 x y + p02 y^2`` and likewise for ``Q``.
    """

    name: str = Field(..., description="System tag, e.g. S1")
    p10: Fraction = Field(default=Fraction(0), description="Coefficient of x in P")
    p01: Fraction = Field(default=Fraction(-1), description="Coefficient of y in P")
    q10: Fraction = Field(default=Fraction(1), description="Coefficient of x in Q")
    q01: Fraction = Field(default=Fraction(0), description="Coefficient of y in Q")
    p20: Fraction = Field(default=Fraction(0), description="Coefficient of x^2 in P")
    p11: Fraction = Field(default=Fraction(0), description="Coefficient of xy in P")
    p02: Fraction = Field(default=Fraction(0), description="Coefficient of y^2 in P")
    q20: Fraction = Field(default=Fraction(0), description="Coefficient of x^2 in Q")
    q11: Fraction = Field(default=Fraction(0), description="Coefficient of xy in Q")
    q02: Fraction = Field(default=Fraction(0), description="Coefficient of y^2 in Q")

    model_config = ConfigDict(frozen=True)

    @property
    def is_canonical(self) -> bool:
        """True when the linear part is exactly ``(-y, x)``."""
        return (self.p10, self.p01, self.q10, self.q01) == (0, -1, 1, 0)

    def quadratic_part(self) -> Tuple[Dict[Monomial, Fraction], Dict[Monomial, Fraction]]:
        p = {(2, 0): self.p20, (1, 1): self.p11, (0, 2): self.p02}
        q = {(2, 0): self.q20, (1, 1): self.q11, (0, 2): self.q02}
        return p, q

    def evaluate(self, x: float, y: float) -> Tuple[float, float]:
        """Floating point value of the field at ``(x, y)``."""
        px = (
            float(self.p10) * x + float(self.p01) * y
            + float(self.p20) * x * x + float(self.p11) * x * y + float(self.p02) * y * y
        )
        qx = (
            float(self.q10) * x + float(self.q01) * y
            + float(self.q20) * x * x + float(self.q11) * x * y + float(self.q02) * y * y
        )
        return px, qx


_BUILTIN = {
    "S1": dict(p20=Fraction(1), p02=Fraction(-1), q11=Fraction(2)),
    "S2": dict(p20=Fraction(1), q11=Fraction(1)),
    "S3": dict(p20=Fraction(-4, 3), q11=Fraction(-16, 3)),
    "S4": dict(p20=Fraction(16, 3), p02=Fraction(-4, 3), q11=Fraction(8, 3)),
}

BUILTIN_NAMES = tuple(_BUILTIN)


def builtin_system(name: str) -> PlanarQuadratic:
    """Return one of the quadratic isochronous centers S1..S4."""
    key = name.strip().upper()
    if key not in _BUILTIN:
        raise SystemDefinitionError(
            f"unknown system {name!r}; expected one of {', '.join(BUILTIN_NAMES)}"
        )
    return PlanarQuadratic(name=key, **_BUILTIN[key])


def linear_center() -> PlanarQuadratic:
    """The linear center ``x' = -y, y' = x`` (all quadratic coefficients zero)."""
    return PlanarQuadratic(name="L")


def perturbation_template(side: str, n: int = 2) -> Tuple[PolynomialXY, PolynomialXY]:
    """Symbolic perturbation ``(P1, Q1)`` of one side, without constant terms."""
    if n != 2:
        raise SystemDefinitionError(f"only degree 2 perturbations are supported, got {n}")
    if side not in SIDES:
        raise SystemDefinitionError(f"unknown side {side!r}")
    p1 = {eta: gen(parameter_name("a", side, eta)) for eta in ETAS}
    q1 = {eta: gen(parameter_name("b", side, eta)) for eta in ETAS}
    return p1, q1


def system_by_name(name: str) -> PlanarQuadratic:
    """Builtin lookup that also accepts ``L`` for the linear center."""
    if name.strip().upper() == "L":
        return linear_center()
    return builtin_system(name)
