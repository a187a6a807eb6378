"""Difference-function jets ``psi_{i,j} = xi^+_{i,j}(pi) - xi^-_{i,j}(-pi)``."""

import math
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field
from sympy.polys.rings import PolyElement

from ..errors import ExpansionError, InvariantViolation
from ..trigcalc.fourier import tf_eval_pi
from ..trigcalc.rings import KERNEL_RING, PI, gen, is_homogeneous, numeric_value, to_qq
from ..trigcalc.serialization import decode_poly, encode_poly
from ..utils.logger import get_logger
from .jets import Jet

logger = get_logger(__name__)

SCHEMA = "loud-cycles/1"

CONVENTIONS = ("taylor", "published")

# Published second-order displays: (scale, sign of pi) applied to the Taylor psi_2.
PSI2_DISPLAY: Dict[str, Tuple[int, int]] = {
    "S4": (8, -1),
    "S1&S2": (2, 1),
}


class DifferenceJet(BaseModel):
    """Table ``psi[i][j - 1] = psi_{i,j}`` for ``i <= order`` and ``1 <= j <= n``."""

    system: str = Field(..., description="Case tag")
    rotation: Optional[str] = Field(default=None, description="Line parameter p/q or 'symbolic'")
    order: int = Field(..., description="Highest epsilon order")
    n: int = Field(..., description="Truncation order in r")
    zeroed: List[str] = Field(default_factory=list, description="Symbols fixed to zero")
    absorbed: bool = Field(
        default=False, description="Small parameter folded into the coefficients (tilde form)"
    )
    convention: str = Field(
        default="taylor", description="'taylor' coefficients or the 'published' psi_2 display"
    )
    psi: Dict[int, List[PolyElement]] = Field(..., description="Coefficient table")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def coefficient(self, i: int, j: int) -> PolyElement:
        if i not in self.psi or not 1 <= j <= self.n:
            raise ExpansionError(f"psi_{{{i},{j}}} not in a jet of order {self.order}, N={self.n}")
        return self.psi[i][j - 1]

    def row(self, i: int) -> List[PolyElement]:
        return list(self.psi[i])

    def evaluate(self, i: int, r: float, values: Mapping[str, float]) -> float:
        """Floating point ``psi_i(r) = sum_j psi_{i,j} r^j``; ``pi`` defaults to math.pi."""
        point = {"pi": math.pi, **values}
        return sum(
            numeric_value(c, point) * r**j for j, c in enumerate(self.psi[i], start=1)
        )

    def totals(self) -> List[PolyElement]:
        """``Psi_j = sum_i psi_{i,j}`` for ``j = 1..n``."""
        return [
            sum((self.psi[i][j] for i in range(1, self.order + 1)), KERNEL_RING.zero)
            for j in range(self.n)
        ]

    def to_record(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA,
            "system": self.system,
            "rotation": self.rotation,
            "order": self.order,
            "n": self.n,
            "zeroed": list(self.zeroed),
            "absorbed": self.absorbed,
            "convention": self.convention,
            "psi": {str(i): [encode_poly(c) for c in row] for i, row in sorted(self.psi.items())},
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "DifferenceJet":
        if record.get("schema") != SCHEMA:
            raise ExpansionError(f"unsupported jet schema {record.get('schema')!r}")
        return cls(
            system=record["system"],
            rotation=record.get("rotation"),
            order=int(record["order"]),
            n=int(record["n"]),
            zeroed=list(record.get("zeroed", [])),
            absorbed=bool(record.get("absorbed", False)),
            convention=record.get("convention", "taylor"),
            psi={int(i): [decode_poly(c) for c in row] for i, row in record["psi"].items()},
        )


def check_invariants(table: Mapping[int, List[PolyElement]], system: str) -> None:
    """``psi_{0,j} = 0`` and ``psi_{i,j}`` homogeneous of degree ``i``."""
    for j, value in enumerate(table.get(0, []), start=1):
        if value:
            logger.error("Non-zero unperturbed difference", system=system, j=j)
            raise InvariantViolation(
                f"psi_{{0,{j}}} != 0 for {system}: the unperturbed pair is not a center"
            )
    for i, row in table.items():
        for j, value in enumerate(row, start=1):
            if not is_homogeneous(value, i):
                raise InvariantViolation(f"psi_{{{i},{j}}} of {system} is not homogeneous of degree {i}")


def difference(jet: Jet, zeroed: Optional[List[str]] = None, check: bool = True) -> DifferenceJet:
    """Evaluate both sides at ``theta = +-pi`` and subtract."""
    table = {}
    for i in range(jet.order + 1):
        plus, minus = jet.series("plus", i), jet.series("minus", i)
        table[i] = [
            tf_eval_pi(plus[j], "plus") - tf_eval_pi(minus[j], "minus")
            for j in range(1, jet.n + 1)
        ]
    if check:
        check_invariants(table, jet.system)
    result = DifferenceJet(
        system=jet.system,
        rotation=jet.rotation,
        order=jet.order,
        n=jet.n,
        zeroed=list(zeroed or []),
        psi=table,
    )
    logger.info(
        "Difference jet assembled",
        system=jet.system,
        order=jet.order,
        n=jet.n,
        terms=sum(len(c) for row in table.values() for c in row),
    )
    return result


def epsilon_absorb(jet: DifferenceJet) -> DifferenceJet:
    """Tilde form: each coefficient absorbs one power of epsilon, so ``Psi_j = sum_i psi_{i,j}``.

    The polynomials are unchanged; ``psi_{i,j}`` is now read as the degree-``i``
    homogeneous part of ``Psi_j`` in the tilde coefficients.
    """
    if jet.order > 2:
        raise ExpansionError(f"jets stop at order 2, got {jet.order}")
    return jet.model_copy(update={"absorbed": True})


def reflect_pi(poly: PolyElement) -> PolyElement:
    """Image of ``poly`` under the field automorphism ``pi -> -pi``."""
    return poly.ring.from_dict({m: (-c if m[0] % 2 else c) for m, c in poly.iterterms()})


def published_display(poly: PolyElement, system: str) -> PolyElement:
    """A Taylor ``psi_{2,j}`` written in the published display of ``system``."""
    if system not in PSI2_DISPLAY:
        raise ExpansionError(f"no published second-order display for {system}")
    scale, pi_sign = PSI2_DISPLAY[system]
    value = poly if pi_sign > 0 else reflect_pi(poly)
    return value * scale


def published_convention(jet: DifferenceJet) -> DifferenceJet:
    """Jet whose ``psi_2`` rows follow the published display, the ``psi_1`` rows unchanged.

    The published h-system roots solve the rows in this form; the cycle counts
    use the Taylor form.
    """
    if jet.convention == "published":
        return jet
    if 2 not in jet.psi:
        raise ExpansionError(f"jet of {jet.system} has no second-order rows")
    psi = dict(jet.psi)
    psi[2] = [published_display(c, jet.system) for c in jet.psi[2]]
    logger.info("Published second-order display applied", system=jet.system, scale=PSI2_DISPLAY[jet.system])
    return jet.model_copy(update={"psi": psi, "convention": "published"})


def _trace(side: str) -> PolyElement:
    tag = "p" if side == "plus" else "m"
    return gen(f"a{tag}10") + gen(f"b{tag}01")


def _rotation_part(side: str) -> PolyElement:
    tag = "p" if side == "plus" else "m"
    return gen(f"b{tag}10") - gen(f"a{tag}01")


def universal_psi_1_1() -> PolyElement:
    """``pi (a+10 + b+01 + a-10 + b-01) / 2`` for every quadratic center and line."""
    return PI * (_trace("plus") + _trace("minus")) * to_qq(Fraction(1, 2))


def universal_psi_2_1() -> PolyElement:
    """Second-order ``r``-linear coefficient shared by every quadratic center and line."""
    plus, minus = _trace("plus"), _trace("minus")
    quadratic = (plus**2 - minus**2) * PI**2 * to_qq(Fraction(1, 8))
    linear = (plus * _rotation_part("plus") + minus * _rotation_part("minus")) * PI * to_qq(
        Fraction(1, 4)
    )
    return quadratic - linear
