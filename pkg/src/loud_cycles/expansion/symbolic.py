"""First-order jets with the switching line kept symbolic in ``tau``.

The rotation is carried by ``C = cos a`` and ``S = sin a``; after evaluation
they are replaced by ``C = (1 - tau^2)/(1 + tau^2)``, ``S = 2 tau/(1 + tau^2)``
and the result is kept as a numerator over a power of ``1 + tau^2``.
"""

from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Dict, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field
from sympy.polys.rings import PolyElement

from ..errors import ExpansionError, InvariantViolation
from ..systems.piecewise import make_case
from ..trigcalc.rings import GENERATORS, KERNEL_RING, KERNEL_SYMBOLS, parse_fraction, to_qq
from ..utils.logger import get_logger
from .difference import DifferenceJet, check_invariants, difference
from .jets import expand_order0, expand_order1

logger = get_logger(__name__)

TAU = GENERATORS["tau"]
ONE_PLUS_TAU2 = 1 + TAU**2
_C_INDEX = KERNEL_SYMBOLS.index("C")
_S_INDEX = KERNEL_SYMBOLS.index("S")


class TauRational(BaseModel):
    """``numerator / (1 + tau^2)^power`` with the numerator in the kernel ring."""

    numerator: PolyElement = Field(..., description="Numerator polynomial, may contain tau")
    power: int = Field(..., description="Exponent of 1 + tau^2 in the denominator")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def specialize(self, tau: Union[Fraction, int, str]) -> PolyElement:
        """Exact value at a rational ``tau``."""
        value = parse_fraction(tau)
        numerator = self.numerator.subs(TAU, to_qq(value))
        return numerator.mul_ground(to_qq(1 / (1 + value * value) ** self.power))

    def display_denominator(self) -> Tuple[int, int]:
        """``(d, k)`` such that the value reads ``integer polynomial / (d (1 + tau^2)^k)``."""
        d = reduce(lcm, (int(c.denominator) for c in self.numerator.coeffs()), 1)
        return d, self.power

    def is_zero(self) -> bool:
        return not self.numerator


def substitute_line(poly: PolyElement) -> TauRational:
    """Replace ``C``, ``S`` by their rational parametrization and reduce."""
    terms = list(poly.iterterms())
    if not terms:
        return TauRational(numerator=KERNEL_RING.zero, power=0)
    top = max(m[_C_INDEX] + m[_S_INDEX] for m, _ in terms)
    cos_num = 1 - TAU**2
    sin_num = 2 * TAU
    numerator = KERNEL_RING.zero
    for monom, coeff in terms:
        i, k = monom[_C_INDEX], monom[_S_INDEX]
        rest = list(monom)
        rest[_C_INDEX] = rest[_S_INDEX] = 0
        base = KERNEL_RING.from_dict({tuple(rest): coeff})
        numerator += base * cos_num**i * sin_num**k * ONE_PLUS_TAU2 ** (top - i - k)
    power = top
    while power and numerator:
        quotient, remainder = numerator.div(ONE_PLUS_TAU2)
        if remainder:
            break
        numerator, power = quotient, power - 1
    if not numerator:
        power = 0
    return TauRational(numerator=numerator, power=power)


class SymbolicDifferenceJet(BaseModel):
    """First-order ``psi_{1,j}`` as rational functions of ``tau``."""

    system: str = Field(..., description="Case tag")
    n: int = Field(..., description="Truncation order in r")
    psi: List[TauRational] = Field(..., description="psi_{1,1}..psi_{1,n}")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def coefficient(self, j: int) -> TauRational:
        return self.psi[j - 1]

    def specialize(self, tau: Union[Fraction, int, str]) -> DifferenceJet:
        value = parse_fraction(tau)
        row = [c.specialize(value) for c in self.psi]
        return DifferenceJet(
            system=self.system,
            rotation=f"{value.numerator}/{value.denominator}",
            order=1,
            n=self.n,
            psi={0: [KERNEL_RING.zero] * self.n, 1: row},
        )


def difference_symbolic_tau(tag: str, n: int = 3, order: int = 1) -> SymbolicDifferenceJet:
    """``psi_{1,j}`` for every line at once; smooth centers and S1&S2 only."""
    if order != 1:
        raise ExpansionError("symbolic tau is supported at first order only")
    center = make_case(tag, None)
    jet = expand_order1(center, expand_order0(center, n), n)
    raw = difference(jet, check=False)
    unperturbed = [substitute_line(c) for c in raw.psi[0]]
    table: Dict[int, List[PolyElement]] = {
        0: [c.numerator for c in unperturbed],
        1: [c for c in raw.psi[1]],
    }
    try:
        check_invariants(table, center.name)
    except InvariantViolation:
        logger.error("Symbolic jet failed invariants", system=center.name, n=n)
        raise
    psi = [substitute_line(c) for c in raw.psi[1]]
    logger.info(
        "Symbolic difference jet assembled",
        system=center.name,
        n=n,
        max_power=max((c.power for c in psi), default=0),
    )
    return SymbolicDifferenceJet(system=center.name, n=n, psi=psi)

