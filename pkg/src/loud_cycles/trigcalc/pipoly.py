"""Polynomials in the transcendental indeterminate pi with rational coefficients."""

import math
from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

import mpmath
from sympy import QQ, Symbol
from sympy.polys.rings import PolyElement

from ..errors import KernelError
from .rings import (
    KERNEL_RING,
    KERNEL_SYMBOLS,
    PARAMETER_OFFSET,
    PI,
    from_qq,
    to_qq,
)

PI_FIELD = QQ.frac_field(Symbol("pi"))


class PiPoly:
    """Exact polynomial ``sum c_k pi^k``; zero iff every coefficient is zero."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Union[int, Fraction]] = ()) -> None:
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients: Tuple[Fraction, ...] = tuple(coeffs)

    @classmethod
    def from_poly(cls, poly: PolyElement) -> "PiPoly":
        """Build from a kernel polynomial that only involves ``pi``."""
        coeffs: Dict[int, Fraction] = {}
        for monom, coeff in poly.iterterms():
            if any(monom[1:]):
                raise KernelError("polynomial involves symbols other than pi")
            coeffs[monom[0]] = from_qq(coeff)
        degree = max(coeffs, default=-1)
        return cls(coeffs.get(k, Fraction(0)) for k in range(degree + 1))

    def to_poly(self) -> PolyElement:
        """Embed into ``KERNEL_RING``."""
        result = KERNEL_RING.zero
        for k, c in enumerate(self.coefficients):
            if c:
                result += PI**k * to_qq(c)
        return result

    def to_field(self):
        """Embed into the rational function field ``QQ(pi)``."""
        pi = PI_FIELD.gens[0]
        result = PI_FIELD.zero
        for k, c in enumerate(self.coefficients):
            if c:
                result += PI_FIELD.convert(to_qq(c)) * pi**k
        return result

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def evaluate(self, pi_value: float = math.pi) -> float:
        """Floating point value with the given numeric pi."""
        total = 0.0
        for c in reversed(self.coefficients):
            total = total * pi_value + float(c)
        return total

    def __add__(self, other: "PiPoly") -> "PiPoly":
        size = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (Fraction(0),) * (size - len(self.coefficients))
        b = other.coefficients + (Fraction(0),) * (size - len(other.coefficients))
        return PiPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "PiPoly":
        return PiPoly(-c for c in self.coefficients)

    def __sub__(self, other: "PiPoly") -> "PiPoly":
        return self + (-other)

    def __mul__(self, other: Union["PiPoly", int, Fraction]) -> "PiPoly":
        if not isinstance(other, PiPoly):
            return PiPoly(c * Fraction(other) for c in self.coefficients)
        if self.is_zero() or other.is_zero():
            return PiPoly()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, x in enumerate(self.coefficients):
            for j, y in enumerate(other.coefficients):
                out[i + j] += x * y
        return PiPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PiPoly([other])
        return isinstance(other, PiPoly) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        if not self.coefficients:
            return "PiPoly(0)"
        parts = []
        for k, c in enumerate(self.coefficients):
            if c:
                parts.append(f"{c}" if k == 0 else f"{c}*pi^{k}")
        return "PiPoly(" + " + ".join(parts) + ")"


def pi_split(poly: PolyElement) -> Dict[Tuple[int, ...], PiPoly]:
    """Group a kernel polynomial by its non-pi monomial; values are the PiPoly coefficients."""
    grouped: Dict[Tuple[int, ...], Dict[int, Fraction]] = {}
    for monom, coeff in poly.iterterms():
        grouped.setdefault(monom[1:], {})[monom[0]] = from_qq(coeff)
    result = {}
    for rest, coeffs in grouped.items():
        degree = max(coeffs)
        result[rest] = PiPoly(coeffs.get(k, Fraction(0)) for k in range(degree + 1))
    return result


def parameter_pi_coefficients(poly: PolyElement) -> Dict[str, PiPoly]:
    """For a polynomial linear in the perturbation symbols, map each symbol to its PiPoly coefficient."""
    result: Dict[str, PiPoly] = {}
    for rest, coeff in pi_split(poly).items():
        params = rest[PARAMETER_OFFSET - 1 :]
        if any(rest[: PARAMETER_OFFSET - 1]) or sum(params) != 1:
            raise KernelError("polynomial is not linear in the perturbation symbols")
        name = KERNEL_SYMBOLS[PARAMETER_OFFSET + params.index(1)]
        result[name] = coeff
    return result


PI_GEN = PI_FIELD.gens[0]


def field_element(value: Union["PiPoly", int, Fraction]):
    """Lift a PiPoly or an exact rational into ``QQ(pi)``."""
    if isinstance(value, PiPoly):
        return value.to_field()
    return PI_FIELD.convert(to_qq(value))


def field_from_qq(coefficient, pi_power: int = 0):
    """``coefficient * pi**pi_power`` as a field element; ``coefficient`` is a ground rational."""
    return PI_FIELD.convert(coefficient, QQ) * PI_GEN**pi_power


def field_parts(value) -> Tuple[PiPoly, PiPoly]:
    """Numerator and denominator of a ``QQ(pi)`` element as PiPolys."""

    def _as_pipoly(poly) -> PiPoly:
        coeffs = {monom[0]: from_qq(c) for monom, c in poly.terms()}
        degree = max(coeffs, default=-1)
        return PiPoly(coeffs.get(k, Fraction(0)) for k in range(degree + 1))

    return _as_pipoly(value.numer), _as_pipoly(value.denom)


def field_is_rational(value) -> bool:
    numerator, denominator = field_parts(value)
    return numerator.degree <= 0 and denominator.degree <= 0


def field_to_fraction(value) -> Fraction:
    """Exact rational value of a pi-free field element."""
    if not field_is_rational(value):
        raise KernelError(f"{value} depends on pi")
    numerator, denominator = field_parts(value)
    if numerator.is_zero():
        return Fraction(0)
    return numerator.coefficients[0] / denominator.coefficients[0]


def field_value(value, high_precision: bool = False):
    """Numeric value; an mpmath number at the current working precision when ``high_precision``."""
    numerator, denominator = field_parts(value)
    if not high_precision:
        return numerator.evaluate() / denominator.evaluate()

    def _horner(p: PiPoly):
        total = mpmath.mpf(0)
        for c in reversed(p.coefficients):
            total = total * mpmath.mp.pi + mpmath.mpf(c.numerator) / c.denominator
        return total

    return _horner(numerator) / _horner(denominator)


def field_text(value) -> str:
    """Readable form, ``p/q`` for rationals."""
    if field_is_rational(value):
        c = field_to_fraction(value)
        return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
    return str(value)
