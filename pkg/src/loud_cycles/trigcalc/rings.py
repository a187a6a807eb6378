"""Coefficient rings shared by the exact kernel.

Every exact coefficient in the package lives in ``KERNEL_RING``: a sparse
multivariate polynomial ring over the rationals whose generators are the
indeterminate ``pi``, the symbolic rotation pair ``C`` and ``S`` (cosine and
sine of the line angle), the line parameter ``tau`` and the twenty
perturbation coefficients of a piecewise quadratic field.
"""

from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

import mpmath
from sympy import QQ
from sympy.polys.rings import PolyElement, ring

from ..errors import KernelError

SIDES: Tuple[str, str] = ("minus", "plus")
ETAS: Tuple[Tuple[int, int], ...] = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))

AUXILIARY_NAMES: Tuple[str, ...] = ("pi", "C", "S", "tau")


def parameter_name(letter: str, side: str, eta: Tuple[int, int]) -> str:
    """Internal symbol name, e.g. ``parameter_name("a", "minus", (1, 0)) == "am10"``."""
    if letter not in ("a", "b"):
        raise KernelError(f"unknown coefficient letter {letter!r}")
    if side not in SIDES:
        raise KernelError(f"unknown side {side!r}")
    return f"{letter}{'m' if side == 'minus' else 'p'}{eta[0]}{eta[1]}"


# Canonical order: minus before plus, a before b, graded-lex in eta.
PARAMETER_NAMES: Tuple[str, ...] = tuple(
    parameter_name(letter, side, eta)
    for side in SIDES
    for letter in ("a", "b")
    for eta in ETAS
)

SIDE_PARAMETERS: Dict[str, Tuple[str, ...]] = {
    side: tuple(n for n in PARAMETER_NAMES if n[1] == ("m" if side == "minus" else "p"))
    for side in SIDES
}

KERNEL_SYMBOLS: Tuple[str, ...] = AUXILIARY_NAMES + PARAMETER_NAMES
KERNEL_RING, *_KERNEL_GENS = ring(",".join(KERNEL_SYMBOLS), QQ)
GENERATORS: Dict[str, PolyElement] = dict(zip(KERNEL_SYMBOLS, _KERNEL_GENS))
PARAMETER_OFFSET = len(AUXILIARY_NAMES)

PI = GENERATORS["pi"]
ZERO = KERNEL_RING.zero
ONE = KERNEL_RING.one

Scalar = Union[int, Fraction, PolyElement]

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def gen(name: str) -> PolyElement:
    """Return the kernel generator with the given name."""
    try:
        return GENERATORS[name]
    except KeyError:
        raise KernelError(f"unknown kernel symbol {name!r}") from None


def display_name(name: str) -> str:
    """Human form of a parameter name, ``"am10"`` becomes ``"a⁻₁₀"``."""
    if name in PARAMETER_NAMES:
        sign = "⁻" if name[1] == "m" else "⁺"
        return f"{name[0]}{sign}{name[2:].translate(_SUBSCRIPTS)}"
    return name


def to_qq(value: Union[int, Fraction]):
    """Convert an exact python rational to the ground domain."""
    value = Fraction(value)
    return QQ(int(value.numerator), int(value.denominator))


def from_qq(value) -> Fraction:
    """Convert a ground-domain rational to :class:`fractions.Fraction`."""
    return Fraction(int(value.numerator), int(value.denominator))


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"`` (or an integer) into an exact rational."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise KernelError(f"not an exact rational: {text!r}") from e


def as_poly(value: Scalar) -> PolyElement:
    """Lift an int, rational or kernel polynomial into ``KERNEL_RING``."""
    if isinstance(value, PolyElement):
        if value.ring is not KERNEL_RING:
            raise KernelError("polynomial does not belong to the kernel ring")
        return value
    return KERNEL_RING.ground_new(to_qq(value))


def parameter_degrees(poly: PolyElement) -> set:
    """Set of total degrees in the perturbation symbols over the monomials of ``poly``."""
    return {sum(monom[PARAMETER_OFFSET:]) for monom in poly.itermonoms()}


def is_homogeneous(poly: PolyElement, degree: int) -> bool:
    """True when every monomial has perturbation degree ``degree`` (zero counts as homogeneous)."""
    return not poly or parameter_degrees(poly) == {degree}


def substitute_parameters(
    poly: PolyElement, values: Dict[str, Union[int, Fraction]]
) -> PolyElement:
    """Substitute exact values for some kernel symbols."""
    if not values:
        return poly
    pairs = [(gen(name), to_qq(value)) for name, value in values.items()]
    return poly.subs(pairs)


def numeric_value(poly: PolyElement, values: Dict[str, float]) -> float:
    """Evaluate ``poly`` in floating point; missing symbols count as zero."""
    point = [float(values.get(name, 0.0)) for name in KERNEL_SYMBOLS]
    total = 0.0
    for monom, coeff in poly.iterterms():
        term = float(from_qq(coeff))
        for value, exponent in zip(point, monom):
            if exponent:
                term *= value**exponent
        total += term
    return total


def symbols_in(poly: PolyElement) -> Tuple[str, ...]:
    """Names of the kernel symbols that occur in ``poly``."""
    used = [False] * len(KERNEL_SYMBOLS)
    for monom in poly.itermonoms():
        for index, exponent in enumerate(monom):
            if exponent:
                used[index] = True
    return tuple(name for name, flag in zip(KERNEL_SYMBOLS, used) if flag)


def linear_coefficients(poly: PolyElement, names: Iterable[str]) -> Dict[str, PolyElement]:
    """Coefficients of the given symbols in a polynomial that is linear in them."""
    result = {}
    for name in names:
        coefficient = poly.coeff_wrt(gen(name), 1)
        if coefficient:
            result[name] = coefficient
    return result


def mp_value(poly: PolyElement, values: Dict[str, object]):
    """Evaluate ``poly`` with mpmath at the current working precision; ``pi`` is ``mp.pi``."""
    point = [mpmath.mpf(values.get(name, 0)) for name in KERNEL_SYMBOLS]
    point[0] = mpmath.mp.pi
    total = mpmath.mpf(0)
    for monom, coeff in poly.iterterms():
        term = mpmath.mpf(int(coeff.numerator)) / int(coeff.denominator)
        for value, exponent in zip(point, monom):
            if exponent:
                term *= value**exponent
        total += term
    return total
