"""Structured-text (JSON-ready) encoding of kernel values.

Rationals are ``"p/q"`` strings, pi-polynomials are arrays of ``"p/q"`` by
pi-power, kernel polynomials are lists of ``{"monomial", "pi"}`` records,
theta-Fourier polynomials are lists of ``{"k", "j", "kind", "coeff"}``
records, and elements of ``QQ(pi)`` are ``"p/q"`` or a ``{"num", "den"}`` pair.
Decoding reproduces the exact value.
"""

from fractions import Fraction
from typing import Any, Dict, List, Union

from sympy.polys.rings import PolyElement

from ..errors import KernelError
from .fourier import COS, SIN, ThetaFourierPoly
from .pipoly import (
    PiPoly,
    field_element,
    field_is_rational,
    field_parts,
    field_to_fraction,
    pi_split,
)
from .rings import KERNEL_RING, KERNEL_SYMBOLS, gen, parse_fraction

_KIND_NAMES = {COS: "cos", SIN: "sin"}
_KIND_CODES = {"cos": COS, "sin": SIN}


def encode_rational(value: Union[int, Fraction]) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def decode_rational(text: str) -> Fraction:
    return parse_fraction(text)


def encode_pipoly(value: PiPoly) -> List[str]:
    return [encode_rational(c) for c in value.coefficients]


def decode_pipoly(data: List[str]) -> PiPoly:
    return PiPoly(decode_rational(c) for c in data)


def encode_poly(poly: PolyElement) -> List[Dict[str, Any]]:
    """Encode a kernel polynomial grouped by its pi-free monomial, in sorted order."""
    records = []
    for rest, coefficient in sorted(pi_split(poly).items(), reverse=True):
        monomial = {
            KERNEL_SYMBOLS[i + 1]: e for i, e in enumerate(rest) if e
        }
        records.append({"monomial": monomial, "pi": encode_pipoly(coefficient)})
    return records


def decode_poly(data: List[Dict[str, Any]]) -> PolyElement:
    result = KERNEL_RING.zero
    for record in data:
        try:
            term = decode_pipoly(record["pi"]).to_poly()
            for name, exponent in record["monomial"].items():
                term *= gen(name) ** int(exponent)
        except (KeyError, TypeError) as e:
            raise KernelError(f"malformed polynomial record: {record!r}") from e
        result += term
    return result


def encode_tf(p: ThetaFourierPoly) -> List[Dict[str, Any]]:
    return [
        {"k": k, "j": j, "kind": _KIND_NAMES[kind], "coeff": encode_poly(c)}
        for (k, j, kind), c in p.items()
    ]


def decode_tf(data: List[Dict[str, Any]]) -> ThetaFourierPoly:
    terms = {}
    for record in data:
        try:
            key = (int(record["k"]), int(record["j"]), _KIND_CODES[record["kind"]])
            terms[key] = decode_poly(record["coeff"])
        except (KeyError, TypeError, ValueError) as e:
            raise KernelError(f"malformed theta-Fourier record: {record!r}") from e
    return ThetaFourierPoly(terms)


def encode_field(value) -> Union[str, Dict[str, List[str]]]:
    """``"p/q"`` for pi-free values, otherwise numerator and denominator pi-polynomials."""
    if field_is_rational(value):
        return encode_rational(field_to_fraction(value))
    numerator, denominator = field_parts(value)
    return {"num": encode_pipoly(numerator), "den": encode_pipoly(denominator)}


def decode_field(data: Union[str, Dict[str, List[str]]]):
    if isinstance(data, str):
        return field_element(decode_rational(data))
    try:
        return field_element(decode_pipoly(data["num"])) / field_element(decode_pipoly(data["den"]))
    except (KeyError, TypeError, ZeroDivisionError) as e:
        raise KernelError(f"malformed field record: {data!r}") from e
