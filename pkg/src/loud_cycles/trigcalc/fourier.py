"""Exact theta-Fourier polynomials.

A :class:`ThetaFourierPoly` is a finite sum of ``theta^k cos(j theta)`` and
``theta^k sin(j theta)`` with coefficients in ``KERNEL_RING``. Terms are keyed
by ``(k, j, kind)`` with ``kind`` 0 for cosine and 1 for sine; ``sin(0 theta)``
never appears and ``cos(0 theta)`` is the constant harmonic.
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from sympy import QQ
from sympy.polys.rings import PolyElement

from ..errors import KernelError
from .rings import (
    GENERATORS,
    KERNEL_RING,
    PI,
    Scalar,
    as_poly,
    numeric_value,
    to_qq,
)

COS = 0
SIN = 1

Key = Tuple[int, int, int]

_HALF = QQ(1, 2)


class ThetaFourierPoly:
    """Immutable sparse element of the theta-Fourier ring."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Key, Scalar]] = None) -> None:
        clean: Dict[Key, PolyElement] = {}
        for (k, j, kind), coeff in (terms or {}).items():
            if k < 0 or j < 0 or kind not in (COS, SIN):
                raise KernelError(f"invalid basis key {(k, j, kind)}")
            if kind == SIN and j == 0:
                raise KernelError("sin(0*theta) is not a basis element")
            poly = as_poly(coeff)
            if poly:
                clean[(k, j, kind)] = poly
        self._terms = clean

    @classmethod
    def _trusted(cls, terms: Dict[Key, PolyElement]) -> "ThetaFourierPoly":
        obj = cls.__new__(cls)
        obj._terms = {key: c for key, c in terms.items() if c}
        return obj

    @classmethod
    def constant(cls, value: Scalar) -> "ThetaFourierPoly":
        return cls({(0, 0, COS): value})

    @classmethod
    def cos(cls, j: int = 1, coeff: Scalar = 1, k: int = 0) -> "ThetaFourierPoly":
        return cls({(k, j, COS): coeff})

    @classmethod
    def sin(cls, j: int = 1, coeff: Scalar = 1, k: int = 0) -> "ThetaFourierPoly":
        return cls({(k, j, SIN): coeff})

    @classmethod
    def theta(cls, k: int = 1) -> "ThetaFourierPoly":
        return cls({(k, 0, COS): 1})

    @property
    def terms(self) -> Dict[Key, PolyElement]:
        """Copy of the term map in canonical order."""
        return {key: self._terms[key] for key in sorted(self._terms)}

    def items(self) -> Iterator[Tuple[Key, PolyElement]]:
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def coeff(self, k: int, j: int, kind: int = COS) -> PolyElement:
        return self._terms.get((k, j, kind), KERNEL_RING.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def theta_degree(self) -> int:
        return max((k for k, _, _ in self._terms), default=0)

    @property
    def harmonic_degree(self) -> int:
        return max((j for _, j, _ in self._terms), default=0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ThetaFourierPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple((key, tuple(sorted(c.items()))) for key, c in self.items()))

    def __add__(self, other: "ThetaFourierPoly") -> "ThetaFourierPoly":
        return tf_add(self, other)

    def __sub__(self, other: "ThetaFourierPoly") -> "ThetaFourierPoly":
        return tf_sub(self, other)

    def __neg__(self) -> "ThetaFourierPoly":
        return ThetaFourierPoly._trusted({key: -c for key, c in self._terms.items()})

    def __mul__(self, other: Union["ThetaFourierPoly", Scalar]) -> "ThetaFourierPoly":
        if isinstance(other, ThetaFourierPoly):
            return tf_mul(self, other)
        return tf_scale(self, other)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self._terms:
            return "ThetaFourierPoly(0)"
        parts = []
        for (k, j, kind), c in self.items():
            basis = "" if j == 0 else f"{'cos' if kind == COS else 'sin'}({j}t)"
            power = "" if k == 0 else f"t^{k}"
            parts.append(f"({c})" + "".join(f"*{b}" for b in (power, basis) if b))
        return "ThetaFourierPoly(" + " + ".join(parts) + ")"


ZERO_TF = ThetaFourierPoly()


def _accumulate(out: Dict[Key, PolyElement], key: Key, value: PolyElement) -> None:
    current = out.get(key)
    out[key] = value if current is None else current + value


def tf_add(p: ThetaFourierPoly, q: ThetaFourierPoly) -> ThetaFourierPoly:
    """Exact sum in the canonical basis."""
    if not q._terms:
        return p
    if not p._terms:
        return q
    out = dict(p._terms)
    for key, c in q._terms.items():
        _accumulate(out, key, c)
    return ThetaFourierPoly._trusted(out)


def tf_sub(p: ThetaFourierPoly, q: ThetaFourierPoly) -> ThetaFourierPoly:
    return tf_add(p, -q)


def tf_sum(items: Iterable[ThetaFourierPoly]) -> ThetaFourierPoly:
    out: Dict[Key, PolyElement] = {}
    for item in items:
        for key, c in item._terms.items():
            _accumulate(out, key, c)
    return ThetaFourierPoly._trusted(out)


def tf_scale(p: ThetaFourierPoly, factor: Scalar) -> ThetaFourierPoly:
    """Multiply every coefficient by a rational or kernel polynomial."""
    if isinstance(factor, PolyElement):
        if factor.is_ground:
            return tf_scale_ground(p, factor.const())
        return ThetaFourierPoly._trusted({key: c * factor for key, c in p._terms.items()})
    return tf_scale_ground(p, to_qq(factor))


def tf_scale_ground(p: ThetaFourierPoly, factor) -> ThetaFourierPoly:
    if not factor:
        return ZERO_TF
    return ThetaFourierPoly._trusted(
        {key: c.mul_ground(factor) for key, c in p._terms.items()}
    )


def tf_mul(p: ThetaFourierPoly, q: ThetaFourierPoly) -> ThetaFourierPoly:
    """Exact product, re-expressed in the harmonic basis by product-to-sum rules."""
    if not p._terms or not q._terms:
        return ZERO_TF
    out: Dict[Key, PolyElement] = {}
    get = out.get
    for (k1, j1, kind1), c1 in p._terms.items():
        for (k2, j2, kind2), c2 in q._terms.items():
            k = k1 + k2
            prod = c1 * c2
            if j1 == 0 or j2 == 0:
                # one factor is a pure theta power
                j = j1 + j2
                kind = kind1 if j1 else kind2
                key = (k, j, kind)
                current = get(key)
                out[key] = prod if current is None else current + prod
                continue
            half = prod.mul_ground(_HALF)
            plus = j1 + j2
            minus = j1 - j2
            if kind1 == COS and kind2 == COS:
                # cos a cos b = (cos(a-b) + cos(a+b)) / 2
                terms = ((abs(minus), COS, half), (plus, COS, half))
            elif kind1 == SIN and kind2 == SIN:
                # sin a sin b = (cos(a-b) - cos(a+b)) / 2
                terms = ((abs(minus), COS, half), (plus, COS, -half))
            elif kind1 == SIN:
                # sin a cos b = (sin(a+b) + sin(a-b)) / 2
                terms = ((plus, SIN, half), (minus, SIN, half))
            else:
                # cos a sin b = (sin(a+b) - sin(a-b)) / 2
                terms = ((plus, SIN, half), (minus, SIN, -half))
            for j, kind, value in terms:
                if kind == SIN:
                    if j == 0:
                        continue
                    if j < 0:
                        j, value = -j, -value
                key = (k, j, kind)
                current = get(key)
                out[key] = value if current is None else current + value
    return ThetaFourierPoly._trusted(out)


def tf_pow(p: ThetaFourierPoly, n: int) -> ThetaFourierPoly:
    result = ThetaFourierPoly.constant(1)
    for _ in range(n):
        result = tf_mul(result, p)
    return result


def tf_from_power_basis(c: Mapping[Tuple[int, int], Scalar]) -> ThetaFourierPoly:
    """Linearize ``sum c[m, n] cos^m sin^n`` into the harmonic basis."""
    cos1 = ThetaFourierPoly.cos(1)
    sin1 = ThetaFourierPoly.sin(1)
    result = ZERO_TF
    for (m, n), coeff in c.items():
        if m < 0 or n < 0:
            raise KernelError(f"negative exponent in power basis term {(m, n)}")
        term = tf_mul(tf_pow(cos1, m), tf_pow(sin1, n))
        result = tf_add(result, tf_scale(term, coeff))
    return result


@lru_cache(maxsize=None)
def _basis_antiderivative(k: int, j: int, kind: int) -> Tuple[Tuple[Key, object], ...]:
    """Antiderivative of theta^k cos/sin(j theta) vanishing at theta = 0, with rational coefficients."""
    if j == 0:
        return (((k + 1, 0, COS), QQ(1, k + 1)),)
    raw: Dict[Key, object] = {}
    inv_j = QQ(1, j)
    if kind == COS:
        # theta^k sin(j t)/j - (k/j) * int theta^(k-1) sin(j t)
        raw[(k, j, SIN)] = inv_j
        if k:
            for key, c in _basis_antiderivative(k - 1, j, SIN):
                raw[key] = raw.get(key, QQ(0)) - QQ(k, j) * c
    else:
        # -theta^k cos(j t)/j + (k/j) * int theta^(k-1) cos(j t)
        raw[(k, j, COS)] = -inv_j
        if k:
            for key, c in _basis_antiderivative(k - 1, j, COS):
                raw[key] = raw.get(key, QQ(0)) + QQ(k, j) * c
    # enforce P(0) = 0: only theta^0 cos terms are nonzero at the origin
    at_zero = sum((c for (kk, _, kd), c in raw.items() if kk == 0 and kd == COS), QQ(0))
    if at_zero:
        raw[(0, 0, COS)] = raw.get((0, 0, COS), QQ(0)) - at_zero
    return tuple((key, c) for key, c in sorted(raw.items()) if c)


def tf_integrate(p: ThetaFourierPoly) -> ThetaFourierPoly:
    """The unique antiderivative ``P`` of ``p`` with ``P(0) = 0``."""
    out: Dict[Key, PolyElement] = {}
    for (k, j, kind), c in p._terms.items():
        for key, factor in _basis_antiderivative(k, j, kind):
            _accumulate(out, key, c.mul_ground(factor))
    return ThetaFourierPoly._trusted(out)


def tf_derivative(p: ThetaFourierPoly) -> ThetaFourierPoly:
    """Exact derivative with respect to theta."""
    out: Dict[Key, PolyElement] = {}
    for (k, j, kind), c in p._terms.items():
        if k:
            _accumulate(out, (k - 1, j, kind), c.mul_ground(QQ(k)))
        if j:
            if kind == COS:
                _accumulate(out, (k, j, SIN), c.mul_ground(QQ(-j)))
            else:
                _accumulate(out, (k, j, COS), c.mul_ground(QQ(j)))
    return ThetaFourierPoly._trusted(out)


def tf_eval_pi(p: ThetaFourierPoly, side: str) -> PolyElement:
    """Substitute theta = +pi (``plus``) or theta = -pi (``minus``)."""
    if side not in ("plus", "minus"):
        raise KernelError(f"unknown side {side!r}")
    sign = 1 if side == "plus" else -1
    result = KERNEL_RING.zero
    powers: Dict[int, PolyElement] = {}
    for (k, j, kind), c in p._terms.items():
        if kind == SIN:
            continue
        factor = (sign**k) * (-1) ** j
        if k not in powers:
            powers[k] = PI**k
        term = c * powers[k]
        result += term if factor > 0 else -term
    return result


def angle_multiples(cos_a, sin_a, count: int) -> List[Tuple[object, object]]:
    """``[(cos(j a), sin(j a)) for j in 0..count]`` by the angle-addition recurrence."""
    values = [(cos_a * 0 + 1, sin_a * 0)]
    for _ in range(count):
        c, s = values[-1]
        values.append((c * cos_a - s * sin_a, s * cos_a + c * sin_a))
    return values


def line_angle(tau: Union[Fraction, int]) -> Tuple[Fraction, Fraction]:
    """``(cos a, sin a)`` of the switching line parametrized by ``tau``."""
    tau = Fraction(tau)
    denominator = 1 + tau * tau
    return (1 - tau * tau) / denominator, 2 * tau / denominator


def _rotate_with(p: ThetaFourierPoly, multiples: List[Tuple[PolyElement, PolyElement]]) -> ThetaFourierPoly:
    out: Dict[Key, PolyElement] = {}
    for (k, j, kind), c in p._terms.items():
        if k:
            raise KernelError("rotation requires a theta-free polynomial")
        if j == 0:
            _accumulate(out, (0, 0, COS), c)
            continue
        cj, sj = multiples[j]
        if kind == COS:
            # cos(j(t + a)) = cos(jt) cos(ja) - sin(jt) sin(ja)
            _accumulate(out, (0, j, COS), c * cj)
            _accumulate(out, (0, j, SIN), -(c * sj))
        else:
            # sin(j(t + a)) = sin(jt) cos(ja) + cos(jt) sin(ja)
            _accumulate(out, (0, j, SIN), c * cj)
            _accumulate(out, (0, j, COS), c * sj)
    return ThetaFourierPoly._trusted(out)


def tf_rotate(p: ThetaFourierPoly, tau: Union[Fraction, int]) -> ThetaFourierPoly:
    """Substitute ``theta -> theta + a`` for the line angle ``a`` of ``tau``."""
    tau = Fraction(tau)
    if not -1 <= tau < 1:
        raise KernelError(f"tau must lie in [-1, 1), got {tau}")
    if tau == 0:
        if p.theta_degree:
            raise KernelError("rotation requires a theta-free polynomial")
        return p
    cos_a, sin_a = line_angle(tau)
    multiples = [
        (as_poly(c), as_poly(s))
        for c, s in angle_multiples(cos_a, sin_a, p.harmonic_degree)
    ]
    return _rotate_with(p, multiples)


def tf_rotate_symbolic(p: ThetaFourierPoly) -> ThetaFourierPoly:
    """Rotation with ``cos a`` and ``sin a`` kept as the kernel generators ``C`` and ``S``."""
    multiples = angle_multiples(GENERATORS["C"], GENERATORS["S"], p.harmonic_degree)
    return _rotate_with(p, multiples)


def tf_map_coefficients(p: ThetaFourierPoly, func) -> ThetaFourierPoly:
    """Apply ``func`` to every coefficient."""
    return ThetaFourierPoly._trusted({key: func(c) for key, c in p._terms.items()})


def tf_eval_numeric(p: ThetaFourierPoly, theta: float, values: Mapping[str, float]) -> float:
    """Floating point value at ``theta``; ``values`` supplies the kernel symbols (pi defaults to math.pi)."""
    point = {"pi": math.pi, **values}
    total = 0.0
    for (k, j, kind), c in p._terms.items():
        basis = math.cos(j * theta) if kind == COS else math.sin(j * theta)
        total += numeric_value(c, point) * theta**k * basis
    return total


def ensure_within(p: ThetaFourierPoly, theta_cap: int, harmonic_cap: int) -> ThetaFourierPoly:
    """Raise :class:`KernelError` when ``p`` exceeds the configured degree caps."""
    if p.theta_degree > theta_cap:
        raise KernelError(f"theta power {p.theta_degree} exceeds cap {theta_cap}")
    if p.harmonic_degree > harmonic_cap:
        raise KernelError(f"harmonic {p.harmonic_degree} exceeds cap {harmonic_cap}")
    return p
