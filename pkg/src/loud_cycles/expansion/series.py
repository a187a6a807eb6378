"""Truncated power series in ``r`` with theta-Fourier coefficients.

A series is a dense list indexed by the power of ``r``; every operation
truncates at a fixed order and never drops terms below it.
"""

from typing import List, Sequence

from ..errors import ExpansionError
from ..trigcalc.fourier import ZERO_TF, ThetaFourierPoly, tf_add, tf_mul, tf_sum

RSeries = List[ThetaFourierPoly]

ONE_TF = ThetaFourierPoly.constant(1)


def series_zero(order: int) -> RSeries:
    return [ZERO_TF] * (order + 1)


def series_pad(a: Sequence[ThetaFourierPoly], order: int) -> RSeries:
    """Copy of ``a`` truncated or zero padded to ``order``."""
    out = list(a[: order + 1])
    return out + [ZERO_TF] * (order + 1 - len(out))


def series_add(*items: Sequence[ThetaFourierPoly]) -> RSeries:
    order = max(len(a) for a in items) - 1
    padded = [series_pad(a, order) for a in items]
    return [tf_sum(column) for column in zip(*padded)]


def series_scale(a: Sequence[ThetaFourierPoly], factor) -> RSeries:
    """Multiply every coefficient by a scalar or a theta-Fourier polynomial."""
    if isinstance(factor, ThetaFourierPoly):
        return [tf_mul(t, factor) for t in a]
    return [t * factor for t in a]


def series_shift(a: Sequence[ThetaFourierPoly], k: int, order: int) -> RSeries:
    """``r^k * a`` truncated at ``order``."""
    return series_pad([ZERO_TF] * k + list(a), order)


def series_mul(a: Sequence[ThetaFourierPoly], b: Sequence[ThetaFourierPoly], order: int) -> RSeries:
    out = series_zero(order)
    for i, x in enumerate(a[: order + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            if y:
                out[i + j] = tf_add(out[i + j], tf_mul(x, y))
    return out


def series_powers(a: Sequence[ThetaFourierPoly], count: int, order: int) -> List[RSeries]:
    """``[1, a, a^2, ..., a^count]`` truncated at ``order``."""
    powers = [series_pad([ONE_TF], order)]
    for _ in range(count):
        powers.append(series_mul(powers[-1], a, order))
    return powers


def compose_polynomial(
    coefficients: Sequence[ThetaFourierPoly], powers: Sequence[RSeries], order: int
) -> RSeries:
    """``sum_k c_k(theta) phi^k`` for a polynomial in ``r`` and precomputed powers of ``phi``."""
    if len(coefficients) > len(powers):
        raise ExpansionError(
            f"need {len(coefficients) - 1} powers of the solution series, have {len(powers) - 1}"
        )
    out = series_zero(order)
    for c, power in zip(coefficients, powers):
        if c:
            out = series_add(out, series_scale(power, c))
    return out


def reciprocal_one_plus(w: Sequence[ThetaFourierPoly], order: int) -> RSeries:
    """``(1 + w)^(-1)`` for a series ``w`` without constant term."""
    if w and w[0]:
        raise ExpansionError("reciprocal expects a series vanishing at r = 0")
    w = series_pad(w, order)
    out = [ONE_TF]
    for j in range(1, order + 1):
        out.append(-tf_sum(tf_mul(w[k], out[j - k]) for k in range(1, j + 1) if w[k]))
    return out


def derivative_coefficients(coefficients: Sequence[ThetaFourierPoly]) -> RSeries:
    """Coefficients of ``d/dr`` of a polynomial in ``r``."""
    return [t * k for k, t in enumerate(coefficients)][1:] or [ZERO_TF]
