"""Alternating-sign choice of the free coefficients realizing the designed zeros."""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

import mpmath
from pydantic import BaseModel, ConfigDict, Field

from ..config.settings import settings
from ..errors import LadderError
from ..expansion.difference import DifferenceJet
from ..trigcalc.pipoly import field_value
from ..trigcalc.rings import PARAMETER_NAMES, mp_value
from ..utils.logger import get_logger
from .ladder import Ladder, alias_index

logger = get_logger(__name__)


def _sign(value) -> int:
    return (value > 0) - (value < 0)


class ZeroConstruction(BaseModel):
    """Free coefficients whose truncated ``psi_1`` vanishes at ``r0 / 2^k``, ``k = 1..K``."""

    system: str = Field(..., description="Case tag")
    zeros: List[Any] = Field(..., description="Designed zeros, decreasing")
    alphas: Dict[int, Any] = Field(..., description="alpha_l values, the last one normalized to 1")
    parameters: Dict[str, Any] = Field(..., description="Perturbation parameters realizing the alphas")
    samples: List[Any] = Field(..., description="Points separating the zeros")
    signs: List[int] = Field(..., description="Sign of the ladder polynomial at the samples")
    jet_signs: Optional[List[int]] = Field(
        default=None, description="Sign of psi_1 from the jet at the samples"
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def alternating(self) -> bool:
        return all(a == -b != 0 for a, b in zip(self.signs, self.signs[1:]))

    @property
    def alpha_signs(self) -> List[int]:
        return [_sign(self.alphas[l]) for l in sorted(self.alphas)]

    @property
    def verified(self) -> bool:
        """Sign changes hold on the ladder polynomial and, when evaluated, on the jet."""
        if not self.alternating:
            return False
        return self.jet_signs is None or self.jet_signs == self.signs

    def parameter_floats(self) -> Dict[str, float]:
        return {name: float(v) for name, v in self.parameters.items()}


def _weights(ladder: Ladder, r) -> Dict[int, Any]:
    """``w_l(r)``: the polynomial multiplying ``alpha_l`` in the truncated ``psi_1``."""
    weights = {row.alias: r**row.j for row in ladder.rows}
    for j, combination in ladder.dependent.items():
        for l, c in combination.items():
            weights[l] += field_value(c, high_precision=True) * r**j
    return weights


def alternating_zeros(
    ladder: Ladder,
    r0: Union[Fraction, float] = Fraction(1, 2),
    jet: Optional[DifferenceJet] = None,
    precision: Optional[int] = None,
) -> ZeroConstruction:
    """Pick the ``alpha`` values so the truncated ``psi_1`` has ``free_count - 1`` simple zeros.

    The last alpha is fixed to one and the others solve the linear conditions
    ``psi_1(r_k) = 0``. The unused parameters are set to zero and the pivots
    are recovered from the ladder expressions. With ``jet`` the sign pattern is
    re-evaluated directly on ``psi_1`` as a check of the whole chain.
    """
    count = ladder.free_count - 1
    if count < 1:
        raise LadderError(f"{ladder.system}: {ladder.free_count} free coefficient(s) give no zero")
    precision = precision or settings.precision_digits
    with mpmath.workdps(precision):
        r0 = mpmath.mpf(Fraction(r0).numerator) / Fraction(r0).denominator
        zeros = [r0 / 2**k for k in range(1, count + 1)]
        last = ladder.rows[-1].alias
        free = [row.alias for row in ladder.rows[:-1]]

        matrix = mpmath.matrix(count, count)
        rhs = mpmath.matrix(count, 1)
        for k, r in enumerate(zeros):
            weights = _weights(ladder, r)
            for col, l in enumerate(free):
                matrix[k, col] = weights[l]
            rhs[k] = -weights[last]
        solved = mpmath.lu_solve(matrix, rhs)
        alphas = {l: solved[i] for i, l in enumerate(free)}
        alphas[last] = mpmath.mpf(1)

        parameters = {name: mpmath.mpf(0) for name in PARAMETER_NAMES}
        for pivot, form in ladder.expressions.items():
            parameters[pivot] = mpmath.fsum(
                field_value(c, high_precision=True) * alphas[alias_index(k)]
                for k, c in form.items()
                if k.startswith("alpha")
            )

        samples = [zeros[0] * 3 / 2]
        samples += [mpmath.sqrt(a * b) for a, b in zip(zeros, zeros[1:])]
        samples.append(zeros[-1] / 2)

        def ladder_poly(r):
            weights = _weights(ladder, r)
            return mpmath.fsum(alphas[l] * w for l, w in weights.items())

        signs = [_sign(ladder_poly(s)) for s in samples]
        jet_signs = None
        if jet is not None:
            jet_signs = [
                _sign(
                    mpmath.fsum(
                        mp_value(jet.coefficient(1, j), parameters) * s**j
                        for j in range(1, ladder.n + 1)
                    )
                )
                for s in samples
            ]

    construction = ZeroConstruction(
        system=ladder.system,
        zeros=zeros,
        alphas=alphas,
        parameters=parameters,
        samples=samples,
        signs=signs,
        jet_signs=jet_signs,
    )
    logger.info(
        "Alternating construction",
        system=ladder.system,
        zeros=count,
        alternating=construction.alternating,
        verified=construction.verified,
        alpha_signs=construction.alpha_signs,
    )
    return construction
