"""Numeric checks of center closure and of designed zero constructions."""

import random
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from ..analysis.construction import ZeroConstruction
from ..errors import NumericIntegrationError
from ..utils.logger import get_logger
from .displacement import displacement_grid
from .flow import NumericParams, PiecewiseField, closure_error

logger = get_logger(__name__)


class ClosureRecord(BaseModel):
    """Full-turn return errors of an unperturbed piecewise center."""

    system: str = Field(..., description="Case name")
    samples: List[Tuple[str, float, float]] = Field(
        ..., description="(tau, r, |return - r|) per trajectory"
    )
    tolerance: float = Field(..., description="Accepted closure error")

    @property
    def worst(self) -> float:
        return max((error for _, _, error in self.samples), default=0.0)

    @property
    def closed(self) -> bool:
        return self.worst <= self.tolerance


class ConstructionCheck(BaseModel):
    """Signs of the numeric displacement at the separating points of a construction."""

    system: str = Field(..., description="Case name")
    eps: float = Field(..., description="Perturbation size")
    samples: List[float] = Field(..., description="Separating radii")
    expected: List[int] = Field(..., description="Signs of the truncated psi_1")
    observed: List[Optional[int]] = Field(..., description="Signs of Delta, None where integration failed")

    @property
    def matches(self) -> int:
        return sum(e == o for e, o in zip(self.expected, self.observed))

    @property
    def sign_changes(self) -> int:
        signs = [s for s in self.observed if s]
        return sum(a != b for a, b in zip(signs, signs[1:]))


def closure_sweep(
    plus_name: str,
    minus_name: str,
    count: int = 50,
    r_max: float = 0.2,
    seed: int = 20240101,
    tolerance: float = 1e-9,
    taus: Optional[List[Fraction]] = None,
) -> ClosureRecord:
    """Closure errors at seeded random ``(tau, r)`` pairs, or at ``r`` over fixed ``taus``."""
    rng = random.Random(seed)
    if taus is None:
        pairs = [
            (Fraction(rng.randint(-99, 98), 99), rng.uniform(0.2 * r_max, r_max)) for _ in range(count)
        ]
    else:
        pairs = [(Fraction(t), rng.uniform(0.2 * r_max, r_max)) for t in taus for _ in range(count)]
    samples = []
    name = None
    for tau, r in pairs:
        field = PiecewiseField.from_pair(plus_name, minus_name, NumericParams(tau=tau))
        name = field.name
        samples.append((str(tau), r, closure_error(field, r)))
    record = ClosureRecord(system=name or f"{plus_name}&{minus_name}", samples=samples, tolerance=tolerance)
    logger.info("Center closure sweep", system=record.system, samples=len(samples), worst=record.worst)
    return record


def verify_construction(
    construction: ZeroConstruction, field: PiecewiseField, eps: float
) -> ConstructionCheck:
    """Integrate with the constructed parameters and compare signs at the separating radii."""
    if construction.system != field.name:
        raise NumericIntegrationError(
            f"construction for {construction.system} applied to the field of {field.name}"
        )
    scaled = field.with_params(values=construction.parameter_floats(), eps=eps)
    radii = [float(s) for s in construction.samples]
    observed = [None if s is None else s.sign for s in displacement_grid(scaled, radii)]
    check = ConstructionCheck(
        system=field.name,
        eps=eps,
        samples=radii,
        expected=list(construction.signs),
        observed=observed,
    )
    logger.info(
        "Construction checked numerically",
        system=field.name,
        eps=eps,
        matches=check.matches,
        expected=len(check.expected),
    )
    return check
