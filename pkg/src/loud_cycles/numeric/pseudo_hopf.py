"""Pseudo-Hopf bifurcation: one extra small crossing cycle born from a sliding segment."""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..errors import NumericIntegrationError
from ..utils.logger import get_logger
from .displacement import CycleZero, displacement, locate_cycles
from .flow import PiecewiseField, sliding_segment

logger = get_logger(__name__)

OUTER_RADIUS = 0.05


class PseudoHopfReport(BaseModel):
    """Zeros of Delta near the origin with and without the constant term ``b``."""

    system: str = Field(..., description="Case name")
    tau: str = Field(..., description="Line parameter")
    eps: float = Field(..., description="Perturbation size")
    b: float = Field(..., description="Constant added to the minus field along the line normal")
    origin: str = Field(..., description="expanding or contracting innermost displacement at b = 0")
    baseline: List[float] = Field(..., description="Zeros at b = 0")
    zeros: List[float] = Field(..., description="Zeros with the constant term")
    extra: List[float] = Field(..., description="Zeros present only with the constant term")
    sliding: Optional[Tuple[float, float]] = Field(
        default=None, description="Sliding segment as an interval of signed radii"
    )
    sliding_stability: str = Field(default="none", description="attracting, repelling or none")

    def lines(self) -> List[str]:
        extra = ", ".join(f"{r:.6g}" for r in self.extra) or "none"
        segment = (
            f"[{self.sliding[0]:.3g}, {self.sliding[1]:.3g}] ({self.sliding_stability})"
            if self.sliding
            else "none"
        )
        return [
            f"{self.system} tau={self.tau} eps={self.eps:g} b={self.b:g}",
            f"origin at b=0: {self.origin}",
            f"sliding segment: {segment}",
            f"zeros at b=0: {len(self.baseline)}, with b: {len(self.zeros)}",
            f"new small-amplitude cycle(s): {extra}",
        ]


def _stability(field: PiecewiseField, segment: Tuple[float, float]) -> str:
    """Both halves pointing at the line: attracting; both pointing away: repelling."""
    middle = field.line_point(0.5 * (segment[0] + segment[1]))
    plus, minus = field.contact("plus", middle), field.contact("minus", middle)
    if plus < 0 < minus:
        return "attracting"
    if minus < 0 < plus:
        return "repelling"
    return "none"


def _is_new(zero: CycleZero, baseline: Sequence[CycleZero]) -> bool:
    return all(abs(zero.r - other.r) > 0.05 * other.r for other in baseline)


def pseudo_hopf_demo(
    field: PiecewiseField,
    b: float,
    radii: Optional[Sequence[float]] = None,
    workers: Optional[int] = None,
) -> PseudoHopfReport:
    """Add ``b n`` to the minus field and compare the near-origin zeros with ``b = 0``.

    An extra zero appears when ``b`` has the sign of the innermost displacement
    at ``b = 0``; the default grid is geometric from ``4|b|`` to 0.05.
    """
    if radii is None:
        if 4 * abs(b) >= OUTER_RADIUS:
            raise NumericIntegrationError(
                f"b={b:g} too large: the new cycle would leave the validated neighbourhood"
            )
        radii = np.geomspace(max(4 * abs(b), 1e-7), OUTER_RADIUS, 80)
    radii = [float(r) for r in radii]

    unperturbed = field.with_params(b=0.0)
    perturbed = field.with_params(b=float(b))
    origin = displacement(unperturbed, radii[0])
    baseline = locate_cycles(unperturbed, radii, workers)
    zeros = locate_cycles(perturbed, radii, workers)
    extra = [z for z in zeros if _is_new(z, baseline)]

    segment = sliding_segment(perturbed) if b else None
    report = PseudoHopfReport(
        system=field.name,
        tau=str(field.params.tau),
        eps=field.params.eps,
        b=float(b),
        origin="expanding" if origin.delta > 0 else "contracting",
        baseline=[z.r for z in baseline],
        zeros=[z.r for z in zeros],
        extra=[z.r for z in extra],
        sliding=segment,
        sliding_stability=_stability(perturbed, segment) if segment else "none",
    )
    logger.info(
        "Pseudo-Hopf run",
        system=report.system,
        b=report.b,
        origin=report.origin,
        extra=report.extra,
        sliding=report.sliding_stability,
    )
    return report
