"""Displacement samples, cycle location and comparison with the symbolic jets."""

from multiprocessing import Pool
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
from scipy.optimize import brentq

from ..config.settings import settings
from ..errors import NumericIntegrationError, SystemDefinitionError
from ..expansion.difference import DifferenceJet
from ..utils.logger import get_logger
from .flow import PiecewiseField, half_return

logger = get_logger(__name__)


class DisplacementSample(BaseModel):
    """``Delta(r, eps) = rho_plus - rho_minus`` at one starting radius."""

    r: float = Field(..., description="Starting radius on the line")
    delta: float = Field(..., description="Numeric displacement")
    plus_landing: float = Field(..., description="Signed landing radius of the plus half")
    minus_landing: float = Field(..., description="Signed landing radius of the minus half")
    plus_time: float = Field(..., description="Duration of the plus half-turn")
    minus_time: float = Field(..., description="Duration of the minus half-turn")
    noise: float = Field(..., description="Integration noise floor at r")

    @property
    def sign(self) -> int:
        """Sign of Delta, zero when below the noise floor."""
        if abs(self.delta) <= self.noise:
            return 0
        return 1 if self.delta > 0 else -1

    @property
    def tendency(self) -> str:
        return {1: "expanding", -1: "contracting", 0: "closed"}[self.sign]


class CycleZero(BaseModel):
    """A crossing periodic orbit located as a zero of Delta."""

    r: float = Field(..., description="Radius of the zero")
    bracket: Tuple[float, float] = Field(..., description="Grid interval with the sign change")
    slope: float = Field(..., description="Finite-difference derivative of Delta at the zero")
    simple: bool = Field(..., description="Slope distinguishable from integration noise")


class EpsilonScaling(BaseModel):
    """Residual ``|Delta - eps psi_1|`` against ``eps`` at a fixed radius."""

    r: float = Field(..., description="Radius of the comparison")
    eps: List[float] = Field(..., description="Small parameters used")
    residuals: List[float] = Field(..., description="Residual per eps")
    slope: float = Field(..., description="Least-squares log-log slope")


def displacement(field: PiecewiseField, r: float) -> DisplacementSample:
    """Both half-returns from ``r u`` and their radial difference."""
    plus = half_return(field, r, "plus")
    minus = half_return(field, r, "minus")
    return DisplacementSample(
        r=r,
        delta=plus.radius - minus.radius,
        plus_landing=plus.landing,
        minus_landing=minus.landing,
        plus_time=plus.time,
        minus_time=minus.time,
        noise=field.params.noise(r),
    )


def _sample(task: Tuple[PiecewiseField, float]) -> Optional[DisplacementSample]:
    field, r = task
    try:
        return displacement(field, r)
    except NumericIntegrationError as e:
        logger.warning("Sample skipped", system=field.name, r=r, error=str(e))
        return None


def displacement_grid(
    field: PiecewiseField, radii: Iterable[float], workers: Optional[int] = None
) -> List[Optional[DisplacementSample]]:
    """Samples on a grid, ``None`` where integration failed; parallel when ``workers > 1``."""
    tasks = [(field, float(r)) for r in radii]
    workers = workers or settings.max_workers
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            return pool.map(_sample, tasks)
    return [_sample(task) for task in tasks]


def _refine(field: PiecewiseField, left: float, right: float) -> Optional[CycleZero]:
    def delta(r: float) -> float:
        return displacement(field, r).delta

    try:
        root = brentq(delta, left, right, xtol=1e-15, rtol=1e-12)
        h = 1e-3 * (right - left)
        slope = (delta(root + h) - delta(root - h)) / (2 * h)
    except NumericIntegrationError as e:
        logger.warning("Zero refinement failed", system=field.name, bracket=(left, right), error=str(e))
        return None
    return CycleZero(
        r=root,
        bracket=(left, right),
        slope=slope,
        simple=abs(slope) * h > field.params.noise(root),
    )


def locate_cycles(
    field: PiecewiseField, radii: Sequence[float], workers: Optional[int] = None
) -> List[CycleZero]:
    """Bracket sign changes of Delta on ``radii`` and refine them by bisection.

    Samples below the noise floor carry no sign and failed samples break the
    bracketing; an empty list is a valid answer.
    """
    samples = displacement_grid(field, radii, workers)
    zeros: List[CycleZero] = []
    previous: Optional[DisplacementSample] = None
    for sample in samples:
        if sample is None:
            previous = None
            continue
        if sample.sign == 0:
            continue
        if previous is not None and previous.sign != sample.sign:
            zero = _refine(field, previous.r, sample.r)
            if zero is not None:
                zeros.append(zero)
        previous = sample
    logger.info(
        "Cycles located",
        system=field.name,
        eps=field.params.eps,
        b=field.params.b,
        samples=len(samples),
        failed=sum(s is None for s in samples),
        zeros=[f"{z.r:.6g}" for z in zeros],
    )
    return zeros


def _check_jet(field: PiecewiseField, jet: DifferenceJet) -> None:
    tau = field.params.tau
    rotation = f"{tau.numerator}/{tau.denominator}"
    if jet.system != field.name or jet.rotation != rotation:
        raise SystemDefinitionError(
            f"jet of {jet.system} at tau={jet.rotation} does not describe {field.name} at tau={rotation}"
        )
    if jet.absorbed:
        raise SystemDefinitionError("numeric comparison needs the plain epsilon expansion, not the tilde form")


def jet_prediction(field: PiecewiseField, jet: DifferenceJet, r: float, order: Optional[int] = None) -> float:
    """``sum_{i <= order} eps^i psi_i(r)`` with the field's parameter values."""
    _check_jet(field, jet)
    order = jet.order if order is None else min(order, jet.order)
    eps, values = field.params.eps, field.params.values
    return sum(eps**i * jet.evaluate(i, r, values) for i in range(1, order + 1))


def oracle_sweep(
    field: PiecewiseField, jet: DifferenceJet, radii: Sequence[float], workers: Optional[int] = None
) -> pd.DataFrame:
    """Delta against ``eps psi_1`` (and ``eps^2 psi_2`` when available) on a grid."""
    _check_jet(field, jet)
    eps, values = field.params.eps, field.params.values
    rows = []
    for r, sample in zip(radii, displacement_grid(field, radii, workers)):
        first = eps * jet.evaluate(1, r, values)
        second = eps**2 * jet.evaluate(2, r, values) if jet.order >= 2 else np.nan
        delta = sample.delta if sample is not None else np.nan
        prediction = first + (0.0 if np.isnan(second) else second)
        rows.append(
            {
                "r": float(r),
                "delta": delta,
                "eps_psi1": first,
                "eps2_psi2": second,
                "residual": delta - prediction,
            }
        )
    table = pd.DataFrame(rows, columns=["r", "delta", "eps_psi1", "eps2_psi2", "residual"])
    logger.info(
        "Oracle sweep finished",
        system=field.name,
        eps=eps,
        points=len(table),
        max_residual=float(table["residual"].abs().max()),
    )
    return table


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise NumericIntegrationError("log-log slope needs positive data")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def epsilon_scaling(
    field: PiecewiseField,
    jet: DifferenceJet,
    r: float,
    eps_values: Sequence[float] = (1e-3, 1e-4, 1e-5),
) -> EpsilonScaling:
    """Slope of the first-order residual in ``eps``; about 2 when ``psi_1`` is right."""
    residuals = []
    for eps in eps_values:
        scaled = field.with_params(eps=float(eps))
        sample = displacement(scaled, r)
        residuals.append(abs(sample.delta - jet_prediction(scaled, jet, r, order=1)))
    result = EpsilonScaling(
        r=r, eps=list(eps_values), residuals=residuals, slope=loglog_slope(eps_values, residuals)
    )
    logger.info("Epsilon scaling", system=field.name, r=r, slope=result.slope, residuals=residuals)
    return result
