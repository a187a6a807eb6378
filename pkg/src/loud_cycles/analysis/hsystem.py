"""High-precision solution of blown-up h-systems with transversality certificates."""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import optimize
from sympy.polys.rings import PolyElement

from ..config.settings import settings
from ..errors import ConvergenceError, TransversalityError
from ..trigcalc.pipoly import field_value
from ..utils.logger import get_logger
from .blowup import HSystem

logger = get_logger(__name__)


class _Compiled:
    """Term list of a polynomial over ``QQ(pi)`` with mpmath coefficients."""

    def __init__(self, poly: PolyElement) -> None:
        self.terms = [(monom, field_value(c, high_precision=True)) for monom, c in poly.iterterms()]
        self.float_terms = [(monom, float(c)) for monom, c in self.terms]

    @staticmethod
    def _term(monom, coefficient, x):
        value = coefficient
        for xi, e in zip(x, monom):
            if e:
                value *= xi**e
        return value

    def __call__(self, x):
        return mpmath.fsum(self._term(m, c, x) for m, c in self.terms)

    def magnitude(self, x):
        return mpmath.fsum(abs(self._term(m, c, x)) for m, c in self.terms)

    def as_float(self, x) -> float:
        return float(sum(self._term(m, c, x) for m, c in self.float_terms))

    def float_magnitude(self, x) -> float:
        return float(sum(abs(self._term(m, c, x)) for m, c in self.float_terms))


class HSolution(BaseModel):
    """Root of an h-system with its certificates."""

    case: str = Field(..., description="Case tag")
    unknowns: Tuple[str, ...] = Field(..., description="Unknown names")
    values: Tuple[Any, ...] = Field(..., description="Root as mpmath numbers")
    residual: float = Field(..., description="Largest relative residual of the square system")
    determinant: Any = Field(..., description="Raw Jacobian determinant")
    scaled_determinant: float = Field(..., description="Determinant after row and column scaling")
    check_value: Any = Field(..., description="Value of the non-vanishing function at the root")
    check_relative: float = Field(..., description="Check value over its term magnitude")
    iterations: int = Field(..., description="Newton iterations used")
    precision: int = Field(..., description="Decimal digits")
    anchor_deviation: Dict[str, float] = Field(
        default_factory=dict, description="Relative distance to the published values"
    )
    transversal: bool = Field(..., description="Scaled determinant above the threshold")
    nonvanishing: bool = Field(..., description="Check function bounded away from zero")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def certified(self) -> bool:
        return self.transversal and self.nonvanishing

    def anchor_match(self, digits: int) -> bool:
        """Every published value reproduced to ``digits`` significant figures."""
        tolerance = 5 * 10.0 ** (-digits)
        return bool(self.anchor_deviation) and all(
            v <= tolerance for v in self.anchor_deviation.values()
        )

    def as_floats(self) -> Dict[str, float]:
        return {name: float(v) for name, v in zip(self.unknowns, self.values)}

    def to_record(self) -> Dict[str, Any]:
        return {
            "case": self.case,
            "solution": {n: mpmath.nstr(v, 20) for n, v in zip(self.unknowns, self.values)},
            "residual": self.residual,
            "determinant": mpmath.nstr(self.determinant, 15),
            "scaled_determinant": self.scaled_determinant,
            "check_value": mpmath.nstr(self.check_value, 15),
            "iterations": self.iterations,
            "precision": self.precision,
            "anchor_deviation": dict(self.anchor_deviation),
            "transversal": self.transversal,
            "nonvanishing": self.nonvanishing,
        }


def _relative_residual(functions: Sequence[_Compiled], x) -> Any:
    worst = mpmath.mpf(0)
    for f in functions:
        value, size = abs(f(x)), f.magnitude(x)
        worst = max(worst, value / size if size else value)
    return worst


def scaled_determinant(jacobian: List[List[Any]], x: Sequence[Any]) -> Any:
    """``|det|`` after scaling column k by ``|x_k|`` and every row to unit max-norm."""
    columns = [abs(xi) if xi else mpmath.mpf(1) for xi in x]
    rows = []
    for row in jacobian:
        scaled = [entry * c for entry, c in zip(row, columns)]
        size = max(abs(entry) for entry in scaled)
        if not size:
            return mpmath.mpf(0)
        rows.append([entry / size for entry in scaled])
    return abs(mpmath.det(mpmath.matrix(rows)))


def _finite(values) -> bool:
    return all(mpmath.isfinite(v) for v in values)


def _newton(functions, derivatives, x, tolerance, max_iterations):
    for iteration in range(max_iterations + 1):
        if not _finite(x):
            raise ConvergenceError(f"Newton iterate left the finite range at iteration {iteration}")
        residual = _relative_residual(functions, x)
        logger.debug("Newton step", iteration=iteration, residual=mpmath.nstr(residual, 5))
        if residual <= tolerance:
            return x, residual, iteration
        rows = [[d(x) for d in row] for row in derivatives]
        if not all(_finite(row) for row in rows):
            raise ConvergenceError(f"non-finite Jacobian at Newton iteration {iteration}")
        if any(not any(row[k] for row in rows) for k in range(len(x))):
            raise ConvergenceError(f"Jacobian has a zero column at Newton iteration {iteration}")
        try:
            # mpmath reports some singular pivots as TypeError instead of ZeroDivisionError
            step = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix([f(x) for f in functions]))
        except (ZeroDivisionError, TypeError, ValueError) as e:
            raise ConvergenceError(f"singular Jacobian at Newton iteration {iteration}") from e
        x = [xi - step[k] for k, xi in enumerate(x)]
    raise ConvergenceError(
        f"Newton did not reach {mpmath.nstr(tolerance, 3)} in {max_iterations} iterations "
        f"(residual {mpmath.nstr(residual, 5)})"
    )


def coarse_start(functions: Sequence[_Compiled], size: int, starts: Optional[int] = None) -> List[float]:
    """Best double-precision root found by ``scipy.optimize.root`` from seeded log-uniform starts."""
    rng = np.random.default_rng(settings.random_seed)
    starts = starts or settings.coarse_starts

    def system(x):
        return [f.as_float(x) for f in functions]

    best, best_residual = None, np.inf
    with np.errstate(all="ignore"):
        for _ in range(starts):
            guess = rng.choice([-1.0, 1.0], size) * 10.0 ** rng.uniform(-3, 13, size)
            outcome = optimize.root(system, guess, method="hybr")
            if not np.all(np.isfinite(outcome.x)):
                continue
            residual = max(
                abs(f.as_float(outcome.x)) / (f.float_magnitude(outcome.x) or 1.0) for f in functions
            )
            if residual < best_residual:
                best, best_residual = list(outcome.x), residual
            if best_residual < 1e-10:
                break
    if best is None:
        raise ConvergenceError("coarse search found no finite candidate")
    logger.info("Coarse start selected", residual=best_residual, start=best)
    return best


def solve_h_system(
    hs: HSystem,
    init: Optional[Sequence[float]] = None,
    precision: Optional[int] = None,
    certify: bool = True,
) -> HSolution:
    """Newton at ``precision`` digits from ``init`` (or a coarse search) plus certificates.

    With ``certify`` a scaled determinant below the threshold or a vanishing
    check function raises :class:`TransversalityError`; otherwise the flags are
    only recorded. An unknown missing from every equation is always an error.
    A start whose Newton run fails falls back to the coarse search.
    """
    precision = precision or settings.precision_digits
    tolerance = (
        settings.residual_tolerance
        if precision == settings.precision_digits
        else 10.0 ** (-(precision // 2))
    )
    gens = hs.ring.gens
    with mpmath.workdps(precision):
        functions = [_Compiled(h) for h in hs.square]
        derivatives = [[_Compiled(h.diff(g)) for g in gens] for h in hs.square]
        check = _Compiled(hs.check_function)
        absent = [
            name
            for name, column in zip(hs.unknowns, zip(*derivatives))
            if not any(d.terms for d in column)
        ]
        if absent:
            raise TransversalityError(
                f"{hs.case}: {', '.join(absent)} do not occur in the square system"
            )

        start = list(init) if init is not None else list(hs.anchor) or None
        x = None
        if start is not None:
            try:
                x, residual, iterations = _newton(
                    functions,
                    derivatives,
                    [mpmath.mpf(v) for v in start],
                    tolerance,
                    settings.newton_max_iterations,
                )
            except ConvergenceError as e:
                logger.warning("Newton from the given start failed", case=hs.case, error=str(e))
        if x is None:
            guess = coarse_start(functions, len(gens))
            x, residual, iterations = _newton(
                functions,
                derivatives,
                [mpmath.mpf(v) for v in guess],
                tolerance,
                settings.newton_max_iterations,
            )

        jacobian = [[d(x) for d in row] for row in derivatives]
        determinant = mpmath.det(mpmath.matrix(jacobian))
        scaled = scaled_determinant(jacobian, x)
        check_value = check(x)
        check_size = check.magnitude(x)
        check_relative = abs(check_value) / check_size if check_size else mpmath.mpf(0)

    deviation = {
        name: float(abs(v - a) / abs(a))
        for name, v, a in zip(hs.unknowns, x, hs.anchor)
        if a
    }
    solution = HSolution(
        case=hs.case,
        unknowns=hs.unknowns,
        values=tuple(x),
        residual=float(residual),
        determinant=determinant,
        scaled_determinant=float(scaled),
        check_value=check_value,
        check_relative=float(check_relative),
        iterations=iterations,
        precision=precision,
        anchor_deviation=deviation,
        transversal=float(scaled) > settings.jacobian_threshold,
        nonvanishing=float(check_relative) > settings.jacobian_threshold,
    )
    logger.info(
        "h-system solved",
        case=hs.case,
        solution={k: f"{v:.10g}" for k, v in solution.as_floats().items()},
        residual=solution.residual,
        scaled_determinant=solution.scaled_determinant,
        check=float(check_value),
        anchor_deviation=deviation,
    )
    if certify and not solution.transversal:
        raise TransversalityError(
            f"{hs.case}: scaled Jacobian determinant {solution.scaled_determinant:.3e} "
            f"below {settings.jacobian_threshold:.1e}"
        )
    if certify and not solution.nonvanishing:
        raise TransversalityError(f"{hs.case}: h_{{{hs.check_row},0}} vanishes at the root")
    return solution
