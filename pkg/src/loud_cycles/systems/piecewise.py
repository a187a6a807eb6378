"""Piecewise centers: two polar halves glued along a line through the origin."""

from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from ..errors import NonCenterError, SystemDefinitionError
from ..trigcalc.rings import PARAMETER_NAMES, parse_fraction
from ..utils.logger import get_logger
from .planar import system_by_name
from .polar import HalfSystemPolar, to_polar

logger = get_logger(__name__)

# CLI tag -> (plus half, minus half)
REGISTRY: Dict[str, Tuple[str, str]] = {
    "s1": ("S1", "S1"),
    "s2": ("S2", "S2"),
    "s3": ("S3", "S3"),
    "s4": ("S4", "S4"),
    "s1s2": ("S1", "S2"),
    "linear": ("L", "L"),
}


class PiecewiseCenter(BaseModel):
    """The pair ``(Z+, Z-)`` in polar canonical data plus the line parameter."""

    name: str = Field(..., description="Tag such as S1 or S1&S2")
    plus: HalfSystemPolar = Field(..., description="Half acting on 0 < theta < pi")
    minus: HalfSystemPolar = Field(..., description="Half acting on -pi < theta < 0")
    tau: Optional[Fraction] = Field(
        default=None, description="Line parameter; None for symbolic rotation"
    )
    zeroed: Tuple[str, ...] = Field(
        default=(), description="Perturbation symbols fixed to zero before expansion"
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def half(self, side: str) -> HalfSystemPolar:
        if side == "plus":
            return self.plus
        if side == "minus":
            return self.minus
        raise SystemDefinitionError(f"unknown side {side!r}")

    @property
    def is_symbolic(self) -> bool:
        return self.tau is None

    def first_integrals(self):
        """First integrals ``(H+, H-)`` of the unperturbed halves."""
        from ..centercheck.integrals import first_integral

        return first_integral(self.plus.name), first_integral(self.minus.name)


def case_name(plus_name: str, minus_name: str) -> str:
    return plus_name if plus_name == minus_name else f"{plus_name}&{minus_name}"


def resolve_case(tag: str) -> Tuple[str, str]:
    """Map a registry tag (``s1``..``s4``, ``s1s2``) to its two half names."""
    key = tag.strip().lower().replace("&", "")
    if key not in REGISTRY:
        raise SystemDefinitionError(
            f"unknown case {tag!r}; expected one of {', '.join(REGISTRY)}"
        )
    return REGISTRY[key]


def make_piecewise(
    plus_name: str,
    minus_name: str,
    tau: Union[Fraction, int, str, None],
    zeroed: Iterable[str] = (),
    center_order: int = 12,
) -> PiecewiseCenter:
    """Assemble and rotate a piecewise center, rejecting combinations that are not centers.

    ``tau=None`` keeps the rotation symbolic; only smooth (same-system) pairs
    are accepted in that mode since the center condition depends on ``tau``.
    """
    plus_sys = system_by_name(plus_name)
    minus_sys = system_by_name(minus_name)
    zeroed = tuple(zeroed)
    unknown = [name for name in zeroed if name not in PARAMETER_NAMES]
    if unknown:
        raise SystemDefinitionError(f"unknown perturbation symbols: {unknown}")

    if tau is not None:
        tau = parse_fraction(tau)
        if not -1 <= tau < 1:
            raise SystemDefinitionError(f"tau must lie in [-1, 1), got {tau}")

    if plus_sys.name != minus_sys.name:
        if "L" in (plus_sys.name, minus_sys.name):
            raise NonCenterError("the linear center only pairs with itself")
        if tau is None:
            if {plus_sys.name, minus_sys.name} != {"S1", "S2"}:
                raise NonCenterError(
                    f"{plus_sys.name}&{minus_sys.name} is not a center for every line"
                )
        elif tau != 0:
            from ..centercheck.sigma import is_piecewise_center

            verdict = is_piecewise_center(
                int(plus_sys.name[1]), int(minus_sys.name[1]), tau, center_order
            )
            if not verdict.is_center:
                logger.error(
                    "Piecewise combination rejected",
                    plus=plus_sys.name,
                    minus=minus_sys.name,
                    tau=str(tau),
                    first_difference=verdict.first_difference,
                )
                raise NonCenterError(
                    f"{plus_sys.name}&{minus_sys.name} with tau={tau} is not a center: "
                    f"half-return series differ at order {verdict.first_difference}"
                )

    values = {name: 0 for name in zeroed}
    halves = {}
    for side, system in (("plus", plus_sys), ("minus", minus_sys)):
        half = to_polar(system, side).specialize(values)
        halves[side] = half.rotate_symbolic() if tau is None else half.rotate(tau)

    center = PiecewiseCenter(
        name=case_name(plus_sys.name, minus_sys.name),
        plus=halves["plus"],
        minus=halves["minus"],
        tau=tau,
        zeroed=zeroed,
    )
    logger.info(
        "Piecewise center assembled",
        case=center.name,
        tau="symbolic" if tau is None else str(tau),
        zeroed=len(zeroed),
    )
    return center


def make_case(tag: str, tau: Union[Fraction, int, str, None], zeroed: Iterable[str] = ()) -> PiecewiseCenter:
    """``make_piecewise`` addressed by registry tag."""
    plus_name, minus_name = resolve_case(tag)
    return make_piecewise(plus_name, minus_name, tau, zeroed=zeroed)
