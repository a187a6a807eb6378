"""Per-case data of the second-order analysis at ``tau = 1/2``."""

from fractions import Fraction
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..errors import SystemDefinitionError
from ..systems.piecewise import case_name, resolve_case
from .blowup import BlowupSpec
from .counting import CountRule, CycleCountReport, second_order_count
from .hsystem import HSolution
from .ladder import Ladder

_LOUD_PIVOTS = ("am10", "bm01", "am11", "am02", "bm20", "am20", "ap11", "bp20", "bp01")


class CaseData(BaseModel):
    """Pivot sequence, counting rule and blow-up of one case."""

    system: str = Field(..., description="Case name such as S4 or S1&S2")
    tag: str = Field(..., description="Registry tag")
    tau: Fraction = Field(default=Fraction(1, 2), description="Line parameter of the analysis")
    rule: CountRule = Field(..., description="Second-order counting rule")
    pivots: Optional[Tuple[str, ...]] = Field(
        default=None, description="Published pivot sequence, if any"
    )
    blowup: Optional[BlowupSpec] = Field(default=None, description="Blow-up data")
    certify: bool = Field(default=True, description="Blow-up must be transversal for the count")

    model_config = ConfigDict(frozen=True)

    @property
    def min_n(self) -> int:
        """Smallest truncation covering every row the analysis reads."""
        if self.blowup is not None:
            return self.blowup.n
        return 11


S4_BLOWUP = BlowupSpec(
    case="S4",
    pivot=9,
    zero_aliases=(1, 2, 3, 4, 5, 6),
    zeroed=("am01", "ap01", "ap10", "ap20", "bm02", "bm10", "bm11", "bp02"),
    substitutions={
        "alpha7": {"alpha9": 2, "gamma7": 1},
        "alpha8": {"alpha9": 2, "gamma8": 1},
        "ap02": {"alpha9": 1, "z1": 1},
        "bp10": {"alpha9": 1, "z2": 1},
        "bp11": {"alpha9": 1, "z3": 1},
    },
    rows=(7, 8, 9, 10, 11, 12),
    equations=(7, 8, 9, 10, 11),
    check_row=12,
    check_power=1,
    unknowns=("gamma7", "gamma8", "z1", "z2", "z3"),
    anchor=(-1.755e7, -1.318e9, 0.8838, 0.09214, -0.08745),
    anchor_digits=4,
)

S3_BLOWUP = BlowupSpec(
    case="S3",
    pivot=8,
    zero_aliases=(1, 2, 3, 4, 5, 6, 9),
    zeroed=("ap01", "ap10", "ap02", "ap20", "bm02", "bm10", "bm11", "bp02", "bp10", "bp11"),
    substitutions={
        "alpha7": {"alpha8": 2, "gamma7": 1},
        "am01": {"alpha8": 1, "z1": 1},
    },
    rows=(7, 8, 9),
    equations=(7, 8),
    check_row=9,
    check_power=2,
    unknowns=("gamma7", "z1"),
    anchor=(1.403409714e12, -1.862257817e4),
    anchor_digits=10,
    depth=12,
)

S1S2_BLOWUP = BlowupSpec(
    case="S1&S2",
    pivot=10,
    zero_aliases=(1, 2, 3, 4, 5, 6, 7, 8),
    zeroed=("ap02", "ap20", "bm01", "bm02", "bm11", "bp01", "bp02", "bp10"),
    substitutions={
        "alpha9": {"alpha10": 2, "gamma9": 1},
        "am01": {"alpha10": 1, "z1": 1},
        "bp11": {"alpha10": 1, "z2": 1},
    },
    rows=(9, 10, 11, 12),
    equations=(9, 10, 11),
    check_row=12,
    check_power=1,
    unknowns=("gamma9", "z1", "z2"),
    anchor=(-1.267678465e11, -8.373115792e4, 5.752432052e4),
    anchor_digits=10,
)

CASES: Dict[str, CaseData] = {
    "s1": CaseData(system="S1", tag="s1", rule="first-order"),
    "s2": CaseData(system="S2", tag="s2", rule="pivot-rule"),
    "s3": CaseData(
        system="S3",
        tag="s3",
        rule="first-order",
        pivots=_LOUD_PIVOTS,
        blowup=S3_BLOWUP,
        certify=False,
    ),
    "s4": CaseData(system="S4", tag="s4", rule="blowup", pivots=_LOUD_PIVOTS, blowup=S4_BLOWUP),
    "s1s2": CaseData(
        system="S1&S2",
        tag="s1s2",
        rule="blowup",
        pivots=("am10", "bm10", "am11", "am02", "bp20", "am20", "bm20", "ap01", "ap10", "ap11"),
        blowup=S1S2_BLOWUP,
    ),
}


def case_data(tag: str) -> CaseData:
    """Look up a case by registry tag or display name (``S1&S2``)."""
    plus, minus = resolve_case(tag)
    name = case_name(plus, minus)
    for data in CASES.values():
        if data.system == name:
            return data
    raise SystemDefinitionError(f"no second-order analysis data for {name}")


def case_count(
    data: CaseData, ladder: Ladder, solution: Optional[HSolution] = None
) -> CycleCountReport:
    """``second_order_count`` with the rule and pivot of ``data``."""
    pivot = data.blowup.pivot if data.blowup is not None else None
    return second_order_count(ladder, data.rule, pivot=pivot, solution=solution)
