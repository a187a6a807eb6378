"""Lower bounds on crossing limit cycles from ladders and certified blow-ups."""

from typing import Dict, List, Literal, Mapping, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, Field, model_validator

from ..errors import LadderError, SummaryMismatchError, TransversalityError
from ..utils.logger import get_logger
from .hsystem import HSolution
from .ladder import Ladder

logger = get_logger(__name__)

CountRule = Literal["first-order", "blowup", "pivot-rule"]

# Published (first order, second order) lower bounds at tau = 1/2.
REFERENCE_COUNTS: Dict[str, Tuple[int, int]] = {
    "S1": (7, 7),
    "S2": (8, 10),
    "S3": (9, 9),
    "S4": (9, 12),
    "S1&S2": (10, 12),
}


class CycleCountReport(BaseModel):
    """Number of crossing limit cycles guaranteed near the origin."""

    system: str = Field(..., description="Case tag")
    tau: Optional[str] = Field(default=None, description="Line parameter")
    order: int = Field(..., description="Expansion order the count relies on")
    free_count: int = Field(..., description="Free first-order coefficients")
    zeros: int = Field(..., description="Simple positive zeros K of the difference function")
    pseudo_hopf: int = Field(default=1, ge=0, le=1, description="Extra cycle from the pseudo-Hopf bifurcation")
    total: int = Field(..., description="Lower bound on crossing limit cycles")
    rule: CountRule = Field(default="first-order", description="Counting rule used")
    certified: bool = Field(default=True, description="Every certificate of the rule is present")
    positions: List[int] = Field(default_factory=list, description="Powers of r with a free coefficient")

    @model_validator(mode="after")
    def _total(self) -> "CycleCountReport":
        if self.total != self.zeros + self.pseudo_hopf:
            raise ValueError(
                f"total {self.total} != zeros {self.zeros} + pseudo-Hopf {self.pseudo_hopf}"
            )
        return self

    def line(self) -> str:
        flag = "" if self.certified else " (uncertified)"
        return (
            f"{self.system} tau={self.tau} order={self.order}: {self.total} cycles "
            f"= {self.zeros} zeros + {self.pseudo_hopf} [{self.rule}]{flag}"
        )


def first_order_count(ladder: Ladder) -> CycleCountReport:
    """``K = free_count - 1`` designed zeros plus the pseudo-Hopf cycle."""
    if ladder.free_count == 0:
        raise LadderError(f"{ladder.system}: no free first-order coefficient")
    report = CycleCountReport(
        system=ladder.system,
        tau=ladder.rotation,
        order=1,
        free_count=ladder.free_count,
        zeros=ladder.free_count - 1,
        total=ladder.free_count,
        positions=ladder.positions,
    )
    logger.info("First-order count", system=report.system, tau=report.tau, total=report.total)
    return report


def second_order_count(
    ladder: Ladder,
    rule: CountRule,
    pivot: Optional[int] = None,
    solution: Optional[HSolution] = None,
) -> CycleCountReport:
    """Combine the ladder with the per-case rule.

    ``blowup`` needs a certified h-system root and counts up to the row of the
    pivot alias; ``pivot-rule`` counts up to the last solvable row without a
    certificate; ``first-order`` keeps the first-order count.
    """
    base = first_order_count(ladder)
    if rule == "first-order":
        report = base.model_copy(update={"order": 2, "rule": rule})
    elif rule == "blowup":
        if pivot is None or solution is None:
            raise TransversalityError(f"{ladder.system}: blow-up certificate missing")
        if not solution.certified:
            raise TransversalityError(
                f"{ladder.system}: h-system root not certified "
                f"(transversal={solution.transversal}, nonvanishing={solution.nonvanishing})"
            )
        last = ladder.alias_row(pivot)
        report = base.model_copy(
            update={"order": 2, "rule": rule, "zeros": last - 1, "total": last}
        )
    elif rule == "pivot-rule":
        last = ladder.positions[-1]
        report = base.model_copy(
            update={"order": 2, "rule": rule, "zeros": last - 1, "total": last, "certified": False}
        )
    else:
        raise LadderError(f"unknown counting rule {rule!r}")
    logger.info(
        "Second-order count",
        system=report.system,
        rule=rule,
        total=report.total,
        certified=report.certified,
    )
    return report


def summary_table(reports: Mapping[str, Tuple[CycleCountReport, CycleCountReport]]) -> pd.DataFrame:
    """One row per case with the first- and second-order totals."""
    rows = [
        {
            "system": system,
            "tau": first.tau,
            "first_order": first.total,
            "second_order": second.total,
            "second_order_rule": second.rule,
            "certified": second.certified,
        }
        for system, (first, second) in reports.items()
    ]
    return pd.DataFrame(rows, columns=[
        "system", "tau", "first_order", "second_order", "second_order_rule", "certified"
    ])


def check_summary(table: pd.DataFrame, reference: Mapping[str, Tuple[int, int]] = REFERENCE_COUNTS) -> None:
    """Raise :class:`SummaryMismatchError` listing every cell that differs from ``reference``.

    An uncertified second-order total is only a lower bound: its row is checked
    on the first-order total and on monotonicity, not against the reference.
    """
    mismatches = []
    for record in table.to_dict("records"):
        expected = reference.get(record["system"])
        if expected is None:
            continue
        got = (int(record["first_order"]), int(record["second_order"]))
        certified = bool(record.get("certified", True))
        if certified and got != tuple(expected):
            mismatches.append(f"{record['system']}: got {got[0]}/{got[1]}, expected {expected[0]}/{expected[1]}")
        elif not certified and got[0] != expected[0]:
            mismatches.append(f"{record['system']}: got {got[0]} at first order, expected {expected[0]}")
        if got[1] < got[0]:
            mismatches.append(f"{record['system']}: second order below first order")
    if mismatches:
        raise SummaryMismatchError("; ".join(mismatches))
