"""The five-case summary table of first- and second-order cycle counts."""

from typing import List, Mapping, Optional, Tuple

from pydantic import BaseModel, Field

from ..analysis.counting import REFERENCE_COUNTS, CycleCountReport, check_summary, summary_table
from ..errors import SummaryMismatchError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MISSING = "missing"


class SummaryRow(BaseModel):
    system: str = Field(..., description="Case name")
    first_order: Optional[int] = Field(default=None, description="First-order total")
    second_order: Optional[int] = Field(default=None, description="Second-order total")
    expected: Tuple[int, int] = Field(..., description="Reference totals")
    certified: Optional[bool] = Field(default=None, description="Second-order certificates present")

    def cells(self) -> List[str]:
        def cell(value):
            return MISSING if value is None else str(value)

        second = cell(self.second_order)
        if self.certified is False and self.second_order is not None:
            second = f">= {second} (uncertified)"
        return [
            self.system,
            cell(self.first_order),
            second,
            f"{self.expected[0]}/{self.expected[1]}",
        ]


class SummaryTable(BaseModel):
    """Rendered table plus the cells that are missing or differ from the reference."""

    rows: List[SummaryRow] = Field(..., description="One row per reference case")
    missing: List[str] = Field(default_factory=list, description="Cases without both counts")
    mismatches: List[str] = Field(default_factory=list, description="Differences from the reference")
    uncertified: List[str] = Field(
        default_factory=list, description="Cases whose second-order total is only a lower bound"
    )

    @property
    def ok(self) -> bool:
        return not self.missing and not self.mismatches

    def lines(self) -> List[str]:
        out = [
            "| System | 1st order | 2nd order | expected |",
            "|---|---|---|---|",
        ]
        out += ["| " + " | ".join(row.cells()) + " |" for row in self.rows]
        if self.uncertified:
            out += [
                "",
                f"Lower bounds, not compared with the reference: {', '.join(self.uncertified)}",
            ]
        if self.missing:
            out += ["", f"Missing: {', '.join(self.missing)}"]
        if self.mismatches:
            out += ["", *(f"Mismatch: {m}" for m in self.mismatches)]
        return out

    @property
    def text(self) -> str:
        return "\n".join(self.lines())


def emit_summary_table(
    reports: Mapping[str, Tuple[Optional[CycleCountReport], Optional[CycleCountReport]]],
    reference: Mapping[str, Tuple[int, int]] = REFERENCE_COUNTS,
) -> SummaryTable:
    """Render the table for every reference case and diff the complete rows."""
    rows, missing, uncertified, complete = [], [], [], {}
    for system, expected in reference.items():
        first, second = reports.get(system, (None, None))
        rows.append(
            SummaryRow(
                system=system,
                first_order=first.total if first else None,
                second_order=second.total if second else None,
                expected=tuple(expected),
                certified=second.certified if second else None,
            )
        )
        if second is not None and not second.certified:
            uncertified.append(system)
        if first is None or second is None:
            missing.append(system)
        else:
            complete[system] = (first, second)

    mismatches = []
    if complete:
        try:
            check_summary(summary_table(complete), reference)
        except SummaryMismatchError as e:
            mismatches = str(e).split("; ")

    table = SummaryTable(
        rows=rows, missing=missing, mismatches=mismatches, uncertified=uncertified
    )
    if table.ok:
        logger.info("Summary table matches the reference", cases=len(rows))
    else:
        logger.error("Summary table differs from the reference", missing=missing, mismatches=mismatches)
    return table
