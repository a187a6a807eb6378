"""Independence ladders, blow-ups, h-systems and limit cycle counts."""

from .blowup import (
    BlownRows,
    BlowupSpec,
    HSystem,
    ReducedRows,
    blow_up,
    blowup_reduce,
    eliminate_dependent_linear,
)
from .cases import CASES, CaseData, case_count, case_data
from .construction import ZeroConstruction, alternating_zeros
from .counting import (
    REFERENCE_COUNTS,
    CycleCountReport,
    check_summary,
    first_order_count,
    second_order_count,
    summary_table,
)
from .hsystem import HSolution, scaled_determinant, solve_h_system
from .ladder import Ladder, LadderRow, independence_ladder, verify_ladder

__all__ = [
    "BlownRows",
    "BlowupSpec",
    "HSystem",
    "ReducedRows",
    "blow_up",
    "blowup_reduce",
    "eliminate_dependent_linear",
    "CASES",
    "CaseData",
    "case_count",
    "case_data",
    "ZeroConstruction",
    "alternating_zeros",
    "REFERENCE_COUNTS",
    "CycleCountReport",
    "check_summary",
    "first_order_count",
    "second_order_count",
    "summary_table",
    "HSolution",
    "scaled_determinant",
    "solve_h_system",
    "Ladder",
    "LadderRow",
    "independence_ladder",
    "verify_ladder",
]
