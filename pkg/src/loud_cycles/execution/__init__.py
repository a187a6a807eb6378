"""Pipeline orchestration, artifact cache and report writing."""

from .cache import ArtifactCache, canonical_json, digest
from .pipeline import Pipeline, case_tag, load_jet, load_parameter_values, run_pipeline
from .reports import report_directory, write_report
from .summary import SummaryRow, SummaryTable, emit_summary_table

__all__ = [
    "ArtifactCache",
    "canonical_json",
    "digest",
    "Pipeline",
    "case_tag",
    "load_jet",
    "load_parameter_values",
    "run_pipeline",
    "report_directory",
    "write_report",
    "SummaryRow",
    "SummaryTable",
    "emit_summary_table",
]
