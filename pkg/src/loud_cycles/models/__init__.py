"""Pydantic models shared by the pipeline and the command line."""

from .records import RunReport, StageRecord
from .run import BLOWUP_CASES, COMMANDS, Command, RunConfig

__all__ = [
    "RunReport",
    "StageRecord",
    "BLOWUP_CASES",
    "COMMANDS",
    "Command",
    "RunConfig",
]
