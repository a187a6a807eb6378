"""Records describing what a pipeline run did and produced."""

from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class StageRecord(BaseModel):
    """One executed (or cache-served) pipeline stage."""

    stage: str = Field(..., description="Stage name such as expand or ladder")
    key: str = Field(..., description="Content address of the stage inputs")
    cached: bool = Field(default=False, description="Served from the artifact cache")


class RunReport(BaseModel):
    """Outcome of ``run_pipeline``: exit status, files written and the machine record."""

    command: str = Field(..., description="Subcommand")
    config_hash: str = Field(..., description="First 12 hex digits of the config digest")
    exit_code: int = Field(default=0, description="Process exit status")
    directory: Optional[Path] = Field(default=None, description="Report directory")
    stages: List[StageRecord] = Field(default_factory=list, description="Stages in run order")
    record: Dict[str, Any] = Field(default_factory=dict, description="Content of results.json")
    lines: List[str] = Field(default_factory=list, description="Human summary printed by the CLI")

    @property
    def cached_stages(self) -> List[str]:
        return [s.stage for s in self.stages if s.cached]
