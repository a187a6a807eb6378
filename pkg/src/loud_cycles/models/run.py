"""Run configuration shared by the CLI, the pipeline and the runner script."""

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.settings import settings
from ..errors import LoudCyclesError
from ..systems.piecewise import resolve_case
from ..trigcalc.rings import parse_fraction

Command = Literal[
    "expand",
    "ladder",
    "blowup",
    "count",
    "verify-numeric",
    "center-check",
    "pseudo-hopf",
    "table",
]
COMMANDS: Tuple[str, ...] = Command.__args__

BLOWUP_CASES = ("s3", "s4", "s1s2")

# Fields that locate outputs or steer execution without changing results.
_PLUMBING = {"out", "cache_dir", "results_directory", "display_plot", "workers", "verbose"}


class RunConfig(BaseModel):
    """Every input of one command, validated before any computation starts."""

    command: Command = Field(..., description="Subcommand to run")
    case: str = Field(default="s1", description="Registry tag of the piecewise center")
    plus: Optional[str] = Field(default=None, description="Plus half for center-check")
    minus: Optional[str] = Field(default=None, description="Minus half for center-check")
    tau: Fraction = Field(default_factory=lambda: settings.tau, description="Line parameter p/q")
    order: Optional[int] = Field(
        default=None, ge=1, description="Expansion order, or series order for center-check"
    )
    n: int = Field(
        default_factory=lambda: settings.default_order_n, ge=2, description="Truncation order N"
    )
    policy: Literal["canonical", "paper"] = Field(default="canonical", description="Pivot policy")
    convention: Literal["taylor", "published"] = Field(
        default="taylor", description="Second-order coefficients of the blow-up rows"
    )
    precision: int = Field(
        default_factory=lambda: settings.precision_digits, ge=15, description="Newton digits"
    )
    seed: int = Field(default_factory=lambda: settings.random_seed, description="Random seed")

    jet: Optional[Path] = Field(default=None, description="Serialized difference jet")
    params: Optional[Path] = Field(default=None, description="Numeric parameter values")
    eps: float = Field(default=1e-4, gt=0, description="Perturbation size of numeric runs")
    grid: str = Field(default="0.02:0.3:40", description="Radius grid start:stop:count")
    r_check: float = Field(default=0.1, gt=0, description="Radius of the epsilon-scaling check")
    b: float = Field(default=1e-6, description="Constant term of the pseudo-Hopf run")
    numeric: bool = Field(default=False, description="Add numeric closure to center-check")
    r0: Fraction = Field(default=Fraction(3, 10), description="Outer radius of designed zeros")

    out: Optional[Path] = Field(default=None, description="Extra copy of the main artifact")
    cache_dir: Path = Field(default_factory=lambda: settings.cache_dir)
    results_directory: Path = Field(default_factory=lambda: settings.results_directory)
    display_plot: bool = Field(default=False, description="Show plots instead of Agg rendering")
    workers: int = Field(default_factory=lambda: settings.max_workers, ge=1)
    verbose: bool = Field(default=False, description="Debug logging")

    model_config = ConfigDict(extra="forbid", frozen=True)

    @field_validator("case")
    @classmethod
    def validate_case(cls, v: str) -> str:
        try:
            resolve_case(v)
        except LoudCyclesError as e:
            raise ValueError(str(e)) from e
        return v.strip().lower().replace("&", "")

    @field_validator("plus", "minus")
    @classmethod
    def validate_half(cls, v: Optional[str]) -> Optional[str]:
        if v is None:
            return v
        name = v.strip().upper()
        if not name.startswith("S"):
            name = f"S{name}"
        if name not in {"S1", "S2", "S3", "S4"}:
            raise ValueError(f"unknown half system {v!r}")
        return name

    @field_validator("tau", "r0", mode="before")
    @classmethod
    def validate_fraction(cls, v: Any) -> Fraction:
        try:
            return parse_fraction(v)
        except (LoudCyclesError, ZeroDivisionError) as e:
            raise ValueError(str(e)) from e

    @field_validator("tau")
    @classmethod
    def validate_tau_range(cls, v: Fraction) -> Fraction:
        if not -1 <= v < 1:
            raise ValueError(f"tau must lie in [-1, 1), got {v}")
        return v

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, v: str) -> str:
        parts = v.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must read start:stop:count, got {v!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if not 0 < start < stop or count < 2:
            raise ValueError(f"grid needs 0 < start < stop and count >= 2, got {v!r}")
        return v

    @model_validator(mode="after")
    def validate_command(self) -> "RunConfig":
        if self.command == "center-check":
            if (self.plus is None) != (self.minus is None):
                raise ValueError("center-check needs both --plus and --minus")
            if self.order is not None and self.order < 2:
                raise ValueError("center-check series order must be at least 2")
        elif self.order is not None and self.order > 2:
            raise ValueError(f"expansion order must be 1 or 2, got {self.order}")
        if self.command == "blowup" and self.case not in BLOWUP_CASES:
            raise ValueError(f"blow-up data exist for {', '.join(BLOWUP_CASES)} only")
        if self.command == "verify-numeric" and self.params is None:
            raise ValueError("verify-numeric needs --params")
        return self

    @property
    def expansion_order(self) -> int:
        return self.order or 1

    @property
    def series_order(self) -> int:
        return self.order or 12

    @property
    def radii(self) -> List[float]:
        start, stop, count = self.grid.split(":")
        return [float(r) for r in np.linspace(float(start), float(stop), int(count))]

    def canonical(self) -> str:
        """Sorted compact JSON of the result-relevant fields."""
        data = self.model_dump(mode="json", exclude=_PLUMBING)
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()[:12]

    @classmethod
    def from_sources(
        cls,
        command: str,
        file_values: Optional[Mapping[str, Optional[str]]] = None,
        flags: Optional[Mapping[str, Any]] = None,
    ) -> "RunConfig":
        """Merge config-file values with flags; flags win, ``None`` flags are absent."""
        merged: Dict[str, Any] = {}
        for source in (file_values or {}, flags or {}):
            for key, value in source.items():
                if value is None:
                    continue
                merged[_field_name(key)] = value
        merged["command"] = command
        return cls(**merged)


def _field_name(key: str) -> str:
    """Config keys mirror long flags: ``--r-check`` and ``r_check`` both name ``r_check``."""
    name = key.strip().lstrip("-").replace("-", "_")
    return "n" if name in {"N", "n"} else name.lower()
