"""Configuration and settings management for the limit cycle toolkit."""

from fractions import Fraction
from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv


class CycleSettings(BaseSettings):
    """Main configuration settings for expansions, analysis and the numeric oracle."""

    # Environment
    environment: Literal["development", "production"] = Field(
        default="development", description="Runtime environment mode"
    )

    # Storage
    cache_dir: Path = Field(
        default=Path(".loud_cycles_cache"),
        description="Directory for content-addressed pipeline artifacts",
    )
    results_directory: Path = Field(
        default=Path("results"), description="Directory for run reports"
    )

    # Logging Configuration
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO", description="Logging level"
    )
    log_directory: Path = Field(
        default=Path("logs"), description="Directory for log files"
    )

    # Expansion
    default_order_n: int = Field(
        default=15, ge=2, description="Default truncation order N of the r-jets"
    )
    default_tau: str = Field(
        default="1/2", description="Default switching line parameter as p/q"
    )
    theta_cap_offset: int = Field(
        default=1, ge=0, description="Allowed theta power above N"
    )
    harmonic_cap_factor: int = Field(
        default=3, ge=1, description="Harmonic index cap is factor * (N + 2)"
    )

    # Analysis
    precision_digits: int = Field(
        default=50, ge=15, description="Working precision of the h-system Newton"
    )
    residual_tolerance: float = Field(
        default=1e-25, description="Normalized Newton residual bound"
    )
    jacobian_threshold: float = Field(
        default=1e-8, description="Scaled Jacobian determinant threshold"
    )
    newton_max_iterations: int = Field(
        default=100, ge=1, description="Newton iteration cap for h-systems"
    )
    coarse_starts: int = Field(
        default=256, ge=1, description="Random starts of the coarse h-system search"
    )

    # Numeric oracle
    integrator_method: Literal["DOP853", "RK45", "Radau", "LSODA"] = Field(
        default="DOP853", description="scipy solve_ivp method"
    )
    integrator_rtol: float = Field(default=1e-12, description="Relative tolerance")
    integrator_atol: float = Field(default=1e-12, description="Absolute tolerance")

    # Orchestration
    max_workers: int = Field(
        default=1, ge=1, description="Worker processes for independent cases"
    )
    random_seed: int = Field(
        default=20240101, description="Seed for randomized property runs"
    )

    @field_validator("default_tau")
    @classmethod
    def validate_tau(cls, v: str) -> str:
        """Ensure the default line parameter is an exact fraction in [-1, 1)."""
        tau = Fraction(v)
        if not -1 <= tau < 1:
            raise ValueError(f"tau must lie in [-1, 1), got {v}")
        return v

    @field_validator("residual_tolerance", "jacobian_threshold")
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Tolerances must be strictly positive."""
        if v <= 0:
            raise ValueError("tolerance must be positive")
        return v

    @field_validator("integrator_rtol", "integrator_atol")
    @classmethod
    def validate_integrator_tolerance(cls, v: float) -> float:
        """Integrator tolerances must be strictly positive."""
        if v <= 0:
            raise ValueError("integrator tolerance must be positive")
        return v

    @field_validator("cache_dir", "results_directory", "log_directory")
    @classmethod
    def ensure_directory_exists(cls, v: Path) -> Path:
        """Ensure directories exist."""
        v.mkdir(parents=True, exist_ok=True)
        return v

    @property
    def tau(self) -> Fraction:
        """The default line parameter as an exact rational."""
        return Fraction(self.default_tau)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="LOUD_CYCLES_",
        case_sensitive=False,
    )


def load_settings() -> CycleSettings:
    """Load and return application settings."""
    # Load environment variables from .env file
    load_dotenv()

    return CycleSettings()


# Global settings instance
settings = load_settings()
