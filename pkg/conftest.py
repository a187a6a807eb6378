"""Pytest configuration and shared fixtures."""

import pytest

from loud_cycles.config.settings import CycleSettings
from loud_cycles.models.run import RunConfig


@pytest.fixture
def test_settings(tmp_path):
    """Provide test configuration settings writing under ``tmp_path``."""
    return CycleSettings(
        environment="development",
        cache_dir=tmp_path / "cache",
        results_directory=tmp_path / "results",
        log_directory=tmp_path / "logs",
        log_level="DEBUG",
    )


@pytest.fixture
def make_config(tmp_path):
    """Factory for run configurations with cache and results under ``tmp_path``."""

    def make(command: str, **values) -> RunConfig:
        values.setdefault("cache_dir", tmp_path / "cache")
        values.setdefault("results_directory", tmp_path / "results")
        return RunConfig(command=command, **values)

    return make


@pytest.fixture
def parameter_file(tmp_path):
    """Write ``name=value`` lines and return the file path."""

    def write(values, name: str = "params.env"):
        path = tmp_path / name
        path.write_text("".join(f"{k}={v}\n" for k, v in values.items()), encoding="utf-8")
        return path

    return write
