"""Unit tests for the run configuration and run records."""

from fractions import Fraction
from pathlib import Path

import pytest
from pydantic import ValidationError

from .records import RunReport, StageRecord
from .run import COMMANDS, RunConfig


class TestRunConfig:
    """Test cases for RunConfig validation."""

    def test_defaults(self):
        """Test defaults taken from the settings."""
        config = RunConfig(command="count")
        assert config.case == "s1"
        assert config.tau == Fraction(1, 2)
        assert config.n == 15
        assert config.policy == "canonical"
        assert config.expansion_order == 1
        assert config.series_order == 12

    def test_commands(self):
        """Test the eight subcommands."""
        assert set(COMMANDS) == {
            "expand",
            "ladder",
            "blowup",
            "count",
            "verify-numeric",
            "center-check",
            "pseudo-hopf",
            "table",
        }
        with pytest.raises(ValidationError):
            RunConfig(command="plot")

    def test_case_normalization(self):
        """Test that display names map to registry tags."""
        assert RunConfig(command="count", case="S1&S2").case == "s1s2"
        assert RunConfig(command="count", case="linear").case == "linear"

    def test_unknown_case(self):
        """Test that an unknown case is an argument error."""
        with pytest.raises(ValidationError):
            RunConfig(command="count", case="s5")

    def test_exact_tau(self):
        """Test rational and decimal line parameters and the range check."""
        assert RunConfig(command="count", tau="-1/3").tau == Fraction(-1, 3)
        assert RunConfig(command="count", tau="0.5").tau == Fraction(1, 2)
        with pytest.raises(ValidationError):
            RunConfig(command="count", tau="1")
        with pytest.raises(ValidationError):
            RunConfig(command="count", tau="half")

    def test_order_ranges(self):
        """Test expansion orders and the center-check series order."""
        with pytest.raises(ValidationError):
            RunConfig(command="expand", order=3)
        assert RunConfig(command="center-check", order=14).series_order == 14

    def test_grid(self):
        """Test grid parsing and rejection of reversed grids."""
        config = RunConfig(command="count", grid="0.1:0.3:3")
        assert config.radii == pytest.approx([0.1, 0.2, 0.3])
        for grid in ("0.3:0.1:5", "0.1:0.3", "0:0.3:5", "0.1:0.3:1"):
            with pytest.raises(ValidationError):
                RunConfig(command="count", grid=grid)

    def test_command_requirements(self):
        """Test per-command requirements."""
        with pytest.raises(ValidationError):
            RunConfig(command="blowup", case="s1")
        with pytest.raises(ValidationError):
            RunConfig(command="verify-numeric")
        with pytest.raises(ValidationError):
            RunConfig(command="center-check", plus="s1")
        config = RunConfig(command="center-check", plus="1", minus="S3")
        assert (config.plus, config.minus) == ("S1", "S3")

    def test_unknown_key(self):
        """Test that keys without a flag are rejected."""
        with pytest.raises(ValidationError):
            RunConfig(command="count", radius_grid="0.1:0.2:3")


class TestConfigSources:
    """Test cases for merging config-file values with flags."""

    def test_flags_override_file(self):
        """Test precedence and key normalization."""
        config = RunConfig.from_sources(
            "count",
            file_values={"tau": "0", "N": "7", "policy": "paper", "r-check": "0.2"},
            flags={"tau": "-1", "order": 2, "case": None},
        )
        assert config.tau == Fraction(-1)
        assert config.n == 7
        assert config.order == 2
        assert config.policy == "paper"
        assert config.r_check == 0.2
        assert config.case == "s1"

    def test_empty_file_value_ignored(self):
        """Test that keys without a value in the file are skipped."""
        config = RunConfig.from_sources("count", file_values={"case": None})
        assert config.case == "s1"


class TestConfigHash:
    """Test cases for the canonical config digest."""

    def test_output_locations_do_not_matter(self, tmp_path):
        """Test that plumbing fields are excluded from the digest."""
        a = RunConfig(command="count", results_directory=tmp_path / "a", out=tmp_path / "x.json")
        b = RunConfig(command="count", results_directory=tmp_path / "b", workers=3)
        assert a.config_hash == b.config_hash
        assert len(a.config_hash) == 12

    def test_inputs_matter(self):
        """Test that result-relevant fields change the digest."""
        a = RunConfig(command="count", tau="1/2")
        b = RunConfig(command="count", tau="0")
        c = RunConfig(command="ladder", tau="1/2")
        assert len({a.config_hash, b.config_hash, c.config_hash}) == 3

    def test_canonical_form(self):
        """Test that exact rationals appear as strings."""
        canonical = RunConfig(command="count", tau="-1/3").canonical()
        assert '"tau":"-1/3"' in canonical


class TestRunReport:
    """Test cases for run records."""

    def test_cached_stages(self):
        """Test the list of stages served from the cache."""
        report = RunReport(
            command="count",
            config_hash="0123456789ab",
            directory=Path("results/count_0123456789ab"),
            stages=[
                StageRecord(stage="expand", key="a" * 64),
                StageRecord(stage="count", key="b" * 64, cached=True),
            ],
        )
        assert report.cached_stages == ["count"]
        assert report.exit_code == 0
