"""Unit tests for the command-line front end."""

from fractions import Fraction
from unittest.mock import patch

import pytest

from .cli import EXIT_FAILURE, EXIT_USAGE, build_parser, load_config, main
from .models.records import RunReport


@pytest.fixture
def dirs(tmp_path):
    return ["--cache-dir", str(tmp_path / "cache"), "--results-directory", str(tmp_path / "results")]


class TestParser:
    """Test cases for flag parsing."""

    def test_expand_flags(self):
        """Test the expand flags and the --system alias."""
        args = build_parser().parse_args(["expand", "--system", "s4", "--tau", "1/2", "--order", "2", "--N", "9"])
        assert (args.command, args.case, args.tau, args.order, args.n) == ("expand", "s4", "1/2", 2, 9)
        assert args.verbose is None

    def test_command_specific_flags(self):
        """Test that per-command flags are scoped to their command."""
        args = build_parser().parse_args(["center-check", "--plus", "s1", "--minus", "s3", "--numeric"])
        assert (args.plus, args.minus, args.numeric) == ("s1", "s3", True)
        with pytest.raises(SystemExit):
            build_parser().parse_args(["count", "--plus", "s1"])

    def test_convention_flag(self):
        """Test that the second-order convention is a blow-up flag only."""
        args = build_parser().parse_args(["blowup", "--case", "s4", "--convention", "published"])
        assert args.convention == "published"
        with pytest.raises(SystemExit):
            build_parser().parse_args(["count", "--convention", "published"])


class TestLoadConfig:
    """Test cases for merging the config file with flags."""

    def test_file_and_flags(self, tmp_path):
        """Test that flags override config-file values."""
        path = tmp_path / "run.conf"
        path.write_text("case=s4\ntau=0\nN=7\npolicy=paper\n", encoding="utf-8")
        config = load_config(["ladder", "--config", str(path), "--tau", "-1"])
        assert config.case == "s4"
        assert config.tau == Fraction(-1)
        assert config.n == 7
        assert config.policy == "paper"

    def test_unknown_file_key(self, tmp_path):
        """Test that a config-file key without a flag is rejected."""
        path = tmp_path / "run.conf"
        path.write_text("colour=blue\n", encoding="utf-8")
        assert main(["count", "--config", str(path)]) == EXIT_USAGE


class TestMain:
    """Test cases for exit statuses."""

    def test_help(self, capsys):
        """Test that --help exits cleanly."""
        assert main(["--help"]) == 0
        assert "center-check" in capsys.readouterr().out

    def test_argument_errors(self, tmp_path):
        """Test exit status 2 for bad arguments."""
        assert main(["count", "--tau", "3/2"]) == EXIT_USAGE
        assert main(["count", "--case", "s9"]) == EXIT_USAGE
        assert main(["blowup", "--case", "s1"]) == EXIT_USAGE
        assert main(["plot"]) == EXIT_USAGE
        assert main(["count", "--config", str(tmp_path / "absent.conf")]) == EXIT_USAGE

    def test_count(self, dirs, capsys):
        """Test a successful run printing the count and the report directory."""
        assert main(["count", "--case", "linear", "--tau", "0", "--N", "3", *dirs]) == 0
        out = capsys.readouterr().out
        assert "2 cycles" in out
        assert "Report:" in out

    def test_stage_failure(self, dirs, capsys):
        """Test exit status 1 with a one-line diagnostic."""
        code = main(["count", "--case", "linear", "--tau", "0", "--N", "3", "--order", "2", *dirs])
        assert code == EXIT_FAILURE
        assert "stage 'count' failed" in capsys.readouterr().err

    def test_report_exit_code(self, dirs, tmp_path):
        """Test that the report's exit status is returned."""
        report = RunReport(command="table", config_hash="0" * 12, exit_code=1, directory=tmp_path)
        with patch("loud_cycles.cli.run_pipeline", return_value=report) as run:
            assert main(["table", *dirs]) == 1
        assert run.call_args.args[0].command == "table"

    def test_verbose(self, dirs, tmp_path):
        """Test that --verbose lowers the log level."""
        report = RunReport(command="table", config_hash="0" * 12, directory=tmp_path)
        with patch("loud_cycles.cli.run_pipeline", return_value=report), patch(
            "loud_cycles.cli.set_level"
        ) as set_level:
            assert main(["table", "--verbose", *dirs]) == 0
        set_level.assert_called_once_with("DEBUG")
