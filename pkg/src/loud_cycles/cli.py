"""Command-line front end: ``loud-cycles <command> [flags]``.

Flags may also come from a ``key=value`` config file (``--config``); keys
mirror the long flag names and explicit flags win.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from .errors import LoudCyclesError
from .execution.pipeline import run_pipeline
from .models.run import COMMANDS, RunConfig
from .utils.logger import get_logger, set_level

logger = get_logger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2

_HELP = {
    "expand": "Exact difference-function jet of a case",
    "ladder": "Independence ladder of a first-order jet",
    "blowup": "Second-order blow-up and h-system root",
    "count": "Crossing limit cycle count",
    "verify-numeric": "Compare a jet with the numeric displacement map",
    "center-check": "Decide whether two halves glue to a center",
    "pseudo-hopf": "Extra small cycle from a constant term",
    "table": "Summary table of the five cases at tau = 1/2",
}


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value file mirroring the flags")
    common.add_argument("--case", "--system", dest="case", help="s1..s4, s1s2 or linear")
    common.add_argument("--tau", help="Line parameter p/q in [-1, 1)")
    common.add_argument("--N", dest="n", type=int, help="Truncation order")
    common.add_argument("--order", type=int, help="Expansion order (series order for center-check)")
    common.add_argument("--policy", choices=["canonical", "paper"])
    common.add_argument("--precision", type=int, help="Decimal digits of the Newton solve")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", type=Path, help="Copy of the main artifact")
    common.add_argument("--workers", type=int)
    common.add_argument("--cache-dir", type=Path)
    common.add_argument("--results-directory", type=Path)
    common.add_argument("--verbose", action="store_true", default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loud-cycles",
        description="Crossing limit cycles of piecewise perturbed Loud centers.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()
    sub = {name: commands.add_parser(name, parents=[common], help=_HELP[name]) for name in COMMANDS}

    for name in ("ladder", "blowup", "verify-numeric"):
        sub[name].add_argument("--jet", type=Path, help="Serialized difference jet")
    for name in ("verify-numeric", "pseudo-hopf"):
        sub[name].add_argument("--params", type=Path, help="name=value parameter values")
        sub[name].add_argument("--eps", type=float)
        sub[name].add_argument("--grid", help="start:stop:count radius grid")
        sub[name].add_argument("--display-plot", action="store_true", default=None)
    sub["verify-numeric"].add_argument("--r-check", type=float, help="Radius of the eps-scaling check")
    sub["pseudo-hopf"].add_argument("--b", type=float, help="Constant term along the line normal")
    sub["center-check"].add_argument("--plus", help="Half system above the line")
    sub["center-check"].add_argument("--minus", help="Half system below the line")
    sub["center-check"].add_argument("--numeric", action="store_true", default=None)
    sub["blowup"].add_argument("--convention", choices=["taylor", "published"])
    sub["count"].add_argument("--r0", help="Outer radius of the designed zeros")
    return parser


def _read_config_file(path: Path) -> Dict[str, Optional[str]]:
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    return dict(dotenv_values(path))


def load_config(argv: Optional[List[str]] = None) -> RunConfig:
    """Parse ``argv``, merge the config file and validate the result."""
    args = build_parser().parse_args(argv)
    flags: Dict[str, Any] = vars(args)
    command = flags.pop("command")
    config_file = flags.pop("config")
    file_values = _read_config_file(config_file) if config_file is not None else {}
    return RunConfig.from_sources(command, file_values=file_values, flags=flags)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = load_config(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except (ValidationError, FileNotFoundError) as e:
        print(f"loud-cycles: invalid arguments: {e}", file=sys.stderr)
        return EXIT_USAGE

    if config.verbose:
        set_level("DEBUG")

    try:
        report = run_pipeline(config)
    except LoudCyclesError as e:
        logger.error("Run failed", command=config.command, error=str(e))
        print(f"loud-cycles: {e}", file=sys.stderr)
        return EXIT_FAILURE

    for line in report.lines:
        print(line)
    print(f"Report: {report.directory}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
