"""Report directories: markdown summary, machine record, tables and plots."""

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import matplotlib
import pandas as pd

from ..expansion.difference import SCHEMA
from ..utils.logger import get_logger

logger = get_logger(__name__)

Section = Tuple[str, Sequence[str]]


def number(value: Any) -> str:
    """Human-table float: 10 significant digits."""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def report_directory(results_directory: Path, command: str, config_hash: str) -> Path:
    directory = Path(results_directory) / f"{command}_{config_hash}"
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def render_markdown(title: str, sections: Sequence[Section]) -> str:
    lines = [f"# {title}", ""]
    for heading, body in sections:
        lines += [f"## {heading}", "", *body, ""]
    return "\n".join(lines)


def markdown_table(frame: pd.DataFrame) -> List[str]:
    header = "| " + " | ".join(str(c) for c in frame.columns) + " |"
    rule = "|" + "---|" * len(frame.columns)
    rows = [
        "| " + " | ".join(number(v) for v in record) + " |"
        for record in frame.itertuples(index=False)
    ]
    return [header, rule, *rows]


def plot_displacement(table: pd.DataFrame, path: Path, title: str, display: bool = False) -> Path:
    """Delta and its jet prediction against r."""
    if not display:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    top.plot(table["r"], table["delta"], "o-", label="numeric Delta")
    top.plot(table["r"], table["eps_psi1"], "--", label="eps psi_1")
    if table["eps2_psi2"].notna().any():
        top.plot(table["r"], table["eps_psi1"] + table["eps2_psi2"], ":", label="eps psi_1 + eps^2 psi_2")
    top.axhline(0.0, color="grey", linewidth=0.5)
    top.set_ylabel("displacement")
    top.set_title(title)
    top.legend()
    bottom.semilogy(table["r"], table["residual"].abs(), "o-")
    bottom.set_xlabel("r")
    bottom.set_ylabel("|residual|")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    if display:
        plt.show()
    plt.close(fig)
    return path


def write_report(
    directory: Path,
    title: str,
    sections: Sequence[Section],
    record: Mapping[str, Any],
    table: Optional[pd.DataFrame] = None,
    table_name: str = "displacement",
    display_plot: bool = False,
) -> Dict[str, Path]:
    """Write ``report.md``, ``results.json`` and, with ``table``, CSV and PNG files.

    Nothing time-dependent is written, so equal inputs give equal files.
    """
    files = {}
    payload = {"schema": SCHEMA, **record}
    files["results"] = directory / "results.json"
    files["results"].write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    files["report"] = directory / "report.md"
    files["report"].write_text(render_markdown(title, sections), encoding="utf-8")
    if table is not None:
        files["csv"] = directory / f"{table_name}.csv"
        table.to_csv(files["csv"], index=False, float_format="%.17g")
        if {"r", "delta", "eps_psi1", "eps2_psi2", "residual"} <= set(table.columns):
            files["plot"] = plot_displacement(
                table, directory / f"{table_name}.png", title, display=display_plot
            )
    logger.info("Report written", directory=str(directory), files=sorted(files))
    return files
