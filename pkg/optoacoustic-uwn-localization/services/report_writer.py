"""
Report emission.

Writes an RmseReport as plot-ready CSV or as a JSON document that also
carries the configuration echo.
"""

import json
from pathlib import Path
from typing import Union

from config.constants import ReportConfig
from models.simulation import RmseReport
from utils.logger import get_logger

logger = get_logger(__name__)


def render_csv(report: RmseReport) -> str:
    """
    Render the report rows as CSV.

    Floats keep their shortest round-trip representation.

    Args:
        report: Sweep report

    Returns:
        CSV text with a header row and one row per SNR value
    """
    return report.to_frame().to_csv(index=False, lineterminator="\n", na_rep="nan")


def render_json(report: RmseReport) -> str:
    """
    Render the report and its configuration echo as strict JSON.

    NaN is written as null and infinities as the strings "inf" and "-inf".

    Args:
        report: Sweep report

    Returns:
        JSON text terminated by a newline
    """
    return json.dumps(report.to_dict(), indent=ReportConfig.JSON_INDENT, allow_nan=False) + "\n"


def write_report(
    report: RmseReport,
    out_path: Union[str, Path],
    fmt: str = ReportConfig.DEFAULT_FORMAT
) -> Path:
    """
    Write a report to disk.

    Args:
        report: Sweep report
        out_path: Destination file; its directory must exist
        fmt: "csv" or "json"

    Returns:
        The written path

    Raises:
        ValueError: On an unknown format
        OSError: If the file cannot be written
    """
    if fmt not in ReportConfig.FORMATS:
        raise ValueError(f"Unknown report format '{fmt}', expected one of {ReportConfig.FORMATS}")

    out_path = Path(out_path)
    text = render_csv(report) if fmt == "csv" else render_json(report)
    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)

    logger.info(f"Wrote {fmt} report with {len(report.rows)} rows to {out_path}")
    return out_path
