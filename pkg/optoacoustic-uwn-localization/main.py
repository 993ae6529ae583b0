"""
Command line front end of the optoacoustic UWN localization testbed.

Subcommands:
    simulate  Run an SNR sweep and write the RMSE report (CSV or JSON)
    invert    Invert a transmission loss to a range
    absorb    Thorp absorption coefficient at a frequency
    range     Detection range of a scenario's channel

Exit codes: 0 success, 1 usage/parse/domain error, 2 runtime failure.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from config.constants import ChannelDefaults, CliMessages, ExitCodes, ReportConfig
from models.errors import ConfigParseError, DomainError, LocalizationToolError
from models.simulation import ScenarioConfig
from services.channel_model import thorp_absorption
from services.config_loader import parse_config
from services.ranging_service import detection_range, invert_tl
from services.report_writer import write_report
from services.simulation_service import sweep_snr
from utils.logger import get_logger

logger = get_logger(__name__)


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with the usage exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ExitCodes.USAGE, f"{self.prog}: error: {message}\n")


def _error(template: str, **kwargs) -> None:
    print(template.format(**kwargs), file=sys.stderr)


def _positive_int(text: str) -> int:
    """argparse type for counts that must be at least one."""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def load_scenario(config_path: Optional[str], seed: Optional[int] = None) -> ScenarioConfig:
    """
    Resolve the scenario: defaults, then the file, then the seed flag.

    Args:
        config_path: Scenario file, or None for defaults
        seed: Overrides master_seed when given

    Returns:
        Resolved ScenarioConfig

    Raises:
        ConfigParseError: On file or seed problems
    """
    config = parse_config(config_path) if config_path else ScenarioConfig()
    if seed is None:
        return config
    try:
        return ScenarioConfig.model_validate({**config.model_dump(), "master_seed": seed})
    except ValidationError as e:
        raise ConfigParseError(f"--seed: {e.errors()[0]['msg']}", key="master_seed") from None


def cmd_simulate(
    config_path: Optional[str],
    out_path: str,
    fmt: str = ReportConfig.DEFAULT_FORMAT,
    seed: Optional[int] = None,
    workers: Optional[int] = None
) -> int:
    """
    Run an SNR sweep and write its report.

    Returns:
        Process exit code
    """
    if workers is not None and workers < 1:
        _error(CliMessages.ERROR_WORKERS, workers=workers)
        return ExitCodes.USAGE

    try:
        config = load_scenario(config_path, seed)
    except ConfigParseError as e:
        _error(CliMessages.ERROR_CONFIG, error=e)
        return ExitCodes.USAGE

    try:
        report = sweep_snr(config, max_workers=workers)
    except LocalizationToolError as e:
        _error(CliMessages.ERROR_RUNTIME, error=e)
        return ExitCodes.RUNTIME

    try:
        path = write_report(report, out_path, fmt)
    except OSError as e:
        _error(CliMessages.ERROR_WRITE, path=out_path, error=e)
        return ExitCodes.RUNTIME

    logger.info(CliMessages.INFO_REPORT_WRITTEN.format(path=Path(path), rows=len(report.rows), fmt=fmt))
    return ExitCodes.SUCCESS


def cmd_invert(tl_db: float, alpha_db_per_km: float, k: float = ChannelDefaults.SPREADING_FACTOR) -> int:
    """
    Print the range at which the loss equals tl_db.

    Returns:
        Process exit code
    """
    try:
        range_m = invert_tl(tl_db, alpha_db_per_km, k)
    except DomainError as e:
        _error(CliMessages.ERROR_DOMAIN, error=e)
        return ExitCodes.USAGE
    except LocalizationToolError as e:
        _error(CliMessages.ERROR_RUNTIME, error=e)
        return ExitCodes.RUNTIME
    print(repr(range_m))
    return ExitCodes.SUCCESS


def cmd_absorb(frequency_khz: float) -> int:
    """
    Print the Thorp absorption coefficient in dB/km.

    Returns:
        Process exit code
    """
    try:
        alpha = thorp_absorption(frequency_khz)
    except DomainError as e:
        _error(CliMessages.ERROR_DOMAIN, error=e)
        return ExitCodes.USAGE
    print(repr(alpha))
    return ExitCodes.SUCCESS


def cmd_range(config_path: Optional[str]) -> int:
    """
    Print the detection range of the scenario's channel in metres.

    Returns:
        Process exit code
    """
    try:
        config = load_scenario(config_path)
    except ConfigParseError as e:
        _error(CliMessages.ERROR_CONFIG, error=e)
        return ExitCodes.USAGE
    try:
        reach = detection_range(config.channel, config.ranging)
    except LocalizationToolError as e:
        _error(CliMessages.ERROR_RUNTIME, error=e)
        return ExitCodes.RUNTIME
    print(repr(reach))
    return ExitCodes.SUCCESS


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with all subcommands."""
    parser = CliArgumentParser(
        prog="uwn-localize",
        description="Optoacoustic underwater node localization testbed"
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)

    simulate = sub.add_parser("simulate", help="run an RMSE vs SNR sweep")
    simulate.add_argument("--config", dest="config_path", default=None, help="scenario file (key = value)")
    simulate.add_argument("--out", dest="out_path", required=True, help="report destination")
    simulate.add_argument("--format", dest="fmt", choices=ReportConfig.FORMATS, default=ReportConfig.DEFAULT_FORMAT)
    simulate.add_argument("--seed", type=int, default=None, help="override master_seed")
    simulate.add_argument("--workers", type=_positive_int, default=None, help="worker threads")

    invert = sub.add_parser("invert", help="transmission loss to range")
    invert.add_argument("--tl", dest="tl_db", type=float, required=True, help="transmission loss (dB)")
    invert.add_argument("--alpha", dest="alpha_db_per_km", type=float, required=True, help="absorption (dB/km)")
    invert.add_argument("--k", type=float, default=ChannelDefaults.SPREADING_FACTOR, help="spreading factor")

    absorb = sub.add_parser("absorb", help="Thorp absorption coefficient")
    absorb.add_argument("--freq-khz", dest="frequency_khz", type=float, required=True, help="frequency (kHz)")

    reach = sub.add_parser("range", help="detection range of a scenario")
    reach.add_argument("--config", dest="config_path", default=None, help="scenario file (key = value)")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point.

    Args:
        argv: Arguments without the program name; sys.argv[1:] when None

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)

    if args.command == "simulate":
        return cmd_simulate(args.config_path, args.out_path, args.fmt, args.seed, args.workers)
    if args.command == "invert":
        return cmd_invert(args.tl_db, args.alpha_db_per_km, args.k)
    if args.command == "absorb":
        return cmd_absorb(args.frequency_khz)
    return cmd_range(args.config_path)


if __name__ == "__main__":
    sys.exit(main())
