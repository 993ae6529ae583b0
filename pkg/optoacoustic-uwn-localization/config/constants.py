"""
Application constants for the optoacoustic UWN localization testbed.

This module contains the default values, sentinels, file layout and CLI
messages used throughout the application.
"""

from pathlib import Path


class ChannelDefaults:
    """Default acoustic channel parameters."""

    # Not stated for the reference scenario; inside Thorp's validity range
    FREQUENCY_KHZ = 20.0

    # Spherical spreading
    SPREADING_FACTOR = 2.0

    # dB re 1 uPa at 1 m, nonlinear optoacoustic source
    SOURCE_LEVEL_DB = 210.0

    # dB re 1 uPa
    DETECTION_THRESHOLD_DB = 80.0

    # Any SNR at or above this value is treated as a noiseless channel
    NOISELESS_SNR_DB = 300.0

    # Thorp floor term, dB/km
    THORP_FLOOR_DB_PER_KM = 0.003


class RangingDefaults:
    """Default controls for the Lambert W inversion."""

    TOLERANCE = 1e-12
    MAX_ITERATIONS = 50

    # Accepted bounds for user supplied controls
    MAX_TOLERANCE = 1e-6
    MIN_ITERATIONS = 10


class TrackDefaults:
    """Default beacon track laid down by the aerial node."""

    Y_M = 0.0
    DEPTH_M = 1.0
    X_START_M = -100.0
    X_END_M = 600.0
    SPACING_M = 10.0
    BLOCKS_PER_SOURCE = 5

    # Slack used when comparing source baselines
    BASELINE_SLACK_M = 1e-9


class ScenarioDefaults:
    """Default Monte Carlo scenario."""

    VOLUME_M = (500.0, 500.0, 500.0)
    NODE_COUNT = 100
    SNR_GRID_DB = (0.0, 10.0, 20.0, 30.0, 40.0)
    TRIALS = 20
    MASTER_SEED = 20240611
    DEPTH_SENSOR_STD_M = 0.0
    SIDE_FLIP_PROB = 0.0


class ReportConfig:
    """Report emission settings."""

    CSV_COLUMNS = [
        "snr_db",
        "rmse_m",
        "localized_fraction",
        "degenerate_fraction",
        "mean_abs_x_error_m",
    ]

    FORMATS = ("csv", "json")
    DEFAULT_FORMAT = "csv"
    JSON_INDENT = 2


class PathConfig:
    """Configuration for file paths."""

    # Log paths
    LOG_DIR = Path("./logs")
    LOG_FILE = LOG_DIR / "uwn_localization.log"

    # Sample scenario shipped with the docs
    SAMPLE_SCENARIO = Path("./docs/reference_scenario.conf")


class ExitCodes:
    """Process exit codes of the command line front end."""

    SUCCESS = 0
    USAGE = 1
    RUNTIME = 2


class CliMessages:
    """Messages printed by the command line front end."""

    ERROR_CONFIG = "error: {error}"
    ERROR_DOMAIN = "error: {error}"
    ERROR_RUNTIME = "error: {error}"
    ERROR_WRITE = "error: cannot write report to {path}: {error}"
    ERROR_WORKERS = "error: --workers must be at least 1, got {workers}"

    INFO_REPORT_WRITTEN = "Report written to {path} ({rows} rows, {fmt})"
