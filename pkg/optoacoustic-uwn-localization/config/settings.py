"""
Process settings for the optoacoustic UWN localization testbed.

This module manages environment variables using Pydantic for validation
and type safety. Experiment parameters live in ScenarioConfig instead.
"""

import os
from pydantic import BaseModel, Field, field_validator
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_flag(name: str, default: str) -> bool:
    """Read a boolean environment variable."""
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings(BaseModel):
    """
    Process-wide settings loaded from environment variables.

    These control how the testbed runs (logging, parallelism, progress
    display), never what it computes.
    """

    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )

    log_to_file: bool = Field(
        default=False,
        description="Also write logs to the log file under PathConfig.LOG_DIR"
    )

    max_workers: int = Field(
        default=1,
        description="Worker threads used by the Monte Carlo harness"
    )

    show_progress: bool = Field(
        default=True,
        description="Display a progress bar during SNR sweeps"
    )

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level is valid."""
        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {', '.join(valid_levels)}")
        return v.upper()

    @field_validator('max_workers')
    @classmethod
    def validate_max_workers(cls, v: int) -> int:
        """Validate worker count is positive."""
        if v < 1:
            raise ValueError("max_workers must be at least 1")
        return v


# Create singleton instance
settings = Settings(
    log_level=os.getenv('LOG_LEVEL', 'INFO'),
    log_to_file=_env_flag('UWN_LOG_TO_FILE', 'false'),
    max_workers=int(os.getenv('UWN_MAX_WORKERS', '1')),
    show_progress=_env_flag('UWN_SHOW_PROGRESS', 'true')
)
