"""
Exception hierarchy for the optoacoustic UWN localization testbed.

Every error raised by the services derives from LocalizationToolError so the
command line front end can map failures to exit codes in one place.
"""

from typing import Optional


class LocalizationToolError(Exception):
    """Base class for all testbed errors."""


class DomainError(LocalizationToolError, ValueError):
    """A numeric input lies outside the domain of the operation."""


class ConvergenceError(LocalizationToolError, ArithmeticError):
    """An iterative solver did not reach its tolerance."""

    def __init__(self, message: str, iterations: int, last_value: float):
        super().__init__(message)
        self.iterations = iterations
        self.last_value = last_value


class NoObservationError(LocalizationToolError):
    """No detected block is available for averaging."""


class UnlocalizableError(LocalizationToolError):
    """No pair of sources satisfies the selection constraints."""


class UndefinedMetricError(LocalizationToolError, ValueError):
    """A metric was requested over empty or mismatched inputs."""


class ConfigParseError(LocalizationToolError, ValueError):
    """
    A scenario file could not be turned into a valid configuration.

    Attributes:
        key: Offending dotted key, if one can be named
        line: 1-based line number in the file, if known
    """

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        location = f"line {line}: " if line is not None else ""
        super().__init__(f"{location}{message}")
