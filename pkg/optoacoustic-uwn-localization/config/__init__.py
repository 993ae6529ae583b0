"""
Configuration package for the optoacoustic UWN localization testbed.

This package contains centralized configuration management including
environment settings and application constants.
"""

from .settings import settings
from .constants import (
    ChannelDefaults,
    RangingDefaults,
    TrackDefaults,
    ScenarioDefaults,
    ReportConfig,
    PathConfig,
    ExitCodes,
    CliMessages
)

__all__ = [
    'settings',
    'ChannelDefaults',
    'RangingDefaults',
    'TrackDefaults',
    'ScenarioDefaults',
    'ReportConfig',
    'PathConfig',
    'ExitCodes',
    'CliMessages'
]
