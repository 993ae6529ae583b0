"""
Data models for the optoacoustic UWN localization testbed.

This package contains the typed records exchanged between the channel,
ranging, localization and simulation services.
"""

from .errors import (
    LocalizationToolError,
    DomainError,
    ConvergenceError,
    NoObservationError,
    UnlocalizableError,
    UndefinedMetricError,
    ConfigParseError
)
from .channel import ChannelParams, InversionSettings, ReceivedLevel
from .localization import PlasmaSource, NodeObservation, PositionEstimate
from .simulation import (
    TrackConfig,
    ScenarioConfig,
    NodeResult,
    TrialResult,
    RmseRow,
    RmseReport
)

__all__ = [
    'LocalizationToolError',
    'DomainError',
    'ConvergenceError',
    'NoObservationError',
    'UnlocalizableError',
    'UndefinedMetricError',
    'ConfigParseError',
    'ChannelParams',
    'InversionSettings',
    'ReceivedLevel',
    'PlasmaSource',
    'NodeObservation',
    'PositionEstimate',
    'TrackConfig',
    'ScenarioConfig',
    'NodeResult',
    'TrialResult',
    'RmseRow',
    'RmseReport'
]
