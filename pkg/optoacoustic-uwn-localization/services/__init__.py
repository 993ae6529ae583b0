"""
Service layer for the optoacoustic UWN localization testbed.

This package contains the channel model, range inversion, node-side
localization, the Monte Carlo harness and the configuration and report I/O,
separated from the command line front end for testability.
"""

from .channel_model import AcousticChannel, thorp_absorption, transmission_loss, received_sil, apply_awgn
from .ranging_service import lambert_w0, invert_tl, detection_range
from .localization_service import (
    average_sil,
    select_equivalent_pair,
    estimate_range,
    estimate_position,
    localize_node
)
from .simulation_service import MonteCarloHarness, deploy_nodes, run_trial, rmse, sweep_snr
from .config_loader import parse_config, parse_config_text
from .report_writer import write_report

__all__ = [
    'AcousticChannel',
    'thorp_absorption',
    'transmission_loss',
    'received_sil',
    'apply_awgn',
    'lambert_w0',
    'invert_tl',
    'detection_range',
    'average_sil',
    'select_equivalent_pair',
    'estimate_range',
    'estimate_position',
    'localize_node',
    'MonteCarloHarness',
    'deploy_nodes',
    'run_trial',
    'rmse',
    'sweep_snr',
    'parse_config',
    'parse_config_text',
    'write_report'
]
