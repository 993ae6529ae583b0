"""
Monte Carlo simulation service.

This module deploys random nodes in the survey volume, forward-simulates a
beacon pass for each of them, localizes them, and aggregates RMSE and
coverage figures over an SNR grid.

Every trial draws from its own random stream derived from
(master_seed, SNR key, trial index), so a sweep gives the same numbers
whatever the number of worker threads or the order trials run in.
"""

import math
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from config.settings import settings
from models.errors import DomainError, LocalizationToolError, UndefinedMetricError
from models.localization import NodeObservation, PlasmaSource, PositionEstimate
from models.simulation import (
    NodeResult,
    Position,
    RmseReport,
    RmseRow,
    ScenarioConfig,
    TrialResult
)
from services.channel_model import AcousticChannel, is_noiseless
from services.localization_service import average_block_levels, localize_node
from services.ranging_service import detection_range
from utils.logger import get_logger

logger = get_logger(__name__)

PositionLike = Union[Position, Sequence[float], PositionEstimate]


def build_track(config: ScenarioConfig) -> List[PlasmaSource]:
    """
    Lay the plasma sources along the beacon track.

    Args:
        config: Scenario configuration

    Returns:
        Sources ordered by x, from x_start_m in steps of spacing_m
    """
    track = config.track
    return [
        PlasmaSource(
            x_m=track.x_start_m + index * track.spacing_m,
            y_m=track.y_m,
            depth_m=track.depth_m,
            spl_db=config.channel.source_level_db
        )
        for index in range(track.source_count)
    ]


def deploy_nodes(config: ScenarioConfig, rng: np.random.Generator) -> List[Position]:
    """
    Draw node positions uniformly in the deployment box.

    The box spans x in [0, X], y in [track y, track y + Y] and depth in [0, Z].

    Args:
        config: Scenario configuration
        rng: Random stream

    Returns:
        node_count (x, y, z) tuples
    """
    size_x, size_y, size_z = config.volume_m
    if config.node_count <= 0:
        return []
    low = np.array([0.0, config.track.y_m, 0.0])
    high = low + np.array([size_x, size_y, size_z])
    points = rng.uniform(low, high, size=(config.node_count, 3))
    return [tuple(float(v) for v in point) for point in points]


def trial_seed(config: ScenarioConfig, snr_db: float, trial_index: int) -> np.random.SeedSequence:
    """
    Seed sequence of one trial.

    The SNR enters through its grid index; values off the grid use their
    IEEE-754 bit pattern placed past the grid.

    Args:
        config: Scenario configuration
        snr_db: SNR of the trial
        trial_index: Trial number

    Returns:
        SeedSequence for the trial's random stream
    """
    if snr_db in config.snr_grid_db:
        snr_key = config.snr_grid_db.index(snr_db)
    else:
        snr_key = len(config.snr_grid_db) + struct.unpack(">Q", struct.pack(">d", float(snr_db)))[0]
    return np.random.SeedSequence([config.master_seed, snr_key, trial_index])


def simulate_node(
    config: ScenarioConfig,
    node: Position,
    snr_db: float,
    rng: np.random.Generator,
    node_index: int = 0,
    channel: Optional[AcousticChannel] = None,
    track: Optional[List[PlasmaSource]] = None
) -> NodeResult:
    """
    Forward-simulate one beacon pass for a node and localize it.

    Draw order on rng: depth sensor error, side flip, then the blocks of
    every source in track order.

    Args:
        config: Scenario configuration
        node: True node position (x, y, z)
        snr_db: Per-block SNR
        rng: Random stream
        node_index: Index recorded in the result
        channel: Prebuilt channel, built from config when None
        track: Prebuilt track, built from config when None

    Returns:
        NodeResult holding the estimate or the failure message
    """
    channel = channel or AcousticChannel(config.channel)
    track = track or build_track(config)
    track_x = np.fromiter((source.x_m for source in track), dtype=float, count=len(track))

    x, y, z = node
    sensed_depth = z
    if config.depth_sensor_std_m > 0:
        sensed_depth = z + float(rng.normal(0.0, config.depth_sensor_std_m))

    side_positive = y >= config.track.y_m
    if config.side_flip_prob > 0 and rng.random() < config.side_flip_prob:
        side_positive = not side_positive

    ranges = np.sqrt(
        (track_x - x) ** 2 + (y - config.track.y_m) ** 2 + (z - config.track.depth_m) ** 2
    )
    try:
        measured, detected = channel.observe(ranges, config.track.blocks_per_source, snr_db, rng)
        mean_levels, heard = average_block_levels(measured, detected)
        observations = [
            NodeObservation(source=track[s], mean_sil_db=float(mean_levels[s]), side_positive=side_positive)
            for s in np.flatnonzero(heard)
        ]
        estimate = localize_node(
            observations,
            sensed_depth,
            config.channel,
            config.effective_min_baseline_m,
            config.ranging
        )
    except LocalizationToolError as e:
        logger.debug(f"Node {node_index} not localized at {snr_db} dB: {e}")
        return NodeResult(node_index=node_index, true_position=node, error=str(e))

    return NodeResult(node_index=node_index, true_position=node, estimate=estimate)


def run_trial(config: ScenarioConfig, snr_db: float, trial_index: int) -> TrialResult:
    """
    Run one trial: deploy nodes, simulate the pass, localize every node.

    Args:
        config: Scenario configuration
        snr_db: Per-block SNR (≥ 300 dB or inf is noiseless)
        trial_index: Trial number, part of the seed

    Returns:
        TrialResult with one NodeResult per deployed node
    """
    rng = np.random.default_rng(trial_seed(config, snr_db, trial_index))
    channel = AcousticChannel(config.channel)
    track = build_track(config)

    nodes = deploy_nodes(config, rng)
    results = [
        simulate_node(config, node, snr_db, rng, node_index=index, channel=channel, track=track)
        for index, node in enumerate(nodes)
    ]
    return TrialResult(snr_db=snr_db, trial_index=trial_index, nodes=results)


def _as_xyz(position: PositionLike) -> Tuple[float, float, float]:
    """Coordinates of a position tuple or an estimate."""
    if isinstance(position, PositionEstimate):
        return position.coordinates
    return tuple(float(v) for v in position)


def rmse(true_positions: Sequence[PositionLike], estimates: Sequence[PositionLike]) -> float:
    """
    Root mean square 3D position error.

    Args:
        true_positions: Ground-truth positions
        estimates: Estimated positions, same order and length

    Returns:
        sqrt(sum of squared 3D errors / N)

    Raises:
        UndefinedMetricError: If the lists are empty or differ in length
    """
    if len(true_positions) != len(estimates):
        raise UndefinedMetricError(
            f"rmse needs equal-length inputs, got {len(true_positions)} and {len(estimates)}"
        )
    if not true_positions:
        raise UndefinedMetricError("rmse over an empty set is undefined")

    truth = np.array([_as_xyz(p) for p in true_positions], dtype=float)
    guess = np.array([_as_xyz(p) for p in estimates], dtype=float)
    return float(np.sqrt(np.sum((truth - guess) ** 2) / len(truth)))


def _trial_rmse(trial: TrialResult) -> Optional[float]:
    """RMSE over the localized nodes of a trial, None if there are none."""
    localized = trial.localized
    if not localized:
        return None
    return rmse([n.true_position for n in localized], [n.estimate for n in localized])


def summarize_snr(snr_db: float, trials: Sequence[TrialResult]) -> RmseRow:
    """
    Aggregate the trials of one SNR value into a report row.

    Args:
        snr_db: SNR value
        trials: Trials run at that SNR, in trial order

    Returns:
        RmseRow; undefined averages are NaN
    """
    trial_rmses = [value for value in (_trial_rmse(t) for t in trials) if value is not None]
    localized = [n for t in trials for n in t.localized]
    deployed = sum(len(t.nodes) for t in trials)

    rmse_m = float(np.mean(trial_rmses)) if trial_rmses else math.nan
    localized_fraction = len(localized) / deployed if deployed else math.nan
    if localized:
        degenerate_fraction = sum(1 for n in localized if n.estimate.degenerate) / len(localized)
        mean_abs_x_error = float(np.mean([n.abs_x_error_m for n in localized]))
    else:
        degenerate_fraction = math.nan
        mean_abs_x_error = math.nan

    return RmseRow(
        snr_db=snr_db,
        rmse_m=rmse_m,
        localized_fraction=localized_fraction,
        degenerate_fraction=degenerate_fraction,
        mean_abs_x_error_m=mean_abs_x_error,
        nodes_deployed=deployed,
        nodes_localized=len(localized)
    )


class MonteCarloHarness:
    """Runs SNR sweeps over a scenario, optionally on several threads."""

    def __init__(
        self,
        config: ScenarioConfig,
        max_workers: Optional[int] = None,
        show_progress: Optional[bool] = None
    ):
        """
        Initialize the harness.

        Args:
            config: Scenario configuration
            max_workers: Worker threads. If None, uses value from settings.
            show_progress: Progress bar toggle. If None, uses value from settings.
        """
        self.config = config
        self.max_workers = settings.max_workers if max_workers is None else max_workers
        if self.max_workers < 1:
            raise DomainError(f"max_workers must be at least 1, got {self.max_workers}")
        self.show_progress = settings.show_progress if show_progress is None else show_progress
        logger.debug(f"Harness initialized with {self.max_workers} worker(s)")

    def check_reach(self) -> float:
        """
        Compare the deployment box with the detection range.

        Returns:
            Detection range in metres
        """
        reach = detection_range(self.config.channel, self.config.ranging)
        _, size_y, size_z = self.config.volume_m
        depth_span = max(self.config.track.depth_m, size_z - self.config.track.depth_m)
        farthest = math.hypot(self.config.track.spacing_m, size_y, depth_span)
        if farthest >= reach:
            logger.warning(
                f"Nodes up to {farthest:.1f} m from the track exceed the detection range "
                f"of {reach:.1f} m; expect unlocalized nodes"
            )
        return reach

    def _units(self) -> List[Tuple[float, int]]:
        return [(snr, trial) for snr in self.config.snr_grid_db for trial in range(self.config.trials)]

    def _run_unit(self, unit: Tuple[float, int]) -> TrialResult:
        snr_db, trial_index = unit
        return run_trial(self.config, snr_db, trial_index)

    def run_trials(self) -> List[TrialResult]:
        """
        Run every (SNR, trial) unit of the sweep.

        Returns:
            Trial results in grid-major, trial-minor order
        """
        units = self._units()
        progress = tqdm(total=len(units), desc="trials", unit="trial", disable=not self.show_progress)
        try:
            if self.max_workers == 1:
                results = []
                for unit in units:
                    results.append(self._run_unit(unit))
                    progress.update()
                return results

            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                results = []
                for result in executor.map(self._run_unit, units):
                    results.append(result)
                    progress.update()
                return results
        finally:
            progress.close()

    def sweep(self) -> RmseReport:
        """
        Sweep the SNR grid.

        Returns:
            RmseReport with one row per SNR value
        """
        config = self.config
        logger.info(
            f"Sweeping {len(config.snr_grid_db)} SNR values x {config.trials} trials x "
            f"{config.node_count} nodes (seed {config.master_seed})"
        )
        start_time = time.time()
        reach = self.check_reach()

        trials = self.run_trials()
        rows = []
        for index, snr_db in enumerate(config.snr_grid_db):
            block = trials[index * config.trials:(index + 1) * config.trials]
            row = summarize_snr(snr_db, block)
            label = "noiseless" if is_noiseless(snr_db) else f"{snr_db:g} dB"
            logger.debug(f"{label}: rmse={row.rmse_m:.4f} m, localized={row.localized_fraction:.3f}")
            rows.append(row)

        report = RmseReport(
            rows=rows,
            config_echo=config,
            metadata={'detection_range_m': reach}
        )
        logger.info(f"Sweep finished in {time.time() - start_time:.2f}s: {report.get_summary()}")
        return report


def sweep_snr(config: ScenarioConfig, max_workers: Optional[int] = None) -> RmseReport:
    """
    Sweep the SNR grid of a scenario.

    Args:
        config: Scenario configuration
        max_workers: Worker threads. If None, uses value from settings.

    Returns:
        RmseReport, identical for any worker count
    """
    return MonteCarloHarness(config, max_workers=max_workers).sweep()
