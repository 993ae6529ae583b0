"""
Simulation data models.

This module defines the Monte Carlo scenario configuration and the records
produced by trials and SNR sweeps.
"""

import math
from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.constants import (
    ReportConfig,
    ScenarioDefaults,
    TrackDefaults
)
from models.channel import ChannelParams, InversionSettings
from models.localization import PositionEstimate

Position = Tuple[float, float, float]


def json_safe(value: Any) -> Any:
    """
    Replace non-finite floats so strict JSON parsers accept the value.

    NaN becomes None and infinities become "inf" or "-inf", which pydantic
    float fields read back as infinities.
    """
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return None
        return "inf" if value > 0 else "-inf"
    return value


class TrackConfig(BaseModel):
    """
    Straight beacon track flown by the aerial node.

    Attributes:
        y_m: Cross-track offset of the track line (m)
        depth_m: Plasma depth below the surface (m)
        x_start_m: First source x (m)
        x_end_m: Last source x (m), included when it falls on the grid
        spacing_m: Distance between consecutive sources (m)
        blocks_per_source: Message blocks emitted by each plasma
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    y_m: float = Field(default=TrackDefaults.Y_M, allow_inf_nan=False)
    depth_m: float = Field(default=TrackDefaults.DEPTH_M, ge=0, allow_inf_nan=False)
    x_start_m: float = Field(default=TrackDefaults.X_START_M, allow_inf_nan=False)
    x_end_m: float = Field(default=TrackDefaults.X_END_M, allow_inf_nan=False)
    spacing_m: float = Field(default=TrackDefaults.SPACING_M, gt=0, allow_inf_nan=False)
    blocks_per_source: int = Field(default=TrackDefaults.BLOCKS_PER_SOURCE, ge=1)

    @model_validator(mode="after")
    def check_extent(self) -> "TrackConfig":
        """Track must run forward."""
        if self.x_start_m >= self.x_end_m:
            raise ValueError(
                f"x_start_m ({self.x_start_m}) must be smaller than x_end_m ({self.x_end_m})"
            )
        return self

    @property
    def source_count(self) -> int:
        """Number of plasma sources laid along the track."""
        return int(math.floor((self.x_end_m - self.x_start_m) / self.spacing_m + 1e-9)) + 1

    @property
    def last_source_x_m(self) -> float:
        """x of the last source actually laid, at or before x_end_m."""
        return self.x_start_m + (self.source_count - 1) * self.spacing_m


class ScenarioConfig(BaseModel):
    """
    Fully resolved Monte Carlo scenario.

    Attributes:
        volume_m: Deployment box (x, y, z) dimensions; y is measured from the
                  track line and z is depth
        node_count: Nodes deployed per trial
        track: Beacon track geometry
        channel: Acoustic channel parameters
        ranging: Lambert W inversion controls
        snr_grid_db: Strictly increasing SNR values; inf means noiseless
        trials: Trials per SNR value
        master_seed: Root of every random stream in the sweep
        depth_sensor_std_m: Standard deviation of the pressure sensor error
        side_flip_prob: Probability that the directional receiver reports the wrong side
        min_baseline_m: Minimum pair baseline; None means the track spacing
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    volume_m: Tuple[float, float, float] = ScenarioDefaults.VOLUME_M
    node_count: int = Field(default=ScenarioDefaults.NODE_COUNT, ge=1)
    track: TrackConfig = Field(default_factory=TrackConfig)
    channel: ChannelParams = Field(default_factory=ChannelParams)
    ranging: InversionSettings = Field(default_factory=InversionSettings)
    snr_grid_db: Tuple[float, ...] = ScenarioDefaults.SNR_GRID_DB
    trials: int = Field(default=ScenarioDefaults.TRIALS, ge=1)
    master_seed: int = Field(default=ScenarioDefaults.MASTER_SEED, ge=0, lt=2 ** 64)
    depth_sensor_std_m: float = Field(default=ScenarioDefaults.DEPTH_SENSOR_STD_M, ge=0, allow_inf_nan=False)
    side_flip_prob: float = Field(default=ScenarioDefaults.SIDE_FLIP_PROB, ge=0, le=1)
    min_baseline_m: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)

    @field_validator("volume_m")
    @classmethod
    def validate_volume(cls, v: Tuple[float, float, float]) -> Tuple[float, float, float]:
        """Box dimensions must be positive and finite."""
        if not all(math.isfinite(d) and d > 0 for d in v):
            raise ValueError("volume_m dimensions must be positive and finite")
        return v

    @field_validator("snr_grid_db")
    @classmethod
    def validate_snr_grid(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        """Grid must be non-empty, free of NaN and strictly increasing."""
        if not v:
            raise ValueError("snr_grid_db must hold at least one value")
        if any(math.isnan(s) or s == -math.inf for s in v):
            raise ValueError("snr_grid_db values must be numbers or +inf")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("snr_grid_db must be strictly increasing")
        return v

    @model_validator(mode="after")
    def check_coverage(self) -> "ScenarioConfig":
        """Track must overhang the box by at least one spacing on both sides."""
        spacing = self.track.spacing_m
        last_x = self.track.last_source_x_m
        if self.track.x_start_m > -spacing or last_x < self.volume_m[0] + spacing:
            raise ValueError(
                f"track sources span [{self.track.x_start_m}, {last_x}] and must reach one "
                f"spacing ({spacing} m) beyond the box x-range [0, {self.volume_m[0]}]"
            )
        return self

    @property
    def effective_min_baseline_m(self) -> float:
        """Minimum pair baseline actually used for selection."""
        return self.min_baseline_m if self.min_baseline_m is not None else self.track.spacing_m


@dataclass(frozen=True)
class NodeResult:
    """
    Outcome of localizing one node in one trial.

    Attributes:
        node_index: Index of the node in the trial deployment
        true_position: Ground-truth (x, y, z)
        estimate: Position estimate, None when localization failed
        error: Failure message when localization failed
    """
    node_index: int
    true_position: Position
    estimate: Optional[PositionEstimate] = None
    error: Optional[str] = None

    @property
    def localized(self) -> bool:
        """Check if the node produced an estimate."""
        return self.estimate is not None

    @property
    def error_vector(self) -> Optional[Position]:
        """Estimate minus truth, or None when not localized."""
        if self.estimate is None:
            return None
        return tuple(e - t for e, t in zip(self.estimate.coordinates, self.true_position))

    @property
    def error_3d_m(self) -> Optional[float]:
        """Euclidean position error."""
        vec = self.error_vector
        return None if vec is None else math.hypot(*vec)

    @property
    def abs_x_error_m(self) -> Optional[float]:
        """Absolute along-track error."""
        vec = self.error_vector
        return None if vec is None else abs(vec[0])


@dataclass(frozen=True)
class TrialResult:
    """
    All node outcomes of one trial at one SNR.

    Attributes:
        snr_db: SNR the trial ran at
        trial_index: Trial number within the SNR value
        nodes: Per-node outcomes in deployment order
    """
    snr_db: float
    trial_index: int
    nodes: List[NodeResult]

    @property
    def localized(self) -> List[NodeResult]:
        """Nodes that produced an estimate."""
        return [n for n in self.nodes if n.localized]


@dataclass(frozen=True)
class RmseRow:
    """
    Aggregated accuracy at one SNR value.

    Attributes:
        snr_db: SNR value
        rmse_m: RMSE averaged over trials (NaN if nothing was localized)
        localized_fraction: Localized nodes over deployed nodes
        degenerate_fraction: Clamped estimates over localized nodes
        mean_abs_x_error_m: Mean along-track error over localized nodes
        nodes_deployed: Nodes deployed over all trials
        nodes_localized: Nodes localized over all trials
    """
    snr_db: float
    rmse_m: float
    localized_fraction: float
    degenerate_fraction: float
    mean_abs_x_error_m: float
    nodes_deployed: int = 0
    nodes_localized: int = 0

    def to_dict(self) -> dict:
        """Convert to dictionary for report emission."""
        return {
            'snr_db': self.snr_db,
            'rmse_m': self.rmse_m,
            'localized_fraction': self.localized_fraction,
            'degenerate_fraction': self.degenerate_fraction,
            'mean_abs_x_error_m': self.mean_abs_x_error_m,
            'nodes_deployed': self.nodes_deployed,
            'nodes_localized': self.nodes_localized
        }


@dataclass(frozen=True)
class RmseReport:
    """
    Result of an SNR sweep.

    Attributes:
        rows: One row per SNR value, in grid order
        config_echo: The resolved configuration that produced the rows
        metadata: Extra run facts carried into the JSON document
    """
    rows: List[RmseRow]
    config_echo: ScenarioConfig
    metadata: dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        """
        Tabulate the rows with the CSV columns.

        Returns:
            DataFrame with one row per SNR value
        """
        return pd.DataFrame(
            [[getattr(row, col) for col in ReportConfig.CSV_COLUMNS] for row in self.rows],
            columns=ReportConfig.CSV_COLUMNS
        )

    def to_dict(self) -> dict:
        """
        Convert to a JSON-ready dictionary including the configuration echo.

        Returns:
            Dictionary representation of the report, non-finite floats
            replaced through json_safe
        """
        return json_safe({
            'rows': [row.to_dict() for row in self.rows],
            'config_echo': self.config_echo.model_dump(),
            **self.metadata
        })

    def get_summary(self) -> str:
        """
        Get human-readable summary of the sweep.

        Returns:
            Summary string
        """
        if not self.rows:
            return "Empty report"
        first, last = self.rows[0], self.rows[-1]
        coverage = min(row.localized_fraction for row in self.rows)
        return (
            f"{len(self.rows)} SNR values | RMSE {first.rmse_m:.3f} m @ {first.snr_db:g} dB -> "
            f"{last.rmse_m:.3f} m @ {last.snr_db:g} dB | min coverage {coverage:.1%}"
        )
