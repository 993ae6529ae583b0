"""
Acoustic channel data models.

This module defines the channel parameters needed to evaluate the level
budget (source level, transmission loss, received level) and the record a
receiver produces for one block.
"""

from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.constants import ChannelDefaults, RangingDefaults


class ChannelParams(BaseModel):
    """
    Parameters of the underwater acoustic channel.

    Attributes:
        frequency_khz: Acoustic frequency in kHz
        spreading_factor: Geometry exponent k of the loss law (2 = spherical)
        source_level_db: Source level, dB re 1 uPa at 1 m
        detection_threshold_db: Minimum received level for a block to be detected
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    frequency_khz: float = Field(default=ChannelDefaults.FREQUENCY_KHZ, gt=0, allow_inf_nan=False)
    spreading_factor: float = Field(default=ChannelDefaults.SPREADING_FACTOR, gt=0, allow_inf_nan=False)
    source_level_db: float = Field(default=ChannelDefaults.SOURCE_LEVEL_DB, allow_inf_nan=False)
    detection_threshold_db: float = Field(
        default=ChannelDefaults.DETECTION_THRESHOLD_DB, allow_inf_nan=False
    )

    @model_validator(mode="after")
    def check_level_budget(self) -> "ChannelParams":
        """A source quieter than the threshold is never detectable."""
        if self.source_level_db <= self.detection_threshold_db:
            raise ValueError(
                f"source_level_db ({self.source_level_db}) must exceed "
                f"detection_threshold_db ({self.detection_threshold_db})"
            )
        return self


class InversionSettings(BaseModel):
    """
    Controls of the Halley iteration used by the Lambert W inversion.

    Attributes:
        tolerance: Convergence criterion on |dw/w|
        max_iterations: Iteration cap before a ConvergenceError
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    tolerance: float = Field(
        default=RangingDefaults.TOLERANCE, gt=0, le=RangingDefaults.MAX_TOLERANCE, allow_inf_nan=False
    )
    max_iterations: int = Field(default=RangingDefaults.MAX_ITERATIONS, ge=RangingDefaults.MIN_ITERATIONS)


@dataclass(frozen=True)
class ReceivedLevel:
    """
    Level measured by a node for one block.

    Attributes:
        sil_db: Measured sound intensity level, dB re 1 uPa
        detected: False when the block was lost or fell below the threshold;
                  such a level must not reach any estimator
    """
    sil_db: float
    detected: bool
