"""
Localization data models.

This module defines the plasma sources laid down along the beacon track,
what a node retains from each of them, and the position it derives.
"""

from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class PlasmaSource:
    """
    One laser-induced plasma acting as an isotropic acoustic emitter.

    Sources on a single track differ only in x; y and depth are shared.

    Attributes:
        x_m: Along-track coordinate (m)
        y_m: Cross-track coordinate of the track line (m)
        depth_m: Plasma depth below the surface, positive downward (m)
        spl_db: Declared source level, dB re 1 uPa at 1 m
    """
    x_m: float
    y_m: float
    depth_m: float
    spl_db: float


@dataclass(frozen=True)
class NodeObservation:
    """
    A source as retained by a node after averaging its blocks.

    Attributes:
        source: The plasma the blocks came from
        mean_sil_db: Average measured level over the detected blocks
        side_positive: Directional receiver verdict, True for the +y side
    """
    source: PlasmaSource
    mean_sil_db: float
    side_positive: bool = True

    @property
    def tl_db(self) -> float:
        """Transmission loss implied by the declared source level."""
        return self.source.spl_db - self.mean_sil_db


@dataclass(frozen=True)
class PositionEstimate:
    """
    Node position derived from an equivalent pair.

    Attributes:
        x_m: Estimated along-track coordinate (m)
        y_m: Estimated cross-track coordinate (m)
        z_m: Sensed depth, passed through untouched (m)
        degenerate: True if a radicand had to be clamped
        pair: Indices of the two selected observations
    """
    x_m: float
    y_m: float
    z_m: float
    degenerate: bool = False
    pair: Tuple[int, int] = (-1, -1)

    @property
    def coordinates(self) -> Tuple[float, float, float]:
        """Position as an (x, y, z) tuple."""
        return (self.x_m, self.y_m, self.z_m)
