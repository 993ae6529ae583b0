"""
Node-side localization service.

A node hears a sequence of plasma sources laid along a straight track. It
averages the blocks of each source, picks the two sources it hears at the
most nearly equal level (its along-track position is then their midpoint),
converts their level to a range and solves the track geometry for its
cross-track coordinate. Depth comes from the node's pressure sensor.
"""

import math
from typing import Optional, Sequence, Tuple

import numpy as np

from config.constants import TrackDefaults
from models.channel import ChannelParams, InversionSettings, ReceivedLevel
from models.errors import DomainError, NoObservationError, UnlocalizableError
from models.localization import NodeObservation, PositionEstimate
from services.channel_model import thorp_absorption
from services.ranging_service import invert_tl
from utils.logger import get_logger

logger = get_logger(__name__)


def average_block_levels(measured: np.ndarray, detected: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Row-wise dB-domain mean over detected blocks.

    Args:
        measured: Measured levels, shape (sources, blocks)
        detected: Detection mask of the same shape

    Returns:
        Tuple of (mean levels, has-detection mask), both shaped (sources,);
        rows without any detection carry NaN
    """
    measured = np.atleast_2d(np.asarray(measured, dtype=float))
    detected = np.atleast_2d(np.asarray(detected, dtype=bool))
    counts = detected.sum(axis=1)
    totals = np.where(detected, measured, 0.0).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, totals / np.maximum(counts, 1), np.nan)
    return means, counts > 0


def average_sil(block_levels: Sequence[ReceivedLevel]) -> float:
    """
    Average the measured levels of one source's detected blocks.

    Undetected blocks are skipped.

    Args:
        block_levels: Levels received for the source

    Returns:
        Arithmetic mean of the detected sil_db values

    Raises:
        NoObservationError: If no detected block remains
    """
    levels = [level.sil_db for level in block_levels if level.detected]
    if not levels:
        raise NoObservationError("no detected block to average")
    means, _ = average_block_levels(np.array([levels]), np.ones((1, len(levels)), dtype=bool))
    return float(means[0])


def select_equivalent_pair(
    observations: Sequence[NodeObservation],
    min_baseline_m: float
) -> Tuple[int, int]:
    """
    Choose the pair of sources heard at the most nearly equal level.

    Among pairs (i, j), i < j, at least min_baseline_m apart, the pair with the
    smallest |SIL_i − SIL_j| wins; ties go to the louder pair, then to the
    smaller i.

    Args:
        observations: Observations sorted by source x
        min_baseline_m: Minimum along-track separation of the pair

    Returns:
        Indices (i, j) into observations

    Raises:
        UnlocalizableError: If fewer than two observations exist or no pair
            satisfies the baseline
        DomainError: If the observations are not sorted or the baseline is invalid
    """
    if not math.isfinite(min_baseline_m) or min_baseline_m <= 0:
        raise DomainError(f"min_baseline_m must be positive, got {min_baseline_m}")
    count = len(observations)
    if count < 2:
        raise UnlocalizableError(f"need at least two observations, got {count}")

    xs = np.fromiter((obs.source.x_m for obs in observations), dtype=float, count=count)
    sils = np.fromiter((obs.mean_sil_db for obs in observations), dtype=float, count=count)
    if np.any(np.diff(xs) < 0):
        raise DomainError("observations must be sorted by source x")

    first, second = np.triu_indices(count, k=1)
    feasible = (xs[second] - xs[first]) >= min_baseline_m - TrackDefaults.BASELINE_SLACK_M
    if not feasible.any():
        raise UnlocalizableError(f"no pair of sources is at least {min_baseline_m} m apart")
    first, second = first[feasible], second[feasible]

    mismatch = np.abs(sils[first] - sils[second])
    loudness = 0.5 * (sils[first] + sils[second])
    # lexsort: last key is primary
    best = np.lexsort((second, first, -loudness, mismatch))[0]
    return int(first[best]), int(second[best])


def estimate_range(
    pair: Tuple[NodeObservation, NodeObservation],
    alpha_db_per_km: float,
    k: float,
    settings: Optional[InversionSettings] = None
) -> float:
    """
    Range to the equivalent pair from the mean of their transmission losses.

    Args:
        pair: The two selected observations
        alpha_db_per_km: Absorption coefficient (dB/km)
        k: Spreading exponent
        settings: Lambert W iteration controls

    Returns:
        Range in metres

    Raises:
        DomainError: If the sources declare different source levels
    """
    first, second = pair
    if first.source.spl_db != second.source.spl_db:
        raise DomainError(
            f"pair sources declare different SPL ({first.source.spl_db} vs {second.source.spl_db})"
        )
    mean_tl = 0.5 * (first.tl_db + second.tl_db)
    return invert_tl(mean_tl, alpha_db_per_km, k, settings)


def estimate_position(
    pair: Tuple[NodeObservation, NodeObservation],
    range_m: float,
    node_depth_m: float,
    pair_indices: Tuple[int, int] = (-1, -1)
) -> PositionEstimate:
    """
    Solve the track geometry for the node position.

    x is the pair midpoint; the slant range is projected onto the horizontal
    plane through the sensed depth, and the cross-track offset follows from
    the half-baseline. Impossible radicands are clamped to zero and flagged.

    Args:
        pair: The two selected observations (shared y and depth)
        range_m: Range to the pair (m)
        node_depth_m: Depth from the pressure sensor (m)
        pair_indices: Indices of the pair, carried into the estimate

    Returns:
        PositionEstimate with z equal to node_depth_m

    Raises:
        DomainError: On non-finite inputs, a non-positive range or mismatched track geometry
    """
    first, second = pair
    src_a, src_e = first.source, second.source
    values = (range_m, node_depth_m, src_a.x_m, src_a.y_m, src_a.depth_m, src_e.x_m)
    if not all(math.isfinite(v) for v in values):
        raise DomainError("estimate_position needs finite inputs")
    if range_m <= 0:
        raise DomainError(f"range_m must be positive, got {range_m}")
    if src_a.y_m != src_e.y_m or src_a.depth_m != src_e.depth_m:
        raise DomainError("pair sources must share the track y and depth")

    degenerate = False
    x = 0.5 * (src_a.x_m + src_e.x_m)

    horizontal_sq = range_m * range_m - (node_depth_m - src_a.depth_m) ** 2
    if horizontal_sq < 0:
        horizontal_sq = 0.0
        degenerate = True
    d = math.sqrt(horizontal_sq)

    baseline = src_a.x_m - src_e.x_m
    radicand = (2.0 * d) ** 2 - baseline * baseline
    if radicand < 0:
        radicand = 0.0
        degenerate = True

    offset = 0.5 * math.sqrt(radicand)
    y = src_a.y_m + offset if first.side_positive else src_a.y_m - offset

    return PositionEstimate(
        x_m=x,
        y_m=y,
        z_m=node_depth_m,
        degenerate=degenerate,
        pair=pair_indices
    )


def localize_node(
    observations: Sequence[NodeObservation],
    node_depth_m: float,
    channel: ChannelParams,
    min_baseline_m: float,
    settings: Optional[InversionSettings] = None
) -> PositionEstimate:
    """
    Full node-side pipeline: pair selection, ranging and geometry.

    Args:
        observations: Observations from one pass, sorted by source x
        node_depth_m: Sensed depth (m)
        channel: Channel parameters (frequency and spreading factor are used)
        min_baseline_m: Minimum pair baseline (m)
        settings: Lambert W iteration controls

    Returns:
        PositionEstimate whose pair indexes into observations

    Raises:
        UnlocalizableError: If no admissible pair exists
    """
    if not observations:
        raise UnlocalizableError("no detected source")

    i, j = select_equivalent_pair(observations, min_baseline_m)
    pair = (observations[i], observations[j])
    alpha = thorp_absorption(channel.frequency_khz)
    range_m = estimate_range(pair, alpha, channel.spreading_factor, settings)
    estimate = estimate_position(pair, range_m, node_depth_m, pair_indices=(i, j))

    if estimate.degenerate:
        logger.debug(f"Degenerate geometry for pair {i}-{j} at range {range_m:.3f} m")
    return estimate
