"""
Acoustic channel model.

This module evaluates the level budget of an optoacoustic source: Thorp
absorption, transmission loss (spreading plus absorption), received level,
and the receiver's additive white Gaussian noise. Functions accept scalars
or numpy arrays; scalar inputs give Python floats back.
"""

import math
from typing import Tuple, Union

import numpy as np

from config.constants import ChannelDefaults
from models.channel import ChannelParams, ReceivedLevel
from models.errors import DomainError
from utils.logger import get_logger

logger = get_logger(__name__)

ArrayOrFloat = Union[float, np.ndarray]


def _as_output(values: np.ndarray) -> ArrayOrFloat:
    """Return a Python float for 0-d results, the array otherwise."""
    return float(values) if np.ndim(values) == 0 else values


def thorp_absorption(frequency_khz: float) -> float:
    """
    Seawater absorption coefficient from Thorp's empirical formula.

    Args:
        frequency_khz: Acoustic frequency in kHz

    Returns:
        Absorption coefficient in dB/km, always above 0.003

    Raises:
        DomainError: If the frequency is not a positive finite number
    """
    if not math.isfinite(frequency_khz) or frequency_khz <= 0:
        raise DomainError(f"frequency_khz must be positive and finite, got {frequency_khz}")

    f2 = frequency_khz * frequency_khz
    return (
        0.11 * f2 / (1.0 + f2)
        + 44.0 * f2 / (4100.0 + f2)
        + 2.75e-4 * f2
        + ChannelDefaults.THORP_FLOOR_DB_PER_KM
    )


def transmission_loss(
    range_m: ArrayOrFloat,
    alpha_db_per_km: float,
    spreading_factor: float
) -> ArrayOrFloat:
    """
    Transmission loss over a path: 10·k·log10(R) + α·R·1e-3.

    Args:
        range_m: Source to receiver distance(s) in metres
        alpha_db_per_km: Absorption coefficient (dB/km)
        spreading_factor: Spreading exponent k

    Returns:
        Loss in dB, same shape as range_m

    Raises:
        DomainError: On non-positive ranges or invalid coefficients
    """
    ranges = np.asarray(range_m, dtype=float)
    if not np.all(np.isfinite(ranges)) or np.any(ranges <= 0):
        raise DomainError("range_m must be positive and finite")
    if not math.isfinite(alpha_db_per_km) or alpha_db_per_km < 0:
        raise DomainError(f"alpha_db_per_km must be non-negative, got {alpha_db_per_km}")
    if not math.isfinite(spreading_factor) or spreading_factor <= 0:
        raise DomainError(f"spreading_factor must be positive, got {spreading_factor}")

    loss = 10.0 * spreading_factor * np.log10(ranges) + alpha_db_per_km * ranges * 1e-3
    return _as_output(loss)


def received_sil(spl_db: ArrayOrFloat, tl_db: ArrayOrFloat) -> ArrayOrFloat:
    """
    Received sound intensity level: SIL = SPL − TL.

    Raises:
        DomainError: On non-finite input
    """
    spl = np.asarray(spl_db, dtype=float)
    tl = np.asarray(tl_db, dtype=float)
    if not (np.all(np.isfinite(spl)) and np.all(np.isfinite(tl))):
        raise DomainError("received_sil needs finite levels")
    return _as_output(spl - tl)


def is_noiseless(snr_db: float) -> bool:
    """Check if an SNR value selects the noiseless channel."""
    return snr_db >= ChannelDefaults.NOISELESS_SNR_DB


def apply_awgn_levels(
    sil_db: np.ndarray,
    snr_db: float,
    rng: np.random.Generator,
    detection_threshold_db: float = ChannelDefaults.DETECTION_THRESHOLD_DB
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pass true received levels through the receiver noise model.

    Each level is turned into a linear amplitude p and perturbed by
    n ~ N(0, σ²) with σ = p·10^(−SNR/20). A block whose noisy amplitude is
    not positive is lost; otherwise its measured level is
    SIL + 20·log10(a/p) and it is detected when that reaches the threshold.

    Args:
        sil_db: True received levels (any shape)
        snr_db: Per-block SNR in dB; values ≥ the noiseless sentinel draw nothing
        rng: Random stream consumed in C order of sil_db
        detection_threshold_db: Minimum measured level for detection

    Returns:
        Tuple of (measured levels, detected mask); lost blocks carry -inf

    Raises:
        DomainError: If snr_db is NaN or -inf
    """
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise DomainError(f"snr_db must be a number or +inf, got {snr_db}")

    levels = np.asarray(sil_db, dtype=float)
    if is_noiseless(snr_db):
        measured = levels.copy()
    else:
        # Amplitudes relative to the noiseless amplitude p, i.e. a/p = 1 + n/p
        relative_sigma = 10.0 ** (-snr_db / 20.0)
        ratio = 1.0 + relative_sigma * rng.standard_normal(levels.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            measured = np.where(ratio > 0, levels + 20.0 * np.log10(ratio), -np.inf)

    detected = np.isfinite(measured) & (measured >= detection_threshold_db)
    return measured, detected


def apply_awgn(
    sil_db: float,
    snr_db: float,
    rng: np.random.Generator,
    detection_threshold_db: float = ChannelDefaults.DETECTION_THRESHOLD_DB
) -> ReceivedLevel:
    """
    Measure a single block through the receiver noise model.

    See apply_awgn_levels for the noise mapping.

    Returns:
        ReceivedLevel with the measured level and detection flag
    """
    if not math.isfinite(sil_db):
        raise DomainError(f"sil_db must be finite, got {sil_db}")
    measured, detected = apply_awgn_levels(np.asarray(sil_db), snr_db, rng, detection_threshold_db)
    return ReceivedLevel(sil_db=float(measured), detected=bool(detected))


class AcousticChannel:
    """Channel bound to one set of parameters, with absorption precomputed."""

    def __init__(self, params: ChannelParams):
        """
        Initialize the channel.

        Args:
            params: Channel parameters
        """
        self.params = params
        self.alpha_db_per_km = thorp_absorption(params.frequency_khz)
        logger.debug(
            f"Channel at {params.frequency_khz} kHz: alpha={self.alpha_db_per_km:.6f} dB/km, "
            f"k={params.spreading_factor}, SPL={params.source_level_db} dB"
        )

    def transmission_loss(self, range_m: ArrayOrFloat) -> ArrayOrFloat:
        """Transmission loss for the bound channel."""
        return transmission_loss(range_m, self.alpha_db_per_km, self.params.spreading_factor)

    def received_levels(self, range_m: ArrayOrFloat) -> ArrayOrFloat:
        """Noiseless received level at the given range(s)."""
        return received_sil(self.params.source_level_db, self.transmission_loss(range_m))

    def observe(
        self,
        range_m: np.ndarray,
        blocks: int,
        snr_db: float,
        rng: np.random.Generator
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Measure `blocks` noisy blocks from sources at each range.

        Args:
            range_m: Source ranges, shape (n,)
            blocks: Blocks per source
            snr_db: Per-block SNR
            rng: Random stream

        Returns:
            Tuple of (measured, detected), both shaped (n, blocks)
        """
        sil = np.asarray(self.received_levels(np.asarray(range_m, dtype=float)))
        per_block = np.repeat(sil.reshape(-1, 1), blocks, axis=1)
        return apply_awgn_levels(per_block, snr_db, rng, self.params.detection_threshold_db)
