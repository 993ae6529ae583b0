"""
Range inversion service.

This module inverts the transmission loss law to a range through the
principal branch of the Lambert W function, evaluated with Halley's
iteration.
"""

import math
from typing import Optional

from models.channel import ChannelParams, InversionSettings
from models.errors import ConvergenceError, DomainError
from services.channel_model import thorp_absorption
from utils.logger import get_logger

logger = get_logger(__name__)

_DEFAULT_SETTINGS = InversionSettings()
_LN10 = math.log(10.0)

# Above this argument w·e^w is evaluated in log form to stay clear of overflow
_LOG_FORM_THRESHOLD = 1e250


def _halley_log_form(x: float, w: float, settings: InversionSettings) -> float:
    """Halley on g(w) = w + ln(w) − ln(x), used for very large x."""
    log_x = math.log(x)
    for _ in range(settings.max_iterations):
        g = w + math.log(w) - log_x
        g1 = 1.0 + 1.0 / w
        g2 = -1.0 / (w * w)
        dw = 2.0 * g * g1 / (2.0 * g1 * g1 - g * g2)
        w -= dw
        if abs(dw) <= settings.tolerance * abs(w):
            return w
    raise ConvergenceError(
        f"Lambert W did not converge for x={x} in {settings.max_iterations} iterations",
        iterations=settings.max_iterations,
        last_value=w
    )


def lambert_w0(x: float, settings: Optional[InversionSettings] = None) -> float:
    """
    Principal branch of the Lambert W function on x ≥ 0.

    Solves w·e^w = x with Halley's iteration, starting from w = x below 1,
    ln(1 + x) on [1, e) and the asymptotic ln x − ln ln x from e upward.

    Args:
        x: Non-negative argument
        settings: Iteration controls; defaults to InversionSettings()

    Returns:
        w ≥ 0 with w·e^w = x

    Raises:
        DomainError: If x is negative or not finite
        ConvergenceError: If the iteration cap is reached

    Example:
        >>> lambert_w0(math.e)
        1.0
    """
    settings = settings or _DEFAULT_SETTINGS
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"lambert_w0 is defined here for finite x >= 0, got {x}")
    if x == 0.0:
        return 0.0

    if x < 1.0:
        w = x
    elif x < math.e:
        w = math.log1p(x)
    else:
        log_x = math.log(x)
        w = log_x - math.log(log_x)

    if x > _LOG_FORM_THRESHOLD:
        return _halley_log_form(x, w, settings)

    for _ in range(settings.max_iterations):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= settings.tolerance * abs(w):
            return w

    raise ConvergenceError(
        f"Lambert W did not converge for x={x} in {settings.max_iterations} iterations",
        iterations=settings.max_iterations,
        last_value=w
    )


def invert_tl(
    tl_db: float,
    alpha_db_per_km: float,
    spreading_factor: float,
    settings: Optional[InversionSettings] = None
) -> float:
    """
    Range at which the transmission loss equals tl_db.

    With c = α·ln(10)/(10000·k) the loss law rearranges to
    c·R·e^(c·R) = c·10^(TL/(10k)), so R = W(c·10^(TL/(10k)))/c. For k = 2 this
    is the familiar 20000·W(...)/(α·ln 10) form. Without absorption the law
    is pure spreading and R = 10^(TL/(10k)).

    Args:
        tl_db: Transmission loss in dB
        alpha_db_per_km: Absorption coefficient (dB/km), ≥ 0
        spreading_factor: Spreading exponent k > 0
        settings: Lambert W iteration controls

    Returns:
        Range in metres

    Raises:
        DomainError: On invalid inputs or a loss too large to represent
        ConvergenceError: Propagated from lambert_w0
    """
    if not math.isfinite(tl_db):
        raise DomainError(f"tl_db must be finite, got {tl_db}")
    if not math.isfinite(alpha_db_per_km) or alpha_db_per_km < 0:
        raise DomainError(f"alpha_db_per_km must be non-negative, got {alpha_db_per_km}")
    if not math.isfinite(spreading_factor) or spreading_factor <= 0:
        raise DomainError(f"spreading_factor must be positive, got {spreading_factor}")

    spreading_exponent = tl_db * _LN10 / (10.0 * spreading_factor)

    if alpha_db_per_km == 0.0:
        try:
            return 10.0 ** (tl_db / (10.0 * spreading_factor))
        except OverflowError:
            raise DomainError(f"tl_db={tl_db} is too large to invert") from None

    c = alpha_db_per_km * _LN10 / (10000.0 * spreading_factor)
    try:
        argument = math.exp(math.log(c) + spreading_exponent)
    except OverflowError:
        raise DomainError(f"tl_db={tl_db} is too large to invert") from None

    return lambert_w0(argument, settings) / c


def detection_range(channel: ChannelParams, settings: Optional[InversionSettings] = None) -> float:
    """
    Largest range at which a block still reaches the detection threshold.

    Args:
        channel: Channel parameters
        settings: Lambert W iteration controls

    Returns:
        Range in metres
    """
    alpha = thorp_absorption(channel.frequency_khz)
    budget = channel.source_level_db - channel.detection_threshold_db
    range_m = invert_tl(budget, alpha, channel.spreading_factor, settings)
    logger.debug(f"Detection range for a {budget:.1f} dB budget: {range_m:.1f} m")
    return range_m
