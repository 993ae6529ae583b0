"""
Test suite for node-side localization.

Forward-simulates noiseless observations along a straight track and checks
that pair selection, ranging and geometry recover the node.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from models.channel import ChannelParams, ReceivedLevel
from models.errors import DomainError, NoObservationError, UnlocalizableError
from models.localization import NodeObservation, PlasmaSource
from services.channel_model import AcousticChannel, thorp_absorption, transmission_loss
from services.localization_service import (
    average_block_levels,
    average_sil,
    estimate_position,
    estimate_range,
    localize_node,
    select_equivalent_pair
)

TRACK_XS = [float(x) for x in range(0, 101, 10)]
CHANNEL = ChannelParams(frequency_khz=10.0)


def forward_observations(node, xs=TRACK_XS, channel=CHANNEL, y_m=0.0, depth_m=1.0):
    """Noiseless observations of a node at `node` for sources at xs."""
    sources = [PlasmaSource(x, y_m, depth_m, channel.source_level_db) for x in xs]
    ranges = np.array([
        math.sqrt((node[0] - s.x_m) ** 2 + (node[1] - s.y_m) ** 2 + (node[2] - s.depth_m) ** 2)
        for s in sources
    ])
    levels = AcousticChannel(channel).received_levels(ranges)
    return [NodeObservation(s, float(level), node[1] >= y_m) for s, level in zip(sources, levels)]


def observation(x, sil, spl=210.0, y=0.0, depth=1.0, side_positive=True):
    return NodeObservation(PlasmaSource(x, y, depth, spl), sil, side_positive)


# ============================================================================
# Block averaging
# ============================================================================

@pytest.mark.parametrize(
    "levels,expected",
    [
        ([ReceivedLevel(120.0, True)], 120.0),
        ([ReceivedLevel(120.0, True), ReceivedLevel(122.0, True)], 121.0),
        ([ReceivedLevel(120.0, True), ReceivedLevel(-math.inf, False), ReceivedLevel(124.0, True)], 122.0),
    ],
)
def test_average_sil_examples(levels, expected):
    assert average_sil(levels) == pytest.approx(expected)


@pytest.mark.parametrize("levels", [[], [ReceivedLevel(70.0, False), ReceivedLevel(-math.inf, False)]])
def test_average_sil_without_detection(levels):
    with pytest.raises(NoObservationError):
        average_sil(levels)


def test_average_block_levels_marks_silent_rows():
    measured = np.array([[100.0, 102.0], [50.0, -np.inf]])
    detected = np.array([[True, True], [False, False]])
    means, heard = average_block_levels(measured, detected)
    assert means[0] == pytest.approx(101.0)
    assert math.isnan(means[1])
    assert heard.tolist() == [True, False]


# ============================================================================
# Pair selection
# ============================================================================

def test_exact_equality_wins():
    sils = [150.0 - i for i in range(11)]
    sils[5] = sils[4]
    observations = [observation(x, s) for x, s in zip(TRACK_XS, sils)]
    i, j = select_equivalent_pair(observations, 10.0)
    assert (observations[i].source.x_m, observations[j].source.x_m) == (40.0, 50.0)


def test_noiseless_pair_for_off_midpoint_node():
    observations = forward_observations((47.0, 30.0, 200.0))
    i, j = select_equivalent_pair(observations, 10.0)
    assert (TRACK_XS[i], TRACK_XS[j]) == (40.0, 50.0)


def test_tie_goes_to_louder_pair():
    observations = [observation(0.0, 100.0), observation(10.0, 120.0), observation(20.0, 120.0), observation(30.0, 100.0)]
    assert select_equivalent_pair(observations, 10.0) == (1, 2)


def test_baseline_excludes_close_pairs():
    observations = [observation(0.0, 120.0), observation(5.0, 120.0), observation(10.0, 119.0)]
    assert select_equivalent_pair(observations, 10.0) == (0, 2)


def test_single_observation_is_unlocalizable():
    with pytest.raises(UnlocalizableError):
        select_equivalent_pair([observation(0.0, 120.0)], 10.0)


def test_unsatisfiable_baseline_is_unlocalizable():
    observations = [observation(0.0, 120.0), observation(10.0, 119.0)]
    with pytest.raises(UnlocalizableError):
        select_equivalent_pair(observations, 50.0)


def test_unsorted_observations_are_rejected():
    observations = [observation(10.0, 120.0), observation(0.0, 119.0)]
    with pytest.raises(DomainError):
        select_equivalent_pair(observations, 5.0)


# ============================================================================
# Ranging
# ============================================================================

def test_estimate_range_chains_channel_example():
    pair = (observation(40.0, 148.81297), observation(50.0, 148.81297))
    assert estimate_range(pair, 1.18703, 2.0) == pytest.approx(1000.0, rel=1e-6)


def test_estimate_range_reference_distance():
    pair = (observation(40.0, 210.0), observation(50.0, 210.0))
    assert estimate_range(pair, 0.0, 2.0) == pytest.approx(1.0)


def test_estimate_range_uses_mean_loss():
    alpha = thorp_absorption(10.0)
    pair = (observation(40.0, 148.0), observation(50.0, 149.0))
    oracle = brentq(lambda r: transmission_loss(r, alpha, 2.0) - 61.5, 1.0, 1e5, xtol=1e-12)
    assert estimate_range(pair, alpha, 2.0) == pytest.approx(oracle, rel=1e-9)


def test_estimate_range_rejects_mixed_source_levels():
    pair = (observation(40.0, 148.0, spl=210.0), observation(50.0, 148.0, spl=200.0))
    with pytest.raises(DomainError):
        estimate_range(pair, 1.0, 2.0)


# ============================================================================
# Geometry
# ============================================================================

def test_estimate_position_recovers_forward_geometry():
    pair = (observation(0.0, 0.0), observation(100.0, 0.0))
    estimate = estimate_position(pair, math.sqrt(43001.0), 200.0)
    assert estimate.coordinates == pytest.approx((50.0, 30.0, 200.0), abs=1e-9)
    assert not estimate.degenerate


def test_estimate_position_collinear_boundary():
    pair = (observation(0.0, 0.0), observation(60.0, 0.0))
    estimate = estimate_position(pair, 30.0, 1.0)
    assert estimate.coordinates == (30.0, 0.0, 1.0)
    assert not estimate.degenerate


def test_estimate_position_flags_impossible_depth():
    pair = (observation(0.0, 0.0), observation(100.0, 0.0))
    estimate = estimate_position(pair, 100.0, 500.0)
    assert estimate.degenerate
    assert estimate.coordinates == (50.0, 0.0, 500.0)


def test_estimate_position_negative_side():
    pair = (observation(0.0, 0.0, side_positive=False), observation(100.0, 0.0, side_positive=False))
    estimate = estimate_position(pair, math.sqrt(43001.0), 200.0)
    assert estimate.y_m == pytest.approx(-30.0, abs=1e-9)


@pytest.mark.parametrize("range_m,depth", [(math.nan, 1.0), (100.0, math.inf), (0.0, 1.0)])
def test_estimate_position_domain_errors(range_m, depth):
    pair = (observation(0.0, 0.0), observation(100.0, 0.0))
    with pytest.raises(DomainError):
        estimate_position(pair, range_m, depth)


@given(
    st.floats(min_value=1e-3, max_value=1e4),
    st.floats(min_value=0.0, max_value=1e3),
    st.floats(min_value=1.0, max_value=500.0),
)
def test_estimate_position_is_finite_and_flags_clamps(range_m, depth, baseline):
    pair = (observation(0.0, 0.0), observation(baseline, 0.0))
    estimate = estimate_position(pair, range_m, depth)
    assert all(math.isfinite(v) for v in estimate.coordinates)
    assert estimate.z_m == depth
    assert estimate.x_m == 0.5 * baseline
    horizontal_sq = range_m * range_m - (depth - 1.0) ** 2
    radicand = (2.0 * math.sqrt(max(horizontal_sq, 0.0))) ** 2 - baseline * baseline
    assert estimate.degenerate == (horizontal_sq < 0 or radicand < 0)


def test_estimate_position_survives_noisy_ranges():
    rng = np.random.default_rng(3)
    pair = (observation(0.0, 0.0), observation(100.0, 0.0))
    ranges = math.sqrt(43001.0) * np.exp(rng.normal(0.0, 0.5, size=100_000))
    depths = rng.uniform(0.0, 500.0, size=ranges.size)
    for range_m, depth in zip(ranges, depths):
        estimate = estimate_position(pair, float(range_m), float(depth))
        assert not math.isnan(estimate.y_m)


# ============================================================================
# Full pipeline
# ============================================================================

def test_localize_node_exact_at_midpoint():
    observations = forward_observations((45.0, 30.0, 200.0))
    estimate = localize_node(observations, 200.0, CHANNEL, 10.0)
    assert estimate.coordinates == pytest.approx((45.0, 30.0, 200.0), abs=1e-6)
    assert (TRACK_XS[estimate.pair[0]], TRACK_XS[estimate.pair[1]]) == (40.0, 50.0)


def test_localize_node_quantizes_x():
    observations = forward_observations((47.0, 30.0, 200.0))
    estimate = localize_node(observations, 200.0, CHANNEL, 10.0)
    assert estimate.x_m == 45.0
    assert abs(estimate.x_m - 47.0) <= 5.0


@pytest.mark.parametrize("y_m", [5.0, 30.0, 120.0, 300.0])
def test_localize_node_mirrors_across_track(y_m):
    above = localize_node(forward_observations((47.0, y_m, 200.0)), 200.0, CHANNEL, 10.0)
    below = localize_node(forward_observations((47.0, -y_m, 200.0)), 200.0, CHANNEL, 10.0)
    assert above.pair == below.pair
    assert above.x_m == below.x_m
    assert below.y_m == -above.y_m
    assert above.y_m >= 0.0


def test_localize_node_without_observations():
    with pytest.raises(UnlocalizableError):
        localize_node([], 200.0, CHANNEL, 10.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
