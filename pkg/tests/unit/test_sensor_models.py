"""
Unit tests for GPS/IMU sample generation.
"""

import math

import numpy as np
import pytest

from common.geo import GeoPoint, enu_from_geodetic
from sensor_models import (
    GyroBias,
    SensorNoiseConfig,
    SensorSchedule,
    sample_gps,
    sample_imu,
)
from vessel_dynamics.models import SimState

ORIGIN = GeoPoint(lat=53.3781, lon=-1.466)
TRUTH = SimState(t=3.0, x=12.0, y=-7.5, yaw=1.2, u=1.4, v=0.1, r=0.3)


class TestSampleGps:
    """Test GPS fixes."""

    def test_noiseless_fix_is_exact(self):
        """Test that zero noise gives the truth position."""
        cfg = SensorNoiseConfig.noiseless()
        fix = sample_gps(TRUTH, ORIGIN, cfg, np.random.default_rng(0))
        assert fix is not None
        x, y, z = enu_from_geodetic(ORIGIN, fix.point)
        assert (x, y, z) == pytest.approx((12.0, -7.5, 0.0), abs=1e-6)
        assert fix.t == 3.0
        assert fix.horizontal_std == pytest.approx(1e-3)

    def test_dropout_frequency(self):
        """Test that the fraction of missing fixes matches the dropout rate."""
        cfg = SensorNoiseConfig(gps_dropout_prob=0.3)
        rng = np.random.default_rng(11)
        n = 10000
        missing = sum(sample_gps(TRUTH, ORIGIN, cfg, rng) is None for _ in range(n))
        sigma = math.sqrt(0.3 * 0.7 / n)
        assert abs(missing / n - 0.3) < 3.0 * sigma

    def test_horizontal_variance(self):
        """Test the per-axis position variance for gps_std = 1.5."""
        cfg = SensorNoiseConfig(gps_std=1.5)
        rng = np.random.default_rng(12)
        points = [sample_gps(TRUTH, ORIGIN, cfg, rng) for _ in range(10000)]
        enu = np.array([enu_from_geodetic(ORIGIN, p.point) for p in points if p])
        assert np.var(enu[:, 0]) == pytest.approx(2.25, rel=0.1)
        assert np.var(enu[:, 1]) == pytest.approx(2.25, rel=0.1)
        assert np.var(enu[:, 2]) == pytest.approx(9.0, rel=0.1)

    def test_explicit_stamp(self):
        """Test that a sensor stamp overrides the truth time."""
        cfg = SensorNoiseConfig.noiseless()
        fix = sample_gps(TRUTH, ORIGIN, cfg, np.random.default_rng(0), stamp=2.99)
        assert fix is not None and fix.t == 2.99


class TestSampleImu:
    """Test IMU readings."""

    def test_noiseless_reading_is_exact(self):
        """Test that zero noise reports truth attitude and rates."""
        cfg = SensorNoiseConfig.noiseless()
        reading = sample_imu(TRUTH, GyroBias(), cfg, np.random.default_rng(0))
        assert reading.yaw == pytest.approx(1.2)
        assert reading.roll == 0.0 and reading.pitch == 0.0
        assert reading.rate_z == pytest.approx(0.3)
        assert reading.rate_x == 0.0 and reading.rate_y == 0.0
        assert reading.orientation_std > 0.0 and reading.rate_std > 0.0

    def test_yaw_circular_mean(self):
        """Test that yaw noise is centred on the truth near the seam."""
        truth = SimState(yaw=math.pi - 0.01)
        cfg = SensorNoiseConfig(gyro_bias_walk_std=0.0, imu_yaw_std=0.2)
        rng = np.random.default_rng(13)
        yaws = np.array(
            [sample_imu(truth, GyroBias(), cfg, rng).yaw for _ in range(10000)]
        )
        mean = math.atan2(np.mean(np.sin(yaws)), np.mean(np.cos(yaws)))
        assert math.remainder(mean - truth.yaw, 2.0 * math.pi) == pytest.approx(
            0.0, abs=0.01
        )
        assert np.all(yaws > -math.pi) and np.all(yaws <= math.pi)

    def test_bias_variance_grows_linearly(self):
        """Test the random-walk bias variance at two horizons."""
        walk = 0.01
        rng = np.random.default_rng(14)
        biases = [GyroBias() for _ in range(3000)]
        snapshots = {}
        for k in range(41):
            t = k * 0.1
            for bias in biases:
                bias.advance(t, walk, rng)
            if k in (10, 40):
                snapshots[k] = np.var([bias.rate for bias in biases])
        assert snapshots[10] == pytest.approx(walk**2 * 1.0, rel=0.15)
        assert snapshots[40] == pytest.approx(walk**2 * 4.0, rel=0.15)


class TestSensorSchedule:
    """Test sample timing."""

    def test_one_hertz_on_fine_clock(self):
        """Test that a 1 Hz sensor fires once per second of a 50 Hz clock."""
        schedule = SensorSchedule(rate=1.0)
        due = [schedule.due(k * 0.02) for k in range(250)]
        assert [d for d in due if d is not None] == [0.0, 1.0, 2.0, 3.0, 4.0]

    def test_clock_skew(self):
        """Test that skew scales the reported stamp."""
        schedule = SensorSchedule(rate=1.0, clock_skew_ppm=100.0)
        assert schedule.stamp(10.0) == pytest.approx(10.001)

    def test_jitter_needs_rng(self):
        """Test that jitter is only applied with a generator."""
        schedule = SensorSchedule(rate=1.0, jitter_std=0.01)
        assert schedule.stamp(5.0) == 5.0
        assert schedule.stamp(5.0, np.random.default_rng(1)) != 5.0


class TestPresets:
    """Test noise presets."""

    def test_rtk_narrows_gps(self):
        """Test the RTK preset noise level."""
        assert SensorNoiseConfig.rtk().gps_std == pytest.approx(0.02)
        assert SensorNoiseConfig.low_cost().gps_std == pytest.approx(1.5)

    def test_noiseless_floors(self):
        """Test that reported stds stay positive with noise disabled."""
        cfg = SensorNoiseConfig.noiseless()
        assert cfg.reported_gps_std == pytest.approx(1e-3)
        assert cfg.reported_orientation_std == pytest.approx(1e-4)
