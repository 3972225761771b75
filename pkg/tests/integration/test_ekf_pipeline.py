"""
Integration tests for the sensor -> EKF pipeline on simulated runs.
"""

import math

import numpy as np
import pytest

from common.errors import InputValidationError
from ekf_localization import (
    ProcessConfig,
    average_nees,
    chi2_interval,
    dead_reckoning,
    nees,
    state_error,
    truth_state_vector,
)
from trial_protocol import replay_log, run_scripted, run_turning_circle
from trial_protocol.config import PipelineConfig
from vessel_dynamics import mix_differential


def straight(throttle: float):
    cmd = mix_differential(throttle, 0.0)
    return lambda t: cmd


def horizontal_rmse(pairs) -> float:
    errors = [(ex - tx) ** 2 + (ey - ty) ** 2 for (ex, ey), (tx, ty) in pairs]
    return math.sqrt(float(np.mean(errors)))


class TestReplay:
    """Test refilling estimates from logged sensor samples."""

    def test_replay_reproduces_online_estimates(self, fast_config):
        """Test that offline replay matches the estimates logged online."""
        log = run_turning_circle(fast_config, np.random.default_rng(3))
        bare = [r.model_copy(update={"est": None}) for r in log.records]
        stripped = log.model_copy(update={"records": bare})
        replayed, stats = replay_log(stripped, fast_config.ekf, fast_config.origin)
        assert stats.fused > 0
        for online, offline in zip(log.records, replayed.records):
            assert offline.est.x == pytest.approx(online.est.x, abs=1e-9)
            assert offline.est.y == pytest.approx(online.est.y, abs=1e-9)
            assert offline.est.yaw == pytest.approx(online.est.yaw, abs=1e-9)
        assert replayed.metadata.filter_stats == log.metadata.filter_stats

    def test_truth_only_log_is_refused(self, circle_log):
        """Test that a log without GPS or IMU samples cannot be replayed."""
        with pytest.raises(InputValidationError):
            replay_log(circle_log, ProcessConfig(), circle_log.metadata.origin)


class TestSensorTiming:
    """Test sample counts and stamps on the default simulation clock."""

    def test_default_rates_over_ten_seconds(self, calibration):
        """Test that 10 s at 1 Hz GPS and 50 Hz IMU gives 11 and 501 samples."""
        run = run_scripted(
            PipelineConfig(),
            straight(calibration.throttle),
            10.0,
            np.random.default_rng(0),
        )
        gps = [r for r in run.log.records if r.gps is not None]
        imu = [r for r in run.log.records if r.imu is not None]
        assert len(gps) == 11
        assert len(imu) == 501
        for record in gps + imu:
            sample = record.gps or record.imu
            assert sample.stamp == pytest.approx(record.t, abs=1e-9)


@pytest.mark.slow
class TestConsistency:
    """Test filter consistency against truth on straight runs."""

    def test_average_nees_within_chi_square_band(self, calibration):
        """Test that 50 runs of 60 s keep the mean NEES in the 95% band."""
        cfg = PipelineConfig()
        samples = []
        for seed in range(50):
            run = run_scripted(
                cfg,
                straight(calibration.throttle),
                60.0,
                np.random.default_rng(100 + seed),
            )
            for estimate, truth in zip(run.estimates, run.truth):
                target = truth_state_vector(truth, cfg.environment)
                samples.append(nees(state_error(estimate.x, target), estimate.P))
            assert all(e.is_consistent() for e in run.estimates)

        low, high = chi2_interval(12, alpha=0.05)
        assert low < average_nees(samples) < high

    def test_gps_dropouts_beat_dead_reckoning(self, fast_config, calibration):
        """Test that the filter beats dead reckoning despite 30% missing fixes."""
        cfg = fast_config.with_overrides({"sensors.gps_dropout_prob": 0.3})
        run = run_scripted(
            cfg, straight(calibration.throttle), 120.0, np.random.default_rng(5)
        )
        records = run.log.records
        first_fix = next(k for k, r in enumerate(records) if r.gps is not None)
        coasted = [run.estimates[first_fix]] + dead_reckoning(
            run.estimates[first_fix], [r.t for r in records[first_fix + 1 :]], cfg.ekf
        )

        fused, baseline = [], []
        for record, estimate, reckoned in zip(
            records[first_fix:], run.estimates[first_fix:], coasted
        ):
            truth = (record.truth.x, record.truth.y)
            fused.append(((estimate.x[0], estimate.x[1]), truth))
            baseline.append(((reckoned.x[0], reckoned.x[1]), truth))

        assert run.stats.dropped > 0
        delivered = run.log.metadata.filter_stats.get("gps.fused", 0)
        assert run.stats.dropped / (run.stats.dropped + delivered) == pytest.approx(
            0.3, abs=0.15
        )
        assert horizontal_rmse(fused) < horizontal_rmse(baseline)
