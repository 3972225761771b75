"""
Integration tests for the simulated turning-circle protocol.
"""

import math

import numpy as np
import pytest

from common.constants import HeadingSource, TurnSide
from common.errors import TrialIncompleteError
from common.geo import unwrap_heading
from maneuver_metrics import compute_metrics
from trial_protocol import run_campaign, run_turning_circle


def run_side(cfg, side: TurnSide, seed: int = 0):
    trial_cfg = cfg.with_overrides({"trial.side": side.value, "environment.seed": seed})
    return run_turning_circle(trial_cfg, np.random.default_rng(seed))


@pytest.fixture(scope="module")
def trials(fast_config):
    """Port and starboard trials on the fast config, shared by the module."""
    return {side: run_side(fast_config, side) for side in TurnSide}


class TestProtocolConformance:
    """Test the approach and execute phases."""

    def test_execute_after_steady_hold(self, trials):
        """Test that the turn starts no earlier than 60 s of steady approach."""
        log = trials[TurnSide.STARBOARD]
        execute = log.records[log.metadata.execute_index]
        assert execute.t >= 60.0 - 1e-9

    def test_steady_approach_speed(self, trials, calibration):
        """Test that the vessel holds the calibrated approach speed."""
        log = trials[TurnSide.STARBOARD]
        execute = log.records[log.metadata.execute_index]
        expected = calibration.approach_speed
        assert execute.truth.speed == pytest.approx(expected, rel=0.01)
        assert log.metadata.approach_speed == calibration.approach_speed
        assert calibration.ratio == pytest.approx(0.9, abs=0.0046)

    def test_heading_held_before_execute(self, trials):
        """Test that the approach keeps the start heading."""
        log = trials[TurnSide.PORT]
        yaws = [r.truth.yaw for r in log.records[: log.metadata.execute_index]]
        assert max(abs(y) for y in yaws) < 1e-6

    def test_every_record_is_complete(self, trials):
        """Test that simulated records carry truth, estimate and command."""
        log = trials[TurnSide.PORT]
        assert all(r.truth and r.est and r.cmd for r in log.records)
        assert any(r.gps for r in log.records) and any(r.imu for r in log.records)
        assert log.metadata.filter_stats["gps.fused"] > 0


class TestTurnPhase:
    """Test the turn phase and resulting metrics."""

    def test_starboard_turns_clockwise(self, trials):
        """Test that a starboard turn reaches -540 degrees."""
        log = trials[TurnSide.STARBOARD]
        k0 = log.metadata.execute_index
        heading = unwrap_heading([r.truth.yaw for r in log.records[k0:]])
        assert heading[-1] - heading[0] <= -3.0 * math.pi

    def test_port_turns_counterclockwise(self, trials):
        """Test that a port turn reaches +540 degrees."""
        log = trials[TurnSide.PORT]
        k0 = log.metadata.execute_index
        heading = unwrap_heading([r.truth.yaw for r in log.records[k0:]])
        assert heading[-1] - heading[0] >= 3.0 * math.pi

    def test_port_and_starboard_mirror(self, trials):
        """Test that calm-water port and starboard metrics agree within 1%."""
        port = compute_metrics(trials[TurnSide.PORT])
        starboard = compute_metrics(trials[TurnSide.STARBOARD])
        for name in ("advance", "transfer", "tactical_diameter", "t90", "t180"):
            assert getattr(port, name) == pytest.approx(
                getattr(starboard, name), rel=0.01
            )

    def test_speed_loss_is_positive(self, trials):
        """Test that the vessel slows down in the turn."""
        metrics = compute_metrics(trials[TurnSide.STARBOARD])
        assert 0.0 < metrics.speed_loss_pct < 100.0
        assert metrics.t90 < metrics.t180

    def test_truth_is_seed_independent(self, fast_config, trials):
        """Test that the truth trajectory does not depend on sensor noise."""
        other = run_side(fast_config, TurnSide.STARBOARD, seed=7)
        a = compute_metrics(trials[TurnSide.STARBOARD])
        b = compute_metrics(other)
        assert b.tactical_diameter == pytest.approx(a.tactical_diameter, abs=1e-9)
        assert b.speed_loss_pct == pytest.approx(a.speed_loss_pct, abs=1e-9)

    def test_estimate_metrics_track_truth(self, trials):
        """Test that metrics from the EKF track lie within 3 RMSE of truth."""
        log = trials[TurnSide.STARBOARD]
        errors = [
            (r.est.x - r.truth.x) ** 2 + (r.est.y - r.truth.y) ** 2
            for r in log.records
            if r.est is not None and r.truth is not None
        ]
        rmse = math.sqrt(float(np.mean(errors)))
        truth = compute_metrics(log)
        estimate = compute_metrics(log, HeadingSource.ESTIMATE)
        for name in ("advance", "transfer", "tactical_diameter"):
            assert abs(getattr(estimate, name) - getattr(truth, name)) <= 3.0 * rmse

    def test_incomplete_turn_keeps_log(self, fast_config):
        """Test that a turn cut short raises with the partial log attached."""
        cfg = fast_config.with_overrides({"trial.max_duration": 2.0})
        with pytest.raises(TrialIncompleteError) as info:
            run_turning_circle(cfg, np.random.default_rng(0))
        log = info.value.log
        assert log.metadata.execute_index is not None
        assert len(log.records) > log.metadata.execute_index


class TestCampaign:
    """Test multi-seed campaigns."""

    def test_one_outcome_per_seed(self, fast_config):
        """Test that every seed produces its own completed trial."""
        outcomes = run_campaign(fast_config, [1, 2], [TurnSide.PORT])
        assert [o.seed for o in outcomes] == [1, 2]
        assert all(o.error is None and o.log is not None for o in outcomes)
        assert [o.log.metadata.seed for o in outcomes] == [1, 2]

    def test_side_list_must_match(self, fast_config):
        """Test that a side list must have one entry or one per seed."""
        with pytest.raises(ValueError):
            run_campaign(fast_config, [1, 2, 3], [TurnSide.PORT, TurnSide.STARBOARD])
