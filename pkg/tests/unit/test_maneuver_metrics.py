"""
Unit tests for turning-circle metrics, IMO compliance and campaign tables.
"""

import math

import numpy as np
import pytest

from common.constants import HeadingSource, TurnSide
from common.errors import InputValidationError, MetricsError
from maneuver_metrics import (
    ComplianceReport,
    TurningCircleMetrics,
    check_imo,
    compare_tests,
    compute_metrics,
    field_reference_table,
    turning_crossings,
)
from maneuver_metrics.campaign import INSUFFICIENT_N, LESS_VARIABLE_STARBOARD
from tests.conftest import make_circle_log
from trial_log_io.schema import TrialLog

GEOMETRY = ("advance", "transfer", "tactical_diameter", "t90", "t180")


def metrics_for(**kwargs) -> TurningCircleMetrics:
    values = dict(
        side=TurnSide.STARBOARD,
        advance=1.0,
        transfer=1.0,
        tactical_diameter=2.0,
        speed_loss_pct=5.0,
        t90=5.0,
        t180=9.0,
    )
    values.update(kwargs)
    return TurningCircleMetrics(**values)


class TestComputeMetrics:
    """Test metrics on analytic turning circles."""

    def test_circle_geometry(self, circle_log):
        """Test advance, transfer and tactical diameter of a 2 m circle."""
        m = compute_metrics(circle_log)
        assert m.advance == pytest.approx(2.0, rel=0.01)
        assert m.transfer == pytest.approx(2.0, rel=0.01)
        assert m.tactical_diameter == pytest.approx(4.0, rel=0.01)

    def test_circle_times(self, circle_log):
        """Test heading crossing times at 0.2 rad/s."""
        m = compute_metrics(circle_log)
        assert m.t90 == pytest.approx(7.854, abs=1e-3)
        assert m.t180 == pytest.approx(15.708, abs=1e-3)

    def test_constant_speed_has_no_loss(self, circle_log):
        """Test zero speed loss when the turn keeps the approach speed."""
        loss = compute_metrics(circle_log).speed_loss_pct
        assert loss == pytest.approx(0.0, abs=1e-9)

    def test_speed_loss(self):
        """Test a 10 percent loss from 1.0 m/s to 0.9 m/s."""
        log = make_circle_log(radius=5.0, omega=0.2, turn_speed=0.9, approach_speed=1.0)
        assert compute_metrics(log).speed_loss_pct == pytest.approx(10.0, abs=1e-9)

    def test_port_and_starboard_match(self):
        """Test that mirrored circles give equal metrics."""
        port = compute_metrics(make_circle_log(side=TurnSide.PORT))
        starboard = compute_metrics(make_circle_log(side=TurnSide.STARBOARD))
        for name in GEOMETRY:
            assert getattr(starboard, name) == pytest.approx(
                getattr(port, name), abs=1e-9
            )

    def test_rigid_transform_invariance(self):
        """Test that rotating and translating the track leaves metrics unchanged."""
        base = compute_metrics(make_circle_log())
        moved = compute_metrics(make_circle_log(yaw0=1.0, origin_xy=(50.0, -20.0)))
        for name in GEOMETRY:
            assert getattr(moved, name) == pytest.approx(getattr(base, name), abs=1e-6)

    def test_heading_seam_during_approach(self):
        """Test an approach heading right at the +/-pi seam."""
        base = compute_metrics(make_circle_log(side=TurnSide.STARBOARD))
        seam = compute_metrics(make_circle_log(side=TurnSide.STARBOARD, yaw0=math.pi))
        assert seam.tactical_diameter == pytest.approx(base.tactical_diameter, abs=1e-6)

    def test_sampling_convergence(self):
        """Test that doubling the sample rate changes the metrics by < 0.5%."""
        coarse = compute_metrics(make_circle_log(rate_hz=10.0))
        fine = compute_metrics(make_circle_log(rate_hz=20.0))
        for name in GEOMETRY:
            assert getattr(fine, name) == pytest.approx(
                getattr(coarse, name), rel=0.005
            )

    def test_estimate_source(self):
        """Test metrics from the estimate layer."""
        log = make_circle_log(with_estimates=True)
        truth = compute_metrics(log, HeadingSource.TRUTH)
        estimate = compute_metrics(log, HeadingSource.ESTIMATE)
        assert estimate.source is HeadingSource.ESTIMATE
        assert estimate.tactical_diameter == pytest.approx(truth.tactical_diameter)
        assert estimate.max_abs_roll == 0.0

    def test_crossings_are_ordered(self, circle_log):
        """Test that the four heading marks are crossed in time order."""
        crossings = turning_crossings(circle_log)
        times = [crossings.marks[name].t for name in crossings.marks]
        assert times == sorted(times)
        assert crossings.marks["one_and_half"].t == pytest.approx(
            crossings.t_execute + 3.0 * math.pi / 0.2, abs=1e-6
        )


class TestMetricsErrors:
    """Test logs that cannot produce metrics."""

    def test_zero_approach_speed(self, circle_log):
        """Test that a zero approach speed is rejected."""
        metadata = circle_log.metadata.model_copy(update={"approach_speed": 0.0})
        log = TrialLog(metadata=metadata, records=circle_log.records)
        with pytest.raises(MetricsError):
            compute_metrics(log)

    def test_missing_execute(self, circle_log):
        """Test that a log without an execute index is rejected."""
        metadata = circle_log.metadata.model_copy(update={"execute_index": None})
        log = TrialLog(metadata=metadata, records=circle_log.records)
        with pytest.raises(MetricsError):
            compute_metrics(log)

    def test_incomplete_turn(self, circle_log):
        """Test that a log stopping before 540 degrees is rejected."""
        cut = circle_log.metadata.execute_index + 200
        log = TrialLog(metadata=circle_log.metadata, records=circle_log.records[:cut])
        with pytest.raises(MetricsError):
            compute_metrics(log)

    def test_missing_estimates(self, circle_log):
        """Test that the estimate source needs estimates."""
        with pytest.raises(MetricsError):
            compute_metrics(circle_log, HeadingSource.ESTIMATE)


class TestImoCompliance:
    """Test the IMO advance and tactical diameter limits."""

    def test_limits_for_prototype(self):
        """Test limits for a 0.72 m hull."""
        report = check_imo(metrics_for(), 0.72)
        assert report.advance_limit == pytest.approx(3.24)
        assert report.td_limit == pytest.approx(3.6)
        assert report.compliant
        assert report.verdict == "Y, Y"

    @pytest.mark.parametrize(
        "tactical_diameter, advance",
        [(7.07, 8.42), (7.20, 9.08), (6.80, 5.74)],
    )
    def test_field_trials_fail(self, tactical_diameter, advance):
        """Test that the lake trial geometry fails both limits."""
        report = ComplianceReport.evaluate(advance, tactical_diameter, 0.72)
        assert report.verdict == "N, N"
        assert not report.compliant

    def test_just_inside_limits(self):
        """Test values just below the limits pass."""
        report = ComplianceReport.evaluate(3.2399, 3.5999, 0.72)
        assert report.advance_pass and report.td_pass

    def test_mixed_verdict(self):
        """Test that the verdict reports tactical diameter first."""
        report = ComplianceReport.evaluate(5.0, 1.0, 0.72)
        assert report.verdict == "Y, N"

    def test_length_must_be_positive(self):
        """Test the vessel length guard."""
        with pytest.raises(InputValidationError):
            check_imo(metrics_for(), 0.0)


class TestCampaign:
    """Test multi-trial comparison."""

    def test_single_trial(self, circle_log):
        """Test that one trial gives one row and an insufficient-n summary."""
        report = compare_tests([(circle_log, compute_metrics(circle_log))])
        assert len(report.table) == 1
        assert report.table.loc[0, "side"] == "port"
        summary = report.summary
        assert set(summary["note"]) == {INSUFFICIENT_N}
        std_row = summary[summary["stat"] == "std"].iloc[0]
        assert np.isnan(std_row["advance"])
        assert report.notes == []

    def test_duplicate_trials_have_zero_spread(self):
        """Test zero sample std for identical trials."""
        log = make_circle_log(side=TurnSide.STARBOARD)
        metrics = compute_metrics(log)
        report = compare_tests([(log, metrics), (log, metrics)])
        std_row = report.summary[report.summary["stat"] == "std"].iloc[0]
        assert std_row["n"] == 2
        assert std_row["advance"] == 0.0
        assert std_row["tactical_diameter"] == 0.0

    def test_less_variable_starboard_note(self):
        """Test the note when starboard trials are tighter than port trials."""
        star = make_circle_log(side=TurnSide.STARBOARD)
        star_m = compute_metrics(star)
        small = make_circle_log(side=TurnSide.PORT, radius=2.0)
        large = make_circle_log(side=TurnSide.PORT, radius=3.0)
        trials = [
            (star, star_m),
            (star, star_m),
            (small, compute_metrics(small)),
            (large, compute_metrics(large)),
        ]
        report = compare_tests(trials)
        assert report.notes == [LESS_VARIABLE_STARBOARD]
        assert list(report.table["test"]) == [1, 2, 3, 4]

    def test_empty_campaign(self):
        """Test that a campaign needs at least one trial."""
        with pytest.raises(ValueError):
            compare_tests([])

    def test_field_reference(self):
        """Test the field reference table layout."""
        table = field_reference_table()
        assert len(table) == 3
        assert list(table["side"]) == ["starboard", "port", "starboard"]
        assert "tactical_diameter" in table.columns

    def test_text_report(self, circle_log):
        """Test the text rendering."""
        report = compare_tests([(circle_log, compute_metrics(circle_log))])
        text = report.to_text()
        assert text.startswith("Turning circle results\n")
        assert "Per-side mean and spread" in text
        assert text.endswith("\n")
