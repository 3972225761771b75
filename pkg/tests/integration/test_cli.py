"""
Integration tests for the ``usv`` command line.
"""

import json

import pytest

from common.constants import ExitCode
from trial_log_io import read_log, write_log
from usv_cli.main import build_parser, run

TRACK_CSV = (
    "iso_time,lat,lon,heading_deg_compass\n"
    "2024-05-01T10:00:00Z,53.3781,-1.466,0\n"
    "2024-05-01T10:00:01Z,53.37811,-1.466,0\n"
    "2024-05-01T10:00:02Z,53.37812,-1.466,0\n"
)


@pytest.fixture
def config_file(tmp_path, fast_config):
    path = tmp_path / "fast.json"
    path.write_text(fast_config.model_dump_json(indent=2))
    return path


def tree_bytes(root):
    return {
        path.relative_to(root).as_posix(): path.read_bytes()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


class TestParser:
    """Test argument parsing."""

    def test_metrics_requires_length(self):
        """Test that the metrics command refuses to guess the vessel length."""
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["metrics", "--log", "trial.jsonl"])
        assert info.value.code == 2

    def test_seed_and_side_lists(self):
        """Test comma-separated campaign lists."""
        args = build_parser().parse_args(
            ["trial", "--seeds", "1,2,3", "--sides", "port,starboard,port"]
        )
        assert args.seeds == [1, 2, 3]
        assert [side.value for side in args.sides] == ["port", "starboard", "port"]

    def test_bad_side_list(self):
        """Test that an unknown side is a usage error."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["trial", "--sides", "left"])


class TestTrialCommand:
    """Test simulated trials end to end."""

    def test_trial_is_deterministic(self, tmp_path, config_file):
        """Test that the same seed and config give byte-identical artifacts."""
        first, second = tmp_path / "a", tmp_path / "b"
        for out in (first, second):
            argv = ["trial", "--config", str(config_file), "--seed", "4"]
            code = run([*argv, "--out", str(out)])
            assert code == ExitCode.OK
        files = tree_bytes(first)
        assert set(files) == {
            "config.resolved.json",
            "trial.jsonl",
            "metrics.csv",
            "compliance.json",
            "trajectory.svg",
            "heading.svg",
            "speed.svg",
        }
        assert files == tree_bytes(second)

        compliance = json.loads((first / "compliance.json").read_text())
        assert compliance["vessel_length"] == pytest.approx(0.72)
        assert read_log(first / "trial.jsonl").metadata.seed == 4

    def test_campaign_layout(self, tmp_path, config_file, capsys):
        """Test one directory per seed plus the campaign table."""
        code = run(
            [
                "trial",
                "--config",
                str(config_file),
                "--seeds",
                "1,2,3",
                "--no-plots",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == ExitCode.OK
        for number, seed in enumerate((1, 2, 3), start=1):
            trial_dir = tmp_path / f"test{number}-starboard-seed{seed}"
            assert (trial_dir / "trial.jsonl").is_file()
            assert not (trial_dir / "trajectory.svg").exists()
        assert (tmp_path / "campaign.csv").is_file()
        assert "Per-side mean and spread" in (tmp_path / "campaign.txt").read_text()
        assert "Turning circle results" in capsys.readouterr().out

    def test_incomplete_trial_keeps_partial_artifacts(self, tmp_path, config_file):
        """Test exit code 3 and the kept log of a turn cut short."""
        cfg = json.loads(config_file.read_text())
        cfg["trial"]["max_duration"] = 2.0
        config_file.write_text(json.dumps(cfg))
        code = run(["trial", "--config", str(config_file), "--out", str(tmp_path)])
        assert code == ExitCode.PROTOCOL
        assert (tmp_path / "trial.jsonl").is_file()
        assert (tmp_path / "config.resolved.json").is_file()
        assert not (tmp_path / "metrics.csv").exists()

    def test_invalid_config_value(self, tmp_path):
        """Test that a config violating the protocol is a validation failure."""
        path = tmp_path / "bad.json"
        path.write_text('{"trial": {"steady_hold": 30}}')
        code = run(["trial", "--config", str(path), "--out", str(tmp_path)])
        assert code == ExitCode.VALIDATION

    def test_misaligned_sensor_rate(self, tmp_path):
        """Test that an IMU period shorter than the step is a validation failure."""
        path = tmp_path / "bad.json"
        path.write_text('{"sensors": {"imu_rate": 100.0}}')
        assert run(["calibrate", "--config", str(path)]) == ExitCode.VALIDATION

    def test_metrics_file(self, tmp_path, config_file):
        """Test that Prometheus metrics are written on request."""
        metrics_path = tmp_path / "usv.prom"
        run(
            [
                "calibrate",
                "--config",
                str(config_file),
                "--metrics-file",
                str(metrics_path),
            ]
        )
        text = metrics_path.read_text()
        assert 'usv_commands_total{command="calibrate",status="ok"}' in text


class TestLogCommands:
    """Test commands that work on existing logs."""

    def test_metrics_on_circle(self, tmp_path, circle_log, capsys):
        """Test metrics and IMO verdict for an analytic circle."""
        path = write_log(circle_log, tmp_path / "trial.jsonl")
        out = tmp_path / "out"
        argv = ["metrics", "--log", str(path), "--length", "0.72"]
        code = run([*argv, "--out", str(out)])
        assert code == ExitCode.OK
        printed = capsys.readouterr().out
        assert "IMO check (L = 0.72 m)" in printed
        assert (out / "metrics.csv").is_file()
        assert json.loads((out / "compliance.json").read_text())["verdict"] == "N, Y"

    def test_bad_log_is_io_error(self, tmp_path):
        """Test that a malformed log exits with the I/O code."""
        path = tmp_path / "trial.jsonl"
        path.write_text('{"schema": "1"}\n{"t": "soon"}\n')
        code = run(["metrics", "--log", str(path), "--length", "0.72"])
        assert code == ExitCode.IO

    def test_undecodable_log_is_io_error(self, tmp_path):
        """Test that a log with invalid UTF-8 exits with the I/O code."""
        path = tmp_path / "trial.jsonl"
        header = {"schema": "1", "metadata": {"vessel_length": 0.72, "side": "port"}}
        path.write_bytes(json.dumps(header).encode() + b"\n\xff\xfe\n")
        code = run(["metrics", "--log", str(path), "--length", "0.72"])
        assert code == ExitCode.IO

    def test_ekf_needs_sensor_data(self, tmp_path, circle_log):
        """Test that replaying a truth-only log is a validation failure."""
        path = write_log(circle_log, tmp_path / "trial.jsonl")
        assert run(["ekf", "--log", str(path)]) == ExitCode.VALIDATION

    def test_ekf_replay_writes_log(self, tmp_path, config_file, capsys):
        """Test that the ekf command writes an augmented log next to the input."""
        config = ["--config", str(config_file)]
        run(["trial", *config, "--out", str(tmp_path), "--no-plots"])
        capsys.readouterr()
        code = run(["ekf", *config, "--log", str(tmp_path / "trial.jsonl")])
        assert code == ExitCode.OK
        assert "fused=" in capsys.readouterr().out
        replayed = read_log(tmp_path / "trial.ekf.jsonl")
        assert replayed.has_estimates()

    def test_report_reference(self, capsys):
        """Test the field reference table."""
        assert run(["report", "--reference"]) == ExitCode.OK
        assert "Field reference" in capsys.readouterr().out

    def test_report_needs_input(self):
        """Test that an empty report is refused."""
        assert run(["report"]) == ExitCode.VALIDATION

    def test_ingest(self, tmp_path):
        """Test CSV ingestion to a truth-only log."""
        csv = tmp_path / "track.csv"
        csv.write_text(TRACK_CSV)
        out = tmp_path / "out"
        code = run(
            [
                "ingest",
                "--csv",
                str(csv),
                "--origin-lat",
                "53.3781",
                "--origin-lon",
                "-1.466",
                "--heading-convention",
                "compass",
                "--datum",
                "WGS84",
                "--length",
                "0.72",
                "--out",
                str(out),
            ]
        )
        assert code == ExitCode.OK
        log = read_log(out / "trial.jsonl")
        assert len(log.records) == 3
        assert log.metadata.source == "external"

    def test_ingest_without_convention(self, tmp_path):
        """Test that ingestion refuses an undeclared heading convention."""
        csv = tmp_path / "track.csv"
        csv.write_text(TRACK_CSV)
        code = run(
            [
                "ingest",
                "--csv",
                str(csv),
                "--origin-lat",
                "53.3781",
                "--origin-lon",
                "-1.466",
                "--length",
                "0.72",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == ExitCode.VALIDATION
