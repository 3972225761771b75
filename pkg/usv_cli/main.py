"""
Command-line entry point for USV turning-circle trials.

Subcommands: calibrate, trial, ekf, metrics, report, ingest.
Exit codes: 0 success, 2 validation, 3 protocol failure, 4 I/O.
"""

import argparse
import sys
import time
import uuid
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import structlog
from prometheus_client import REGISTRY, Counter, Histogram, write_to_textfile
from pydantic import ValidationError

from common.constants import (
    COMPLIANCE_FILENAME,
    LOG_FILENAME,
    METRICS_CSV_FILENAME,
    Datum,
    ExitCode,
    HeadingConvention,
    HeadingSource,
    TurnSide,
)
from common.errors import InputValidationError, MetricsError, UsvError
from common.geo import GeoPoint
from common.logging import configure_logging
from common.settings import UsvSettings, get_settings
from maneuver_metrics import (
    TurningCircleMetrics,
    check_imo,
    compare_tests,
    compute_metrics,
    field_reference_table,
    metrics_row,
    metrics_table,
    save_compliance,
    write_table,
)
from trial_log_io import ingest_external, read_log, write_log
from trial_log_io.schema import TrialLog
from trial_protocol import (
    PipelineConfig,
    calibrate_approach_throttle,
    load_pipeline_config,
    replay_log,
    run_campaign,
    save_resolved_config,
)
from usv_cli.artifacts import (
    write_campaign,
    write_partial_artifacts,
    write_trial_artifacts,
)

logger = structlog.get_logger(__name__)

# Metrics
COMMAND_COUNT = Counter("usv_commands_total", "CLI commands run", ["command", "status"])
COMMAND_DURATION = Histogram(
    "usv_command_duration_seconds", "CLI command duration", ["command"]
)


def _format_metrics(metrics: Sequence[TurningCircleMetrics]) -> str:
    table = metrics_table([metrics_row(m, test=i) for i, m in enumerate(metrics, 1)])
    table = table.drop(columns=["seed"])
    return table.to_string(index=False, float_format=lambda v: f"{v:.2f}")


def _format_compliance(metrics: TurningCircleMetrics, length: float) -> str:
    report = check_imo(metrics, length)
    return (
        f"IMO check (L = {length:.2f} m): "
        f"advance {report.advance:.2f} < {report.advance_limit:.2f} m, "
        f"tactical diameter {report.tactical_diameter:.2f} < {report.td_limit:.2f} m"
        f" -> TD, A: {report.verdict}"
    )


def _load_config(args: argparse.Namespace, settings: UsvSettings) -> PipelineConfig:
    overrides: Dict[str, Any] = {
        "environment.seed": getattr(args, "seed", None),
        "trial.side": getattr(args, "side", None),
    }
    return load_pipeline_config(args.config or settings.config_path, overrides)


def _parse_seeds(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid seed list: {text!r}") from exc


def _parse_sides(text: str) -> List[TurnSide]:
    try:
        return [TurnSide(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid side list: {text!r}") from exc


def cmd_calibrate(args: argparse.Namespace, settings: UsvSettings) -> int:
    """Print the calibrated approach throttle and speed."""
    cfg = _load_config(args, settings)
    calibration = calibrate_approach_throttle(cfg.vessel, cfg.environment, cfg.trial.dt)
    print(f"throttle         {calibration.throttle:.4f}")
    print(f"approach_speed   {calibration.approach_speed:.4f} m/s")
    print(f"reference_speed  {calibration.reference_speed:.4f} m/s")
    print(f"ratio            {calibration.ratio:.4f}")
    if args.out:
        calibrated = cfg.with_overrides(
            {
                "trial.throttle": calibration.throttle,
                "trial.approach_speed": calibration.approach_speed,
            }
        )
        path = save_resolved_config(calibrated, args.out)
        print(f"calibrated config written to {path}")
    return ExitCode.OK


def _trial_dir(
    out_dir: Path, number: int, side: TurnSide, seed: int, single: bool
) -> Path:
    if single:
        return out_dir
    return out_dir / f"test{number}-{side.value}-seed{seed}"


def cmd_trial(args: argparse.Namespace, settings: UsvSettings) -> int:
    """Run one turning circle, or a campaign when several seeds are given."""
    cfg = _load_config(args, settings)
    seeds = args.seeds or [cfg.seed]
    sides = args.sides or [cfg.trial.side]
    out_dir = Path(args.out or settings.output_dir)
    workers = args.workers or settings.workers

    outcomes = run_campaign(cfg, seeds, sides, workers)
    single = len(outcomes) == 1
    exit_code = ExitCode.OK
    finished: List[Tuple[TrialLog, TurningCircleMetrics]] = []
    for number, outcome in enumerate(outcomes, start=1):
        trial_cfg = cfg.with_overrides(
            {"environment.seed": outcome.seed, "trial.side": outcome.side.value}
        )
        trial_dir = _trial_dir(out_dir, number, outcome.side, outcome.seed, single)
        label = f"test {number} ({outcome.side.value}, seed {outcome.seed})"
        if outcome.error is not None:
            write_partial_artifacts(outcome.log, trial_cfg, trial_dir)
            print(f"{label}: FAILED: {outcome.error}", file=sys.stderr)
            exit_code = ExitCode(max(exit_code, outcome.exit_code))
            continue
        assert outcome.log is not None
        try:
            artifacts = write_trial_artifacts(
                outcome.log, trial_cfg, trial_dir, plots=not args.no_plots
            )
        except MetricsError as exc:
            print(f"{label}: FAILED: {exc}", file=sys.stderr)
            exit_code = ExitCode(max(exit_code, exc.exit_code))
            continue
        assert artifacts.metrics is not None
        finished.append((outcome.log, artifacts.metrics))
        print(f"{label}: written to {trial_dir}")
        print(_format_metrics([artifacts.metrics]))
        print(_format_compliance(artifacts.metrics, outcome.log.metadata.vessel_length))

    if not single and finished:
        report = write_campaign(finished, out_dir)
        print()
        print(report.to_text(), end="")
    return exit_code


def cmd_ekf(args: argparse.Namespace, settings: UsvSettings) -> int:
    """Refill a log's estimates from its recorded GPS and IMU samples."""
    cfg = _load_config(args, settings)
    log = read_log(args.log)
    replayed, stats = replay_log(log, cfg.ekf, cfg.origin)
    if args.out:
        path = Path(args.out) / LOG_FILENAME
    else:
        path = Path(args.log).with_suffix(".ekf.jsonl")
    write_log(replayed, path)
    print(
        f"fused={stats.fused} stale={stats.stale} gated={stats.gated} "
        f"dropped={stats.dropped} late={stats.late}"
    )
    print(f"augmented log written to {path}")
    return ExitCode.OK


def cmd_metrics(args: argparse.Namespace, settings: UsvSettings) -> int:
    """Print the turning-circle metrics and IMO verdict of one log."""
    log = read_log(args.log)
    metrics = compute_metrics(log, HeadingSource(args.source))
    print(_format_metrics([metrics]))
    print(_format_compliance(metrics, args.length))
    if args.out:
        out_dir = Path(args.out)
        row = metrics_row(metrics, seed=log.metadata.seed)
        write_table(metrics_table([row]), out_dir / METRICS_CSV_FILENAME)
        save_compliance(check_imo(metrics, args.length), out_dir / COMPLIANCE_FILENAME)
    return ExitCode.OK


def cmd_report(args: argparse.Namespace, settings: UsvSettings) -> int:
    """Campaign table from existing logs, and optionally the field reference."""
    if not args.logs and not args.reference:
        raise InputValidationError("Nothing to report: pass --logs or --reference")
    if args.reference:
        print("Field reference (display only)")
        print(
            field_reference_table().to_string(
                index=False, float_format=lambda v: f"{v:.2f}"
            )
        )
        print()
    if not args.logs:
        return ExitCode.OK

    source = HeadingSource(args.source)
    trials = []
    for path in args.logs:
        log = read_log(path)
        trials.append((log, compute_metrics(log, source)))
    if args.out:
        report = write_campaign(trials, Path(args.out))
    else:
        report = compare_tests(trials)
    print(report.to_text(), end="")
    return ExitCode.OK


def cmd_ingest(args: argparse.Namespace, settings: UsvSettings) -> int:
    """Convert an external CSV track into a truth-only trial log."""
    origin = GeoPoint(lat=args.origin_lat, lon=args.origin_lon, alt=args.origin_alt)
    log = ingest_external(
        args.csv,
        origin=origin,
        heading_convention=args.heading_convention,
        datum=args.datum,
        side=args.side or TurnSide.STARBOARD,
        vessel_length=args.length,
        execute_time=args.execute_time,
        approach_speed=args.approach_speed,
    )
    out_dir = Path(args.out or settings.output_dir)
    path = write_log(log, out_dir / LOG_FILENAME)
    print(f"{len(log.records)} records written to {path}")
    return ExitCode.OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, UsvSettings], int]] = {
    "calibrate": cmd_calibrate,
    "trial": cmd_trial,
    "ekf": cmd_ekf,
    "metrics": cmd_metrics,
    "report": cmd_report,
    "ingest": cmd_ingest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Pipeline config JSON file")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--seed", type=int, help="Random seed (overrides config)")
    common.add_argument(
        "--side",
        type=TurnSide,
        choices=list(TurnSide),
        metavar="{port,starboard}",
        help="Turn side",
    )
    common.add_argument("--log-level", help="Log level (default from USV_LOG_LEVEL)")
    common.add_argument(
        "--log-format", choices=["json", "console"], help="Log renderer"
    )
    common.add_argument("--metrics-file", help="Write Prometheus metrics to this file")

    parser = argparse.ArgumentParser(
        prog="usv", description="USV turning-circle trials and EKF localization"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("calibrate", parents=[common], help="Calibrate approach throttle")

    trial = sub.add_parser("trial", parents=[common], help="Run turning-circle trials")
    trial.add_argument("--seeds", type=_parse_seeds, help="Comma-separated seeds")
    trial.add_argument(
        "--sides", type=_parse_sides, help="Comma-separated sides, one per seed"
    )
    trial.add_argument("--workers", type=int, help="Parallel trial processes")
    trial.add_argument("--no-plots", action="store_true", help="Skip SVG plots")

    ekf = sub.add_parser("ekf", parents=[common], help="Replay a log through the EKF")
    ekf.add_argument("--log", required=True, help="Input trial log (JSONL)")

    metrics = sub.add_parser("metrics", parents=[common], help="Metrics of one log")
    metrics.add_argument("--log", required=True, help="Trial log (JSONL)")
    metrics.add_argument(
        "--length", type=float, required=True, help="Vessel length in metres"
    )
    metrics.add_argument(
        "--source",
        choices=[source.value for source in HeadingSource],
        default=HeadingSource.TRUTH.value,
    )

    report = sub.add_parser("report", parents=[common], help="Campaign report")
    report.add_argument("--logs", nargs="*", default=[], help="Trial logs (JSONL)")
    report.add_argument(
        "--reference", action="store_true", help="Show the field reference table"
    )
    report.add_argument(
        "--source",
        choices=[source.value for source in HeadingSource],
        default=HeadingSource.TRUTH.value,
    )

    ingest = sub.add_parser("ingest", parents=[common], help="Import an external CSV")
    ingest.add_argument("--csv", required=True, help="CSV with t, lat, lon, heading")
    ingest.add_argument("--origin-lat", type=float, required=True)
    ingest.add_argument("--origin-lon", type=float, required=True)
    ingest.add_argument("--origin-alt", type=float, default=0.0)
    ingest.add_argument(
        "--heading-convention",
        type=HeadingConvention,
        choices=list(HeadingConvention),
        metavar="{compass,enu}",
    )
    ingest.add_argument("--datum", type=Datum, choices=list(Datum), metavar="{WGS84}")
    ingest.add_argument(
        "--length", type=float, required=True, help="Vessel length in metres"
    )
    ingest.add_argument("--execute-time", type=float, help="Seconds from first row")
    ingest.add_argument("--approach-speed", type=float, help="Approach speed, m/s")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the subcommand and return its exit code."""
    settings = get_settings()
    args = build_parser().parse_args(argv)
    configure_logging(
        args.log_level or settings.log_level, args.log_format or settings.log_format
    )
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(
        run_id=str(uuid.uuid4()), command=args.command, seed=args.seed
    )

    started = time.perf_counter()
    status = "ok"
    try:
        exit_code = int(COMMANDS[args.command](args, settings))
    except UsvError as exc:
        logger.error("Command failed", error=exc.message, **exc.context)
        print(f"error: {exc}", file=sys.stderr)
        exit_code = int(exc.exit_code)
    except ValidationError as exc:
        logger.error("Invalid configuration", errors=exc.error_count())
        print(f"error: invalid configuration\n{exc}", file=sys.stderr)
        exit_code = int(ExitCode.VALIDATION)
    except OSError as exc:
        logger.error("I/O failure", error=str(exc), path=exc.filename)
        print(f"error: {exc}", file=sys.stderr)
        exit_code = int(ExitCode.IO)

    if exit_code != ExitCode.OK:
        status = "failed"
    COMMAND_COUNT.labels(command=args.command, status=status).inc()
    COMMAND_DURATION.labels(command=args.command).observe(time.perf_counter() - started)
    if args.metrics_file:
        write_to_textfile(args.metrics_file, REGISTRY)
    return exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
