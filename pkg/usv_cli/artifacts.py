"""
Per-trial and campaign output files.

A trial directory holds the log, the resolved config, the metrics table,
the IMO compliance report and three SVG plots. Failed trials keep the log
and config only.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import structlog

from common.constants import (
    CAMPAIGN_CSV_FILENAME,
    CAMPAIGN_TEXT_FILENAME,
    COMPLIANCE_FILENAME,
    LOG_FILENAME,
    METRICS_CSV_FILENAME,
    HeadingSource,
)
from common.errors import LogIOError, MetricsError
from maneuver_metrics import (
    CampaignReport,
    ComplianceReport,
    TurningCircleMetrics,
    check_imo,
    compare_tests,
    compute_metrics,
    metrics_row,
    metrics_table,
    save_compliance,
    write_table,
)
from trial_log_io.jsonl import write_log
from trial_log_io.plots import render_plots
from trial_log_io.schema import TrialLog
from trial_protocol.config import PipelineConfig, save_resolved_config

logger = structlog.get_logger(__name__)


@dataclass
class TrialArtifacts:
    out_dir: Path
    paths: List[Path] = field(default_factory=list)
    metrics: Optional[TurningCircleMetrics] = None
    estimate_metrics: Optional[TurningCircleMetrics] = None
    compliance: Optional[ComplianceReport] = None


def write_text(text: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise LogIOError(str(exc), path=path) from exc
    return path


def write_partial_artifacts(
    log: Optional[TrialLog], cfg: PipelineConfig, out_dir: Path
) -> TrialArtifacts:
    """Config plus whatever log a failed trial left behind."""
    artifacts = TrialArtifacts(out_dir=out_dir)
    artifacts.paths.append(save_resolved_config(cfg, out_dir))
    if log is not None:
        artifacts.paths.append(write_log(log, out_dir / LOG_FILENAME))
    logger.warning("Partial trial artifacts kept", out_dir=str(out_dir))
    return artifacts


def write_trial_artifacts(
    log: TrialLog, cfg: PipelineConfig, out_dir: Path, plots: bool = True
) -> TrialArtifacts:
    """Write every artifact of a completed trial.

    Truth metrics drive the compliance report; estimate metrics are added
    to the table when the estimated track also completes the turn.
    """
    artifacts = TrialArtifacts(out_dir=out_dir)
    artifacts.paths.append(save_resolved_config(cfg, out_dir))
    artifacts.paths.append(write_log(log, out_dir / LOG_FILENAME))

    metrics = compute_metrics(log, HeadingSource.TRUTH)
    rows = [metrics_row(metrics, seed=log.metadata.seed)]
    if log.has_estimates():
        try:
            estimated = compute_metrics(log, HeadingSource.ESTIMATE)
        except MetricsError as exc:
            logger.warning("Estimate metrics unavailable", error=str(exc))
        else:
            artifacts.estimate_metrics = estimated
            rows.append(metrics_row(estimated, seed=log.metadata.seed))
    artifacts.metrics = metrics
    artifacts.compliance = check_imo(metrics, log.metadata.vessel_length)

    table = metrics_table(rows)
    artifacts.paths.append(write_table(table, out_dir / METRICS_CSV_FILENAME))
    artifacts.paths.append(
        save_compliance(artifacts.compliance, out_dir / COMPLIANCE_FILENAME)
    )
    if plots:
        artifacts.paths.extend(render_plots(log, metrics, out_dir))
    return artifacts


def write_campaign(
    trials: Sequence[Tuple[TrialLog, TurningCircleMetrics]], out_dir: Path
) -> CampaignReport:
    report = compare_tests(trials)
    report.to_csv(out_dir / CAMPAIGN_CSV_FILENAME)
    write_text(report.to_text(), out_dir / CAMPAIGN_TEXT_FILENAME)
    logger.info("Campaign report written", out_dir=str(out_dir), trials=len(trials))
    return report
