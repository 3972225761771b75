"""
IMO turning-ability check: advance < 4.5 L and tactical diameter < 5 L.
"""

from pathlib import Path
from typing import Union

from common.errors import InputValidationError, LogIOError
from maneuver_metrics.models import ComplianceReport, TurningCircleMetrics


def check_imo(metrics: TurningCircleMetrics, length: float) -> ComplianceReport:
    if not length > 0.0:
        raise InputValidationError("Vessel length must be positive", length=length)
    return ComplianceReport.evaluate(metrics.advance, metrics.tactical_diameter, length)


def save_compliance(report: ComplianceReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise LogIOError(str(exc), path=path) from exc
    return path
