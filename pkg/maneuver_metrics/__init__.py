"""
Turning-circle metrics, IMO compliance and campaign tables.
"""

from maneuver_metrics.campaign import (
    compare_tests,
    field_reference_table,
    metrics_row,
    metrics_table,
    summarize_by_side,
)
from maneuver_metrics.imo import check_imo, save_compliance
from maneuver_metrics.models import (
    CampaignReport,
    ComplianceReport,
    TurningCircleMetrics,
    write_table,
)
from maneuver_metrics.turning import TurnCrossings, compute_metrics, turning_crossings

__version__ = "1.0.0"
__author__ = "USV Trials Team"

__all__ = [
    "CampaignReport",
    "ComplianceReport",
    "TurnCrossings",
    "TurningCircleMetrics",
    "check_imo",
    "compare_tests",
    "compute_metrics",
    "field_reference_table",
    "metrics_row",
    "metrics_table",
    "save_compliance",
    "summarize_by_side",
    "turning_crossings",
    "write_table",
]
