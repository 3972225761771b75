"""
Campaign comparison across several turning-circle trials.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from common.constants import TurnSide
from maneuver_metrics.models import METRIC_COLUMNS, CampaignReport, TurningCircleMetrics
from trial_log_io.schema import TrialLog

INSUFFICIENT_N = "insufficient n"
LESS_VARIABLE_STARBOARD = "Starboard trials show less variability than port trials"

# Lake trials of the 0.72 m prototype; display only, never a test oracle
FIELD_REFERENCE: List[Dict[str, Any]] = [
    {
        "test": 1,
        "side": "starboard",
        "advance": 7.03,
        "transfer": 6.08,
        "tactical_diameter": 5.16,
        "speed_loss_pct": 6.89,
        "t90": 11.52,
        "t180": 14.31,
    },
    {
        "test": 2,
        "side": "port",
        "advance": 6.10,
        "transfer": 6.42,
        "tactical_diameter": 4.99,
        "speed_loss_pct": 6.51,
        "t90": 12.27,
        "t180": 16.43,
    },
    {
        "test": 3,
        "side": "starboard",
        "advance": 5.88,
        "transfer": 6.70,
        "tactical_diameter": 6.67,
        "speed_loss_pct": 9.34,
        "t90": 8.74,
        "t180": 15.22,
    },
]


def field_reference_table() -> pd.DataFrame:
    return pd.DataFrame(FIELD_REFERENCE, columns=["test", "side", *METRIC_COLUMNS])


def metrics_table(rows: Sequence[Dict[str, Any]]) -> pd.DataFrame:
    columns = ["test", "side", "seed", "source", *METRIC_COLUMNS]
    return pd.DataFrame(list(rows), columns=columns)


def metrics_row(
    metrics: TurningCircleMetrics, test: int = 1, seed: Optional[int] = None
) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "test": test,
        "side": metrics.side.value,
        "seed": seed,
        "source": metrics.source.value,
    }
    row.update({column: getattr(metrics, column) for column in METRIC_COLUMNS})
    return row


def summarize_by_side(table: pd.DataFrame) -> pd.DataFrame:
    """Mean and sample std (ddof=1) of each metric per side."""
    rows: List[Dict[str, Any]] = []
    for side in (TurnSide.STARBOARD.value, TurnSide.PORT.value):
        group = table[table["side"] == side]
        n = len(group)
        if n == 0:
            continue
        note = INSUFFICIENT_N if n < 2 else ""
        mean_row: Dict[str, Any] = {"side": side, "stat": "mean", "n": n, "note": note}
        std_row: Dict[str, Any] = {"side": side, "stat": "std", "n": n, "note": note}
        for column in METRIC_COLUMNS:
            mean_row[column] = float(group[column].mean())
            std_row[column] = float(group[column].std(ddof=1)) if n >= 2 else np.nan
        rows.extend([mean_row, std_row])
    return pd.DataFrame(rows, columns=["side", "stat", "n", *METRIC_COLUMNS, "note"])


def _side_spread(summary: pd.DataFrame, side: str) -> float:
    row = summary[(summary["side"] == side) & (summary["stat"] == "std")]
    if row.empty:
        return np.nan
    return float(row[METRIC_COLUMNS].to_numpy(dtype=float).mean())


def compare_tests(
    trials: Sequence[Tuple[TrialLog, TurningCircleMetrics]]
) -> CampaignReport:
    if not trials:
        raise ValueError("compare_tests needs at least one trial")

    rows = [
        metrics_row(metrics, test=number, seed=log.metadata.seed)
        for number, (log, metrics) in enumerate(trials, start=1)
    ]
    table = metrics_table(rows)
    summary = summarize_by_side(table)

    notes: List[str] = []
    starboard = _side_spread(summary, TurnSide.STARBOARD.value)
    port = _side_spread(summary, TurnSide.PORT.value)
    if not (np.isnan(starboard) or np.isnan(port)) and starboard < port:
        notes.append(LESS_VARIABLE_STARBOARD)

    return CampaignReport(table=table, summary=summary, notes=notes)
