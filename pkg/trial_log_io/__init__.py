"""
Trial log schema, JSONL persistence, CSV ingestion and SVG plots.
"""

from trial_log_io.ingest import ingest_external
from trial_log_io.jsonl import read_log, write_log
from trial_log_io.schema import (
    CommandRecord,
    EstimateRecord,
    GpsRecord,
    ImuRecord,
    LogRecord,
    TrialLog,
    TrialMetadata,
    TruthRecord,
)

__version__ = "1.0.0"
__author__ = "USV Trials Team"

# Plots live in trial_log_io.plots; they depend on maneuver_metrics.
__all__ = [
    "CommandRecord",
    "EstimateRecord",
    "GpsRecord",
    "ImuRecord",
    "LogRecord",
    "TrialLog",
    "TrialMetadata",
    "TruthRecord",
    "ingest_external",
    "read_log",
    "write_log",
]
