"""
Turning-circle trial protocol: calibration, simulation loop and campaigns.
"""

from trial_protocol.calibration import Calibration, calibrate_approach_throttle
from trial_protocol.config import (
    PipelineConfig,
    TurningTrialConfig,
    load_pipeline_config,
    save_resolved_config,
)
from trial_protocol.replay import replay_log
from trial_protocol.runner import ScriptedRun, TrialRunner, heading_hold, run_scripted
from trial_protocol.turning import (
    TrialOutcome,
    resolve_calibration,
    run_campaign,
    run_turning_circle,
)

__version__ = "1.0.0"
__author__ = "USV Trials Team"

__all__ = [
    "Calibration",
    "PipelineConfig",
    "ScriptedRun",
    "TrialOutcome",
    "TrialRunner",
    "TurningTrialConfig",
    "calibrate_approach_throttle",
    "heading_hold",
    "load_pipeline_config",
    "replay_log",
    "resolve_calibration",
    "run_campaign",
    "run_scripted",
    "run_turning_circle",
    "save_resolved_config",
]
