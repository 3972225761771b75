"""
Trial and pipeline configuration.

Precedence: explicit overrides (CLI flags) > JSON config file > defaults.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import structlog
from pydantic import BaseModel, Field, model_validator

from common.constants import (
    CONFIG_FILENAME,
    HeadingSource,
    ProtocolConstants,
    TurnSide,
    VesselDefaults,
)
from common.errors import InputValidationError, LogIOError
from common.geo import EnuPose, GeoPoint
from ekf_localization.models import ProcessConfig
from sensor_models.models import SensorNoiseConfig
from vessel_dynamics.models import Environment, VesselParams

logger = structlog.get_logger(__name__)

SAMPLE_PERIOD_TOLERANCE = 1e-6


class TurningTrialConfig(BaseModel):
    """Turning-circle protocol settings.

    ``max_duration`` bounds the turn phase, measured from the execute instant.
    ``throttle`` and ``approach_speed`` skip calibration when both are given.
    """

    side: TurnSide = TurnSide.STARBOARD
    acceleration_time: float = Field(default=10.0, ge=0.0)
    steady_hold: float = Field(default=60.0, ge=ProtocolConstants.MIN_STEADY_HOLD_S)
    total_heading_change: float = Field(
        default=ProtocolConstants.DEFAULT_HEADING_CHANGE, gt=0.0
    )
    turn_steer: float = Field(
        default=ProtocolConstants.DEFAULT_TURN_STEER, gt=0.0, le=1.0
    )
    max_duration: float = Field(default=300.0, gt=0.0)
    dt: float = Field(
        default=VesselDefaults.DEFAULT_DT_S, gt=0.0, le=VesselDefaults.MAX_DT_S
    )
    start_pose: EnuPose = Field(default_factory=EnuPose)
    heading_source: HeadingSource = HeadingSource.TRUTH
    hold_gain: float = Field(default=ProtocolConstants.HEADING_HOLD_GAIN, gt=0.0)
    throttle: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    approach_speed: Optional[float] = Field(default=None, gt=0.0)

    model_config = {"frozen": True, "extra": "forbid"}


class PipelineConfig(BaseModel):
    """Everything a trial needs, loaded from one JSON file."""

    vessel: VesselParams = Field(default_factory=VesselParams)
    environment: Environment = Field(default_factory=Environment)
    sensors: SensorNoiseConfig = Field(default_factory=SensorNoiseConfig)
    ekf: ProcessConfig = Field(default_factory=ProcessConfig)
    trial: TurningTrialConfig = Field(default_factory=TurningTrialConfig)
    origin: GeoPoint = Field(default_factory=lambda: GeoPoint(lat=53.3781, lon=-1.4660))

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _check_sample_periods(self) -> "PipelineConfig":
        dt = self.trial.dt
        for name, rate in (
            ("gps_rate", self.sensors.gps_rate),
            ("imu_rate", self.sensors.imu_rate),
        ):
            steps = 1.0 / (rate * dt)
            if steps < 1.0 - SAMPLE_PERIOD_TOLERANCE or not math.isclose(
                steps, round(steps), rel_tol=SAMPLE_PERIOD_TOLERANCE
            ):
                raise ValueError(
                    f"sensors.{name} = {rate} Hz needs a period that is a whole "
                    f"multiple of trial.dt = {dt} s"
                )
        return self

    @property
    def seed(self) -> int:
        return self.environment.seed

    def with_overrides(self, overrides: Mapping[str, Any]) -> "PipelineConfig":
        data = self.model_dump(mode="json")
        _apply_overrides(data, overrides)
        return PipelineConfig.model_validate(data)


def _apply_overrides(data: Dict[str, Any], overrides: Mapping[str, Any]) -> None:
    """Set dotted keys such as ``trial.side`` in a nested dict."""
    for dotted, value in overrides.items():
        if value is None:
            continue
        *parents, leaf = dotted.split(".")
        node = data
        for key in parents:
            child = node.setdefault(key, {})
            if not isinstance(child, dict):
                raise InputValidationError("Override path is not a section", key=dotted)
            node = child
        node[leaf] = value


def load_pipeline_config(
    path: Union[str, Path, None] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> PipelineConfig:
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise LogIOError(str(exc), path=path) from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputValidationError(
                "Config file is not valid JSON", path=str(path), line=exc.lineno
            ) from exc
        if not isinstance(data, dict):
            raise InputValidationError(
                "Config file must hold a JSON object", path=str(path)
            )

    _apply_overrides(data, overrides or {})
    cfg = PipelineConfig.model_validate(data)
    logger.debug("Configuration resolved", path=str(path) if path else None)
    return cfg


def save_resolved_config(cfg: PipelineConfig, out_dir: Union[str, Path]) -> Path:
    path = Path(out_dir) / CONFIG_FILENAME
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(cfg.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise LogIOError(str(exc), path=path) from exc
    return path
