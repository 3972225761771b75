"""
Shared fixtures: analytic turning-circle logs and a fast simulation config.
"""

import math
from typing import Callable, Optional

import numpy as np
import pytest

from common.constants import TurnSide
from common.geo import GeoPoint, wrap_angle
from trial_log_io.schema import (
    EstimateRecord,
    LogRecord,
    TrialLog,
    TrialMetadata,
    TruthRecord,
)
from trial_protocol.calibration import Calibration, calibrate_approach_throttle
from trial_protocol.config import PipelineConfig
from vessel_dynamics.models import Environment, VesselParams

CircleLogFactory = Callable[..., TrialLog]


def make_circle_log(
    radius: float = 2.0,
    omega: float = 0.2,
    rate_hz: float = 10.0,
    side: TurnSide = TurnSide.PORT,
    approach_time: float = 5.0,
    turn_speed: Optional[float] = None,
    approach_speed: Optional[float] = None,
    yaw0: float = 0.0,
    origin_xy: tuple = (0.0, 0.0),
    with_estimates: bool = False,
) -> TrialLog:
    """Straight approach along ``yaw0`` then an exact circle entered tangentially.

    The turn runs to 540 degrees plus a short margin.
    """
    dt = 1.0 / rate_hz
    speed = radius * omega
    sign = side.sign
    cos0, sin0 = math.cos(yaw0), math.sin(yaw0)
    x_e = origin_xy[0] + speed * approach_time * cos0
    y_e = origin_xy[1] + speed * approach_time * sin0
    turn_time = 3.0 * math.pi / omega + 1.0

    records = []
    n_approach = int(round(approach_time * rate_hz))
    n_total = n_approach + int(math.ceil(turn_time * rate_hz)) + 1
    for k in range(n_total):
        t = k * dt
        if k <= n_approach:
            travelled = speed * t
            x = origin_xy[0] + travelled * cos0
            y = origin_xy[1] + travelled * sin0
            yaw = yaw0
            v_now = speed
        else:
            tau = t - n_approach * dt
            angle = omega * tau
            along = radius * math.sin(angle)
            lateral = radius * (1.0 - math.cos(angle)) * sign
            x = x_e + along * cos0 - lateral * sin0
            y = y_e + along * sin0 + lateral * cos0
            yaw = yaw0 + sign * angle
            v_now = speed if turn_speed is None else turn_speed
        truth = TruthRecord(x=x, y=y, yaw=wrap_angle(yaw), speed=v_now)
        est = None
        if with_estimates:
            state = np.zeros(12)
            state[0], state[1], state[5], state[6] = x, y, wrap_angle(yaw), v_now
            est = EstimateRecord.from_state(state, np.eye(12) * 0.01)
        records.append(LogRecord(t=t, truth=truth, est=est))

    metadata = TrialMetadata(
        vessel_length=0.72,
        side=side,
        execute_index=n_approach,
        approach_speed=speed if approach_speed is None else approach_speed,
        seed=0,
        origin=GeoPoint(lat=53.3781, lon=-1.466),
    )
    return TrialLog(metadata=metadata, records=records)


@pytest.fixture
def circle_log_factory() -> CircleLogFactory:
    return make_circle_log


@pytest.fixture
def circle_log() -> TrialLog:
    return make_circle_log()


@pytest.fixture(scope="session")
def calibration() -> Calibration:
    return calibrate_approach_throttle(VesselParams(), Environment(), dt=0.05)


@pytest.fixture(scope="session")
def fast_config(calibration: Calibration) -> PipelineConfig:
    """Default vessel with a coarse step, pre-calibrated throttle, 20 Hz IMU."""
    return PipelineConfig.model_validate(
        {
            "sensors": {"imu_rate": 20.0},
            "trial": {
                "acceleration_time": 0.0,
                "steady_hold": 60.0,
                "dt": 0.05,
                "throttle": calibration.throttle,
                "approach_speed": calibration.approach_speed,
            },
        }
    )
