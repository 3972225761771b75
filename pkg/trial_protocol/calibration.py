"""
Approach-speed calibration: 90 % of the steady speed at 85 % throttle.
"""

from dataclasses import dataclass

import structlog

from common.constants import Messages, ProtocolConstants, VesselDefaults
from common.errors import ConvergenceError
from vessel_dynamics.models import Environment, VesselParams
from vessel_dynamics.simulator import find_steady_speed

logger = structlog.get_logger(__name__)

MAX_BISECTIONS = 60


@dataclass(frozen=True)
class Calibration:
    throttle: float
    approach_speed: float
    reference_speed: float

    @property
    def ratio(self) -> float:
        return self.approach_speed / self.reference_speed


def calibrate_approach_throttle(
    params: VesselParams,
    env: Environment,
    dt: float = VesselDefaults.DEFAULT_DT_S,
) -> Calibration:
    """Bisect the symmetric throttle until its steady speed is within
    ±0.5 % of the target approach speed.
    """
    reference = find_steady_speed(
        ProtocolConstants.CALIBRATION_THROTTLE, params, env, dt
    )
    if reference <= 0.0:
        raise ConvergenceError(Messages.CALIBRATION_FAILED, reference_speed=reference)
    target = ProtocolConstants.APPROACH_SPEED_RATIO * reference
    tolerance = ProtocolConstants.CALIBRATION_TOLERANCE * target

    low, high = params.deadband, ProtocolConstants.CALIBRATION_THROTTLE
    for iteration in range(MAX_BISECTIONS):
        throttle = 0.5 * (low + high)
        speed = find_steady_speed(throttle, params, env, dt)
        if abs(speed - target) <= tolerance:
            logger.info(
                "Approach throttle calibrated",
                throttle=round(throttle, 6),
                approach_speed=round(speed, 6),
                reference_speed=round(reference, 6),
                iterations=iteration + 1,
            )
            return Calibration(
                throttle=throttle, approach_speed=speed, reference_speed=reference
            )
        if speed < target:
            low = throttle
        else:
            high = throttle

    raise ConvergenceError(
        Messages.CALIBRATION_FAILED, target=target, low=low, high=high
    )
