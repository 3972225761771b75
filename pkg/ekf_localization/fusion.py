"""
Sensor samples to filter measurements.
"""

import itertools
from typing import Iterable, List

import numpy as np

from common.constants import (
    ANGLE_INDICES,
    ANGULAR_VELOCITY_INDICES,
    POSITION_INDICES,
    MeasurementSource,
    Messages,
)
from common.errors import MeasurementRejected
from common.geo import GeoPoint, enu_from_geodetic
from ekf_localization.models import Measurement
from sensor_models.models import GpsFix, ImuReading

# GPS sorts ahead of IMU at equal timestamps
SOURCE_PRIORITY = {MeasurementSource.GPS: 0, MeasurementSource.IMU: 1}


def fuse_gps(fix: GpsFix, origin: GeoPoint) -> Measurement:
    """Position measurement; vertical variance is four times the horizontal."""
    if not fix.valid:
        raise MeasurementRejected(Messages.INVALID_FIX, t=fix.t)
    x, y, z = enu_from_geodetic(origin, fix.point)
    std = fix.horizontal_std
    return Measurement(
        t=fix.t,
        indices=tuple(POSITION_INDICES),
        z=np.array([x, y, z]),
        R=np.diag([std**2, std**2, (2.0 * std) ** 2]),
        is_angle=(False, False, False),
        source=MeasurementSource.GPS,
    )


def fuse_imu(reading: ImuReading) -> Measurement:
    z = np.array(
        [
            reading.roll,
            reading.pitch,
            reading.yaw,
            reading.rate_x,
            reading.rate_y,
            reading.rate_z,
        ]
    )
    if not np.all(np.isfinite(z)):
        raise MeasurementRejected("IMU reading is not finite", t=reading.t)
    angle_var = reading.orientation_std**2
    rate_var = reading.rate_std**2
    return Measurement(
        t=reading.t,
        indices=tuple(ANGLE_INDICES + ANGULAR_VELOCITY_INDICES),
        z=z,
        R=np.diag([angle_var] * 3 + [rate_var] * 3),
        is_angle=(True, True, True, False, False, False),
        source=MeasurementSource.IMU,
    )


def measurement_order_key(m: Measurement) -> tuple:
    return m.t, SOURCE_PRIORITY[m.source]


def merge_measurements(*streams: Iterable[Measurement]) -> List[Measurement]:
    """Merge per-sensor streams into one list ordered by time, GPS first on ties."""
    return sorted(itertools.chain(*streams), key=measurement_order_key)
