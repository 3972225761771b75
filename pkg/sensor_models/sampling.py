"""
Noisy GPS and IMU sample generators driven by an explicit RNG.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from common.geo import GeoPoint, geodetic_from_enu, wrap_angle
from sensor_models.models import GpsFix, ImuReading, SensorNoiseConfig
from vessel_dynamics.models import SimState


@dataclass
class GyroBias:
    """Random-walk biases on the IMU heading output and yaw-rate gyro."""

    heading: float = 0.0
    rate: float = 0.0
    t: Optional[float] = None

    def advance(self, t: float, walk_std: float, rng: np.random.Generator) -> None:
        if self.t is not None and walk_std > 0.0:
            elapsed = t - self.t
            if elapsed > 0.0:
                scale = walk_std * math.sqrt(elapsed)
                self.heading += float(rng.normal(0.0, scale))
                self.rate += float(rng.normal(0.0, scale))
        self.t = t


class SensorSchedule:
    """Sample instants at exact multiples of ``1 / rate`` on the simulation clock.

    Reported stamps may carry clock skew (ppm) and Gaussian jitter.
    """

    def __init__(
        self,
        rate: float,
        jitter_std: float = 0.0,
        clock_skew_ppm: float = 0.0,
        tolerance: float = 1e-9,
    ) -> None:
        self.rate = rate
        self.jitter_std = jitter_std
        self.clock_skew_ppm = clock_skew_ppm
        self.tolerance = tolerance
        self._next = 0

    def next_nominal(self) -> float:
        return self._next / self.rate

    def due(self, t: float) -> Optional[float]:
        """Nominal instant of the sample due at simulation time ``t``, if any."""
        nominal = self.next_nominal()
        if t + self.tolerance < nominal:
            return None
        self._next = int(math.floor(t * self.rate + self.tolerance)) + 1
        return nominal

    def stamp(self, nominal: float, rng: Optional[np.random.Generator] = None) -> float:
        stamped = nominal * (1.0 + self.clock_skew_ppm * 1e-6)
        if self.jitter_std > 0.0 and rng is not None:
            stamped += float(rng.normal(0.0, self.jitter_std))
        return stamped


def sample_gps(
    truth: SimState,
    origin: GeoPoint,
    cfg: SensorNoiseConfig,
    rng: np.random.Generator,
    stamp: Optional[float] = None,
) -> Optional[GpsFix]:
    """GPS fix of the truth position, or ``None`` when the sample drops out.

    Horizontal noise has std ``gps_std`` per axis, vertical noise twice that.
    """
    if cfg.gps_dropout_prob > 0.0 and rng.random() < cfg.gps_dropout_prob:
        return None

    x, y, z = truth.x, truth.y, 0.0
    if cfg.gps_std > 0.0:
        dx, dy = rng.normal(0.0, cfg.gps_std, size=2)
        dz = rng.normal(0.0, 2.0 * cfg.gps_std)
        x, y, z = x + float(dx), y + float(dy), z + float(dz)

    return GpsFix(
        t=truth.t if stamp is None else stamp,
        point=geodetic_from_enu(origin, x, y, z),
        horizontal_std=cfg.reported_gps_std,
    )


def sample_imu(
    truth: SimState,
    bias: GyroBias,
    cfg: SensorNoiseConfig,
    rng: np.random.Generator,
    stamp: Optional[float] = None,
) -> ImuReading:
    """IMU attitude and rates; roll and pitch are pure noise around level."""
    bias.advance(truth.t, cfg.gyro_bias_walk_std, rng)

    yaw = truth.yaw + bias.heading
    roll = pitch = 0.0
    if cfg.imu_yaw_std > 0.0:
        roll, pitch, dyaw = (float(n) for n in rng.normal(0.0, cfg.imu_yaw_std, size=3))
        yaw += dyaw

    rate_x = rate_y = 0.0
    rate_z = truth.r + bias.rate
    if cfg.imu_rate_std > 0.0:
        nx, ny, nz = (float(n) for n in rng.normal(0.0, cfg.imu_rate_std, size=3))
        rate_x, rate_y, rate_z = nx, ny, rate_z + nz

    return ImuReading(
        t=truth.t if stamp is None else stamp,
        roll=wrap_angle(roll),
        pitch=pitch,
        yaw=wrap_angle(yaw),
        rate_x=rate_x,
        rate_y=rate_y,
        rate_z=rate_z,
        orientation_std=cfg.reported_orientation_std,
        rate_std=cfg.reported_rate_std,
    )
