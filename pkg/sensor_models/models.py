"""
Sensor sample types and noise configuration.

Rates and noise densities are conventional values for a low-cost GNSS
receiver and an attitude-fusing IMU; the RTK preset narrows the GPS noise.
"""

from dataclasses import dataclass

from pydantic import BaseModel, Field

from common.constants import SensorDefaults
from common.geo import GeoPoint


@dataclass(frozen=True)
class GpsFix:
    t: float
    point: GeoPoint
    horizontal_std: float
    valid: bool = True

    def __post_init__(self) -> None:
        if not self.horizontal_std > 0.0:
            raise ValueError("horizontal_std must be positive")


@dataclass(frozen=True)
class ImuReading:
    """Fused attitude plus body rates from a single IMU."""

    t: float
    roll: float
    pitch: float
    yaw: float
    rate_x: float
    rate_y: float
    rate_z: float
    orientation_std: float
    rate_std: float

    def __post_init__(self) -> None:
        if not (self.orientation_std > 0.0 and self.rate_std > 0.0):
            raise ValueError("IMU standard deviations must be positive")


class SensorNoiseConfig(BaseModel):
    """Rates and noise of the GPS and IMU (conventional low-cost values)."""

    gps_rate: float = Field(default=SensorDefaults.GPS_RATE_HZ, gt=0.0)
    gps_std: float = Field(default=SensorDefaults.GPS_STD_M, ge=0.0)
    gps_dropout_prob: float = Field(default=0.0, ge=0.0, lt=1.0)
    imu_rate: float = Field(default=SensorDefaults.IMU_RATE_HZ, gt=0.0)
    imu_yaw_std: float = Field(default=SensorDefaults.IMU_YAW_STD_RAD, ge=0.0)
    imu_rate_std: float = Field(default=SensorDefaults.IMU_RATE_STD, ge=0.0)
    gyro_bias_walk_std: float = Field(default=SensorDefaults.GYRO_BIAS_WALK_STD, ge=0.0)

    # Timing imperfections, off by default
    timestamp_jitter_std: float = Field(default=0.0, ge=0.0)
    clock_skew_ppm: float = 0.0

    model_config = {"frozen": True, "extra": "forbid"}

    @classmethod
    def low_cost(cls, **overrides: float) -> "SensorNoiseConfig":
        return cls(gps_std=SensorDefaults.GPS_STD_M, **overrides)

    @classmethod
    def rtk(cls, **overrides: float) -> "SensorNoiseConfig":
        return cls(gps_std=SensorDefaults.GPS_RTK_STD_M, **overrides)

    @classmethod
    def noiseless(cls, **overrides: float) -> "SensorNoiseConfig":
        return cls(
            gps_std=0.0,
            imu_yaw_std=0.0,
            imu_rate_std=0.0,
            gyro_bias_walk_std=0.0,
            **overrides,
        )

    @property
    def reported_gps_std(self) -> float:
        return max(self.gps_std, SensorDefaults.MIN_POSITION_STD_M)

    @property
    def reported_orientation_std(self) -> float:
        return max(self.imu_yaw_std, SensorDefaults.MIN_ANGLE_STD_RAD)

    @property
    def reported_rate_std(self) -> float:
        return max(self.imu_rate_std, SensorDefaults.MIN_ANGLE_STD_RAD)
