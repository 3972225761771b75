"""
Noisy, rate-limited GPS and IMU observations generated from ground truth.
"""

from sensor_models.models import GpsFix, ImuReading, SensorNoiseConfig
from sensor_models.sampling import GyroBias, SensorSchedule, sample_gps, sample_imu

__version__ = "1.0.0"
__author__ = "USV Trials Team"

__all__ = [
    "GpsFix",
    "GyroBias",
    "ImuReading",
    "SensorNoiseConfig",
    "SensorSchedule",
    "sample_gps",
    "sample_imu",
]
