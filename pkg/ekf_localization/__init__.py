"""
Twelve-state EKF fusing GPS position and IMU attitude/rates.
"""

from ekf_localization.consistency import (
    average_nees,
    chi2_interval,
    dead_reckoning,
    nees,
    state_error,
    truth_state_vector,
)
from ekf_localization.filter import correct, joseph_update, predict, selection_matrix
from ekf_localization.fusion import fuse_gps, fuse_imu, merge_measurements
from ekf_localization.kinematics import f_kinematic, jacobian_F
from ekf_localization.models import EkfState, Measurement, ProcessConfig, StreamStats
from ekf_localization.stream import EkfStream, process_stream

__version__ = "1.0.0"
__author__ = "USV Trials Team"

__all__ = [
    "EkfState",
    "EkfStream",
    "Measurement",
    "ProcessConfig",
    "StreamStats",
    "average_nees",
    "chi2_interval",
    "correct",
    "dead_reckoning",
    "f_kinematic",
    "fuse_gps",
    "fuse_imu",
    "jacobian_F",
    "joseph_update",
    "merge_measurements",
    "nees",
    "predict",
    "process_stream",
    "selection_matrix",
    "state_error",
    "truth_state_vector",
]
