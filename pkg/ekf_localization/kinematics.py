"""
Constant-velocity 3D kinematic model and its analytic Jacobian.
"""

import numpy as np

from common.constants import STATE_DIM
from common.geo import (
    euler_rate_matrix,
    euler_rate_partials,
    rotation_partials,
    rotation_world_from_body,
    wrap_angle,
)
from ekf_localization.models import FloatArray

POS = slice(0, 3)
ANG = slice(3, 6)
VEL = slice(6, 9)
RATE = slice(9, 12)


def f_kinematic(x: FloatArray, dt: float) -> FloatArray:
    """Propagate pose with body velocities held constant over ``dt``."""
    roll, pitch, yaw = x[3], x[4], x[5]
    out = np.array(x, dtype=float)
    out[POS] = x[POS] + rotation_world_from_body(roll, pitch, yaw) @ x[VEL] * dt
    out[ANG] = wrap_angle(x[ANG] + euler_rate_matrix(roll, pitch) @ x[RATE] * dt)
    return out


def jacobian_F(x: FloatArray, dt: float) -> FloatArray:
    """Analytic Jacobian of :func:`f_kinematic` with respect to the state."""
    roll, pitch, yaw = float(x[3]), float(x[4]), float(x[5])
    vel = x[VEL]
    rates = x[RATE]

    F = np.eye(STATE_DIM)
    d_roll, d_pitch, d_yaw = rotation_partials(roll, pitch, yaw)
    F[POS, 3] = d_roll @ vel * dt
    F[POS, 4] = d_pitch @ vel * dt
    F[POS, 5] = d_yaw @ vel * dt
    F[POS, VEL] = rotation_world_from_body(roll, pitch, yaw) * dt

    e_roll, e_pitch = euler_rate_partials(roll, pitch)
    F[ANG, 3] += e_roll @ rates * dt
    F[ANG, 4] += e_pitch @ rates * dt
    F[ANG, RATE] = euler_rate_matrix(roll, pitch) * dt
    return F
