"""
EKF predict and correct steps.

Both steps are pure: they take an :class:`EkfState` and return a new one.
The covariance update is always the Joseph form; the plain ``(I - KH) P``
shortcut is never used.
"""

from typing import Optional

import numpy as np
from scipy.stats import chi2

from common.constants import STATE_DIM, Messages
from common.errors import (
    GateRejectedError,
    InputValidationError,
    NumericalError,
    StaleMeasurementError,
)
from common.geo import wrap_angle
from ekf_localization.kinematics import ANG, f_kinematic, jacobian_F
from ekf_localization.models import EkfState, FloatArray, Measurement, ProcessConfig

MAX_INNOVATION_CONDITION = 1e12


def symmetrize(P: FloatArray) -> FloatArray:
    return 0.5 * (P + P.T)


def selection_matrix(indices: tuple) -> FloatArray:
    """Observation matrix picking ``indices`` out of the state vector."""
    H = np.zeros((len(indices), STATE_DIM))
    H[np.arange(len(indices)), list(indices)] = 1.0
    return H


def joseph_update(
    P: FloatArray, K: FloatArray, H: FloatArray, R: FloatArray
) -> FloatArray:
    """``(I - K H) P (I - K H)^T + K R K^T``, symmetric for any gain ``K``."""
    A = np.eye(P.shape[0]) - K @ H
    return symmetrize(A @ P @ A.T + K @ R @ K.T)


def gate_threshold(sigma: float, dof: int) -> float:
    """Chi-square bound with the same tail mass as a ``sigma`` band in 1-D."""
    return float(chi2.ppf(chi2.cdf(sigma**2, 1), dof))


def predict(s: EkfState, dt: float, cfg: ProcessConfig) -> EkfState:
    """Propagate mean and covariance by ``dt`` seconds (``Q`` scaled by dt)."""
    if dt < 0.0:
        raise InputValidationError("Prediction step must be non-negative", dt=dt)
    if dt == 0.0:
        return s

    F = jacobian_F(s.x, dt)
    x = f_kinematic(s.x, dt)
    P = symmetrize(F @ s.P @ F.T + cfg.Q * dt)
    return EkfState(t=s.t + dt, x=x, P=P)


def innovation(s: EkfState, m: Measurement) -> FloatArray:
    y = m.z - s.x[list(m.indices)]
    for k, is_angle in enumerate(m.is_angle):
        if is_angle:
            y[k] = wrap_angle(float(y[k]))
    return y


def correct(
    s: EkfState,
    m: Measurement,
    gate_sigma: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> EkfState:
    """Fuse one measurement into the state.

    ``tolerance`` bounds how far ``m.t`` may lie behind the filter time;
    measurements within it are applied at the filter time. ``gate_sigma``
    enables the Mahalanobis innovation gate.
    """
    if tolerance is not None:
        if m.t < s.t - tolerance:
            raise StaleMeasurementError(
                Messages.STALE_MEASUREMENT, t=m.t, filter_t=s.t, source=m.source.value
            )
        if m.t > s.t + tolerance:
            raise InputValidationError(
                "Measurement is ahead of the filter; predict first", t=m.t, filter_t=s.t
            )

    H = selection_matrix(m.indices)
    y = innovation(s, m)
    S = symmetrize(H @ s.P @ H.T + m.R)

    if not np.all(np.isfinite(S)) or np.linalg.cond(S) > MAX_INNOVATION_CONDITION:
        raise NumericalError(Messages.SINGULAR_INNOVATION, source=m.source.value)
    try:
        # K = P H^T S^-1, solved rather than inverted
        K = np.linalg.solve(S, H @ s.P).T
        if gate_sigma is not None:
            d2 = float(y @ np.linalg.solve(S, y))
            limit = gate_threshold(gate_sigma, len(m.indices))
            if d2 > limit:
                raise GateRejectedError(
                    Messages.GATE_REJECTED, source=m.source.value, d2=d2, limit=limit
                )
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            Messages.SINGULAR_INNOVATION, source=m.source.value
        ) from exc

    x = s.x + K @ y
    x[ANG] = wrap_angle(x[ANG])
    P = joseph_update(s.P, K, H, m.R)
    return EkfState(t=s.t, x=x, P=P)
