"""
Filter consistency tooling: estimation error and normalized estimation
error squared (NEES) against chi-square bounds.
"""

from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.stats import chi2

from common.constants import ANGLE_INDICES, STATE_DIM
from common.errors import InputValidationError
from common.geo import wrap_angle
from ekf_localization.filter import predict
from ekf_localization.models import EkfState, FloatArray, ProcessConfig
from vessel_dynamics.models import Environment, SimState
from vessel_dynamics.simulator import ground_velocity_body


def truth_state_vector(state: SimState, env: Environment) -> FloatArray:
    """12-state vector of a planar truth state; body velocities over ground."""
    u_g, v_g = ground_velocity_body(state, env)
    x = np.zeros(STATE_DIM)
    x[0], x[1], x[5] = state.x, state.y, state.yaw
    x[6], x[7], x[11] = u_g, v_g, state.r
    return x


def state_error(estimate: FloatArray, truth: FloatArray) -> FloatArray:
    err = np.asarray(estimate, dtype=float) - np.asarray(truth, dtype=float)
    err[ANGLE_INDICES] = wrap_angle(err[ANGLE_INDICES])
    return err


def nees(error: FloatArray, P: FloatArray) -> float:
    return float(error @ np.linalg.solve(P, error))


def average_nees(values: Iterable[float]) -> float:
    arr = np.fromiter(values, dtype=float)
    if arr.size == 0:
        raise ValueError("no NEES samples")
    return float(arr.mean())


def chi2_interval(dof: int, alpha: float = 0.05, runs: int = 1) -> Tuple[float, float]:
    """Two-sided ``1 - alpha`` interval for the mean of ``runs`` NEES samples."""
    total = runs * dof
    low = chi2.ppf(alpha / 2.0, total) / runs
    high = chi2.ppf(1.0 - alpha / 2.0, total) / runs
    return float(low), float(high)


def dead_reckoning(
    start: EkfState, times: Sequence[float], cfg: ProcessConfig
) -> List[EkfState]:
    """Predict-only propagation of ``start`` to each of ``times``."""
    states: List[EkfState] = []
    state = start
    for t in times:
        if t < state.t:
            raise InputValidationError(
                "Dead-reckoning times must not go backwards", t=t, filter_t=state.t
            )
        state = predict(state, t - state.t, cfg)
        states.append(state)
    return states
