"""
3-DOF (surge, sway, yaw) differential-thrust vessel simulator.

Equations of motion, body velocities relative to the water:

    m (du/dt - v r) = T_L + T_R - (d1 u + d2 u|u|) + F_x
    m (dv/dt + u r) = -(s1 v + s2 v|v|) + F_y
    I_z dr/dt       = (T_R - T_L) b - (n1 r + n2 r|r|) + N

World position integrates the body velocity rotated by yaw plus the
uniform current. Integration is fixed-step RK4.
"""

import math
from collections import deque
from dataclasses import replace
from typing import Callable, Deque, List, Optional, Tuple

import numpy as np
import structlog

from common.constants import Messages, ProtocolConstants, VesselDefaults
from common.errors import ConvergenceError, InputValidationError
from common.geo import wrap_angle
from vessel_dynamics.models import Environment, SimState, ThrusterCommand, VesselParams

logger = structlog.get_logger(__name__)

CommandFn = Callable[[float, SimState], ThrusterCommand]
Derivative = Tuple[float, float, float, float, float, float]


def thrust_from_command(cmd: float, params: VesselParams) -> float:
    """Thrust in newtons for a normalized command.

    Zero inside the deadband, then ``max_thrust * frac**thrust_exponent``
    with ``frac`` rescaled over the live band. Reverse thrust is scaled by
    ``reverse_thrust_ratio``.
    """
    cmd = max(-1.0, min(1.0, float(cmd)))
    magnitude = abs(cmd)
    if magnitude <= params.deadband:
        return 0.0
    frac = (magnitude - params.deadband) / (1.0 - params.deadband)
    thrust = params.max_thrust * frac**params.thrust_exponent
    if cmd < 0.0:
        return -thrust * params.reverse_thrust_ratio
    return thrust


def mix_differential(throttle: float, steer: float) -> ThrusterCommand:
    """Throttle/steer to left/right settings; positive steer turns to port."""
    return ThrusterCommand(left=throttle - steer, right=throttle + steer)


def ground_velocity_body(state: SimState, env: Environment) -> Tuple[float, float]:
    """Body-frame velocity over ground (through-water velocity plus current)."""
    c, s = math.cos(state.yaw), math.sin(state.yaw)
    current_u = c * env.current_east + s * env.current_north
    current_v = -s * env.current_east + c * env.current_north
    return state.u + current_u, state.v + current_v


def ground_speed(state: SimState, env: Environment) -> float:
    u_g, v_g = ground_velocity_body(state, env)
    return math.hypot(u_g, v_g)


def _derivatives(
    yaw: float,
    u: float,
    v: float,
    r: float,
    thrust_left: float,
    thrust_right: float,
    force: Tuple[float, float, float],
    env: Environment,
    params: VesselParams,
) -> Derivative:
    surge = (
        thrust_left
        + thrust_right
        - (params.drag_surge_lin * u + params.drag_surge_quad * u * abs(u))
        + force[0]
    )
    sway = -(params.drag_sway_lin * v + params.drag_sway_quad * v * abs(v)) + force[1]
    yaw_moment = (
        (thrust_right - thrust_left) * params.thruster_halfspan
        - (params.drag_yaw_lin * r + params.drag_yaw_quad * r * abs(r))
        + force[2]
    )

    c, s = math.cos(yaw), math.sin(yaw)
    return (
        c * u - s * v + env.current_east,
        s * u + c * v + env.current_north,
        r,
        surge / params.mass + v * r,
        sway / params.mass - u * r,
        yaw_moment / params.yaw_inertia,
    )


def _advance(y: Derivative, k: Derivative, h: float) -> Derivative:
    return (
        y[0] + h * k[0],
        y[1] + h * k[1],
        y[2] + h * k[2],
        y[3] + h * k[3],
        y[4] + h * k[4],
        y[5] + h * k[5],
    )


def _draw_disturbance(
    env: Environment, rng: Optional[np.random.Generator]
) -> Tuple[float, float, float]:
    if not env.disturbed:
        return 0.0, 0.0, 0.0
    if rng is None:
        raise InputValidationError("A random generator is required for disturbances")
    fx, fy = rng.normal(0.0, env.disturbance_force_std, size=2)
    torque = rng.normal(0.0, env.disturbance_torque_std)
    return float(fx), float(fy), float(torque)


def step(
    state: SimState,
    cmd: ThrusterCommand,
    env: Environment,
    params: VesselParams,
    dt: float,
    rng: Optional[np.random.Generator] = None,
) -> SimState:
    """Advance the vessel by one RK4 step of ``dt`` seconds.

    The disturbance is drawn once per step and held across the RK4 stages.
    """
    if not (0.0 < dt <= VesselDefaults.MAX_DT_S):
        raise InputValidationError(Messages.DT_OUT_OF_RANGE, dt=dt)
    state.require_finite()

    thrust_left = thrust_from_command(cmd.left, params)
    thrust_right = thrust_from_command(cmd.right, params)
    force = _draw_disturbance(env, rng)

    def f(y: Derivative) -> Derivative:
        return _derivatives(
            y[2], y[3], y[4], y[5], thrust_left, thrust_right, force, env, params
        )

    y0 = state.as_tuple()
    k1 = f(y0)
    k2 = f(_advance(y0, k1, 0.5 * dt))
    k3 = f(_advance(y0, k2, 0.5 * dt))
    k4 = f(_advance(y0, k3, dt))
    x, y, yaw, u, v, r = (
        a + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        for a, b1, b2, b3, b4 in zip(y0, k1, k2, k3, k4)
    )

    new_state = SimState(t=state.t + dt, x=x, y=y, yaw=wrap_angle(yaw), u=u, v=v, r=r)
    new_state.require_finite()
    return new_state


def simulate(
    state: SimState,
    commands: CommandFn,
    env: Environment,
    params: VesselParams,
    dt: float,
    duration: float,
    rng: Optional[np.random.Generator] = None,
) -> List[SimState]:
    """Open-loop run; returns every state including the initial one.

    Times are ``t0 + k * dt`` so long runs do not accumulate clock drift.
    """
    t0 = state.t
    n_steps = int(round(duration / dt))
    states = [state]
    for k in range(1, n_steps + 1):
        state = step(state, commands(state.t, state), env, params, dt, rng)
        state = replace(state, t=t0 + k * dt)
        states.append(state)
    return states


def find_steady_speed(
    throttle: float,
    params: VesselParams,
    env: Environment,
    dt: float = VesselDefaults.DEFAULT_DT_S,
) -> float:
    """Converged straight-line surge speed for a symmetric throttle setting.

    Runs from rest until the surge speed changes by less than the tolerance
    over the convergence window. Random disturbances are switched off for
    the run; the current does not affect through-water speed.
    """
    if thrust_from_command(throttle, params) == 0.0:
        return 0.0

    calm = env.calm()
    cmd = mix_differential(throttle, 0.0)
    window = int(round(ProtocolConstants.STEADY_SPEED_WINDOW_S / dt))
    max_steps = int(round(ProtocolConstants.STEADY_SPEED_MAX_TIME_S / dt))
    history: Deque[float] = deque(maxlen=window + 1)

    state = SimState()
    history.append(state.u)
    for _ in range(max_steps):
        state = step(state, cmd, calm, params, dt)
        history.append(state.u)
        if (
            len(history) == window + 1
            and abs(history[-1] - history[0]) < ProtocolConstants.STEADY_SPEED_TOLERANCE
        ):
            logger.debug("Steady speed reached", throttle=throttle, speed=state.u)
            return state.u

    raise ConvergenceError(Messages.NO_STEADY_SPEED, throttle=throttle)
