"""
Vessel parameters, environment and simulation state types.

The default numbers describe a 0.72 m x 0.41 m twin-hull craft with two
differential thrusters. Mass, inertia, thrust and drag defaults are tuning
values for the simulator; none of them were measured on a physical hull.
"""

import math
from dataclasses import dataclass
from typing import Tuple

from pydantic import BaseModel, Field, model_validator

from common.constants import Messages, VesselDefaults
from common.errors import InputValidationError


class VesselParams(BaseModel):
    """Physical and configured vessel constants.

    Only the length and beam are measured; mass, inertia, thrust and drag
    defaults are nominal values for a 0.72 m twin hull and have not been
    fitted to the physical boat.
    """

    length: float = Field(default=VesselDefaults.LENGTH_M, gt=0.0)
    beam: float = Field(default=VesselDefaults.BEAM_M, gt=0.0)
    mass: float = Field(default=VesselDefaults.MASS_KG, gt=0.0)
    yaw_inertia: float = Field(default=VesselDefaults.YAW_INERTIA, gt=0.0)
    thruster_halfspan: float = Field(default=VesselDefaults.THRUSTER_HALFSPAN_M, gt=0.0)
    max_thrust: float = Field(default=VesselDefaults.MAX_THRUST_N, gt=0.0)
    deadband: float = Field(default=VesselDefaults.DEADBAND, ge=0.0, lt=0.2)
    thrust_exponent: float = Field(default=VesselDefaults.THRUST_EXPONENT, gt=0.0)
    reverse_thrust_ratio: float = Field(
        default=VesselDefaults.REVERSE_THRUST_RATIO, gt=0.0, le=1.0
    )

    # Resistance: linear and quadratic terms per axis
    drag_surge_lin: float = Field(default=5.0, ge=0.0)
    drag_surge_quad: float = Field(default=15.0, ge=0.0)
    drag_sway_lin: float = Field(default=8.0, ge=0.0)
    drag_sway_quad: float = Field(default=30.0, ge=0.0)
    drag_yaw_lin: float = Field(default=0.4, ge=0.0)
    drag_yaw_quad: float = Field(default=4.0, ge=0.0)

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _check_geometry(self) -> "VesselParams":
        if self.thruster_halfspan >= self.beam / 2.0:
            raise ValueError("thruster_halfspan must be smaller than beam / 2")
        for axis in ("surge", "sway", "yaw"):
            lin = getattr(self, f"drag_{axis}_lin")
            quad = getattr(self, f"drag_{axis}_quad")
            if lin <= 0.0 and quad <= 0.0:
                raise ValueError(
                    f"{axis} drag needs a positive linear or quadratic term"
                )
        return self


class Environment(BaseModel):
    """Ambient current and random force/torque disturbance."""

    current_east: float = 0.0
    current_north: float = 0.0
    disturbance_force_std: float = Field(default=0.0, ge=0.0)
    disturbance_torque_std: float = Field(default=0.0, ge=0.0)
    seed: int = 0

    model_config = {"frozen": True, "extra": "forbid"}

    @property
    def disturbed(self) -> bool:
        return self.disturbance_force_std > 0.0 or self.disturbance_torque_std > 0.0

    def calm(self) -> "Environment":
        """Same current, no random disturbance."""
        return self.model_copy(
            update={"disturbance_force_std": 0.0, "disturbance_torque_std": 0.0}
        )


def _clamp_unit(value: float) -> float:
    return max(-1.0, min(1.0, float(value)))


@dataclass(frozen=True)
class ThrusterCommand:
    """Normalized left/right thruster settings, clamped to [-1, 1]."""

    left: float = 0.0
    right: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", _clamp_unit(self.left))
        object.__setattr__(self, "right", _clamp_unit(self.right))


@dataclass(frozen=True)
class SimState:
    """Ground-truth planar state; u, v are through-water body velocities."""

    t: float = 0.0
    x: float = 0.0
    y: float = 0.0
    yaw: float = 0.0
    u: float = 0.0
    v: float = 0.0
    r: float = 0.0

    def as_tuple(self) -> Tuple[float, float, float, float, float, float]:
        return self.x, self.y, self.yaw, self.u, self.v, self.r

    def is_finite(self) -> bool:
        return all(math.isfinite(value) for value in (self.t, *self.as_tuple()))

    def require_finite(self) -> None:
        if not self.is_finite():
            raise InputValidationError(Messages.NON_FINITE_STATE, state=self)
