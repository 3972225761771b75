"""
Planar twin-thruster vessel simulator supplying ground truth for trials.
"""

from vessel_dynamics.models import Environment, SimState, ThrusterCommand, VesselParams
from vessel_dynamics.simulator import (
    find_steady_speed,
    ground_speed,
    ground_velocity_body,
    mix_differential,
    simulate,
    step,
    thrust_from_command,
)

__version__ = "1.0.0"
__author__ = "USV Trials Team"

__all__ = [
    "Environment",
    "SimState",
    "ThrusterCommand",
    "VesselParams",
    "find_steady_speed",
    "ground_speed",
    "ground_velocity_body",
    "mix_differential",
    "simulate",
    "step",
    "thrust_from_command",
]
