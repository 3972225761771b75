"""
Turning-circle geometry from a TrialLog.

The course axis is the heading at the execute instant. Positions relative
to the execute point are projected onto that axis (advance) and onto its
normal, signed positive toward the turn side (transfer, tactical
diameter), so port and starboard turns share one convention. Heading
crossings are linearly interpolated on the unwrapped heading change.
"""

import math
from dataclasses import dataclass
from typing import Dict

import numpy as np
import structlog

from common.constants import HeadingSource, Messages, TurnMarks
from common.errors import MetricsError
from common.geo import unwrap_heading
from maneuver_metrics.models import TurningCircleMetrics
from trial_log_io.schema import TrialLog

logger = structlog.get_logger(__name__)

MARKS: Dict[str, float] = {
    "quarter": TurnMarks.QUARTER,
    "half": TurnMarks.HALF,
    "full": TurnMarks.FULL,
    "one_and_half": TurnMarks.ONE_AND_HALF,
}


@dataclass(frozen=True)
class Crossing:
    heading_change: float
    t: float
    x: float
    y: float
    along: float
    lateral: float


@dataclass(frozen=True)
class TurnCrossings:
    """Execute point plus interpolated crossings of each heading mark."""

    t_execute: float
    x_execute: float
    y_execute: float
    yaw_execute: float
    marks: Dict[str, Crossing]
    # Samples from execute onward, with the signed unwrapped heading change
    t: np.ndarray
    speed: np.ndarray
    heading_change: np.ndarray


def _execute_offset(log: TrialLog, times: np.ndarray) -> int:
    index = log.metadata.execute_index
    if index is None:
        raise MetricsError(Messages.NO_EXECUTE)
    t_execute = log.records[index].t
    k0 = int(np.searchsorted(times, t_execute - 1e-9, side="left"))
    if k0 >= times.size:
        raise MetricsError(Messages.NO_EXECUTE, t_execute=t_execute)
    return k0


def turning_crossings(
    log: TrialLog, source: HeadingSource = HeadingSource.TRUTH
) -> TurnCrossings:
    track = log.track(source)
    if track["t"].size == 0:
        raise MetricsError(Messages.MISSING_TURN, source=source.value)
    k0 = _execute_offset(log, track["t"])

    t = track["t"][k0:]
    x = track["x"][k0:]
    y = track["y"][k0:]
    speed = track["speed"][k0:]
    yaw_unwrapped = unwrap_heading(track["yaw"][k0:])
    sign = log.metadata.side.sign
    change = (yaw_unwrapped - yaw_unwrapped[0]) * sign

    yaw_e = float(yaw_unwrapped[0])
    cos_e, sin_e = math.cos(yaw_e), math.sin(yaw_e)
    x0, y0 = float(x[0]), float(y[0])

    marks: Dict[str, Crossing] = {}
    for name, target in MARKS.items():
        above = np.flatnonzero(change >= target)
        if above.size == 0:
            raise MetricsError(
                Messages.MISSING_TURN,
                source=source.value,
                reached_deg=round(math.degrees(float(np.max(change))), 1),
            )
        j = int(above[0])
        if j == 0:
            raise MetricsError(Messages.MISSING_TURN, source=source.value)
        frac = (target - change[j - 1]) / (change[j] - change[j - 1])
        tc = float(t[j - 1] + frac * (t[j] - t[j - 1]))
        xc = float(x[j - 1] + frac * (x[j] - x[j - 1]))
        yc = float(y[j - 1] + frac * (y[j] - y[j - 1]))
        dx, dy = xc - x0, yc - y0
        marks[name] = Crossing(
            heading_change=target,
            t=tc,
            x=xc,
            y=yc,
            along=dx * cos_e + dy * sin_e,
            lateral=(-dx * sin_e + dy * cos_e) * sign,
        )

    return TurnCrossings(
        t_execute=float(t[0]),
        x_execute=x0,
        y_execute=y0,
        yaw_execute=yaw_e,
        marks=marks,
        t=t,
        speed=speed,
        heading_change=change,
    )


def _window_mean_speed(
    crossings: TurnCrossings, start: Crossing, end: Crossing
) -> float:
    """Time-weighted (trapezoid) mean speed between two crossings."""
    t = crossings.t
    speed = crossings.speed
    inside = (t > start.t) & (t < end.t)
    times = np.concatenate(([start.t], t[inside], [end.t]))
    values = np.concatenate(
        (
            [np.interp(start.t, t, speed)],
            speed[inside],
            [np.interp(end.t, t, speed)],
        )
    )
    duration = end.t - start.t
    if duration <= 0.0:
        raise MetricsError("Steady-turn window is empty")
    area = float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(times)))
    return area / duration


def _attitude_excursions(log: TrialLog) -> Dict[str, float]:
    rolls = [abs(r.est.roll) for r in log.records if r.est is not None]
    pitches = [abs(r.est.pitch) for r in log.records if r.est is not None]
    if not rolls:
        return {}
    return {"max_abs_roll": max(rolls), "max_abs_pitch": max(pitches)}


def compute_metrics(
    log: TrialLog, source: HeadingSource = HeadingSource.TRUTH
) -> TurningCircleMetrics:
    approach_speed = log.metadata.approach_speed
    if approach_speed is None or approach_speed <= 0.0:
        raise MetricsError(Messages.ZERO_APPROACH_SPEED, approach_speed=approach_speed)

    crossings = turning_crossings(log, source)
    quarter = crossings.marks["quarter"]
    half = crossings.marks["half"]
    steady_speed = _window_mean_speed(
        crossings, crossings.marks["full"], crossings.marks["one_and_half"]
    )

    values = {
        "advance": quarter.along,
        "transfer": quarter.lateral,
        "tactical_diameter": half.lateral,
        "t90": quarter.t - crossings.t_execute,
        "t180": half.t - crossings.t_execute,
    }
    negative = {name: value for name, value in values.items() if value < 0.0}
    if negative:
        raise MetricsError("Turn geometry is degenerate", **negative)

    metrics = TurningCircleMetrics(
        side=log.metadata.side,
        source=source,
        speed_loss_pct=100.0 * (approach_speed - steady_speed) / approach_speed,
        **values,
        **_attitude_excursions(log),
    )
    logger.info(
        "Turning circle metrics computed",
        side=metrics.side.value,
        source=source.value,
        advance=round(metrics.advance, 3),
        tactical_diameter=round(metrics.tactical_diameter, 3),
    )
    return metrics
