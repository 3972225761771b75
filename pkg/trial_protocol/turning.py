"""
IMO-style turning-circle trial and multi-trial campaigns.

Phases: accelerate and hold the start heading for ``acceleration_time +
steady_hold`` seconds, then apply a constant steer offset toward the
requested side with throttle unchanged until the heading has changed by
``total_heading_change`` (plus a couple of trailing samples).
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import structlog
from prometheus_client import Counter, Histogram

from common.constants import HeadingSource, Messages, ProtocolConstants, TurnSide
from common.errors import ProtocolError, TrialIncompleteError
from common.geo import wrap_angle
from trial_log_io.schema import TrialLog
from trial_protocol.calibration import Calibration, calibrate_approach_throttle
from trial_protocol.config import PipelineConfig
from trial_protocol.runner import (
    TrialRunner,
    constant_command,
    estimated_heading_hold,
    heading_hold,
)
from vessel_dynamics.simulator import mix_differential

logger = structlog.get_logger(__name__)

# Metrics
TRIAL_COUNT = Counter(
    "usv_trials_total", "Turning-circle trials run", ["side", "status"]
)
TRIAL_DURATION = Histogram(
    "usv_trial_duration_seconds", "Wall-clock time per turning-circle trial"
)


def resolve_calibration(cfg: PipelineConfig) -> Calibration:
    """Configured throttle/approach speed, or a fresh calibration."""
    trial = cfg.trial
    if trial.throttle is not None and trial.approach_speed is not None:
        return Calibration(
            throttle=trial.throttle,
            approach_speed=trial.approach_speed,
            reference_speed=(
                trial.approach_speed / ProtocolConstants.APPROACH_SPEED_RATIO
            ),
        )
    return calibrate_approach_throttle(cfg.vessel, cfg.environment, trial.dt)


def run_turning_circle(
    cfg: PipelineConfig,
    rng: np.random.Generator,
    calibration: Optional[Calibration] = None,
) -> TrialLog:
    trial = cfg.trial
    if calibration is None:
        calibration = resolve_calibration(cfg)
    throttle = calibration.throttle
    heading = trial.start_pose.yaw

    runner = TrialRunner(cfg, rng)
    if trial.heading_source is HeadingSource.ESTIMATE:
        hold = estimated_heading_hold(throttle, heading, trial.hold_gain)
    else:
        hold = heading_hold(throttle, heading, trial.hold_gain)

    approach_time = trial.acceleration_time + trial.steady_hold
    approach_ticks = int(round(approach_time / trial.dt))
    for _ in range(approach_ticks):
        runner.tick(hold)

    execute_index = len(runner.records)
    sign = trial.side.sign
    turn = constant_command(mix_differential(throttle, sign * trial.turn_steer))
    metadata = {
        "execute_index": execute_index,
        "approach_speed": calibration.approach_speed,
        "throttle": throttle,
        "turn_steer": trial.turn_steer,
    }

    max_ticks = int(math.ceil(trial.max_duration / trial.dt))
    previous = runner.state.yaw
    change = 0.0
    trailing = None
    for _ in range(max_ticks):
        runner.tick(turn)
        yaw = runner.truth[-1].yaw
        change += wrap_angle(yaw - previous) * sign
        previous = yaw
        if trailing is None and change >= trial.total_heading_change:
            trailing = ProtocolConstants.POST_TURN_SAMPLES
        elif trailing is not None:
            trailing -= 1
        if trailing == 0:
            break
    else:
        raise TrialIncompleteError(
            Messages.TRIAL_INCOMPLETE,
            log=runner.build_log(**metadata),
            side=trial.side.value,
            reached_deg=round(math.degrees(change), 1),
        )

    logger.info(
        "Turning circle complete",
        side=trial.side.value,
        seed=cfg.seed,
        execute_index=execute_index,
        samples=len(runner.records),
        heading_change_deg=round(math.degrees(change), 1),
    )
    return runner.build_log(**metadata)


@dataclass
class TrialOutcome:
    """Result of one campaign trial; ``error`` is set for failed trials."""

    seed: int
    side: TurnSide
    log: Optional[TrialLog]
    error: Optional[str] = None
    exit_code: int = 0
    wall_time: float = 0.0


def _campaign_trial(
    cfg: PipelineConfig, calibration: Calibration, seed: int, side: TurnSide
) -> TrialOutcome:
    trial_cfg = cfg.with_overrides({"environment.seed": seed, "trial.side": side.value})
    rng = np.random.default_rng(seed)
    started = time.perf_counter()
    try:
        log = run_turning_circle(trial_cfg, rng, calibration)
    except TrialIncompleteError as exc:
        elapsed = time.perf_counter() - started
        return TrialOutcome(seed, side, exc.log, str(exc), int(exc.exit_code), elapsed)
    except ProtocolError as exc:
        elapsed = time.perf_counter() - started
        return TrialOutcome(seed, side, None, str(exc), int(exc.exit_code), elapsed)
    return TrialOutcome(seed, side, log, wall_time=time.perf_counter() - started)


def run_campaign(
    cfg: PipelineConfig,
    seeds: Sequence[int],
    sides: Sequence[TurnSide],
    workers: int = 1,
) -> List[TrialOutcome]:
    """One trial per (seed, side) pair, each with its own RNG.

    ``sides`` is either a single side for every seed or one side per seed.
    Calibration runs once and is shared by every trial.
    """
    if len(sides) == 1:
        sides = list(sides) * len(seeds)
    if len(sides) != len(seeds):
        raise ValueError("sides must have one entry or one entry per seed")

    calibration = resolve_calibration(cfg)
    jobs = list(zip(seeds, sides))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_campaign_trial, cfg, calibration, seed, side)
                for seed, side in jobs
            ]
            outcomes = [future.result() for future in futures]
    else:
        outcomes = [
            _campaign_trial(cfg, calibration, seed, side) for seed, side in jobs
        ]

    for outcome in outcomes:
        status = "ok" if outcome.error is None else "failed"
        TRIAL_COUNT.labels(side=outcome.side.value, status=status).inc()
        TRIAL_DURATION.observe(outcome.wall_time)
        if outcome.error is not None:
            logger.warning(
                "Trial failed",
                seed=outcome.seed,
                side=outcome.side.value,
                error=outcome.error,
            )
    return outcomes
