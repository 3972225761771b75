"""
Simulation loop shared by every trial: truth, sensors, online EKF and log.

Each tick at simulation time ``t = t0 + k * dt`` samples the sensors that
are due, fuses them (GPS before IMU on equal stamps), logs one record and
then advances the vessel under the controller's command.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple

import numpy as np
import structlog

from common.constants import STATE_DIM, MeasurementSource
from common.geo import wrap_angle
from ekf_localization.filter import predict
from ekf_localization.fusion import fuse_gps, fuse_imu, merge_measurements
from ekf_localization.models import EkfState, Measurement, StreamStats
from ekf_localization.stream import EkfStream
from sensor_models.sampling import GyroBias, SensorSchedule, sample_gps, sample_imu
from trial_log_io.schema import (
    CommandRecord,
    EstimateRecord,
    GpsRecord,
    ImuRecord,
    LogRecord,
    TrialLog,
    TrialMetadata,
    TruthRecord,
)
from trial_protocol.config import PipelineConfig
from vessel_dynamics.models import SimState, ThrusterCommand
from vessel_dynamics.simulator import ground_speed, mix_differential, step

logger = structlog.get_logger(__name__)

Controller = Callable[[float, SimState, Optional[EkfState]], ThrusterCommand]


def heading_hold(throttle: float, heading: float, gain: float) -> Controller:
    """Proportional heading hold on the truth yaw."""

    def control(
        t: float, truth: SimState, estimate: Optional[EkfState]
    ) -> ThrusterCommand:
        steer = max(-1.0, min(1.0, gain * wrap_angle(heading - truth.yaw)))
        return mix_differential(throttle, steer)

    return control


def estimated_heading_hold(throttle: float, heading: float, gain: float) -> Controller:
    """Proportional heading hold on the filter's yaw estimate."""

    def control(
        t: float, truth: SimState, estimate: Optional[EkfState]
    ) -> ThrusterCommand:
        yaw = truth.yaw if estimate is None else float(estimate.x[5])
        steer = max(-1.0, min(1.0, gain * wrap_angle(heading - yaw)))
        return mix_differential(throttle, steer)

    return control


def constant_command(cmd: ThrusterCommand) -> Controller:
    def control(
        t: float, truth: SimState, estimate: Optional[EkfState]
    ) -> ThrusterCommand:
        return cmd

    return control


@dataclass
class ScriptedRun:
    """Log plus the per-tick filter states and truth of one run."""

    log: TrialLog
    estimates: List[EkfState] = field(default_factory=list)
    truth: List[SimState] = field(default_factory=list)
    stats: StreamStats = field(default_factory=StreamStats)


class TrialRunner:
    def __init__(self, cfg: PipelineConfig, rng: np.random.Generator) -> None:
        self.cfg = cfg
        self.rng = rng
        trial = cfg.trial
        pose = trial.start_pose
        self.dt = trial.dt
        self.t0 = 0.0
        self.k = 0
        self.state = SimState(t=self.t0, x=pose.x, y=pose.y, yaw=pose.yaw)

        sensors = cfg.sensors
        self.gps_schedule = SensorSchedule(
            sensors.gps_rate, sensors.timestamp_jitter_std, sensors.clock_skew_ppm
        )
        self.imu_schedule = SensorSchedule(
            sensors.imu_rate, sensors.timestamp_jitter_std, sensors.clock_skew_ppm
        )
        self.bias = GyroBias()

        x0 = np.zeros(STATE_DIM)
        x0[0], x0[1], x0[5] = pose.x, pose.y, pose.yaw
        self.stats = StreamStats()
        init = EkfState.initial(cfg.ekf, t=self.t0, x0=x0)
        self.filter = EkfStream(init, cfg.ekf, self.stats)

        self.records: List[LogRecord] = []
        self.estimates: List[EkfState] = []
        self.truth: List[SimState] = []

    @property
    def t(self) -> float:
        return self.t0 + self.k * self.dt

    def _sample(
        self,
    ) -> Tuple[Optional[GpsRecord], Optional[ImuRecord], List[Measurement]]:
        truth = self.state
        sensors = self.cfg.sensors
        gps_record = imu_record = None
        measurements: List[Measurement] = []

        nominal = self.gps_schedule.due(truth.t)
        if nominal is not None:
            stamp = self.gps_schedule.stamp(nominal, self.rng)
            fix = sample_gps(truth, self.cfg.origin, sensors, self.rng, stamp=stamp)
            if fix is not None:
                gps_record = GpsRecord(
                    lat=fix.point.lat,
                    lon=fix.point.lon,
                    alt=fix.point.alt,
                    std=fix.horizontal_std,
                    stamp=fix.t,
                )
                measurements.append(fuse_gps(fix, self.cfg.origin))
            else:
                self.filter.record_dropout(MeasurementSource.GPS)

        nominal = self.imu_schedule.due(truth.t)
        if nominal is not None:
            stamp = self.imu_schedule.stamp(nominal, self.rng)
            reading = sample_imu(truth, self.bias, sensors, self.rng, stamp=stamp)
            imu_record = ImuRecord(
                roll=reading.roll,
                pitch=reading.pitch,
                yaw=reading.yaw,
                p=reading.rate_x,
                q=reading.rate_y,
                r=reading.rate_z,
                orientation_std=reading.orientation_std,
                rate_std=reading.rate_std,
                stamp=reading.t,
            )
            measurements.append(fuse_imu(reading))

        return gps_record, imu_record, merge_measurements(measurements)

    def _estimate_at(self, t: float) -> EkfState:
        estimate = self.filter.state
        if t > estimate.t:
            estimate = predict(estimate, t - estimate.t, self.cfg.ekf)
        return estimate

    def tick(self, controller: Controller) -> LogRecord:
        truth = self.state
        gps_record, imu_record, measurements = self._sample()
        for measurement in measurements:
            self.filter.push(measurement)
        estimate = self._estimate_at(truth.t)

        cmd = controller(truth.t, truth, estimate)
        record = LogRecord(
            t=truth.t,
            truth=TruthRecord(
                x=truth.x,
                y=truth.y,
                yaw=truth.yaw,
                u=truth.u,
                v=truth.v,
                r=truth.r,
                speed=ground_speed(truth, self.cfg.environment),
            ),
            est=EstimateRecord.from_state(estimate.x, estimate.P),
            gps=gps_record,
            imu=imu_record,
            cmd=CommandRecord(left=cmd.left, right=cmd.right),
        )
        self.records.append(record)
        self.estimates.append(estimate)
        self.truth.append(truth)

        next_state = step(
            truth, cmd, self.cfg.environment, self.cfg.vessel, self.dt, self.rng
        )
        self.k += 1
        self.state = replace(next_state, t=self.t)
        return record

    def metadata(self, **fields: object) -> TrialMetadata:
        return TrialMetadata(
            vessel_length=self.cfg.vessel.length,
            side=self.cfg.trial.side,
            seed=self.cfg.seed,
            origin=self.cfg.origin,
            config=self.cfg.model_dump(mode="json"),
            filter_stats=self.stats.as_dict(),
            **fields,
        )

    def build_log(self, **fields: object) -> TrialLog:
        return TrialLog(metadata=self.metadata(**fields), records=list(self.records))


def run_scripted(
    cfg: PipelineConfig,
    commands: Callable[[float], ThrusterCommand],
    duration: float,
    rng: np.random.Generator,
) -> ScriptedRun:
    """Open-loop run of ``duration`` seconds with the sensor/EKF pipeline."""
    runner = TrialRunner(cfg, rng)
    n_ticks = int(round(duration / runner.dt)) + 1

    def control(
        t: float, truth: SimState, estimate: Optional[EkfState]
    ) -> ThrusterCommand:
        return commands(t)

    for _ in range(n_ticks):
        runner.tick(control)

    logger.debug("Scripted run finished", ticks=n_ticks, stats=runner.stats.as_dict())
    return ScriptedRun(
        log=runner.build_log(),
        estimates=runner.estimates,
        truth=runner.truth,
        stats=runner.stats,
    )

