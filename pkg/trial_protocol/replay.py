"""
Offline filtering of a recorded log's GPS and IMU samples.
"""

from typing import List, Tuple

import numpy as np
import structlog

from common.constants import STATE_DIM, MeasurementOutcome, Messages
from common.errors import InputValidationError
from common.geo import GeoPoint
from ekf_localization.filter import predict
from ekf_localization.fusion import fuse_gps, fuse_imu, merge_measurements
from ekf_localization.models import EkfState, Measurement, ProcessConfig, StreamStats
from ekf_localization.stream import EkfStream
from sensor_models.models import GpsFix, ImuReading
from trial_log_io.schema import EstimateRecord, LogRecord, TrialLog

logger = structlog.get_logger(__name__)


def record_measurements(record: LogRecord, origin: GeoPoint) -> List[Measurement]:
    """Measurements carried by one log line, GPS first."""
    measurements: List[Measurement] = []
    if record.gps is not None:
        gps = record.gps
        point = GeoPoint(lat=gps.lat, lon=gps.lon, alt=gps.alt)
        measurements.append(
            fuse_gps(GpsFix(t=gps.stamp, point=point, horizontal_std=gps.std), origin)
        )
    if record.imu is not None:
        imu = record.imu
        reading = ImuReading(
            t=imu.stamp,
            roll=imu.roll,
            pitch=imu.pitch,
            yaw=imu.yaw,
            rate_x=imu.p,
            rate_y=imu.q,
            rate_z=imu.r,
            orientation_std=imu.orientation_std,
            rate_std=imu.rate_std,
        )
        measurements.append(fuse_imu(reading))
    return merge_measurements(measurements)


def _initial_state(log: TrialLog, cfg: ProcessConfig) -> EkfState:
    first = log.records[0]
    x0 = np.zeros(STATE_DIM)
    if first.truth is not None:
        x0[0], x0[1], x0[5] = first.truth.x, first.truth.y, first.truth.yaw
    return EkfState.initial(cfg, t=first.t, x0=x0)


def replay_log(
    log: TrialLog, cfg: ProcessConfig, origin: GeoPoint
) -> Tuple[TrialLog, StreamStats]:
    """Return a copy of ``log`` with ``est`` refilled from its sensor samples.

    The filter starts from the first truth pose when one is recorded.
    """
    if not log.records or not log.has_sensor_data():
        raise InputValidationError(Messages.NO_SENSOR_DATA, records=len(log.records))
    if log.metadata.origin is not None:
        origin = log.metadata.origin

    stats = StreamStats()
    # Samples the sensor never delivered are only known from the recording run
    for key, count in (log.metadata.filter_stats or {}).items():
        if key.endswith(f".{MeasurementOutcome.DROPPED.value}"):
            stats.counts[key] = count
    stream = EkfStream(_initial_state(log, cfg), cfg, stats)
    records: List[LogRecord] = []
    for record in log.records:
        for measurement in record_measurements(record, origin):
            stream.push(measurement)
        estimate = stream.state
        if record.t > estimate.t:
            estimate = predict(estimate, record.t - estimate.t, cfg)
        est = EstimateRecord.from_state(estimate.x, estimate.P)
        records.append(record.model_copy(update={"est": est}))

    metadata = log.metadata.model_copy(update={"filter_stats": stats.as_dict()})
    logger.info(
        "Log replayed through the filter", records=len(records), **stats.as_dict()
    )
    return TrialLog(metadata=metadata, records=records), stats
