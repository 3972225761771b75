"""
TrialLog data model: a metadata header plus one record per sample.

Records and metadata accept unknown fields and keep them, so logs written
by a newer schema revision survive a read/write cycle unchanged.
"""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from common.constants import (
    SCHEMA_VERSION,
    STATE_DIM,
    Datum,
    HeadingConvention,
    HeadingSource,
    TurnSide,
)
from common.geo import GeoPoint


class _Record(BaseModel):
    model_config = {"extra": "allow"}


class TruthRecord(_Record):
    """Ground truth; body velocities are optional for ingested tracks."""

    x: float
    y: float
    yaw: float
    u: Optional[float] = None
    v: Optional[float] = None
    r: Optional[float] = None
    speed: float = Field(ge=0.0)


class EstimateRecord(_Record):
    x: float
    y: float
    z: float
    roll: float
    pitch: float
    yaw: float
    u: float
    v: float
    w: float
    p: float
    q: float
    r: float
    P_diag: List[float]

    @classmethod
    def from_state(cls, x: np.ndarray, P: np.ndarray) -> "EstimateRecord":
        values = [float(value) for value in x]
        return cls(
            x=values[0],
            y=values[1],
            z=values[2],
            roll=values[3],
            pitch=values[4],
            yaw=values[5],
            u=values[6],
            v=values[7],
            w=values[8],
            p=values[9],
            q=values[10],
            r=values[11],
            P_diag=[float(value) for value in np.diag(P)],
        )

    def state_vector(self) -> np.ndarray:
        return np.array(
            [
                self.x,
                self.y,
                self.z,
                self.roll,
                self.pitch,
                self.yaw,
                self.u,
                self.v,
                self.w,
                self.p,
                self.q,
                self.r,
            ]
        )

    @model_validator(mode="after")
    def _check_diag(self) -> "EstimateRecord":
        if len(self.P_diag) != STATE_DIM:
            raise ValueError(f"P_diag must have {STATE_DIM} entries")
        return self


class GpsRecord(_Record):
    lat: float
    lon: float
    alt: float
    std: float = Field(gt=0.0)
    stamp: float


class ImuRecord(_Record):
    roll: float
    pitch: float
    yaw: float
    p: float
    q: float
    r: float
    orientation_std: float = Field(gt=0.0)
    rate_std: float = Field(gt=0.0)
    stamp: float


class CommandRecord(_Record):
    left: float
    right: float


class LogRecord(_Record):
    """One JSONL line."""

    t: float
    truth: Optional[TruthRecord] = None
    est: Optional[EstimateRecord] = None
    gps: Optional[GpsRecord] = None
    imu: Optional[ImuRecord] = None
    cmd: Optional[CommandRecord] = None


class TrialMetadata(_Record):
    vessel_length: float = Field(gt=0.0)
    side: TurnSide
    execute_index: Optional[int] = Field(default=None, ge=0)
    approach_speed: Optional[float] = Field(default=None, ge=0.0)
    throttle: Optional[float] = None
    turn_steer: Optional[float] = None
    seed: Optional[int] = None
    origin: Optional[GeoPoint] = None
    heading_convention: HeadingConvention = HeadingConvention.ENU
    datum: Datum = Datum.WGS84
    source: str = "simulation"
    config: Optional[Dict[str, Any]] = None
    filter_stats: Optional[Dict[str, int]] = None


class LogHeader(BaseModel):
    schema_version: str = Field(alias="schema")
    metadata: TrialMetadata

    model_config = {"populate_by_name": True}


class TrialLog(BaseModel):
    """Metadata plus strictly time-ordered samples."""

    metadata: TrialMetadata
    records: List[LogRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_order(self) -> "TrialLog":
        times = [record.t for record in self.records]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("timestamps must be strictly increasing")
        index = self.metadata.execute_index
        if index is not None and index >= len(self.records):
            raise ValueError("execute_index out of range")
        return self

    def header(self) -> LogHeader:
        return LogHeader(schema=SCHEMA_VERSION, metadata=self.metadata)

    def times(self) -> np.ndarray:
        return np.array([record.t for record in self.records], dtype=float)

    def has_estimates(self) -> bool:
        return any(record.est is not None for record in self.records)

    def has_sensor_data(self) -> bool:
        return any(
            record.gps is not None or record.imu is not None for record in self.records
        )

    def track(
        self, source: HeadingSource = HeadingSource.TRUTH
    ) -> Dict[str, np.ndarray]:
        """Arrays ``t``, ``x``, ``y``, ``yaw`` and ``speed`` for one trajectory.

        Estimated speed is the planar norm of the body velocity estimate.
        Samples without the requested layer are skipped.
        """
        rows = []
        for record in self.records:
            if source is HeadingSource.TRUTH and record.truth is not None:
                truth = record.truth
                rows.append((record.t, truth.x, truth.y, truth.yaw, truth.speed))
            elif source is HeadingSource.ESTIMATE and record.est is not None:
                est = record.est
                speed = float(np.hypot(est.u, est.v))
                rows.append((record.t, est.x, est.y, est.yaw, speed))
        data = np.array(rows, dtype=float).reshape(-1, 5)
        return {
            "t": data[:, 0],
            "x": data[:, 1],
            "y": data[:, 2],
            "yaw": data[:, 3],
            "speed": data[:, 4],
        }
