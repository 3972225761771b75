"""
Ingestion of externally recorded tracks (CSV) into TrialLog form.

Expected columns: ``iso_time``, ``lat``, ``lon``, ``heading_deg_compass``
and optionally ``speed_mps``. The heading convention and datum must be
declared by the caller; nothing is guessed from the data.
"""

import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd
import structlog

from common.constants import Datum, HeadingConvention, Messages, TurnSide
from common.errors import ConventionError, LogIOError, MalformedRecordError
from common.geo import GeoPoint, enu_from_geodetic, enu_yaw_from_compass, wrap_angle
from trial_log_io.schema import LogRecord, TrialLog, TrialMetadata, TruthRecord

logger = structlog.get_logger(__name__)

REQUIRED_COLUMNS = ["iso_time", "lat", "lon", "heading_deg_compass"]
SPEED_COLUMN = "speed_mps"
# Data rows start on line 2 of the file
FIRST_DATA_LINE = 2


def _central_difference_speed(
    t: np.ndarray, x: np.ndarray, y: np.ndarray
) -> np.ndarray:
    if t.size < 2:
        return np.zeros_like(t)
    return np.hypot(np.gradient(x, t), np.gradient(y, t))


def ingest_external(
    path: Union[str, Path],
    origin: GeoPoint,
    heading_convention: Optional[HeadingConvention],
    datum: Optional[Datum],
    side: TurnSide,
    vessel_length: float,
    execute_time: Optional[float] = None,
    execute_index: Optional[int] = None,
    approach_speed: Optional[float] = None,
) -> TrialLog:
    """Convert a CSV track to a truth-only TrialLog at its native rate.

    ``execute_time`` (seconds from the first row) selects the first sample at
    or after that time; ``execute_index`` gives it directly.
    """
    if heading_convention is None or datum is None:
        raise ConventionError(
            Messages.MISSING_CONVENTION,
            heading_convention=heading_convention,
            datum=datum,
        )

    path = Path(path)
    try:
        frame = pd.read_csv(path)
    except (
        OSError,
        UnicodeDecodeError,
        pd.errors.ParserError,
        pd.errors.EmptyDataError,
    ) as exc:
        raise LogIOError(str(exc), path=path) from exc

    missing = [column for column in REQUIRED_COLUMNS if column not in frame.columns]
    if missing:
        raise MalformedRecordError(
            Messages.MALFORMED_RECORD, path=path, line=1, missing=",".join(missing)
        )

    stamps = pd.to_datetime(frame["iso_time"], utc=True, errors="coerce")
    numeric = frame[["lat", "lon", "heading_deg_compass"]].apply(
        pd.to_numeric, errors="coerce"
    )
    bad = stamps.isna() | numeric.isna().any(axis=1)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise MalformedRecordError(
            Messages.MALFORMED_RECORD, path=path, line=row + FIRST_DATA_LINE
        )

    t = (stamps - stamps.iloc[0]).dt.total_seconds().to_numpy(dtype=float)
    steps = np.diff(t)
    if np.any(steps <= 0.0):
        row = int(np.flatnonzero(steps <= 0.0)[0]) + 1
        raise MalformedRecordError(
            Messages.NON_MONOTONE_TIME, path=path, line=row + FIRST_DATA_LINE
        )

    xs: List[float] = []
    ys: List[float] = []
    for lat, lon in zip(numeric["lat"], numeric["lon"]):
        x, y, _ = enu_from_geodetic(origin, GeoPoint(lat=float(lat), lon=float(lon)))
        xs.append(x)
        ys.append(y)
    x_arr, y_arr = np.array(xs), np.array(ys)

    headings = numeric["heading_deg_compass"].to_numpy(dtype=float)
    if heading_convention is HeadingConvention.COMPASS:
        yaw = [enu_yaw_from_compass(float(h)) for h in headings]
    else:
        yaw = [wrap_angle(math.radians(float(h))) for h in headings]

    if SPEED_COLUMN in frame.columns:
        speed = pd.to_numeric(frame[SPEED_COLUMN], errors="coerce").to_numpy(
            dtype=float
        )
        if np.any(np.isnan(speed)):
            row = int(np.flatnonzero(np.isnan(speed))[0])
            raise MalformedRecordError(
                Messages.MALFORMED_RECORD, path=path, line=row + FIRST_DATA_LINE
            )
    else:
        speed = _central_difference_speed(t, x_arr, y_arr)

    if execute_index is None and execute_time is not None:
        execute_index = int(np.searchsorted(t, execute_time, side="left"))
        if execute_index >= t.size:
            execute_index = None

    records = [
        LogRecord(
            t=float(t[k]),
            truth=TruthRecord(
                x=float(x_arr[k]),
                y=float(y_arr[k]),
                yaw=yaw[k],
                speed=abs(float(speed[k])),
            ),
        )
        for k in range(t.size)
    ]
    metadata = TrialMetadata(
        vessel_length=vessel_length,
        side=side,
        execute_index=execute_index,
        approach_speed=approach_speed,
        origin=origin,
        heading_convention=heading_convention,
        datum=datum,
        source="external",
    )
    logger.info(
        "External track ingested",
        path=str(path),
        rows=len(records),
        execute_index=execute_index,
    )
    return TrialLog(metadata=metadata, records=records)
