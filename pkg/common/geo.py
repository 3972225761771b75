"""
Coordinate frames, geodetic to local ENU conversion and angle utilities.

Frames:
    ENU world frame anchored at a geodetic origin; yaw is measured
    counterclockwise from East. Compass heading (clockwise from North) is
    only used at the human-facing edges.

Euler angles follow the ZYX (yaw-pitch-roll) intrinsic convention.
"""

import math
from typing import Tuple, Union, overload

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, model_validator

from common.constants import AngleConstants, GeoConstants, Messages
from common.errors import GeoDomainError, HeadingDiscontinuityError, SingularityError

FloatArray = NDArray[np.float64]


class GeoPoint(BaseModel):
    """WGS-84 position."""

    lat: float = Field(ge=-90.0, le=90.0, description="degrees")
    lon: float = Field(ge=-180.0, le=180.0, description="degrees")
    alt: float = Field(default=0.0, description="meters above ellipsoid")

    model_config = {"frozen": True}


class EnuPose(BaseModel):
    """Pose in the local ENU frame; angles are wrapped on construction."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    roll: float = 0.0
    pitch: float = Field(default=0.0, ge=-math.pi / 2.0, le=math.pi / 2.0)
    yaw: float = 0.0

    model_config = {"frozen": True}

    @model_validator(mode="before")
    @classmethod
    def _wrap_angles(cls, data: object) -> object:
        if isinstance(data, dict):
            data = dict(data)
            for key in ("roll", "yaw"):
                if key in data and data[key] is not None:
                    data[key] = wrap_angle(float(data[key]))
        return data


@overload
def wrap_angle(angle: float) -> float: ...


@overload
def wrap_angle(angle: FloatArray) -> FloatArray: ...


def wrap_angle(angle: Union[float, FloatArray]) -> Union[float, FloatArray]:
    """Wrap to the half-open interval (-pi, pi]."""
    if isinstance(angle, np.ndarray):
        inside = (angle > -math.pi) & (angle <= math.pi)
        wrapped = math.pi - np.mod(math.pi - angle, AngleConstants.TWO_PI)
        wrapped = np.where(
            wrapped <= -math.pi, wrapped + AngleConstants.TWO_PI, wrapped
        )
        return np.where(inside, angle, wrapped)

    a = float(angle)
    if -math.pi < a <= math.pi:
        return a
    wrapped_scalar = math.pi - (math.pi - a) % AngleConstants.TWO_PI
    if wrapped_scalar <= -math.pi:
        wrapped_scalar += AngleConstants.TWO_PI
    return wrapped_scalar


def unwrap_heading(
    series: Union[list, FloatArray], max_step: float = math.pi
) -> FloatArray:
    """Remove 2*pi jumps from a sampled heading series.

    Adjacent output differences equal the wrapped input differences and the
    first sample is kept as is. A wrapped step of ``max_step`` or more means
    the series was sampled too sparsely to tell the turn direction.
    """
    values = np.asarray(series, dtype=float)
    if values.size == 0:
        return values.copy()
    steps = wrap_angle(np.diff(values))
    if steps.size and np.max(np.abs(steps)) >= max_step:
        index = int(np.argmax(np.abs(steps))) + 1
        raise HeadingDiscontinuityError(Messages.HEADING_DISCONTINUITY, index=index)
    out = np.empty_like(values)
    out[0] = values[0]
    out[1:] = values[0] + np.cumsum(steps)
    return out


def _lon_delta(lon: float, lon0: float) -> float:
    delta = lon - lon0
    if delta > 180.0:
        delta -= 360.0
    elif delta <= -180.0:
        delta += 360.0
    return delta


def enu_from_geodetic(origin: GeoPoint, point: GeoPoint) -> Tuple[float, float, float]:
    """Equirectangular local-tangent conversion of ``point`` about ``origin``."""
    dlat = point.lat - origin.lat
    dlon = _lon_delta(point.lon, origin.lon)
    limit = GeoConstants.MAX_OFFSET_DEG
    if abs(dlat) >= limit or abs(dlon) >= limit:
        raise GeoDomainError(Messages.GEO_DOMAIN, dlat=dlat, dlon=dlon)

    radius = GeoConstants.EARTH_RADIUS_M
    x = math.radians(dlon) * radius * math.cos(math.radians(origin.lat))
    y = math.radians(dlat) * radius
    z = point.alt - origin.alt
    return x, y, z


def geodetic_from_enu(origin: GeoPoint, x: float, y: float, z: float = 0.0) -> GeoPoint:
    """Inverse of :func:`enu_from_geodetic`."""
    radius = GeoConstants.EARTH_RADIUS_M
    cos_lat = math.cos(math.radians(origin.lat))
    if cos_lat < 1e-9:
        raise GeoDomainError(Messages.GEO_DOMAIN, lat=origin.lat)
    dlat = math.degrees(y / radius)
    dlon = math.degrees(x / (radius * cos_lat))
    limit = GeoConstants.MAX_OFFSET_DEG
    if abs(dlat) >= limit or abs(dlon) >= limit:
        raise GeoDomainError(Messages.GEO_DOMAIN, dlat=dlat, dlon=dlon)
    lon = origin.lon + dlon
    if lon > 180.0:
        lon -= 360.0
    elif lon < -180.0:
        lon += 360.0
    return GeoPoint(lat=origin.lat + dlat, lon=lon, alt=origin.alt + z)


def enu_yaw_from_compass(heading_deg: float) -> float:
    """Compass heading (clockwise from North, degrees) to ENU yaw (radians)."""
    return wrap_angle(math.pi / 2.0 - math.radians(heading_deg))


def compass_from_enu_yaw(yaw: float) -> float:
    """ENU yaw to compass heading in [0, 360)."""
    heading = math.degrees(math.pi / 2.0 - yaw) % 360.0
    return 0.0 if heading >= 360.0 else heading


def _rot_x(angle: float) -> Tuple[FloatArray, FloatArray]:
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    drot = np.array([[0.0, 0.0, 0.0], [0.0, -s, -c], [0.0, c, -s]])
    return rot, drot


def _rot_y(angle: float) -> Tuple[FloatArray, FloatArray]:
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    drot = np.array([[-s, 0.0, c], [0.0, 0.0, 0.0], [-c, 0.0, -s]])
    return rot, drot


def _rot_z(angle: float) -> Tuple[FloatArray, FloatArray]:
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    drot = np.array([[-s, -c, 0.0], [c, -s, 0.0], [0.0, 0.0, 0.0]])
    return rot, drot


def rotation_world_from_body(roll: float, pitch: float, yaw: float) -> FloatArray:
    """ZYX rotation taking body-frame vectors into the ENU frame."""
    rx, _ = _rot_x(roll)
    ry, _ = _rot_y(pitch)
    rz, _ = _rot_z(yaw)
    return rz @ ry @ rx


def rotation_partials(
    roll: float, pitch: float, yaw: float
) -> Tuple[FloatArray, FloatArray, FloatArray]:
    """Partial derivatives of the world-from-body rotation w.r.t. roll, pitch, yaw."""
    rx, drx = _rot_x(roll)
    ry, dry = _rot_y(pitch)
    rz, drz = _rot_z(yaw)
    return rz @ ry @ drx, rz @ dry @ rx, drz @ ry @ rx


def _check_pitch(pitch: float) -> None:
    if abs(pitch) > AngleConstants.MAX_PITCH:
        raise SingularityError(Messages.PITCH_SINGULARITY, pitch=pitch)


def euler_rate_matrix(roll: float, pitch: float) -> FloatArray:
    """Map body rates (p, q, r) to ZYX Euler angle rates."""
    _check_pitch(pitch)
    cr, sr = math.cos(roll), math.sin(roll)
    cp, tp = math.cos(pitch), math.tan(pitch)
    return np.array(
        [
            [1.0, sr * tp, cr * tp],
            [0.0, cr, -sr],
            [0.0, sr / cp, cr / cp],
        ]
    )


def euler_rate_partials(roll: float, pitch: float) -> Tuple[FloatArray, FloatArray]:
    """Partial derivatives of :func:`euler_rate_matrix` w.r.t. roll and pitch."""
    _check_pitch(pitch)
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp, tp = math.cos(pitch), math.sin(pitch), math.tan(pitch)
    sec2 = 1.0 / (cp * cp)
    d_roll = np.array(
        [
            [0.0, cr * tp, -sr * tp],
            [0.0, -sr, -cr],
            [0.0, cr / cp, -sr / cp],
        ]
    )
    d_pitch = np.array(
        [
            [0.0, sr * sec2, cr * sec2],
            [0.0, 0.0, 0.0],
            [0.0, sr * sp * sec2, cr * sp * sec2],
        ]
    )
    return d_roll, d_pitch
