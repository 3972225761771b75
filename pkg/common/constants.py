"""
Shared constants for the USV turning-trial toolkit.
"""

import math
from enum import Enum, IntEnum
from typing import List


# Process exit codes
class ExitCode(int, Enum):
    OK = 0
    VALIDATION = 2
    PROTOCOL = 3
    IO = 4


# Turn sides
class TurnSide(str, Enum):
    PORT = "port"
    STARBOARD = "starboard"

    @property
    def sign(self) -> float:
        """+1 for a counterclockwise (port) turn, -1 for starboard."""
        return 1.0 if self is TurnSide.PORT else -1.0


# Which trajectory a metric or controller reads
class HeadingSource(str, Enum):
    TRUTH = "truth"
    ESTIMATE = "estimate"


class MeasurementSource(str, Enum):
    GPS = "gps"
    IMU = "imu"


class MeasurementOutcome(str, Enum):
    FUSED = "fused"
    STALE = "stale"
    GATED = "gated"
    REJECTED = "rejected"
    DROPPED = "dropped"


class HeadingConvention(str, Enum):
    COMPASS = "compass"
    ENU = "enu"


class Datum(str, Enum):
    WGS84 = "WGS84"


# Filter state layout: [x, y, z, roll, pitch, yaw, u, v, w, p, q, r]
class StateIndex(IntEnum):
    X = 0
    Y = 1
    Z = 2
    ROLL = 3
    PITCH = 4
    YAW = 5
    U = 6
    V = 7
    W = 8
    P = 9
    Q = 10
    R = 11


STATE_DIM = 12
STATE_LABELS: List[str] = [index.name.lower() for index in StateIndex]
POSITION_INDICES: List[int] = [StateIndex.X, StateIndex.Y, StateIndex.Z]
ANGLE_INDICES: List[int] = [StateIndex.ROLL, StateIndex.PITCH, StateIndex.YAW]
LINEAR_VELOCITY_INDICES: List[int] = [StateIndex.U, StateIndex.V, StateIndex.W]
ANGULAR_VELOCITY_INDICES: List[int] = [StateIndex.P, StateIndex.Q, StateIndex.R]


# Geodesy
class GeoConstants:
    EARTH_RADIUS_M = 6378137.0
    MAX_OFFSET_DEG = 1.0


# Angle utilities
class AngleConstants:
    TWO_PI = 2.0 * math.pi
    PITCH_SINGULARITY_MARGIN = 0.01
    MAX_PITCH = math.pi / 2.0 - PITCH_SINGULARITY_MARGIN


# Vessel defaults (tunable; not measured on the physical craft)
class VesselDefaults:
    LENGTH_M = 0.72
    BEAM_M = 0.41
    MASS_KG = 4.5
    YAW_INERTIA = 0.18
    THRUSTER_HALFSPAN_M = 0.16
    MAX_THRUST_N = 35.0
    DEADBAND = 0.05
    THRUST_EXPONENT = 2.0
    REVERSE_THRUST_RATIO = 0.78
    MAX_DT_S = 0.1
    DEFAULT_DT_S = 0.02


# Sensor defaults
class SensorDefaults:
    GPS_RATE_HZ = 1.0
    GPS_STD_M = 1.5
    GPS_RTK_STD_M = 0.02
    IMU_RATE_HZ = 50.0
    IMU_YAW_STD_RAD = 0.035
    IMU_RATE_STD = 0.01
    GYRO_BIAS_WALK_STD = 1e-4
    MIN_POSITION_STD_M = 1e-3
    MIN_ANGLE_STD_RAD = 1e-4


# Filter defaults
class FilterDefaults:
    Q_POSITION = 1e-4
    Q_ANGLE = 1e-4
    Q_LINEAR_VELOCITY = 1e-2
    Q_ANGULAR_VELOCITY = 1e-2
    P0_POSITION = 10.0
    P0_ANGLE = 0.5
    P0_VELOCITY = 1.0
    STALE_TOLERANCE_S = 0.5
    GATE_SIGMA = 3.0
    SYMMETRY_TOLERANCE = 1e-9


# Trial protocol
class ProtocolConstants:
    MIN_STEADY_HOLD_S = 60.0
    CALIBRATION_THROTTLE = 0.85
    APPROACH_SPEED_RATIO = 0.90
    CALIBRATION_TOLERANCE = 0.005
    HEADING_HOLD_GAIN = 0.8
    DEFAULT_TURN_STEER = 0.5
    DEFAULT_HEADING_CHANGE = 3.0 * math.pi
    STEADY_SPEED_TOLERANCE = 1e-4
    STEADY_SPEED_WINDOW_S = 5.0
    STEADY_SPEED_MAX_TIME_S = 600.0
    POST_TURN_SAMPLES = 2


# IMO turning-ability criteria (multiples of vessel length)
class ImoConstants:
    ADVANCE_FACTOR = 4.5
    TACTICAL_DIAMETER_FACTOR = 5.0


# Turning-circle heading marks, radians of heading change from execute
class TurnMarks:
    QUARTER = math.pi / 2.0
    HALF = math.pi
    FULL = 2.0 * math.pi
    ONE_AND_HALF = 3.0 * math.pi


# Log schema
SCHEMA_VERSION = "1"
LOG_FILENAME = "trial.jsonl"
CONFIG_FILENAME = "config.resolved.json"
METRICS_CSV_FILENAME = "metrics.csv"
COMPLIANCE_FILENAME = "compliance.json"
CAMPAIGN_CSV_FILENAME = "campaign.csv"
CAMPAIGN_TEXT_FILENAME = "campaign.txt"
PLOT_FILENAMES: List[str] = ["trajectory.svg", "heading.svg", "speed.svg"]


# Logging Constants
class LoggingConstants:
    DEFAULT_LOG_LEVEL = "INFO"
    DEFAULT_LOG_FORMAT = "json"
    LOG_FORMAT = "%(message)s"


# User-facing messages
class Messages:
    GEO_DOMAIN = "Point lies outside the local tangent approximation domain"
    HEADING_DISCONTINUITY = "Heading series has a step too large to unwrap"
    PITCH_SINGULARITY = "Pitch is too close to +/-90 degrees"
    NON_FINITE_STATE = "Simulation state is not finite"
    DT_OUT_OF_RANGE = "Integration step is out of range"
    NO_STEADY_SPEED = "Surge speed did not converge"
    CALIBRATION_FAILED = "Approach throttle bisection did not converge"
    TRIAL_INCOMPLETE = "Heading change target not reached within max_duration"
    INVALID_FIX = "GPS fix is flagged invalid"
    GATE_REJECTED = "Measurement rejected by the innovation gate"
    STALE_MEASUREMENT = "Measurement is older than the filter time"
    SINGULAR_INNOVATION = "Innovation covariance is not invertible"
    MISSING_TURN = "Trial log does not reach the required heading change"
    ZERO_APPROACH_SPEED = "Approach speed is zero or missing"
    NO_EXECUTE = "Trial log has no execute index"
    SCHEMA_MISMATCH = "Unsupported log schema version"
    MALFORMED_RECORD = "Malformed log record"
    NON_MONOTONE_TIME = "Timestamps are not strictly increasing"
    MISSING_CONVENTION = "Heading convention and datum must be declared"
    NO_SENSOR_DATA = "Log carries no sensor samples to replay"
