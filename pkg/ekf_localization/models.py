"""
Filter state, process configuration and measurement types.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, field_validator, model_validator

from common.constants import (
    STATE_DIM,
    FilterDefaults,
    MeasurementOutcome,
    MeasurementSource,
)

FloatArray = NDArray[np.float64]


def _default_q_diag() -> List[float]:
    return (
        [FilterDefaults.Q_POSITION] * 3
        + [FilterDefaults.Q_ANGLE] * 3
        + [FilterDefaults.Q_LINEAR_VELOCITY] * 3
        + [FilterDefaults.Q_ANGULAR_VELOCITY] * 3
    )


def _default_p0_diag() -> List[float]:
    return (
        [FilterDefaults.P0_POSITION] * 3
        + [FilterDefaults.P0_ANGLE] * 3
        + [FilterDefaults.P0_VELOCITY] * 6
    )


def _is_symmetric_psd(matrix: FloatArray, tol: float = 1e-12) -> bool:
    if not np.allclose(matrix, matrix.T, atol=tol, rtol=0.0):
        return False
    return bool(np.min(np.linalg.eigvalsh(matrix)) >= -tol)


class ProcessConfig(BaseModel):
    """Process noise (per second), initial covariance and stream policy.

    The defaults are a working tuning, not values from any fielded filter.
    """

    q_diag: List[float] = Field(default_factory=_default_q_diag)
    q_matrix: Optional[List[List[float]]] = None
    p0_diag: List[float] = Field(default_factory=_default_p0_diag)
    gate_enabled: bool = False
    gate_sigma: float = Field(default=FilterDefaults.GATE_SIGMA, gt=0.0)
    stale_tolerance: float = Field(default=FilterDefaults.STALE_TOLERANCE_S, ge=0.0)

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("q_diag", "p0_diag")
    @classmethod
    def _check_diag(cls, value: List[float]) -> List[float]:
        if len(value) != STATE_DIM:
            raise ValueError(f"expected {STATE_DIM} diagonal entries")
        if any(entry < 0.0 for entry in value):
            raise ValueError("diagonal entries must be non-negative")
        return value

    @model_validator(mode="after")
    def _check_matrix(self) -> "ProcessConfig":
        if self.q_matrix is not None:
            matrix = np.asarray(self.q_matrix, dtype=float)
            if matrix.shape != (STATE_DIM, STATE_DIM) or not _is_symmetric_psd(matrix):
                raise ValueError("q_matrix must be a symmetric PSD 12x12 matrix")
        return self

    @property
    def Q(self) -> FloatArray:
        if self.q_matrix is not None:
            return np.asarray(self.q_matrix, dtype=float)
        return np.diag(np.asarray(self.q_diag, dtype=float))

    @property
    def P0(self) -> FloatArray:
        return np.diag(np.asarray(self.p0_diag, dtype=float))


@dataclass(frozen=True)
class EkfState:
    """The filter's whole memory: time, 12-vector mean and covariance."""

    t: float
    x: FloatArray
    P: FloatArray

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=float).reshape(STATE_DIM)
        P = np.array(self.P, dtype=float).reshape(STATE_DIM, STATE_DIM)
        x.setflags(write=False)
        P.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "P", P)

    @classmethod
    def initial(
        cls, cfg: ProcessConfig, t: float = 0.0, x0: Optional[Sequence[float]] = None
    ) -> "EkfState":
        x = np.zeros(STATE_DIM) if x0 is None else np.asarray(x0, dtype=float)
        return cls(t=t, x=x, P=cfg.P0)

    def asymmetry(self) -> float:
        return float(np.max(np.abs(self.P - self.P.T)))

    def min_eigenvalue(self) -> float:
        return float(np.min(np.linalg.eigvalsh(self.P)))

    def is_consistent(self, tol: float = FilterDefaults.SYMMETRY_TOLERANCE) -> bool:
        return self.asymmetry() < tol and self.min_eigenvalue() > -tol


@dataclass(frozen=True)
class Measurement:
    """Observation of a subset of the state (the partial-update mask)."""

    t: float
    indices: Tuple[int, ...]
    z: FloatArray
    R: FloatArray
    is_angle: Tuple[bool, ...]
    source: MeasurementSource = MeasurementSource.GPS

    def __post_init__(self) -> None:
        indices = tuple(int(i) for i in self.indices)
        n = len(indices)
        if n == 0 or any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("indices must be non-empty and strictly increasing")
        if indices[0] < 0 or indices[-1] >= STATE_DIM:
            raise ValueError("indices out of state range")
        z = np.array(self.z, dtype=float).reshape(n)
        R = np.array(self.R, dtype=float).reshape(n, n)
        if len(self.is_angle) != n:
            raise ValueError("is_angle must have one flag per component")
        if not np.allclose(R, R.T, atol=1e-12, rtol=0.0):
            raise ValueError("R must be symmetric")
        try:
            np.linalg.cholesky(R)
        except np.linalg.LinAlgError as exc:
            raise ValueError("R must be positive definite") from exc
        z.setflags(write=False)
        R.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "is_angle", tuple(bool(a) for a in self.is_angle))


@dataclass
class StreamStats:
    """Per-outcome measurement counts of one filter run."""

    counts: Dict[str, int] = field(default_factory=dict)
    late: int = 0

    def record(self, source: MeasurementSource, outcome: MeasurementOutcome) -> None:
        key = f"{source.value}.{outcome.value}"
        self.counts[key] = self.counts.get(key, 0) + 1

    def total(self, outcome: MeasurementOutcome) -> int:
        suffix = f".{outcome.value}"
        return sum(count for key, count in self.counts.items() if key.endswith(suffix))

    @property
    def fused(self) -> int:
        return self.total(MeasurementOutcome.FUSED)

    @property
    def stale(self) -> int:
        return self.total(MeasurementOutcome.STALE)

    @property
    def gated(self) -> int:
        return self.total(MeasurementOutcome.GATED)

    @property
    def dropped(self) -> int:
        return self.total(MeasurementOutcome.DROPPED)

    def as_dict(self) -> Dict[str, int]:
        summary = dict(sorted(self.counts.items()))
        summary["late"] = self.late
        return summary
