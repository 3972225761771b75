"""
Time-ordered measurement processing: predict to each measurement, then correct.
"""

from typing import Iterable, List, Optional

import structlog
from prometheus_client import Counter

from common.constants import MeasurementOutcome, MeasurementSource
from common.errors import GateRejectedError
from ekf_localization.filter import correct, predict
from ekf_localization.models import EkfState, Measurement, ProcessConfig, StreamStats

logger = structlog.get_logger(__name__)

# Metrics
MEASUREMENT_COUNT = Counter(
    "usv_measurements_total", "Measurements seen by the filter", ["source", "outcome"]
)


class EkfStream:
    """Online filter fed one measurement at a time.

    Measurements older than the filter time by more than
    ``cfg.stale_tolerance`` are dropped; slightly older ones are fused at the
    filter time without rewinding. With the gate enabled a rejected
    measurement leaves the predicted state in place.
    """

    def __init__(
        self,
        init: EkfState,
        cfg: ProcessConfig,
        stats: Optional[StreamStats] = None,
    ) -> None:
        self.state = init
        self.cfg = cfg
        self.stats = stats if stats is not None else StreamStats()

    def _count(self, m: Measurement, outcome: MeasurementOutcome) -> None:
        self.stats.record(m.source, outcome)
        MEASUREMENT_COUNT.labels(source=m.source.value, outcome=outcome.value).inc()

    def record_dropout(self, source: MeasurementSource) -> None:
        """Count a sample the sensor never delivered."""
        self.stats.record(source, MeasurementOutcome.DROPPED)
        MEASUREMENT_COUNT.labels(
            source=source.value, outcome=MeasurementOutcome.DROPPED.value
        ).inc()

    def push(self, m: Measurement) -> Optional[EkfState]:
        """Fuse ``m``; returns the new state, or ``None`` if ``m`` was dropped."""
        lag = self.state.t - m.t
        if lag > self.cfg.stale_tolerance:
            self._count(m, MeasurementOutcome.STALE)
            logger.debug("Dropped stale measurement", source=m.source.value, lag=lag)
            return None

        if lag > 0.0:
            self.stats.late += 1
        else:
            self.state = predict(self.state, m.t - self.state.t, self.cfg)

        gate_sigma = self.cfg.gate_sigma if self.cfg.gate_enabled else None
        try:
            self.state = correct(
                self.state, m, gate_sigma=gate_sigma, tolerance=self.cfg.stale_tolerance
            )
        except GateRejectedError as exc:
            self._count(m, MeasurementOutcome.GATED)
            logger.debug("Measurement gated", **exc.context)
            return self.state

        self._count(m, MeasurementOutcome.FUSED)
        return self.state


def process_stream(
    init: EkfState,
    measurements: Iterable[Measurement],
    cfg: ProcessConfig,
    stats: Optional[StreamStats] = None,
) -> List[EkfState]:
    """Run the filter over a time-ordered stream.

    One state is emitted per measurement that is not dropped as stale.
    """
    stream = EkfStream(init, cfg, stats)
    states: List[EkfState] = []
    for m in measurements:
        state = stream.push(m)
        if state is not None:
            states.append(state)
    return states
