"""
Turning-circle metric, compliance and campaign report types.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd
from pydantic import BaseModel, Field, computed_field, model_validator

from common.constants import HeadingSource, ImoConstants, TurnSide
from common.errors import LogIOError

METRIC_COLUMNS = [
    "advance",
    "transfer",
    "tactical_diameter",
    "speed_loss_pct",
    "t90",
    "t180",
]


class TurningCircleMetrics(BaseModel):
    """Distances in metres, times in seconds from the execute instant."""

    side: TurnSide
    source: HeadingSource = HeadingSource.TRUTH
    advance: float = Field(ge=0.0)
    transfer: float = Field(ge=0.0)
    tactical_diameter: float = Field(ge=0.0)
    speed_loss_pct: float
    t90: float = Field(gt=0.0)
    t180: float = Field(gt=0.0)
    # Attitude excursions of the estimate over the whole trial
    max_abs_roll: Optional[float] = None
    max_abs_pitch: Optional[float] = None

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_times(self) -> "TurningCircleMetrics":
        if not self.t90 < self.t180:
            raise ValueError("t90 must precede t180")
        return self


class ComplianceReport(BaseModel):
    vessel_length: float = Field(gt=0.0)
    advance: float
    tactical_diameter: float
    advance_limit: float
    td_limit: float
    advance_pass: bool
    td_pass: bool

    model_config = {"frozen": True}

    @classmethod
    def evaluate(
        cls, advance: float, tactical_diameter: float, vessel_length: float
    ) -> "ComplianceReport":
        advance_limit = ImoConstants.ADVANCE_FACTOR * vessel_length
        td_limit = ImoConstants.TACTICAL_DIAMETER_FACTOR * vessel_length
        return cls(
            vessel_length=vessel_length,
            advance=advance,
            tactical_diameter=tactical_diameter,
            advance_limit=advance_limit,
            td_limit=td_limit,
            advance_pass=advance < advance_limit,
            td_pass=tactical_diameter < td_limit,
        )

    @computed_field  # type: ignore[prop-decorator]
    @property
    def compliant(self) -> bool:
        return self.advance_pass and self.td_pass

    @computed_field  # type: ignore[prop-decorator]
    @property
    def verdict(self) -> str:
        """``"TD, A"`` flags as Y/N."""
        flags = (self.td_pass, self.advance_pass)
        return ", ".join("Y" if flag else "N" for flag in flags)


def write_table(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(path, index=False, float_format="%.4f", lineterminator="\n")
    except OSError as exc:
        raise LogIOError(str(exc), path=path) from exc
    return path


@dataclass
class CampaignReport:
    """Per-trial metric table plus per-side mean and spread."""

    table: pd.DataFrame
    summary: pd.DataFrame
    notes: List[str] = field(default_factory=list)

    def to_csv(self, path: Union[str, Path]) -> Path:
        return write_table(self.table, path)

    def to_text(self) -> str:
        parts = [
            "Turning circle results",
            self.table.to_string(index=False, float_format=lambda v: f"{v:.2f}"),
            "",
            "Per-side mean and spread",
            self.summary.to_string(
                index=False, float_format=lambda v: f"{v:.2f}", na_rep="-"
            ),
        ]
        if self.notes:
            parts.append("")
            parts.extend(f"* {note}" for note in self.notes)
        return "\n".join(parts) + "\n"
