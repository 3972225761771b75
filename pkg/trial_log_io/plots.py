"""
SVG plots of a trial: trajectory, heading and speed against time.

Output is byte-stable for identical inputs: a fixed SVG hash salt, text
kept as text, and no creation date in the file metadata.
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import matplotlib
import numpy as np
import structlog
from matplotlib.axes import Axes
from matplotlib.figure import Figure

from common.constants import PLOT_FILENAMES, HeadingSource
from common.errors import HeadingDiscontinuityError, LogIOError, MetricsError
from common.geo import unwrap_heading, wrap_angle
from maneuver_metrics.models import TurningCircleMetrics
from maneuver_metrics.turning import TurnCrossings, turning_crossings
from trial_log_io.schema import TrialLog

logger = structlog.get_logger(__name__)

SVG_RC = {
    "svg.hashsalt": "usv-trials",
    "svg.fonttype": "none",
    "path.simplify": False,
}
MARKER_STYLE = {"quarter": ("quarter_turn", "s"), "half": ("half_turn", "^")}


def _format_point(x: float, y: float) -> str:
    return f"({x:.3f}, {y:.3f})"


def _save(fig: Figure, path: Path) -> Path:
    try:
        with matplotlib.rc_context(SVG_RC):
            fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise LogIOError(str(exc), path=path) from exc
    return path


def _crossings(log: TrialLog) -> Optional[TurnCrossings]:
    try:
        return turning_crossings(log, HeadingSource.TRUTH)
    except (MetricsError, HeadingDiscontinuityError) as exc:
        logger.info("Plotting without turn markers", reason=exc.message)
        return None


def _heading_degrees(source: HeadingSource, yaw: np.ndarray) -> Tuple[np.ndarray, bool]:
    try:
        return np.degrees(unwrap_heading(yaw)), True
    except HeadingDiscontinuityError as exc:
        logger.warning(
            "Plotting wrapped heading", source=source.value, index=exc.context["index"]
        )
        return np.degrees(wrap_angle(yaw)), False


def _trajectory(
    log: TrialLog,
    tracks: Dict[HeadingSource, Dict[str, np.ndarray]],
    crossings: Optional[TurnCrossings],
    metrics: Optional[TurningCircleMetrics],
) -> Figure:
    fig = Figure(figsize=(7.0, 7.0))
    ax: Axes = fig.add_subplot(1, 1, 1)
    truth = tracks[HeadingSource.TRUTH]
    ax.plot(
        truth["x"],
        truth["y"],
        color="tab:blue",
        linewidth=1.2,
        label="truth",
        gid="truth",
    )
    if HeadingSource.ESTIMATE in tracks:
        est = tracks[HeadingSource.ESTIMATE]
        ax.plot(
            est["x"],
            est["y"],
            color="tab:orange",
            linewidth=0.8,
            linestyle="--",
            label="EKF estimate",
            gid="estimate",
        )

    if crossings is not None:
        points = [("execute", "o", crossings.x_execute, crossings.y_execute)]
        for name, (gid, marker) in MARKER_STYLE.items():
            crossing = crossings.marks[name]
            points.append((gid, marker, crossing.x, crossing.y))
        for gid, marker, x, y in points:
            ax.plot([x], [y], marker=marker, color="black", linestyle="none", gid=gid)
            ax.annotate(
                _format_point(x, y),
                (x, y),
                textcoords="offset points",
                xytext=(6, 6),
                fontsize=8,
                gid=f"{gid}_label",
            )

    title = f"Turning circle ({log.metadata.side.value})"
    if metrics is not None:
        title += (
            f"\nadvance {metrics.advance:.2f} m, transfer {metrics.transfer:.2f} m,"
            f" TD {metrics.tactical_diameter:.2f} m"
        )
    ax.set_title(title)
    ax.set_xlabel("East (m)")
    ax.set_ylabel("North (m)")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True)
    ax.legend(loc="best")
    return fig


def _heading(
    log: TrialLog,
    tracks: Dict[HeadingSource, Dict[str, np.ndarray]],
    crossings: Optional[TurnCrossings],
) -> Figure:
    fig = Figure(figsize=(8.0, 4.0))
    ax: Axes = fig.add_subplot(1, 1, 1)
    unwrapped = True
    for source, style in ((HeadingSource.TRUTH, "-"), (HeadingSource.ESTIMATE, "--")):
        if source not in tracks:
            continue
        track = tracks[source]
        heading, continuous = _heading_degrees(source, track["yaw"])
        unwrapped = unwrapped and continuous
        ax.plot(
            track["t"],
            heading,
            linestyle=style,
            label=source.value,
            gid=f"{source.value}_heading",
        )
    if crossings is not None:
        ax.axvline(crossings.t_execute, color="gray", linestyle=":", gid="execute_time")
        for name, (gid, _) in MARKER_STYLE.items():
            ax.axvline(
                crossings.marks[name].t, color="gray", linestyle=":", gid=f"{gid}_time"
            )
    ax.set_xlabel("Time (s)")
    ax.set_ylabel("Heading, unwrapped (deg)" if unwrapped else "Heading (deg)")
    ax.grid(True)
    ax.legend(loc="best")
    return fig


def _speed(
    log: TrialLog,
    tracks: Dict[HeadingSource, Dict[str, np.ndarray]],
    crossings: Optional[TurnCrossings],
) -> Figure:
    fig = Figure(figsize=(8.0, 4.0))
    ax: Axes = fig.add_subplot(1, 1, 1)
    for source, style in ((HeadingSource.TRUTH, "-"), (HeadingSource.ESTIMATE, "--")):
        if source in tracks:
            track = tracks[source]
            ax.plot(
                track["t"],
                track["speed"],
                linestyle=style,
                label=source.value,
                gid=f"{source.value}_speed",
            )
    approach = log.metadata.approach_speed
    if approach is not None and approach > 0.0:
        ax.axhline(
            approach,
            color="black",
            linestyle=":",
            label="approach speed",
            gid="approach_speed",
        )
    if crossings is not None:
        ax.axvspan(
            crossings.marks["full"].t,
            crossings.marks["one_and_half"].t,
            color="tab:green",
            alpha=0.15,
            label="steady-turn window",
            gid="steady_turn_window",
        )
    ax.set_xlabel("Time (s)")
    ax.set_ylabel("Speed (m/s)")
    ax.grid(True)
    ax.legend(loc="best")
    return fig


def render_plots(
    log: TrialLog,
    metrics: Optional[TurningCircleMetrics],
    out_dir: Union[str, Path],
) -> List[Path]:
    """Write trajectory, heading and speed SVGs into ``out_dir``."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise LogIOError(str(exc), path=out_dir) from exc

    tracks = {HeadingSource.TRUTH: log.track(HeadingSource.TRUTH)}
    if log.has_estimates():
        tracks[HeadingSource.ESTIMATE] = log.track(HeadingSource.ESTIMATE)
    crossings = _crossings(log)

    figures = [
        _trajectory(log, tracks, crossings, metrics),
        _heading(log, tracks, crossings),
        _speed(log, tracks, crossings),
    ]
    paths = [_save(fig, out_dir / name) for fig, name in zip(figures, PLOT_FILENAMES)]
    logger.info("Plots written", out_dir=str(out_dir), count=len(paths))
    return paths

