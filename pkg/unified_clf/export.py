"""CSV and JSON writers for simulation output.

CSV columns: t, x1..xn, u1..um, kappa, V, cost_rate, cost_cum. Numbers
use 17 significant digits; an absent κ is an empty field.
"""

from __future__ import annotations

from collections.abc import Mapping
import csv
import json
import logging
import math
from pathlib import Path

from .const import CSV_PRECISION, SUMMARY_FILENAME
from .models import RunSummary, Trajectory

_LOGGER = logging.getLogger(__name__)

_NUMBER_FORMAT = f".{CSV_PRECISION}g"


def _fmt(value: float) -> str:
    return format(float(value), _NUMBER_FORMAT)


def csv_header(n: int, m_ctrl: int) -> list[str]:
    """Column names for a trajectory with n states and m_ctrl inputs."""
    return (
        ["t"]
        + [f"x{i + 1}" for i in range(n)]
        + [f"u{j + 1}" for j in range(m_ctrl)]
        + ["kappa", "V", "cost_rate", "cost_cum"]
    )


def write_trajectory_csv(trajectory: Trajectory, path: Path) -> Path:
    """Write one trajectory; returns the path written."""
    n = trajectory.states.shape[1]
    m_ctrl = trajectory.controls.shape[1]
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(csv_header(n, m_ctrl))
        for k in range(len(trajectory)):
            kappa = float(trajectory.kappas[k])
            writer.writerow(
                [_fmt(trajectory.times[k])]
                + [_fmt(v) for v in trajectory.states[k]]
                + [_fmt(v) for v in trajectory.controls[k]]
                + ["" if math.isnan(kappa) else _fmt(kappa)]
                + [
                    _fmt(trajectory.values[k]),
                    _fmt(trajectory.cost_rates[k]),
                    _fmt(trajectory.cost_cum[k]),
                ]
            )
    _LOGGER.debug("Wrote %d rows to %s", len(trajectory), path)
    return path


def write_summary_json(summary: RunSummary, path: Path) -> Path:
    """Write summary.json with sorted keys."""
    path.write_text(
        json.dumps(summary.as_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return path


def write_run(
    out_dir: Path,
    trajectories: Mapping[str, Trajectory],
    summary: RunSummary,
) -> list[Path]:
    """Write one CSV per controller plus summary.json into out_dir."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [
        write_trajectory_csv(trajectory, out_dir / f"{label}.csv")
        for label, trajectory in trajectories.items()
    ]
    written.append(write_summary_json(summary, out_dir / SUMMARY_FILENAME))
    _LOGGER.info("Wrote %d files to %s", len(written), out_dir)
    return written
