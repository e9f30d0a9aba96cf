"""Run summary assembly."""

from __future__ import annotations

from collections.abc import Mapping

from .models import Clf, ControllerSummary, RunSummary, Trajectory
from .sim import check_clf_decrease


def summarize_trajectory(trajectory: Trajectory, clf: Clf) -> ControllerSummary:
    """Figures for one controller."""
    report = check_clf_decrease(trajectory, clf)
    return ControllerSummary(
        max_input_norm=trajectory.max_input_norm,
        final_state_norm=trajectory.final_state_norm,
        total_cost=trajectory.total_cost,
        clf_violations=len(report.violations),
        bound_violations=trajectory.bound_violations,
        samples=len(trajectory),
        truncated=trajectory.truncated,
        error=trajectory.error,
    )


def build_summary(scenario: str, trajectories: Mapping[str, Trajectory], clf: Clf) -> RunSummary:
    """Summarize every controller of a run, keeping the given order."""
    return RunSummary(
        scenario=scenario,
        controllers={
            label: summarize_trajectory(trajectory, clf)
            for label, trajectory in trajectories.items()
        },
    )
