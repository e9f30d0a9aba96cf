"""Simulation observer protocol."""

from __future__ import annotations

from typing import TYPE_CHECKING, Protocol, runtime_checkable

if TYPE_CHECKING:
    from ..models.system import FloatArray
    from ..models.trajectory import Trajectory


@runtime_checkable
class ITrajectoryObserver(Protocol):
    """Protocol for components following a running simulation.

    Implemented by the runner's progress logger and by tests.
    """

    def on_progress(self, controller: str, t: float, x: FloatArray) -> None:
        """Called every PROGRESS_STRIDE steps.

        Args:
            controller: Label of the simulated controller.
            t: Current time.
            x: Current state.
        """
        ...

    def on_finished(self, trajectory: Trajectory) -> None:
        """Called once when the trajectory is complete or truncated."""
        ...
