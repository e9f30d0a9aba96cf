"""Exception hierarchy.

Lightweight exceptions shared by every layer. The CLI maps them to
exit codes; the simulator turns domain errors into truncated trajectories.
"""

from __future__ import annotations

from typing import Any


class ClfError(Exception):
    """Base exception for unified_clf errors."""

    def __init__(self, message: str, code: int | None = None) -> None:
        super().__init__(message)
        self.code = code


class ClfConfigurationError(ClfError):
    """Inconsistent dimensions, unknown catalogue entry, or invalid scenario."""

    def __init__(self, message: str = "Invalid configuration") -> None:
        super().__init__(message, code=2)


class ClfDomainError(ClfError):
    """An argument lies outside the domain where a formula is defined."""

    def __init__(
        self,
        message: str,
        diagnostic: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message)
        self.diagnostic: dict[str, Any] = diagnostic or {}


class ClfInfeasibleError(ClfError):
    """The optimization problem has no feasible point at this state."""

    def __init__(self, message: str = "Infeasible state") -> None:
        super().__init__(message)


class ClfDivergenceError(ClfError):
    """Simulation produced a non-finite state."""

    def __init__(self, controller: str, time: float) -> None:
        super().__init__(
            f"Controller {controller!r} diverged at t={time:.6g}", code=3
        )
        self.controller = controller
        self.time = time


class ClfUnsupportedError(ClfError):
    """Requested operation is not supported for these dimensions."""
