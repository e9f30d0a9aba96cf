"""Control law protocol.

Every law (closed-form formula, strategy-driven unified law, or a
wrapper around another law) maps per-state Lie data to an output.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Protocol, runtime_checkable

if TYPE_CHECKING:
    from ..models.control import ControllerOutput
    from ..models.system import ClfData


@runtime_checkable
class IControlLaw(Protocol):
    """Protocol for state-feedback laws u = k(x) built on CLF data."""

    @property
    def name(self) -> str:
        """Human-readable law name."""
        ...

    @property
    def bounded(self) -> bool:
        """True when the law guarantees ‖u‖ ≤ 1 on compatible states."""
        ...

    @property
    def carries_kappa(self) -> bool:
        """True when outputs report a scaling term κ."""
        ...

    def evaluate(self, data: ClfData) -> ControllerOutput:
        """Evaluate the law.

        Args:
            data: Lie data at the current state.

        Returns:
            Control output with branch tag and flags.

        Raises:
            ClfDomainError: κ or m outside the admissible range at this state.
        """
        ...
