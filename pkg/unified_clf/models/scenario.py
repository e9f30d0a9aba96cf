"""Scenario configuration and run summary models."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from ..const import DEFAULT_GAMMA
from .control import ScalingStrategy, StrategyKind


class LawKind(str, Enum):
    """Named control laws a scenario can compare."""

    SONTAG = "sontag"
    SONTAG_CLIPPED = "sontag_clipped"  # diagnostic only: Sontag clipped onto the ball
    LIN_SONTAG = "lin_sontag"
    UNIFIED = "unified"


@dataclass(frozen=True)
class ControllerSpec:
    """One compared controller: a law, its κ strategy and the margin scale ξ."""

    law: LawKind
    strategy: ScalingStrategy | None = None
    xi: float = 0.0
    label: str | None = None

    @property
    def name(self) -> str:
        """Label used for CSV files and summary keys."""
        if self.label:
            return self.label
        parts = [self.law.value]
        if self.strategy is not None:
            parts.append(self.strategy.label)
        if self.xi:
            parts.append(f"xi_{self.xi:g}")
        return "_".join(parts)

    @property
    def carries_kappa(self) -> bool:
        """True for laws defined through a scaling term."""
        return self.law in (LawKind.LIN_SONTAG, LawKind.UNIFIED)

    @property
    def is_opt_based(self) -> bool:
        """True for the optimization-based formula."""
        return (
            self.strategy is not None
            and self.strategy.kind is StrategyKind.OPT_BASED
        )


@dataclass(frozen=True)
class ScenarioConfig:
    """A simulation scenario: system, CLF, initial state and compared controllers."""

    name: str
    system_id: str
    clf_id: str
    x0: tuple[float, ...]
    t_end: float
    h: float
    m: float
    controllers: tuple[ControllerSpec, ...]
    gamma: float = DEFAULT_GAMMA


@dataclass(frozen=True)
class ControllerSummary:
    """Per-controller figures reported in summary.json."""

    max_input_norm: float
    final_state_norm: float
    total_cost: float
    clf_violations: int
    bound_violations: int
    samples: int
    truncated: bool = False
    error: str | None = None

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready dict."""
        return {
            "max_input_norm": self.max_input_norm,
            "final_state_norm": self.final_state_norm,
            "total_cost": self.total_cost,
            "clf_violations": self.clf_violations,
            "bound_violations": self.bound_violations,
            "samples": self.samples,
            "truncated": self.truncated,
            "error": self.error,
        }


@dataclass(frozen=True)
class RunSummary:
    """Summary of one scenario run, keyed by controller label."""

    scenario: str
    controllers: dict[str, ControllerSummary] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready dict."""
        return {
            "scenario": self.scenario,
            "controllers": {
                label: summary.as_dict()
                for label, summary in self.controllers.items()
            },
        }
