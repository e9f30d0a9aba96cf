"""Domain models for unified_clf.

Frozen dataclasses throughout; arrays are never mutated after construction.
"""

from .control import (
    ActiveSet,
    Branch,
    ControllerOutput,
    InverseOptimalData,
    ScalingStrategy,
    StrategyKind,
)
from .scenario import (
    ControllerSpec,
    ControllerSummary,
    LawKind,
    RunSummary,
    ScenarioConfig,
)
from .system import (
    Clf,
    ClfData,
    ControlAffineSystem,
    FloatArray,
    KappaInterval,
)
from .trajectory import SimConfig, Trajectory, TrajectorySample

__all__ = [
    # System
    "ControlAffineSystem",
    "Clf",
    "ClfData",
    "KappaInterval",
    "FloatArray",
    # Control
    "ActiveSet",
    "Branch",
    "ControllerOutput",
    "InverseOptimalData",
    "ScalingStrategy",
    "StrategyKind",
    # Scenario
    "ControllerSpec",
    "ControllerSummary",
    "LawKind",
    "RunSummary",
    "ScenarioConfig",
    # Trajectory
    "SimConfig",
    "Trajectory",
    "TrajectorySample",
]
