"""Unified norm-bounded CLF controllers.

Closed-form stabilizing laws for control-affine systems under a unit
input bound: Sontag, Lin-Sontag, the κ-parametrized unified family and
the optimization-based formula, with numeric oracles, a fixed-step
simulator and seeded property suites.
"""

from .catalogue import get_clf, get_system
from .clf_core import check_compatibility, kappa_interval, lie_data
from .config import load_scenario, parse_scenario
from .exceptions import (
    ClfConfigurationError,
    ClfDivergenceError,
    ClfDomainError,
    ClfError,
    ClfInfeasibleError,
    ClfUnsupportedError,
)
from .formulas import (
    inverse_optimal_data,
    kappa_strategy,
    lin_sontag,
    opt_universal,
    pmn,
    sontag,
    unified,
)
from .models import (
    Clf,
    ClfData,
    ControlAffineSystem,
    ControllerOutput,
    ScalingStrategy,
    StrategyKind,
)
from .runner import ScenarioRunner
from .sim import simulate

__version__ = "0.1.0"

__all__ = [
    # Core
    "check_compatibility",
    "get_clf",
    "get_system",
    "kappa_interval",
    "lie_data",
    # Formulas
    "inverse_optimal_data",
    "kappa_strategy",
    "lin_sontag",
    "opt_universal",
    "pmn",
    "sontag",
    "unified",
    # Models
    "Clf",
    "ClfData",
    "ControlAffineSystem",
    "ControllerOutput",
    "ScalingStrategy",
    "StrategyKind",
    # Running
    "ScenarioRunner",
    "load_scenario",
    "parse_scenario",
    "simulate",
    # Errors
    "ClfConfigurationError",
    "ClfDivergenceError",
    "ClfDomainError",
    "ClfError",
    "ClfInfeasibleError",
    "ClfUnsupportedError",
]
