"""Scaling strategies and controller outputs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from ..const import BOUND_TOL, CONF_KIND, CONF_VALUE
from ..exceptions import ClfConfigurationError
from .system import FloatArray


class StrategyKind(str, Enum):
    """Named choices of the scaling term κ."""

    LIN_SONTAG = "lin_sontag"
    KAPPA_ONE = "kappa_one"  # -2a/σ, clamped into K(x)
    KAPPA_ONE_ABS = "kappa_one_abs"  # (|a| - a)/σ, clamped into K(x)
    KAPPA_TWO = "kappa_two"
    KAPPA_THREE = "kappa_three"  # mean of kappa_one and kappa_two
    CONSTANT = "constant"
    OPT_BASED = "opt_based"


class Branch(str, Enum):
    """Which branch of a control law produced the output."""

    INTERIOR = "S1"
    BOUNDARY = "S2"
    ZERO_B = "S4"
    PMN_ACTIVE = "pmn_active"
    PMN_ZERO = "pmn_zero"
    SONTAG_NONZERO = "sontag_nonzero"
    SONTAG_ZERO = "sontag_zero"
    UNIFIED = "unified"
    ORIGIN = "origin"


class ActiveSet(str, Enum):
    """Constraints active at a joint-problem optimum."""

    CLF_ONLY = "clf_only"
    CLF_AND_BALL = "clf_and_ball"
    NONE = "none"


@dataclass(frozen=True)
class ScalingStrategy:
    """A κ choice; CONSTANT carries c, OPT_BASED carries m."""

    kind: StrategyKind
    value: float | None = None

    def __post_init__(self) -> None:
        """Validate the parameter the kind requires."""
        if self.kind is StrategyKind.CONSTANT:
            if self.value is None or self.value < 0:
                raise ClfConfigurationError("Constant strategy requires c >= 0")
        elif self.kind is StrategyKind.OPT_BASED:
            if self.value is None or self.value <= 0:
                raise ClfConfigurationError("OptBased strategy requires m > 0")

    @property
    def label(self) -> str:
        """Short label used in file names and summaries."""
        if self.value is None:
            return self.kind.value
        return f"{self.kind.value}_{self.value:g}"

    @classmethod
    def constant(cls, c: float) -> ScalingStrategy:
        """Constant κ = c."""
        return cls(kind=StrategyKind.CONSTANT, value=c)

    @classmethod
    def opt_based(cls, m: float) -> ScalingStrategy:
        """κ of the optimization-based formula with weight m."""
        return cls(kind=StrategyKind.OPT_BASED, value=m)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ScalingStrategy:
        """Create from a scenario entry like {"kind": "constant", "value": 0.5}."""
        try:
            kind = StrategyKind(data[CONF_KIND])
        except (KeyError, ValueError) as err:
            raise ClfConfigurationError(f"Unknown strategy: {data!r}") from err
        value = data.get(CONF_VALUE)
        return cls(kind=kind, value=float(value) if value is not None else None)


@dataclass(frozen=True, eq=False)
class ControllerOutput:
    """Result of evaluating a control law at one state.

    kappa is None for laws without a scaling term (Sontag, PMN) and
    for κ-laws at b = 0 where κ is not defined.
    """

    u: FloatArray
    kappa: float | None
    branch: Branch
    feasible: bool = True
    bounded: bool = True
    clamped: bool = False

    @property
    def norm(self) -> float:
        """‖u‖."""
        return float(np.linalg.norm(self.u))

    @property
    def within_bound(self) -> bool:
        """‖u‖ ≤ 1 up to BOUND_TOL."""
        return self.norm <= 1.0 + BOUND_TOL

    def scaled(self, factor: float) -> ControllerOutput:
        """Return a copy with u multiplied by factor."""
        return ControllerOutput(
            u=factor * self.u,
            kappa=self.kappa,
            branch=self.branch,
            feasible=self.feasible,
            bounded=self.bounded and abs(factor) <= 1.0,
            clamped=self.clamped,
        )


@dataclass(frozen=True)
class InverseOptimalData:
    """Weights certifying the unified law as inverse optimal.

    r_scale is the scalar of R(x) = r_scale · I. None marks an
    unconstrained weight (γ = 0), never a numeric infinity.
    """

    gamma_weight: float
    r_scale: float | None
    l_value: float
    hjb_residual: float

    @property
    def r_unconstrained(self) -> bool:
        """True when R(x) has no finite scale."""
        return self.r_scale is None

    @property
    def r_inverse_scale(self) -> float:
        """Scalar of R⁻¹ = 2γ · I (zero when unconstrained)."""
        return 2.0 * self.gamma_weight
