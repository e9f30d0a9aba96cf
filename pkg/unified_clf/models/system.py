"""System, CLF and per-state Lie data models.

Frozen dataclasses: a system or CLF is defined once and never mutated.
Array fields disable generated equality, arrays don't compare to bool.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

from ..const import KAPPA_TOL, ZERO_B_TOL

FloatArray: TypeAlias = NDArray[np.float64]
VectorField: TypeAlias = Callable[[FloatArray], FloatArray]
ScalarField: TypeAlias = Callable[[FloatArray], float]


@dataclass(frozen=True, eq=False)
class ControlAffineSystem:
    """Dynamics ẋ = f(x) + g(x)u with state dimension n and input dimension m_ctrl."""

    name: str
    n: int
    m_ctrl: int
    drift: VectorField
    input_map: VectorField
    description: str = ""

    def closed_loop(self, x: FloatArray, u: FloatArray) -> FloatArray:
        """Evaluate f(x) + g(x)u."""
        return self.drift(x) + self.input_map(x) @ u


@dataclass(frozen=True, eq=False)
class Clf:
    """Lyapunov candidate V and its gradient ∂V/∂x."""

    name: str
    value: ScalarField
    gradient: VectorField


@dataclass(frozen=True, eq=False)
class ClfData:
    """Per-state bundle (x, a, b, ‖b‖², σ_Stg) consumed by every formula.

    a is L_f V, b is the row vector L_g V, and sigma_stg is
    sqrt(a² + ‖b‖⁴). Built by clf_core, never by hand.
    """

    x: FloatArray
    a: float
    b: FloatArray
    b_norm_sq: float
    sigma_stg: float

    @property
    def b_norm(self) -> float:
        """Euclidean norm of b."""
        return float(np.sqrt(self.b_norm_sq))

    @property
    def b_is_zero(self) -> bool:
        """True when ‖b‖ is below the zero threshold."""
        return self.b_norm <= ZERO_B_TOL

    @property
    def m_ctrl(self) -> int:
        """Input dimension."""
        return int(self.b.shape[0])


@dataclass(frozen=True)
class KappaInterval:
    """Admissible scaling interval K(x) = [lo, hi]; undefined when b = 0."""

    lo: float
    hi: float
    defined: bool

    @property
    def is_empty(self) -> bool:
        """True when the interval is undefined or lo > hi."""
        return not self.defined or self.lo > self.hi

    def contains(self, kappa: float, tol: float = KAPPA_TOL) -> bool:
        """Check membership with slack on both ends."""
        return self.defined and self.lo - tol <= kappa <= self.hi + tol

    def clamp(self, kappa: float) -> float:
        """Project kappa into [lo, hi]."""
        return min(max(kappa, self.lo), self.hi)

    @classmethod
    def undefined(cls) -> KappaInterval:
        """Interval for states with b = 0."""
        return cls(lo=0.0, hi=0.0, defined=False)
