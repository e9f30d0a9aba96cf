"""Simulation configuration and trajectory models.

A Trajectory stores its samples column-wise as numpy arrays; the
`samples` view rebuilds per-step records on demand.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from ..const import BOUND_TOL, DEFAULT_M
from ..exceptions import ClfConfigurationError
from .scenario import ControllerSpec
from .system import FloatArray


@dataclass(frozen=True, eq=False)
class SimConfig:
    """Fixed-step simulation settings for one controller."""

    t_end: float
    h: float
    x0: FloatArray
    controller: ControllerSpec
    m: float = DEFAULT_M

    def __post_init__(self) -> None:
        """Validate step and horizon."""
        if self.t_end <= 0 or self.h <= 0:
            raise ClfConfigurationError("t_end and h must be positive")
        if self.h > self.t_end:
            raise ClfConfigurationError(f"h={self.h} exceeds t_end={self.t_end}")
        if self.controller.xi < -1.0:
            raise ClfConfigurationError(f"xi={self.controller.xi} is below -1")
        object.__setattr__(self, "x0", np.asarray(self.x0, dtype=float))

    @property
    def steps(self) -> int:
        """Number of integration steps."""
        return int(round(self.t_end / self.h))

    @property
    def margin_xi(self) -> float:
        """Input scaling ξ of the stability-margin wrapper."""
        return self.controller.xi


@dataclass(frozen=True, eq=False)
class TrajectorySample:
    """One recorded step."""

    t: float
    x: FloatArray
    u: FloatArray
    kappa: float | None
    v: float
    cost_rate: float
    cost_cum: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Closed-loop time series for one controller.

    kappas holds NaN where the law carries no κ. lie_a, lie_bu and
    sigmas keep a(x), b(x)·u and σ_Stg(x) for pointwise CLF checks.
    """

    controller: str
    times: FloatArray
    states: FloatArray
    controls: FloatArray
    kappas: FloatArray
    values: FloatArray
    cost_rates: FloatArray
    cost_cum: FloatArray
    lie_a: FloatArray
    lie_bu: FloatArray
    sigmas: FloatArray
    carries_kappa: bool = True
    bounded: bool = True
    error: str | None = None

    def __len__(self) -> int:
        return int(self.times.shape[0])

    @property
    def truncated(self) -> bool:
        """True when a controller error stopped the run early."""
        return self.error is not None

    @property
    def samples(self) -> Iterator[TrajectorySample]:
        """Iterate per-step records."""
        for k in range(len(self)):
            kappa = float(self.kappas[k])
            yield TrajectorySample(
                t=float(self.times[k]),
                x=self.states[k],
                u=self.controls[k],
                kappa=None if np.isnan(kappa) else kappa,
                v=float(self.values[k]),
                cost_rate=float(self.cost_rates[k]),
                cost_cum=float(self.cost_cum[k]),
            )

    @property
    def input_norms(self) -> FloatArray:
        """‖u‖ at every sample."""
        return np.linalg.norm(self.controls, axis=1)

    @property
    def max_input_norm(self) -> float:
        """max_t ‖u(t)‖."""
        return float(self.input_norms.max()) if len(self) else 0.0

    @property
    def final_state_norm(self) -> float:
        """‖x(t_final)‖."""
        return float(np.linalg.norm(self.states[-1])) if len(self) else 0.0

    @property
    def total_cost(self) -> float:
        """Cumulative cost at the last sample."""
        return float(self.cost_cum[-1]) if len(self) else 0.0

    @property
    def bound_violations(self) -> int:
        """Rows with ‖u‖ > 1 + BOUND_TOL."""
        return int(np.count_nonzero(self.input_norms > 1.0 + BOUND_TOL))
