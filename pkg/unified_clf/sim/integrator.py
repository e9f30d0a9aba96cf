"""Fixed-step RK4 simulation of the closed loop ẋ = f(x) + g(x)·u(x).

The control law is re-evaluated at every Runge-Kutta stage state
(continuous feedback, not zero-order hold). Samples are recorded at
t_k = k·h for k = 0..steps.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
import logging
from typing import NamedTuple

import numpy as np

from ..clf_core import evaluate_state
from ..const import CLF_DECREASE_SLACK, DECREASE_MIN_NORM, ORIGIN_TOL, PROGRESS_STRIDE
from ..exceptions import ClfDivergenceError, ClfDomainError
from ..models import (
    Branch,
    Clf,
    ClfData,
    ControlAffineSystem,
    ControllerOutput,
    FloatArray,
    SimConfig,
    Trajectory,
)
from ..protocols import IControlLaw, ITrajectoryObserver
from .laws import build_law

_LOGGER = logging.getLogger(__name__)


class _StageEval(NamedTuple):
    data: ClfData
    output: ControllerOutput
    xdot: FloatArray


def _evaluate(
    system: ControlAffineSystem,
    clf: Clf,
    law: IControlLaw,
    x: FloatArray,
) -> _StageEval:
    data, fx, gx = evaluate_state(system, clf, x)
    if float(np.linalg.norm(x)) <= ORIGIN_TOL:
        output = ControllerOutput(u=np.zeros(system.m_ctrl), kappa=None, branch=Branch.ORIGIN)
    else:
        output = law.evaluate(data)
    return _StageEval(data, output, fx + gx @ output.u)


def cost_rate(u: FloatArray, kappa: float | None, m: float, carries_kappa: bool) -> float:
    """½(‖u‖² + m(1-κ)²); κ-free laws and absent κ count as κ = 1."""
    rate = float(u @ u)
    if carries_kappa and kappa is not None:
        rate += m * (1.0 - kappa) ** 2
    return 0.5 * rate


def simulate(
    system: ControlAffineSystem,
    clf: Clf,
    cfg: SimConfig,
    *,
    law: IControlLaw | None = None,
    observers: Iterable[ITrajectoryObserver] = (),
) -> Trajectory:
    """Integrate the closed loop and record every step.

    Args:
        system: Plant.
        clf: Lyapunov function used by the law.
        cfg: Horizon, step, initial state and controller.
        law: Pre-built law; built from cfg.controller when omitted.
        observers: Receive progress and completion callbacks.

    Returns:
        The trajectory. A ClfDomainError raised by the law truncates it
        and is recorded in Trajectory.error.

    Raises:
        ClfDivergenceError: The state became non-finite.
        ClfConfigurationError: x0 or evaluator shapes do not match the system.
    """
    if law is None:
        law = build_law(cfg.controller, cfg.m)
    observers = tuple(observers)
    label = cfg.controller.name
    steps = cfg.steps
    h = cfg.h
    carries_kappa = law.carries_kappa

    rows = steps + 1
    times = h * np.arange(rows, dtype=float)
    states = np.zeros((rows, system.n))
    controls = np.zeros((rows, system.m_ctrl))
    kappas = np.full(rows, np.nan)
    values = np.zeros(rows)
    rates = np.zeros(rows)
    cost_cum = np.zeros(rows)
    lie_a = np.zeros(rows)
    lie_bu = np.zeros(rows)
    sigmas = np.zeros(rows)

    _LOGGER.info("Simulating %s for %d steps (h=%g)", label, steps, h)
    x = np.array(cfg.x0, dtype=float)
    recorded = 0
    error: str | None = None
    try:
        for k in range(rows):
            stage = _evaluate(system, clf, law, x)
            output = stage.output
            states[k] = x
            controls[k] = output.u
            if output.kappa is not None:
                kappas[k] = output.kappa
            values[k] = clf.value(x)
            rates[k] = cost_rate(output.u, output.kappa, cfg.m, carries_kappa)
            if k:
                cost_cum[k] = cost_cum[k - 1] + 0.5 * h * (rates[k - 1] + rates[k])
            lie_a[k] = stage.data.a
            lie_bu[k] = float(stage.data.b @ output.u)
            sigmas[k] = stage.data.sigma_stg
            recorded = k + 1

            if k % PROGRESS_STRIDE == 0:
                for observer in observers:
                    observer.on_progress(label, float(times[k]), x)
            if k == steps:
                break

            k1 = stage.xdot
            k2 = _evaluate(system, clf, law, x + 0.5 * h * k1).xdot
            k3 = _evaluate(system, clf, law, x + 0.5 * h * k2).xdot
            k4 = _evaluate(system, clf, law, x + h * k3).xdot
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise ClfDivergenceError(label, float(times[k + 1]))
    except ClfDomainError as err:
        error = str(err)
        _LOGGER.warning(
            "Controller %s stopped at t=%.6g: %s", label, recorded * h, error
        )

    trajectory = Trajectory(
        controller=label,
        times=times[:recorded],
        states=states[:recorded],
        controls=controls[:recorded],
        kappas=kappas[:recorded],
        values=values[:recorded],
        cost_rates=rates[:recorded],
        cost_cum=cost_cum[:recorded],
        lie_a=lie_a[:recorded],
        lie_bu=lie_bu[:recorded],
        sigmas=sigmas[:recorded],
        carries_kappa=carries_kappa,
        bounded=law.bounded,
        error=error,
    )
    for observer in observers:
        observer.on_finished(trajectory)
    return trajectory


# ==============================================================================
# CLF decrease check
# ==============================================================================


@dataclass(frozen=True)
class DecreaseViolation:
    """One failed check at sample index."""

    index: int
    t: float
    kind: str  # "value" or "pointwise"
    excess: float


@dataclass(frozen=True)
class DecreaseReport:
    """Violations found by check_clf_decrease."""

    controller: str
    violations: tuple[DecreaseViolation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, kind: str) -> int:
        """Number of violations of one kind."""
        return sum(1 for v in self.violations if v.kind == kind)


def check_clf_decrease(traj: Trajectory, clf: Clf) -> DecreaseReport:
    """Check V(x_{k+1}) < V(x_k) off the origin and a + b·u ≤ -κσ pointwise.

    The pointwise check only applies to samples that carry κ.
    """
    violations: list[DecreaseViolation] = []
    values = np.array([clf.value(x) for x in traj.states]) if len(traj) else np.zeros(0)
    norms = np.linalg.norm(traj.states, axis=1) if len(traj) else np.zeros(0)

    for k in range(len(traj) - 1):
        if norms[k] > DECREASE_MIN_NORM and not values[k + 1] < values[k]:
            violations.append(
                DecreaseViolation(k, float(traj.times[k]), "value", values[k + 1] - values[k])
            )

    if traj.carries_kappa:
        for k in range(len(traj)):
            kappa = traj.kappas[k]
            if np.isnan(kappa):
                continue
            excess = traj.lie_a[k] + traj.lie_bu[k] + kappa * traj.sigmas[k]
            if excess > CLF_DECREASE_SLACK:
                violations.append(
                    DecreaseViolation(k, float(traj.times[k]), "pointwise", float(excess))
                )

    if violations:
        _LOGGER.debug("%s: %d CLF decrease violations", traj.controller, len(violations))
    return DecreaseReport(controller=traj.controller, violations=tuple(violations))
