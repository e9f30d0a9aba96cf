"""Lie-derivative data, compatibility test and the admissible κ-interval.

Pure functions of immutable inputs. Systems and CLFs arrive as evaluator
callables (see catalogue); nothing here differentiates symbolically.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging
import math

import numpy as np
from numpy.typing import ArrayLike

from .const import (
    DEFAULT_BOX,
    DEFAULT_GAMMA,
    DRIFT_ORIGIN_TOL,
    FD_REL_TOL,
    FD_STEP,
)
from .exceptions import ClfConfigurationError, ClfDomainError
from .models import Clf, ClfData, ControlAffineSystem, FloatArray, KappaInterval

_LOGGER = logging.getLogger(__name__)

# Radii used to spot-check radial growth of V along rays
RAY_RADII: tuple[float, ...] = (0.5, 1.0, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class ClfDiagnostics:
    """Findings of a system/CLF spot check; empty issues means it passed."""

    issues: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        """True when no issue was found."""
        return not self.issues

    def merged(self, other: ClfDiagnostics) -> ClfDiagnostics:
        """Combine two reports."""
        return ClfDiagnostics(issues=self.issues + other.issues)


def sigma_sontag(a: float, b_norm_sq: float) -> float:
    """Sontag's term sqrt(a² + ‖b‖⁴)."""
    if b_norm_sq < 0:
        raise ClfDomainError(
            f"b_norm_sq must be non-negative, got {b_norm_sq}",
            {"b_norm_sq": b_norm_sq},
        )
    return math.hypot(a, b_norm_sq)


def build_clf_data(a: float, b: ArrayLike, x: ArrayLike | None = None) -> ClfData:
    """Assemble ClfData from raw Lie derivatives.

    Args:
        a: L_f V at the state.
        b: L_g V at the state (row vector, length m_ctrl).
        x: The state itself; empty when only (a, b) matter.
    """
    b_arr = np.atleast_1d(np.asarray(b, dtype=float))
    x_arr = np.zeros(0) if x is None else np.asarray(x, dtype=float)
    b_norm_sq = float(b_arr @ b_arr)
    return ClfData(
        x=x_arr,
        a=float(a),
        b=b_arr,
        b_norm_sq=b_norm_sq,
        sigma_stg=sigma_sontag(float(a), b_norm_sq),
    )


def evaluate_state(
    system: ControlAffineSystem,
    clf: Clf,
    x: ArrayLike,
) -> tuple[ClfData, FloatArray, FloatArray]:
    """Evaluate f(x), g(x) and the Lie data in one pass.

    Returns:
        (data, f(x), g(x)) so the simulator can reuse the vector fields.

    Raises:
        ClfConfigurationError: Any evaluator output has the wrong shape.
    """
    x_arr = np.asarray(x, dtype=float)
    if x_arr.shape != (system.n,):
        raise ClfConfigurationError(
            f"State has shape {x_arr.shape}, system {system.name!r} expects ({system.n},)"
        )
    fx = np.asarray(system.drift(x_arr), dtype=float)
    gx = np.asarray(system.input_map(x_arr), dtype=float)
    grad = np.asarray(clf.gradient(x_arr), dtype=float)

    if fx.shape != (system.n,):
        raise ClfConfigurationError(f"drift returned shape {fx.shape}")
    if gx.shape != (system.n, system.m_ctrl):
        raise ClfConfigurationError(
            f"input_map returned shape {gx.shape}, expected ({system.n}, {system.m_ctrl})"
        )
    if grad.shape != (system.n,):
        raise ClfConfigurationError(
            f"CLF {clf.name!r} gradient has shape {grad.shape}, expected ({system.n},)"
        )

    return build_clf_data(float(grad @ fx), grad @ gx, x_arr), fx, gx


def lie_data(system: ControlAffineSystem, clf: Clf, x: ArrayLike) -> ClfData:
    """Compute a = ∇V·f, b = ∇V·g, ‖b‖² and σ_Stg at x."""
    data, _, _ = evaluate_state(system, clf, x)
    return data


def check_compatibility(data: ClfData, gamma: float = DEFAULT_GAMMA) -> bool:
    """Whether the CLF condition and ‖u‖ ≤ γ can hold together: γ‖b‖ ≥ a."""
    if gamma <= 0:
        raise ClfDomainError(f"gamma must be positive, got {gamma}", {"gamma": gamma})
    return gamma * data.b_norm >= data.a


def kappa_interval(data: ClfData) -> KappaInterval:
    """Admissible κ range K(x) = [max(-a/σ, 0), (‖b‖ - a)/σ]."""
    if data.b_is_zero:
        return KappaInterval.undefined()
    sigma = data.sigma_stg
    return KappaInterval(
        lo=max(-data.a / sigma, 0.0),
        hi=(data.b_norm - data.a) / sigma,
        defined=True,
    )


def finite_difference_gradient(
    clf: Clf,
    x: ArrayLike,
    step: float = FD_STEP,
) -> FloatArray:
    """Central finite-difference gradient of V at x."""
    x_arr = np.asarray(x, dtype=float)
    grad = np.empty_like(x_arr)
    for i, offset in enumerate(step * np.eye(x_arr.shape[0])):
        grad[i] = (clf.value(x_arr + offset) - clf.value(x_arr - offset)) / (2 * step)
    return grad


def validate_system(system: ControlAffineSystem) -> ClfDiagnostics:
    """Spot-check f(0) = 0 and evaluator dimensions."""
    issues: list[str] = []
    origin = np.zeros(system.n)
    f0 = np.asarray(system.drift(origin), dtype=float)
    g0 = np.asarray(system.input_map(origin), dtype=float)

    if f0.shape != (system.n,):
        issues.append(f"drift returned shape {f0.shape}")
    elif np.linalg.norm(f0) > DRIFT_ORIGIN_TOL:
        issues.append(f"drift(0) = {f0.tolist()} is not zero")
    if g0.shape != (system.n, system.m_ctrl):
        issues.append(f"input_map returned shape {g0.shape}")

    for issue in issues:
        _LOGGER.warning("System %s: %s", system.name, issue)
    return ClfDiagnostics(issues=tuple(issues))


def validate_clf(
    system: ControlAffineSystem,
    clf: Clf,
    rng: np.random.Generator,
    samples: int = 100,
    box: float = DEFAULT_BOX,
    ray_radii: Sequence[float] = RAY_RADII,
) -> ClfDiagnostics:
    """Spot-check the CLF on random states of [-box, box]^n.

    Checks V(0) = 0, ∇V(0) = 0, V > 0 away from the origin, the analytic
    gradient against central differences, a(x) < 0 wherever b(x) = 0, and
    monotone growth of V along rays (radial unboundedness is an assumption
    and only probed, never proven).
    """
    issues: list[str] = []
    origin = np.zeros(system.n)

    if abs(clf.value(origin)) > DRIFT_ORIGIN_TOL:
        issues.append(f"V(0) = {clf.value(origin)} is not zero")
    if np.linalg.norm(clf.gradient(origin)) > DRIFT_ORIGIN_TOL:
        issues.append("gradient(0) is not zero")

    for x in rng.uniform(-box, box, size=(samples, system.n)):
        if np.linalg.norm(x) == 0.0:
            continue
        if clf.value(x) <= 0:
            issues.append(f"V({x.tolist()}) is not positive")

        grad = np.asarray(clf.gradient(x), dtype=float)
        fd = finite_difference_gradient(clf, x)
        scale = max(float(np.linalg.norm(grad)), 1.0)
        if np.linalg.norm(fd - grad) > FD_REL_TOL * scale:
            issues.append(f"gradient mismatch at {x.tolist()}")

        data = lie_data(system, clf, x)
        if data.b_is_zero and data.a >= 0:
            issues.append(f"invalid CLF: b = 0 and a = {data.a} >= 0 at {x.tolist()}")

    directions = rng.normal(size=(8, system.n))
    for direction in directions:
        direction /= np.linalg.norm(direction)
        values = [clf.value(r * direction) for r in ray_radii]
        if any(v1 >= v2 for v1, v2 in zip(values, values[1:])):
            issues.append(f"V does not grow along ray {direction.tolist()}")

    for issue in issues:
        _LOGGER.warning("CLF %s: %s", clf.name, issue)
    return ClfDiagnostics(issues=tuple(issues))
