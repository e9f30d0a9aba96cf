"""Closed-form control laws built on CLF data.

PMN, Sontag, Lin-Sontag, the unified κ-controller with its named
strategies, the optimization-based formula and the inverse-optimality
weights. Every function is pure; incompatible states yield outputs
flagged infeasible, inadmissible κ or m raise ClfDomainError.
"""

from __future__ import annotations

from dataclasses import replace
import logging
import math

import numpy as np

from .clf_core import check_compatibility, kappa_interval
from .const import KAPPA_TOL, REGION_TIE_TOL
from .exceptions import ClfDomainError
from .models import (
    Branch,
    ClfData,
    ControllerOutput,
    FloatArray,
    InverseOptimalData,
    KappaInterval,
    ScalingStrategy,
    StrategyKind,
)

_LOGGER = logging.getLogger(__name__)


def _zero_control(data: ClfData) -> FloatArray:
    return np.zeros(data.m_ctrl)


def _require_nonzero_b(data: ClfData, what: str) -> None:
    if data.b_is_zero:
        raise ClfDomainError(
            f"{what} is undefined where b = 0",
            {"a": data.a, "b_norm": data.b_norm},
        )


def _interval_error(kappa: float, interval: KappaInterval, data: ClfData) -> ClfDomainError:
    return ClfDomainError(
        f"kappa={kappa:.12g} outside K(x)=[{interval.lo:.12g}, {interval.hi:.12g}]",
        {
            "kappa": kappa,
            "lo": interval.lo,
            "hi": interval.hi,
            "a": data.a,
            "b_norm": data.b_norm,
            "sigma_stg": data.sigma_stg,
        },
    )


# ==============================================================================
# Pointwise min-norm and Sontag
# ==============================================================================


def pmn(data: ClfData, sigma: float) -> ControllerOutput:
    """Pointwise min-norm law for a + σ + b·u ≤ 0 (no input bound)."""
    offset = data.a + sigma
    if data.b_is_zero or offset < 0:
        return ControllerOutput(
            u=_zero_control(data), kappa=None, branch=Branch.PMN_ZERO, bounded=False
        )
    return ControllerOutput(
        u=-(offset / data.b_norm_sq) * data.b,
        kappa=None,
        branch=Branch.PMN_ACTIVE,
        bounded=False,
    )


def sontag(data: ClfData) -> ControllerOutput:
    """Sontag's universal formula, i.e. PMN with σ = σ_Stg."""
    output = pmn(data, data.sigma_stg)
    branch = (
        Branch.SONTAG_NONZERO
        if output.branch is Branch.PMN_ACTIVE
        else Branch.SONTAG_ZERO
    )
    return replace(output, branch=branch)


# ==============================================================================
# Lin-Sontag and the unified controller
# ==============================================================================


def kappa_lin_sontag(data: ClfData) -> float:
    """Scaling term that turns the unified law into Lin-Sontag's formula."""
    _require_nonzero_b(data, "kappa_lin_sontag")
    root = math.sqrt(1.0 + data.b_norm_sq)
    sigma = data.sigma_stg
    return (sigma - data.a * root) / (sigma * (1.0 + root))


def lin_sontag(data: ClfData) -> ControllerOutput:
    """Lin-Sontag's norm-bounded universal formula."""
    feasible = check_compatibility(data)
    if not feasible:
        _LOGGER.debug("Lin-Sontag at incompatible state a=%s |b|=%s", data.a, data.b_norm)
    if data.b_is_zero:
        return ControllerOutput(
            u=_zero_control(data), kappa=None, branch=Branch.ZERO_B, feasible=feasible
        )
    root = math.sqrt(1.0 + data.b_norm_sq)
    gain = (data.a + data.sigma_stg) / (data.b_norm_sq * (1.0 + root))
    return ControllerOutput(
        u=-gain * data.b,
        kappa=kappa_lin_sontag(data),
        branch=Branch.UNIFIED,
        feasible=feasible,
    )


def unified(data: ClfData, kappa: float) -> ControllerOutput:
    """Unified controller u = -((a + κσ)/‖b‖²)·bᵀ for κ ∈ K(x).

    Raises:
        ClfDomainError: kappa outside K(x) while b ≠ 0.
    """
    if data.b_is_zero:
        return ControllerOutput(u=_zero_control(data), kappa=None, branch=Branch.ZERO_B)
    interval = kappa_interval(data)
    if not interval.contains(kappa):
        raise _interval_error(kappa, interval, data)
    gain = (data.a + kappa * data.sigma_stg) / data.b_norm_sq
    return ControllerOutput(u=-gain * data.b, kappa=kappa, branch=Branch.UNIFIED)


def _kappa_one(data: ClfData, interval: KappaInterval, absolute: bool) -> tuple[float, bool]:
    if absolute:
        raw = (abs(data.a) - data.a) / data.sigma_stg
    else:
        raw = -2.0 * data.a / data.sigma_stg
    if interval.is_empty or interval.contains(raw, tol=0.0):
        return raw, False
    clamped = interval.clamp(raw)
    _LOGGER.debug("kappa_one %.12g clamped to %.12g", raw, clamped)
    return clamped, abs(clamped - raw) > KAPPA_TOL


def _kappa_two(data: ClfData) -> float:
    root = math.sqrt(1.0 + data.b_norm_sq)
    sigma = data.sigma_stg
    numerator = data.b_norm_sq * root - data.a * sigma
    return numerator / (sigma**2 + data.b_norm_sq * (1.0 + root))


def _strategy_value(strategy: ScalingStrategy) -> float:
    if strategy.value is None:
        raise ClfDomainError(f"strategy {strategy.kind.value} requires a value")
    return strategy.value


def resolve_kappa(data: ClfData, strategy: ScalingStrategy) -> tuple[float, bool]:
    """Evaluate a strategy's κ and report whether clamping was applied.

    Returns:
        (kappa, clamped)

    Raises:
        ClfDomainError: b = 0, or the resulting κ lies outside K(x).
    """
    _require_nonzero_b(data, f"strategy {strategy.label}")
    interval = kappa_interval(data)
    kind = strategy.kind
    clamped = False

    if kind is StrategyKind.LIN_SONTAG:
        kappa = kappa_lin_sontag(data)
    elif kind in (StrategyKind.KAPPA_ONE, StrategyKind.KAPPA_ONE_ABS):
        kappa, clamped = _kappa_one(data, interval, kind is StrategyKind.KAPPA_ONE_ABS)
    elif kind is StrategyKind.KAPPA_TWO:
        kappa = _kappa_two(data)
    elif kind is StrategyKind.KAPPA_THREE:
        kappa_one, clamped = _kappa_one(data, interval, absolute=False)
        kappa = 0.5 * (kappa_one + _kappa_two(data))
    elif kind is StrategyKind.CONSTANT:
        kappa = _strategy_value(strategy)
    else:
        output = opt_universal(data, _strategy_value(strategy))
        kappa = 1.0 if output.kappa is None else output.kappa

    if not interval.contains(kappa):
        raise _interval_error(kappa, interval, data)
    return kappa, clamped


def kappa_strategy(data: ClfData, strategy: ScalingStrategy) -> float:
    """κ chosen by a named strategy at this state."""
    kappa, _ = resolve_kappa(data, strategy)
    return kappa


# ==============================================================================
# Optimization-based formula
# ==============================================================================


def minimum_m(data: ClfData) -> float:
    """Smallest admissible weight m at this state, sqrt(1 + ‖b‖²)."""
    return math.sqrt(1.0 + data.b_norm_sq)


def joint_objective(u: FloatArray, kappa: float, m: float) -> float:
    """½(‖u‖² + m(1 - κ)²)."""
    return 0.5 * (float(u @ u) + m * (1.0 - kappa) ** 2)


def clf_rate(data: ClfData, u: FloatArray) -> float:
    """V̇ = a + b·u for the applied input."""
    return data.a + float(data.b @ u)


def opt_region(data: ClfData, m: float) -> tuple[Branch, float]:
    """Classify the state into S1, S2 or S4.

    Returns:
        (branch, margin) where margin = m‖b‖² + σ² - m·a‖b‖ - m·σ‖b‖.
        A margin within REGION_TIE_TOL of zero routes to S2.
    """
    if data.b_is_zero:
        return Branch.ZERO_B, 0.0
    b_norm = data.b_norm
    sigma = data.sigma_stg
    margin = m * data.b_norm_sq + sigma**2 - m * data.a * b_norm - m * sigma * b_norm
    if margin > REGION_TIE_TOL:
        return Branch.INTERIOR, margin
    return Branch.BOUNDARY, margin


def opt_universal(data: ClfData, m: float) -> ControllerOutput:
    """Closed-form minimizer of ½(‖u‖² + m(1-κ)²) under the tightened CLF and ball constraints.

    Raises:
        ClfDomainError: m below sqrt(1 + ‖b‖²), where κ could turn negative.
    """
    m_min = minimum_m(data)
    if m < m_min:
        raise ClfDomainError(
            f"m={m:g} below the state's bound {m_min:.12g}",
            {"m": m, "m_min": m_min, "x": data.x.tolist()},
        )

    feasible = check_compatibility(data)
    region, _ = opt_region(data, m)
    if region is Branch.ZERO_B:
        return ControllerOutput(
            u=_zero_control(data), kappa=1.0, branch=region, feasible=feasible
        )

    sigma = data.sigma_stg
    offset = data.a + sigma  # never negative: σ_Stg ≥ |a|
    if region is Branch.INTERIOR:
        denom = sigma**2 + m * data.b_norm_sq
        u = -(m * offset / denom) * data.b
        kappa = 1.0 - offset * sigma / denom
    else:
        u = -data.b / data.b_norm
        kappa = (data.b_norm - data.a) / sigma
    return ControllerOutput(u=u, kappa=kappa, branch=region, feasible=feasible)


def opt_multipliers(data: ClfData, m: float) -> tuple[float, float]:
    """KKT multipliers (λ1, λ2) of the joint problem at the closed-form optimum."""
    output = opt_universal(data, m)
    if output.branch is Branch.ZERO_B or output.kappa is None:
        return 0.0, 0.0
    lambda1 = m * (1.0 - output.kappa) / data.sigma_stg
    if output.branch is Branch.BOUNDARY:
        return lambda1, max(0.0, 0.5 * (lambda1 * data.b_norm - 1.0))
    return lambda1, 0.0


# ==============================================================================
# Stability margin and inverse optimality
# ==============================================================================


def margin_lower_bound(data: ClfData, kappa: float) -> float | None:
    """Smallest ξ for which (1+ξ)·u_unified still decreases V.

    Returns -κσ/(a + κσ); None when every ξ works (b = 0 or a + κσ ≤ 0).
    The inequality at the bound itself is strict, so admissible ξ lie
    strictly above the returned value.
    """
    if data.b_is_zero:
        return None
    offset = data.a + kappa * data.sigma_stg
    if offset <= 0:
        return None
    return -kappa * data.sigma_stg / offset


def inverse_optimal_data(data: ClfData, kappa: float) -> InverseOptimalData:
    """Weights γ(x), R(x) = I/(2γ) and l(x) for which the unified law solves the HJB equation.

    Raises:
        ClfDomainError: kappa outside K(x) while b ≠ 0.
    """
    if data.b_is_zero:
        l_value = -data.a
        return InverseOptimalData(
            gamma_weight=0.0, r_scale=None, l_value=l_value, hjb_residual=l_value + data.a
        )

    interval = kappa_interval(data)
    if not interval.contains(kappa):
        raise _interval_error(kappa, interval, data)

    gamma = max((data.a + kappa * data.sigma_stg) / data.b_norm_sq, 0.0)
    r_inverse = 2.0 * gamma
    l_value = -data.a + 0.25 * r_inverse * data.b_norm_sq

    # u* = -½R⁻¹bᵀ, so ¼·b R⁻¹ bᵀ = -½·b·u*
    u_star = -0.5 * r_inverse * data.b
    residual = l_value + data.a + 0.5 * float(data.b @ u_star)

    return InverseOptimalData(
        gamma_weight=gamma,
        r_scale=1.0 / (2.0 * gamma) if gamma > 0 else None,
        l_value=l_value,
        hjb_residual=residual,
    )
