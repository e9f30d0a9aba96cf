"""Numeric oracle for the joint (u, κ) problem.

Minimizes ½(‖u‖² + m(1-κ)²) subject to a + b·u + κσ ≤ 0 and ‖u‖ ≤ 1
by golden-section search on κ. For fixed κ the inner problem is the
minimum-norm point of a halfspace, rejected when it leaves the unit
ball, so the outer profile is convex and extended-valued.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
import logging
import math

import numpy as np

from ..clf_core import check_compatibility, kappa_interval
from ..const import (
    ORACLE_ACTIVE_TOL,
    ORACLE_KAPPA_MARGIN,
    ORACLE_MAX_ITER,
    ORACLE_WIDTH_TOL,
)
from ..exceptions import ClfDomainError, ClfInfeasibleError
from ..models import ActiveSet, ClfData, FloatArray
from .projection import project_onto_halfspace

_LOGGER = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi

# Slack on ‖u‖² ≤ 1 when testing the inner solution
BALL_SLACK = 1e-12

# κ within this of the ball edge of K(x) counts as on the sphere
BALL_EDGE_SLACK = 10.0 * ORACLE_WIDTH_TOL


@dataclass(frozen=True, eq=False)
class JointQpSolution:
    """Oracle optimum of the joint problem with recovered multipliers."""

    u: FloatArray
    kappa: float
    objective: float
    lambda1: float
    lambda2: float
    converged: bool
    active_set: ActiveSet
    iterations: int = 0


@dataclass(frozen=True)
class KktResiduals:
    """Residuals of the KKT system at a candidate optimum."""

    stationarity_u: float
    stationarity_kappa: float
    clf_constraint: float  # a + b·u + κσ, feasible when ≤ 0
    ball_constraint: float  # ‖u‖² - 1, feasible when ≤ 0
    slackness_clf: float
    slackness_ball: float

    @property
    def worst(self) -> float:
        """Largest violation across all conditions."""
        return max(
            self.stationarity_u,
            self.stationarity_kappa,
            max(self.clf_constraint, 0.0),
            max(self.ball_constraint, 0.0),
            self.slackness_clf,
            self.slackness_ball,
        )


def golden_section(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = ORACLE_WIDTH_TOL,
    max_iter: int = ORACLE_MAX_ITER,
) -> tuple[float, float, int]:
    """Shrink [lo, hi] around the minimum of a unimodal fn.

    Ties move the upper end down, so +inf plateaus on the right are
    left behind.

    Returns:
        (lo, hi, iterations) of the final bracket.
    """
    a, b = min(lo, hi), max(lo, hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    iterations = 0
    while b - a > tol and iterations < max_iter:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
        iterations += 1
    return a, b, iterations


def inner_min_norm(data: ClfData, kappa: float) -> FloatArray | None:
    """Minimum-norm u for fixed κ, or None when it leaves the unit ball."""
    origin = np.zeros(data.m_ctrl)
    u = project_onto_halfspace(origin, data.b, -(data.a + kappa * data.sigma_stg))
    if u is None or float(u @ u) > 1.0 + BALL_SLACK:
        return None
    return u


def _profile(data: ClfData, kappa: float, m: float) -> float:
    u = inner_min_norm(data, kappa)
    if u is None:
        return math.inf
    return 0.5 * (float(u @ u) + m * (1.0 - kappa) ** 2)


def ball_is_active(data: ClfData, u: FloatArray, kappa: float) -> bool:
    """Whether the inner solution sits on the unit sphere.

    Checked on ‖u‖² and on the distance from κ to the ball edge of K(x),
    which the golden-section bracket approaches to within its width.
    """
    if float(u @ u) >= 1.0 - ORACLE_ACTIVE_TOL:
        return True
    return kappa_interval(data).hi - kappa <= BALL_EDGE_SLACK


def recover_multipliers(
    data: ClfData,
    u: FloatArray,
    kappa: float,
    m: float,
) -> tuple[float, float, ActiveSet]:
    """Multipliers from the two stationarity equations.

    λ1 follows from m(κ - 1) + λ1σ = 0. λ2 is zero off the sphere; on it,
    λ2 is the least-squares solution of u(1 + 2λ2) = -λ1 bᵀ.
    """
    if data.b_is_zero or data.sigma_stg == 0.0:
        return 0.0, 0.0, ActiveSet.NONE
    lambda1 = max(0.0, m * (1.0 - kappa) / data.sigma_stg)
    if lambda1 <= ORACLE_ACTIVE_TOL:
        return lambda1, 0.0, ActiveSet.NONE
    if not ball_is_active(data, u, kappa):
        return lambda1, 0.0, ActiveSet.CLF_ONLY

    scale = -lambda1 * float(data.b @ u) / float(u @ u)
    lambda2 = max(0.0, 0.5 * (scale - 1.0))
    return lambda1, lambda2, ActiveSet.CLF_AND_BALL


def kkt_residuals(data: ClfData, solution: JointQpSolution, m: float) -> KktResiduals:
    """Evaluate stationarity, feasibility and complementary slackness."""
    u, kappa = solution.u, solution.kappa
    lam1, lam2 = solution.lambda1, solution.lambda2
    clf_value = data.a + float(data.b @ u) + kappa * data.sigma_stg
    ball_value = float(u @ u) - 1.0
    grad_u = u + lam1 * data.b + 2.0 * lam2 * u
    return KktResiduals(
        stationarity_u=float(np.linalg.norm(grad_u)),
        stationarity_kappa=abs(m * (kappa - 1.0) + lam1 * data.sigma_stg),
        clf_constraint=clf_value,
        ball_constraint=ball_value,
        slackness_clf=abs(lam1 * clf_value),
        slackness_ball=abs(lam2 * ball_value),
    )


def solve_joint(data: ClfData, m: float) -> JointQpSolution:
    """Solve the joint problem numerically.

    Raises:
        ClfDomainError: m ≤ 0.
        ClfInfeasibleError: The state is not compatible with ‖u‖ ≤ 1.
    """
    if m <= 0:
        raise ClfDomainError(f"m must be positive, got {m}", {"m": m})
    if not check_compatibility(data):
        raise ClfInfeasibleError(
            f"Incompatible state: a={data.a:.6g} > |b|={data.b_norm:.6g}"
        )

    if data.b_is_zero:
        # κ = 1 satisfies a + κσ ≤ 0 whenever a ≤ 0, so the unconstrained optimum is feasible
        return JointQpSolution(
            u=np.zeros(data.m_ctrl),
            kappa=1.0,
            objective=0.0,
            lambda1=0.0,
            lambda2=0.0,
            converged=True,
            active_set=ActiveSet.NONE,
        )

    interval = kappa_interval(data)
    margin = ORACLE_KAPPA_MARGIN * max(interval.hi - interval.lo, 1.0)
    lo, hi, iterations = golden_section(
        lambda k: _profile(data, k, m),
        interval.lo - margin,
        interval.hi + margin,
    )

    candidates = [(k, _profile(data, k, m)) for k in (lo, 0.5 * (lo + hi), hi)]
    kappa, objective = min(candidates, key=lambda item: item[1])
    u = inner_min_norm(data, kappa)
    if u is None or not math.isfinite(objective):
        raise ClfInfeasibleError("Oracle found no feasible kappa")

    lambda1, lambda2, active_set = recover_multipliers(data, u, kappa, m)
    converged = hi - lo <= ORACLE_WIDTH_TOL
    if not converged:
        _LOGGER.warning("Golden-section stopped after %d iterations", iterations)
    _LOGGER.debug(
        "solve_joint kappa=%.12g objective=%.12g iterations=%d", kappa, objective, iterations
    )
    return JointQpSolution(
        u=u,
        kappa=kappa,
        objective=objective,
        lambda1=lambda1,
        lambda2=lambda2,
        converged=converged,
        active_set=active_set,
        iterations=iterations,
    )
