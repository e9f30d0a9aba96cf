"""Brute-force grid search over (u, κ) for one- and two-input systems."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..clf_core import check_compatibility, kappa_interval
from ..exceptions import ClfDomainError, ClfInfeasibleError, ClfUnsupportedError
from ..models import ActiveSet, ClfData, FloatArray
from .joint import JointQpSolution

_LOGGER = logging.getLogger(__name__)


def _best_kappa(
    data: ClfData,
    clf_terms: FloatArray,
    kappa_top: float,
    step: float,
) -> FloatArray:
    """Grid κ closest to 1 that keeps a + b·u + κσ ≤ 0, NaN when none does.

    clf_terms holds a + b·u for each candidate u.
    """
    sigma = data.sigma_stg
    if sigma == 0.0:
        limit = np.where(clf_terms <= 0, kappa_top, -np.inf)
    else:
        limit = np.minimum(-clf_terms / sigma, kappa_top)

    below = np.floor(np.minimum(limit, 1.0) / step) * step
    below = np.where(below > limit, below - step, below)
    above = below + step
    # Prefer the grid point just above 1 when it is feasible and closer
    use_above = (above <= limit) & (np.abs(1.0 - above) < np.abs(1.0 - below))
    best = np.where(use_above, above, below)
    return np.where(best >= 0.0, best, np.nan)


def _scan(
    data: ClfData,
    candidates: FloatArray,
    m: float,
    kappa_top: float,
    step: float,
) -> tuple[float, FloatArray, float]:
    clf_terms = data.a + candidates @ data.b
    kappas = _best_kappa(data, clf_terms, kappa_top, step)
    values = 0.5 * (np.einsum("ij,ij->i", candidates, candidates) + m * (1.0 - kappas) ** 2)
    values = np.where(np.isnan(kappas), np.inf, values)
    index = int(np.argmin(values))
    return float(values[index]), candidates[index], float(kappas[index])


def brute_force_grid(data: ClfData, m: float, grid_step: float) -> JointQpSolution:
    """Exhaustive search on a u-grid over the unit ball and a κ-grid on [0, sup K + 1].

    Multipliers are not estimated; the active set is read from the
    geometry of the best grid point.

    Raises:
        ClfUnsupportedError: More than two inputs.
        ClfDomainError: Non-positive grid step or weight.
        ClfInfeasibleError: Incompatible state.
    """
    if data.m_ctrl > 2:
        raise ClfUnsupportedError(f"Grid oracle supports m_ctrl <= 2, got {data.m_ctrl}")
    if grid_step <= 0 or m <= 0:
        raise ClfDomainError(
            "grid_step and m must be positive", {"grid_step": grid_step, "m": m}
        )
    if not check_compatibility(data):
        raise ClfInfeasibleError("Incompatible state for grid search")

    interval = kappa_interval(data)
    kappa_top = (interval.hi if interval.defined else 1.0) + 1.0
    axis = np.arange(-1.0, 1.0 + 0.5 * grid_step, grid_step)

    best_value = math.inf
    best_u = np.zeros(data.m_ctrl)
    best_kappa = math.nan
    if data.m_ctrl == 1:
        best_value, best_u, best_kappa = _scan(data, axis[:, None], m, kappa_top, grid_step)
    else:
        for first in axis:
            second = axis[first**2 + axis**2 <= 1.0 + 1e-12]
            if second.size == 0:
                continue
            row = np.column_stack((np.full(second.size, first), second))
            value, u, kappa = _scan(data, row, m, kappa_top, grid_step)
            if value < best_value:
                best_value, best_u, best_kappa = value, u.copy(), kappa

    if not math.isfinite(best_value):
        raise ClfInfeasibleError("Grid contains no feasible point; refine grid_step")

    u_norm = float(np.linalg.norm(best_u))
    if u_norm >= 1.0 - 2.0 * grid_step:
        active_set = ActiveSet.CLF_AND_BALL
    elif u_norm > grid_step:
        active_set = ActiveSet.CLF_ONLY
    else:
        active_set = ActiveSet.NONE

    _LOGGER.debug("Grid optimum kappa=%.6g objective=%.6g", best_kappa, best_value)
    return JointQpSolution(
        u=best_u,
        kappa=best_kappa,
        objective=best_value,
        lambda1=0.0,
        lambda2=0.0,
        converged=True,
        active_set=active_set,
    )
