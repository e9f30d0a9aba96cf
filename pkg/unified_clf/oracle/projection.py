"""Halfspace projection and the PMN oracle.

Derived independently of formulas.pmn so that equivalence tests can
catch a bug in either implementation.
"""

from __future__ import annotations

import numpy as np

from ..const import ZERO_B_TOL
from ..exceptions import ClfInfeasibleError
from ..models import ClfData, FloatArray


def project_onto_halfspace(
    point: FloatArray,
    normal: FloatArray,
    offset: float,
) -> FloatArray | None:
    """Euclidean projection of point onto {u : normal·u ≤ offset}.

    Returns:
        The projected point, or None when the halfspace is empty
        (zero normal with negative offset).
    """
    excess = float(normal @ point) - offset
    if excess <= 0:
        return point.copy()
    normal_sq = float(normal @ normal)
    if np.sqrt(normal_sq) <= ZERO_B_TOL:
        return None
    return point - (excess / normal_sq) * normal


def solve_pmn(data: ClfData, sigma: float) -> FloatArray:
    """Minimum-norm u with a + σ + b·u ≤ 0.

    Raises:
        ClfInfeasibleError: b = 0 while a + σ > 0.
    """
    origin = np.zeros(data.m_ctrl)
    if data.b_is_zero:
        if data.a + sigma > 0:
            raise ClfInfeasibleError(
                f"PMN infeasible: b = 0 and a + sigma = {data.a + sigma:.6g} > 0"
            )
        return origin
    u = project_onto_halfspace(origin, data.b, -(data.a + sigma))
    if u is None:
        raise ClfInfeasibleError("PMN infeasible: empty halfspace")
    return u
