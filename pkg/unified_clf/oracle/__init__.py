"""Numeric oracles for the joint (u, κ) problem."""

from .grid import brute_force_grid
from .joint import (
    JointQpSolution,
    KktResiduals,
    ball_is_active,
    golden_section,
    inner_min_norm,
    kkt_residuals,
    recover_multipliers,
    solve_joint,
)
from .projection import project_onto_halfspace, solve_pmn

__all__ = [
    "JointQpSolution",
    "KktResiduals",
    "ball_is_active",
    "brute_force_grid",
    "golden_section",
    "inner_min_norm",
    "kkt_residuals",
    "project_onto_halfspace",
    "recover_multipliers",
    "solve_joint",
    "solve_pmn",
]
