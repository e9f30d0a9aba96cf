"""Closed-loop simulation, control-law objects and numerical probes."""

from .integrator import (
    DecreaseReport,
    DecreaseViolation,
    check_clf_decrease,
    cost_rate,
    simulate,
)
from .laws import (
    LinSontagLaw,
    OptimizationBasedLaw,
    SaturatedLaw,
    ScaledLaw,
    SontagLaw,
    UnifiedLaw,
    build_law,
    saturated_controller,
    scaled_controller,
)
from .probes import SlopeSample, kappa_profile, origin_continuity_probe, smoothness_probe

__all__ = [
    "DecreaseReport",
    "DecreaseViolation",
    "LinSontagLaw",
    "OptimizationBasedLaw",
    "SaturatedLaw",
    "ScaledLaw",
    "SlopeSample",
    "SontagLaw",
    "UnifiedLaw",
    "build_law",
    "check_clf_decrease",
    "cost_rate",
    "kappa_profile",
    "origin_continuity_probe",
    "saturated_controller",
    "scaled_controller",
    "simulate",
    "smoothness_probe",
]
