"""Built-in systems and CLFs.

Gradients are supplied analytically and validated against finite
differences by clf_core.validate_clf.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ClfConfigurationError
from .models import Clf, ControlAffineSystem, FloatArray

SYSTEM_PLANAR_CUBIC = "planar_cubic"
SYSTEM_SCALAR_INTEGRATOR = "scalar_integrator"
CLF_HALF_SQUARE_NORM = "half_square_norm"

# Alternate ids accepted in scenario files
SYSTEM_ALIASES: dict[str, str] = {
    "paper_sec5": SYSTEM_PLANAR_CUBIC,
    "scalar_sec4": SYSTEM_SCALAR_INTEGRATOR,
}


def _planar_cubic_drift(x: FloatArray) -> FloatArray:
    return np.array([-x[0] ** 3, -x[1]])


def _planar_cubic_input_map(x: FloatArray) -> FloatArray:
    return np.array([[np.exp(x[1]), 0.0], [0.0, 1.0]])


def _scalar_drift(x: FloatArray) -> FloatArray:
    return np.zeros(1)


def _scalar_input_map(x: FloatArray) -> FloatArray:
    return np.ones((1, 1))


def _half_square_norm(x: FloatArray) -> float:
    return 0.5 * float(x @ x)


def _half_square_norm_gradient(x: FloatArray) -> FloatArray:
    return np.array(x, dtype=float)


SYSTEMS: dict[str, ControlAffineSystem] = {
    SYSTEM_PLANAR_CUBIC: ControlAffineSystem(
        name=SYSTEM_PLANAR_CUBIC,
        n=2,
        m_ctrl=2,
        drift=_planar_cubic_drift,
        input_map=_planar_cubic_input_map,
        description="ẋ1 = -x1³ + e^x2·u1, ẋ2 = -x2 + u2",
    ),
    SYSTEM_SCALAR_INTEGRATOR: ControlAffineSystem(
        name=SYSTEM_SCALAR_INTEGRATOR,
        n=1,
        m_ctrl=1,
        drift=_scalar_drift,
        input_map=_scalar_input_map,
        description="ẋ = u",
    ),
}

CLFS: dict[str, Clf] = {
    CLF_HALF_SQUARE_NORM: Clf(
        name=CLF_HALF_SQUARE_NORM,
        value=_half_square_norm,
        gradient=_half_square_norm_gradient,
    ),
}


def get_system(system_id: str) -> ControlAffineSystem:
    """Look up a catalogue system by id or alias.

    Raises:
        ClfConfigurationError: Unknown id.
    """
    try:
        return SYSTEMS[SYSTEM_ALIASES.get(system_id, system_id)]
    except KeyError:
        raise ClfConfigurationError(
            f"Unknown system {system_id!r}; known: {sorted([*SYSTEMS, *SYSTEM_ALIASES])}"
        ) from None


def get_clf(clf_id: str) -> Clf:
    """Look up a catalogue CLF.

    Raises:
        ClfConfigurationError: Unknown id.
    """
    try:
        return CLFS[clf_id]
    except KeyError:
        raise ClfConfigurationError(
            f"Unknown CLF {clf_id!r}; known: {sorted(CLFS)}"
        ) from None
