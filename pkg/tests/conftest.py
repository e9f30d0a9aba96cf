"""Test fixtures for unified_clf tests."""

from __future__ import annotations

from collections.abc import Callable
import json
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from unified_clf.catalogue import (
    CLF_HALF_SQUARE_NORM,
    SYSTEM_PLANAR_CUBIC,
    SYSTEM_SCALAR_INTEGRATOR,
    get_clf,
    get_system,
)
from unified_clf.clf_core import lie_data
from unified_clf.models import Clf, ClfData, ControlAffineSystem

# Reference state of the planar cubic scenario
X0 = (-1.0, 0.6)

# Hand-computed Lie data at X0
X0_A = -1.36
X0_B = (-1.8221188, 0.6)
X0_B_NORM_SQ = 3.680117
X0_SIGMA = 3.923374
X0_K_LO = 0.346640
X0_K_HI = 0.835598

# Scalar example: S1/S2 boundary of the optimization-based formula at m = 10
SCALAR_BOUNDARY = 5.0 - np.sqrt(15.0)


@pytest.fixture
def planar_system() -> ControlAffineSystem:
    """Planar cubic system from the catalogue."""
    return get_system(SYSTEM_PLANAR_CUBIC)


@pytest.fixture
def scalar_system() -> ControlAffineSystem:
    """Scalar integrator ẋ = u."""
    return get_system(SYSTEM_SCALAR_INTEGRATOR)


@pytest.fixture
def half_square() -> Clf:
    """V(x) = ½‖x‖²."""
    return get_clf(CLF_HALF_SQUARE_NORM)


@pytest.fixture
def x0_data(planar_system, half_square) -> ClfData:
    """Lie data at the planar reference state."""
    return lie_data(planar_system, half_square, X0)


@pytest.fixture
def planar_data(planar_system, half_square) -> Callable[[float, float], ClfData]:
    """Factory for planar Lie data."""

    def _make(x1: float, x2: float) -> ClfData:
        return lie_data(planar_system, half_square, (x1, x2))

    return _make


@pytest.fixture
def scalar_data(scalar_system, half_square) -> Callable[[float], ClfData]:
    """Factory for scalar Lie data."""

    def _make(x: float) -> ClfData:
        return lie_data(scalar_system, half_square, [x])

    return _make


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator."""
    return np.random.default_rng(7)


@pytest.fixture
def scenario_dict() -> dict[str, Any]:
    """Short planar scenario with two controllers."""
    return {
        "name": "short_planar",
        "system_id": SYSTEM_PLANAR_CUBIC,
        "clf_id": CLF_HALF_SQUARE_NORM,
        "x0": list(X0),
        "t_end": 1.0,
        "h": 0.01,
        "m": 10.0,
        "controllers": [
            {"law": "lin_sontag", "label": "lin_sontag"},
            {"law": "unified", "label": "opt", "strategy": {"kind": "opt_based"}},
        ],
    }


@pytest.fixture
def write_scenario(tmp_path) -> Callable[[dict[str, Any]], Path]:
    """Write a scenario dict to a JSON file and return its path."""

    def _write(content: dict[str, Any], name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(content), encoding="utf-8")
        return path

    return _write
