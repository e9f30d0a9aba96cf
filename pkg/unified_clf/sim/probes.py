"""Numerical probes: input size near the origin and one-sided κ slopes."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
import logging
import math

import numpy as np

from ..clf_core import lie_data
from ..const import DEFAULT_SEED
from ..exceptions import ClfConfigurationError, ClfDomainError
from ..models import Clf, ControlAffineSystem
from ..protocols import IControlLaw

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SlopeSample:
    """One-sided finite-difference slopes of κ at x; NaN with a note when skipped."""

    x: float
    left_slope: float
    right_slope: float
    note: str | None = None

    @property
    def skipped(self) -> bool:
        return self.note is not None

    @property
    def mismatch(self) -> float:
        """|left - right|."""
        return abs(self.left_slope - self.right_slope)


def origin_continuity_probe(
    law: IControlLaw,
    system: ControlAffineSystem,
    clf: Clf,
    radii: Sequence[float],
    samples_per_radius: int,
    seed: int = DEFAULT_SEED,
) -> list[tuple[float, float]]:
    """Max ‖u‖ over states on spheres of decreasing radius.

    The same unit directions are reused for every radius.

    Raises:
        ClfDomainError: Radii not positive and strictly decreasing.
    """
    if samples_per_radius <= 0:
        raise ClfDomainError("samples_per_radius must be positive")
    if any(r <= 0 for r in radii) or any(b >= a for a, b in zip(radii, radii[1:])):
        raise ClfDomainError("radii must be positive and decreasing", {"radii": list(radii)})

    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((samples_per_radius, system.n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)

    results: list[tuple[float, float]] = []
    for radius in radii:
        peak = max(
            law.evaluate(lie_data(system, clf, radius * direction)).norm
            for direction in directions
        )
        _LOGGER.debug("%s: max |u| = %.6g at radius %g", law.name, peak, radius)
        results.append((radius, peak))
    return results


def smoothness_probe(
    kappa_fn: Callable[[float], float],
    x_points: Sequence[float],
    fd_step: float,
) -> list[SlopeSample]:
    """One-sided difference quotients of a scalar κ(x) at each point.

    x = 0 is skipped and annotated.
    """
    if fd_step <= 0:
        raise ClfDomainError(f"fd_step must be positive, got {fd_step}")

    samples: list[SlopeSample] = []
    for x in x_points:
        if x == 0.0:
            samples.append(SlopeSample(0.0, math.nan, math.nan, note="origin skipped"))
            continue
        centre = kappa_fn(x)
        left = (centre - kappa_fn(x - fd_step)) / fd_step
        right = (kappa_fn(x + fd_step) - centre) / fd_step
        samples.append(SlopeSample(float(x), left, right))
    return samples


def kappa_profile(
    law: IControlLaw,
    system: ControlAffineSystem,
    clf: Clf,
) -> Callable[[float], float]:
    """κ(x) of a law on a one-dimensional system; NaN where κ is absent.

    Raises:
        ClfConfigurationError: The system is not one-dimensional.
    """
    if system.n != 1:
        raise ClfConfigurationError(f"kappa_profile needs n = 1, got n = {system.n}")

    def profile(x: float) -> float:
        kappa = law.evaluate(lie_data(system, clf, [x])).kappa
        return math.nan if kappa is None else kappa

    return profile
