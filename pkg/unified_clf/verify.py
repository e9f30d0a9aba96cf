"""Seeded property suites run by the `verify` command.

States are drawn uniformly from [-box, box]^n of the planar cubic
system and kept when compatible, b ≠ 0 and m ≥ sqrt(1 + ‖b‖²).
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
import logging

import numpy as np

from . import formulas
from .catalogue import CLF_HALF_SQUARE_NORM, SYSTEM_PLANAR_CUBIC, get_clf, get_system
from .clf_core import check_compatibility, kappa_interval, lie_data
from .const import (
    BOUND_TOL,
    DEFAULT_BOX,
    DEFAULT_M,
    DEFAULT_MARGIN_XI,
    DEFAULT_RADII,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    KAPPA_TOL,
    ORACLE_ACTIVE_TOL,
)
from .exceptions import ClfConfigurationError
from .models import ActiveSet, Branch, Clf, ClfData, ControlAffineSystem, ScalingStrategy
from .oracle import kkt_residuals, solve_joint
from .sim import LinSontagLaw, OptimizationBasedLaw, origin_continuity_probe

_LOGGER = logging.getLogger(__name__)

SUITE_ORACLE = "oracle"
SUITE_INVARIANTS = "invariants"
SUITE_MARGIN = "margin"
SUITE_CONTINUITY = "continuity"
SUITE_ALL = "all"
SUITES = (SUITE_ORACLE, SUITE_INVARIANTS, SUITE_MARGIN, SUITE_CONTINUITY)

ORACLE_U_TOL = 1e-4
ORACLE_KAPPA_TOL = 1e-4
KKT_TOL = 1e-5
IDENTITY_TOL = 1e-12
HJB_TOL = 1e-10
CONTINUITY_LIMIT = 1e-2
CONTINUITY_DIRECTIONS = 64
MAX_DRAWS_PER_SAMPLE = 50


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one property check."""

    suite: str
    check: str
    passed: bool
    samples: int
    worst: float
    limit: float

    def as_row(self) -> tuple[str, str, str, str, str, str]:
        """Cells for the result table."""
        return (
            self.suite,
            self.check,
            "PASS" if self.passed else "FAIL",
            str(self.samples),
            f"{self.worst:.3e}",
            f"{self.limit:.1e}",
        )


def sample_states(
    system: ControlAffineSystem,
    clf: Clf,
    count: int,
    rng: np.random.Generator,
    box: float = DEFAULT_BOX,
    m: float | None = DEFAULT_M,
) -> list[ClfData]:
    """Draw compatible states with b ≠ 0 (and m admissible when m is given)."""
    accepted: list[ClfData] = []
    draws = 0
    while len(accepted) < count and draws < MAX_DRAWS_PER_SAMPLE * max(count, 1):
        draws += 1
        data = lie_data(system, clf, rng.uniform(-box, box, size=system.n))
        if data.b_is_zero or not check_compatibility(data):
            continue
        if m is not None and m < formulas.minimum_m(data):
            continue
        accepted.append(data)
    if len(accepted) < count:
        _LOGGER.warning("Sampler accepted only %d of %d states", len(accepted), count)
    return accepted


def _check(suite: str, name: str, values: Iterable[float], limit: float) -> CheckResult:
    collected = list(values)
    worst = max(collected) if collected else 0.0
    return CheckResult(suite, name, worst <= limit, len(collected), worst, limit)


def _count_check(suite: str, name: str, failures: int, samples: int) -> CheckResult:
    return CheckResult(suite, name, failures == 0, samples, float(failures), 0.0)


# ==============================================================================
# Suites
# ==============================================================================


def _oracle_suite(states: list[ClfData], m: float) -> list[CheckResult]:
    u_gap: list[float] = []
    kappa_gap: list[float] = []
    kkt: list[float] = []
    dominance: list[float] = []
    region_failures = 0
    for data in states:
        closed = formulas.opt_universal(data, m)
        numeric = solve_joint(data, m)
        closed_kappa = 1.0 if closed.kappa is None else closed.kappa
        u_gap.append(float(np.linalg.norm(closed.u - numeric.u)))
        kappa_gap.append(abs(closed_kappa - numeric.kappa))
        kkt.append(kkt_residuals(data, numeric, m).worst)

        _, lambda2 = formulas.opt_multipliers(data, m)
        expected = (
            ActiveSet.CLF_AND_BALL if closed.branch is Branch.BOUNDARY else ActiveSet.CLF_ONLY
        )
        if closed.branch is Branch.BOUNDARY:
            near_tie = lambda2 <= 10.0 * ORACLE_ACTIVE_TOL
        else:
            near_tie = float(closed.u @ closed.u) >= 1.0 - 10.0 * ORACLE_ACTIVE_TOL
        if numeric.active_set is not expected and not near_tie:
            region_failures += 1

        ls_kappa = formulas.kappa_lin_sontag(data)
        ls_u = formulas.lin_sontag(data).u
        dominance.append(
            formulas.joint_objective(closed.u, closed_kappa, m)
            - formulas.joint_objective(ls_u, ls_kappa, m)
        )

    return [
        _check(SUITE_ORACLE, "u matches oracle", u_gap, ORACLE_U_TOL),
        _check(SUITE_ORACLE, "kappa matches oracle", kappa_gap, ORACLE_KAPPA_TOL),
        _check(SUITE_ORACLE, "kkt residuals", kkt, KKT_TOL),
        _count_check(SUITE_ORACLE, "region tags agree", region_failures, len(states)),
        _check(SUITE_ORACLE, "objective <= lin_sontag", dominance, IDENTITY_TOL),
    ]


def _invariants_suite(states: list[ClfData], m: float) -> list[CheckResult]:
    identity: list[float] = []
    hi_norm: list[float] = []
    lo_norm: list[float] = []
    kappa_valid: list[float] = []
    kappa_valid_min: list[float] = []
    hjb: list[float] = []
    pmn_failures = 0
    l_failures = 0
    for data in states:
        interval = kappa_interval(data)
        ls = formulas.lin_sontag(data)
        via_unified = formulas.unified(data, formulas.kappa_lin_sontag(data))
        identity.append(float(np.max(np.abs(ls.u - via_unified.u))))

        if not np.array_equal(formulas.sontag(data).u, formulas.pmn(data, data.sigma_stg).u):
            pmn_failures += 1

        hi_norm.append(abs(formulas.unified(data, interval.hi).norm - 1.0))
        if data.a < 0:
            lo_norm.append(formulas.unified(data, interval.lo).norm)

        for weight, bucket in ((m, kappa_valid), (formulas.minimum_m(data), kappa_valid_min)):
            kappa = formulas.opt_universal(data, weight).kappa
            if kappa is not None:
                bucket.append(max(interval.lo - kappa, kappa - interval.hi, 0.0))

        mid = 0.5 * (interval.lo + interval.hi)
        inverse = formulas.inverse_optimal_data(data, mid)
        hjb.append(abs(inverse.hjb_residual))
        if not inverse.l_value > 0:
            l_failures += 1

    return [
        _check(SUITE_INVARIANTS, "lin_sontag == unified(kappa_ls)", identity, IDENTITY_TOL),
        _count_check(SUITE_INVARIANTS, "sontag == pmn(sigma)", pmn_failures, len(states)),
        _check(SUITE_INVARIANTS, "|u(K.hi)| == 1", hi_norm, BOUND_TOL),
        _check(SUITE_INVARIANTS, "u(K.lo) == 0", lo_norm, IDENTITY_TOL),
        _check(SUITE_INVARIANTS, "opt kappa in K (m)", kappa_valid, KAPPA_TOL),
        _check(SUITE_INVARIANTS, "opt kappa in K (m_min)", kappa_valid_min, KAPPA_TOL),
        _check(SUITE_INVARIANTS, "hjb residual", hjb, HJB_TOL),
        _count_check(SUITE_INVARIANTS, "l(x) > 0", l_failures, len(states)),
    ]


def _margin_suite(states: list[ClfData]) -> list[CheckResult]:
    results: list[CheckResult] = []
    for xi in DEFAULT_MARGIN_XI:
        rates: list[float] = []
        for data in states:
            interval = kappa_interval(data)
            kappa = 0.5 * (interval.lo + interval.hi)
            strategy = ScalingStrategy.constant(kappa)
            u = formulas.unified(data, formulas.kappa_strategy(data, strategy)).u
            rates.append(formulas.clf_rate(data, (1.0 + xi) * u))
        # strict inequality: worst rate must be negative
        worst = max(rates) if rates else -1.0
        results.append(
            CheckResult(SUITE_MARGIN, f"decrease xi={xi:g}", worst < 0, len(rates), worst, 0.0)
        )
    return results


def _continuity_suite(seed: int) -> list[CheckResult]:
    system = get_system(SYSTEM_PLANAR_CUBIC)
    clf = get_clf(CLF_HALF_SQUARE_NORM)
    results: list[CheckResult] = []
    for law in (LinSontagLaw(), OptimizationBasedLaw(DEFAULT_M)):
        profile = origin_continuity_probe(
            law, system, clf, DEFAULT_RADII, CONTINUITY_DIRECTIONS, seed=seed
        )
        peaks = [peak for _, peak in profile]
        increases = sum(1 for a, b in zip(peaks, peaks[1:]) if b > a)
        results.append(
            _count_check(SUITE_CONTINUITY, f"{law.name} nonincreasing", increases, len(peaks))
        )
        results.append(_check(SUITE_CONTINUITY, f"{law.name} small", [peaks[-1]], CONTINUITY_LIMIT))
    return results


_SUITES: dict[str, Callable[[list[ClfData], int], list[CheckResult]]] = {
    SUITE_ORACLE: lambda states, seed: _oracle_suite(states, DEFAULT_M),
    SUITE_INVARIANTS: lambda states, seed: _invariants_suite(states, DEFAULT_M),
    SUITE_MARGIN: lambda states, seed: _margin_suite(states),
    SUITE_CONTINUITY: lambda states, seed: _continuity_suite(seed),
}


def run_suite(
    suite: str,
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
) -> list[CheckResult]:
    """Run one suite, or all of them.

    Raises:
        ClfConfigurationError: Unknown suite name or negative sample count.
    """
    if suite != SUITE_ALL and suite not in _SUITES:
        raise ClfConfigurationError(f"Unknown suite {suite!r}; choose from {SUITES + (SUITE_ALL,)}")
    if samples < 0:
        raise ClfConfigurationError("samples must be >= 0")
    if samples == 0:
        _LOGGER.warning("No samples requested; suite %s passes vacuously", suite)
        return []

    names = SUITES if suite == SUITE_ALL else (suite,)
    states = sample_states(
        get_system(SYSTEM_PLANAR_CUBIC),
        get_clf(CLF_HALF_SQUARE_NORM),
        samples,
        np.random.default_rng(seed),
    )
    results: list[CheckResult] = []
    for name in names:
        _LOGGER.info("Running suite %s on %d states", name, len(states))
        results.extend(_SUITES[name](states, seed))
    return results


def format_table(results: list[CheckResult]) -> str:
    """Plain-text pass/fail table."""
    header = ("suite", "check", "result", "samples", "worst", "limit")
    rows = [header] + [result.as_row() for result in results]
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)
