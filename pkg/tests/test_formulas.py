"""Test closed-form control laws."""

from __future__ import annotations

import math

import numpy as np
import pytest

from unified_clf import formulas
from unified_clf.clf_core import build_clf_data, kappa_interval
from unified_clf.exceptions import ClfDomainError
from unified_clf.models import Branch, ScalingStrategy, StrategyKind

from .conftest import SCALAR_BOUNDARY

# Reference values at x0 = (-1, 0.6)
SONTAG_U = (1.269191, -0.417928)
SONTAG_NORM = 1.336229
OPT_U = (0.894886, -0.294674)
OPT_KAPPA = 0.807314
LIN_SONTAG_KAPPA = 0.553182
LIN_SONTAG_NORM = 0.422410
KAPPA_ONE = 0.693281
KAPPA_TWO = 0.491863


# ==============================================================================
# PMN / Sontag Tests
# ==============================================================================


class TestSontag:
    """Test PMN and Sontag's formula."""

    def test_reference_state(self, x0_data):
        """Test Sontag's law exceeds the unit bound at x0."""
        output = formulas.sontag(x0_data)
        np.testing.assert_allclose(output.u, SONTAG_U, atol=1e-5)
        assert output.norm == pytest.approx(SONTAG_NORM, abs=1e-5)
        assert output.norm > 1.0
        assert output.kappa is None
        assert output.branch is Branch.SONTAG_NONZERO

    def test_sontag_is_pmn_with_sigma_stg(self, x0_data):
        """Test sontag ≡ pmn(σ_Stg) exactly."""
        np.testing.assert_array_equal(
            formulas.sontag(x0_data).u, formulas.pmn(x0_data, x0_data.sigma_stg).u
        )

    def test_pmn_inactive(self):
        """Test a + σ < 0 gives u = 0."""
        output = formulas.pmn(build_clf_data(-2.0, [1.0, 0.0]), 1.0)
        np.testing.assert_array_equal(output.u, [0.0, 0.0])
        assert output.branch is Branch.PMN_ZERO

    def test_pmn_active_meets_constraint(self):
        """Test the active branch satisfies a + σ + b·u = 0."""
        data = build_clf_data(0.5, [1.0, 2.0])
        output = formulas.pmn(data, 0.3)
        assert data.a + 0.3 + float(data.b @ output.u) == pytest.approx(0.0, abs=1e-12)

    def test_zero_b(self):
        """Test u = 0 at b = 0."""
        output = formulas.sontag(build_clf_data(-1.0, [0.0, 0.0]))
        assert output.branch is Branch.SONTAG_ZERO
        assert output.norm == 0.0


# ==============================================================================
# Lin-Sontag / Unified Tests
# ==============================================================================


class TestLinSontag:
    """Test Lin-Sontag's formula."""

    def test_reference_state(self, x0_data):
        """Test Lin-Sontag at x0."""
        output = formulas.lin_sontag(x0_data)
        assert output.norm == pytest.approx(LIN_SONTAG_NORM, abs=1e-5)
        assert output.kappa == pytest.approx(LIN_SONTAG_KAPPA, abs=1e-5)
        assert output.feasible

    def test_matches_unified(self, x0_data):
        """Test lin_sontag ≡ unified(κ_Lin-Stg)."""
        kappa = formulas.kappa_lin_sontag(x0_data)
        np.testing.assert_allclose(
            formulas.lin_sontag(x0_data).u, formulas.unified(x0_data, kappa).u, atol=1e-12
        )

    def test_incompatible_flagged(self):
        """Test incompatible states return an infeasible output."""
        output = formulas.lin_sontag(build_clf_data(2.0, [1.0]))
        assert output.feasible is False

    def test_zero_b(self):
        """Test b = 0 gives the zero control."""
        output = formulas.lin_sontag(build_clf_data(-1.0, [0.0]))
        assert output.branch is Branch.ZERO_B
        assert output.kappa is None

    def test_kappa_undefined_at_zero_b(self):
        """Test κ_Lin-Stg needs b ≠ 0."""
        with pytest.raises(ClfDomainError):
            formulas.kappa_lin_sontag(build_clf_data(-1.0, [0.0]))


class TestUnified:
    """Test the unified controller."""

    def test_upper_end_has_unit_norm(self, x0_data):
        """Test κ = K.hi saturates the bound."""
        interval = kappa_interval(x0_data)
        assert formulas.unified(x0_data, interval.hi).norm == pytest.approx(1.0, abs=1e-9)

    def test_lower_end_is_zero(self, x0_data):
        """Test κ = K.lo with a < 0 gives u = 0."""
        interval = kappa_interval(x0_data)
        assert formulas.unified(x0_data, interval.lo).norm == pytest.approx(0.0, abs=1e-12)

    def test_outside_interval(self, x0_data):
        """Test κ outside K raises with a diagnostic."""
        with pytest.raises(ClfDomainError) as excinfo:
            formulas.unified(x0_data, 0.95)
        assert excinfo.value.diagnostic["kappa"] == 0.95

    def test_decrease_condition(self, x0_data):
        """Test a + b·u = -κσ."""
        output = formulas.unified(x0_data, 0.6)
        rate = formulas.clf_rate(x0_data, output.u)
        assert rate == pytest.approx(-0.6 * x0_data.sigma_stg, abs=1e-12)

    def test_zero_b(self):
        """Test b = 0 returns zero with κ absent."""
        output = formulas.unified(build_clf_data(-1.0, [0.0, 0.0]), 0.5)
        assert output.kappa is None
        assert output.branch is Branch.ZERO_B


# ==============================================================================
# Strategy Tests
# ==============================================================================


class TestStrategies:
    """Test named κ strategies."""

    @pytest.mark.parametrize(
        ("kind", "expected"),
        [
            (StrategyKind.LIN_SONTAG, LIN_SONTAG_KAPPA),
            (StrategyKind.KAPPA_ONE, KAPPA_ONE),
            (StrategyKind.KAPPA_ONE_ABS, KAPPA_ONE),
            (StrategyKind.KAPPA_TWO, KAPPA_TWO),
            (StrategyKind.KAPPA_THREE, 0.5 * (KAPPA_ONE + KAPPA_TWO)),
        ],
    )
    def test_reference_values(self, x0_data, kind, expected):
        """Test each strategy at x0."""
        kappa = formulas.kappa_strategy(x0_data, ScalingStrategy(kind))
        assert kappa == pytest.approx(expected, abs=1e-5)

    def test_constant(self, x0_data):
        """Test a constant inside K."""
        assert formulas.kappa_strategy(x0_data, ScalingStrategy.constant(0.5)) == 0.5

    def test_constant_outside(self, x0_data):
        """Test a constant outside K raises."""
        with pytest.raises(ClfDomainError):
            formulas.kappa_strategy(x0_data, ScalingStrategy.constant(0.1))

    def test_opt_based(self, x0_data):
        """Test the optimization-based κ."""
        kappa = formulas.kappa_strategy(x0_data, ScalingStrategy.opt_based(10.0))
        assert kappa == pytest.approx(OPT_KAPPA, abs=1e-5)

    def test_kappa_one_clamped(self):
        """Test κ1 = -2a/σ is clamped to K.hi when it overshoots."""
        data = build_clf_data(-4.0, [1.0])
        kappa, clamped = formulas.resolve_kappa(data, ScalingStrategy(StrategyKind.KAPPA_ONE))
        assert clamped
        assert kappa == pytest.approx(kappa_interval(data).hi)

    def test_kappa_one_abs_at_positive_a(self):
        """Test (|a| - a)/σ is zero when a > 0."""
        data = build_clf_data(0.5, [1.0])
        kappa = formulas.kappa_strategy(data, ScalingStrategy(StrategyKind.KAPPA_ONE_ABS))
        assert kappa == 0.0

    def test_strategy_needs_nonzero_b(self):
        """Test strategies are undefined at b = 0."""
        with pytest.raises(ClfDomainError):
            formulas.kappa_strategy(
                build_clf_data(-1.0, [0.0]), ScalingStrategy(StrategyKind.KAPPA_TWO)
            )

    def test_kappa_two_can_leave_interval(self, planar_data):
        """Test κ2 below K.lo near the x2 axis raises instead of clamping."""
        data = planar_data(0.01, 0.05)
        with pytest.raises(ClfDomainError):
            formulas.kappa_strategy(data, ScalingStrategy(StrategyKind.KAPPA_TWO))


# ==============================================================================
# Optimization-based Formula Tests
# ==============================================================================


class TestOptUniversal:
    """Test the closed-form optimization-based formula."""

    def test_reference_state(self, x0_data):
        """Test x0 lies in S1 with the expected optimum."""
        output = formulas.opt_universal(x0_data, 10.0)
        assert output.branch is Branch.INTERIOR
        np.testing.assert_allclose(output.u, OPT_U, atol=1e-5)
        assert output.kappa == pytest.approx(OPT_KAPPA, abs=1e-5)
        assert output.within_bound

    def test_weight_below_minimum(self, x0_data):
        """Test m < sqrt(1 + ‖b‖²) is a domain error."""
        with pytest.raises(ClfDomainError) as excinfo:
            formulas.opt_universal(x0_data, 1.0)
        assert excinfo.value.diagnostic["m_min"] == pytest.approx(
            formulas.minimum_m(x0_data)
        )

    def test_zero_b(self):
        """Test S4: u = 0, κ = 1."""
        output = formulas.opt_universal(build_clf_data(-1.0, [0.0, 0.0]), 10.0)
        assert output.branch is Branch.ZERO_B
        assert output.kappa == 1.0
        assert output.norm == 0.0

    def test_scalar_boundary_region(self, scalar_data):
        """Test x = 2 on ẋ = u lies in S2 with u = -1, κ = 0.5."""
        output = formulas.opt_universal(scalar_data(2.0), 10.0)
        assert output.branch is Branch.BOUNDARY
        np.testing.assert_allclose(output.u, [-1.0], atol=1e-12)
        assert output.kappa == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.12])
    def test_scalar_interior_kappa(self, scalar_data, x):
        """Test κ = 10/(x² + 10) on S1."""
        output = formulas.opt_universal(scalar_data(x), 10.0)
        assert output.branch is Branch.INTERIOR
        assert output.kappa == pytest.approx(10.0 / (x * x + 10.0), abs=1e-12)

    @pytest.mark.parametrize("x", [1.2, 2.0, 5.0, 8.8])
    def test_scalar_boundary_kappa(self, scalar_data, x):
        """Test κ = 1/|x| on S2."""
        output = formulas.opt_universal(scalar_data(-x), 10.0)
        assert output.branch is Branch.BOUNDARY
        assert output.kappa == pytest.approx(1.0 / x, abs=1e-12)

    def test_scalar_region_boundary(self, scalar_data):
        """Test the S1 margin changes sign at |x| = 5 - sqrt(15)."""
        inside, _ = formulas.opt_region(scalar_data(SCALAR_BOUNDARY - 1e-9), 10.0)
        outside, _ = formulas.opt_region(scalar_data(SCALAR_BOUNDARY + 1e-9), 10.0)
        assert inside is Branch.INTERIOR
        assert outside is Branch.BOUNDARY

    def test_continuous_across_regions(self, scalar_data):
        """Test u and κ agree on both sides of the region boundary."""
        left = formulas.opt_universal(scalar_data(SCALAR_BOUNDARY - 1e-9), 10.0)
        right = formulas.opt_universal(scalar_data(SCALAR_BOUNDARY + 1e-9), 10.0)
        assert left.kappa == pytest.approx(right.kappa, abs=1e-6)
        np.testing.assert_allclose(left.u, right.u, atol=1e-6)

    def test_multipliers_interior(self, x0_data):
        """Test λ1 = m(1-κ)/σ and λ2 = 0 in S1."""
        lambda1, lambda2 = formulas.opt_multipliers(x0_data, 10.0)
        assert lambda1 == pytest.approx(10.0 * (1.0 - OPT_KAPPA) / x0_data.sigma_stg, abs=1e-5)
        assert lambda2 == 0.0

    def test_multipliers_boundary(self, scalar_data):
        """Test the ball multiplier at x = 2."""
        lambda1, lambda2 = formulas.opt_multipliers(scalar_data(2.0), 10.0)
        assert lambda1 == pytest.approx(1.25)
        assert lambda2 == pytest.approx(0.75)

    def test_objective_beats_lin_sontag(self, x0_data):
        """Test the optimum costs no more than Lin-Sontag's pair."""
        opt = formulas.opt_universal(x0_data, 10.0)
        ls = formulas.lin_sontag(x0_data)
        assert formulas.joint_objective(opt.u, opt.kappa, 10.0) <= formulas.joint_objective(
            ls.u, ls.kappa, 10.0
        )


# ==============================================================================
# Margin / Inverse Optimality Tests
# ==============================================================================


class TestMarginAndInverseOptimality:
    """Test the stability-margin bound and inverse-optimal weights."""

    def test_margin_bound_separates(self, x0_data):
        """Test decrease holds just above the bound and fails just below."""
        kappa = KAPPA_TWO
        bound = formulas.margin_lower_bound(x0_data, kappa)
        assert bound is not None and bound < 0
        u = formulas.unified(x0_data, kappa).u
        assert formulas.clf_rate(x0_data, (1.0 + bound + 0.1) * u) < 0
        assert formulas.clf_rate(x0_data, (1.0 + bound - 0.1) * u) > 0

    def test_margin_unbounded_at_lower_end(self, x0_data):
        """Test a + κσ ≤ 0 leaves every ξ admissible."""
        lo = kappa_interval(x0_data).lo
        assert formulas.margin_lower_bound(x0_data, lo - 1e-6) is None

    def test_margin_zero_b(self):
        """Test b = 0 has no bound."""
        assert formulas.margin_lower_bound(build_clf_data(-1.0, [0.0]), 0.5) is None

    @pytest.mark.parametrize("xi", [0.0, 1.0, 9.0, 99.0])
    def test_scaled_input_decreases(self, x0_data, xi):
        """Test (1+ξ)·u keeps a + b·u < 0 for κ inside K."""
        u = formulas.unified(x0_data, 0.6).u
        assert formulas.clf_rate(x0_data, (1.0 + xi) * u) < 0

    def test_inverse_optimal_reference(self, x0_data):
        """Test γ, R, l and the HJB residual at x0."""
        data = formulas.inverse_optimal_data(x0_data, OPT_KAPPA)
        assert data.gamma_weight == pytest.approx(0.491121, abs=1e-4)
        assert data.r_scale == pytest.approx(1.0 / (2.0 * data.gamma_weight))
        assert data.l_value == pytest.approx(2.263691, abs=1e-4)
        assert abs(data.hjb_residual) <= 1e-10

    def test_inverse_optimal_gain_matches_law(self, x0_data):
        """Test u* = -γ·b reproduces the unified law."""
        data = formulas.inverse_optimal_data(x0_data, 0.6)
        np.testing.assert_allclose(
            -data.gamma_weight * x0_data.b, formulas.unified(x0_data, 0.6).u, atol=1e-12
        )

    def test_inverse_optimal_zero_b(self):
        """Test R is unconstrained at b = 0."""
        data = formulas.inverse_optimal_data(build_clf_data(-2.0, [0.0]), 0.5)
        assert data.r_unconstrained
        assert data.l_value == 2.0
        assert data.hjb_residual == 0.0

    def test_inverse_optimal_outside_interval(self, x0_data):
        """Test κ outside K raises."""
        with pytest.raises(ClfDomainError):
            formulas.inverse_optimal_data(x0_data, 0.99)

    def test_minimum_m(self, scalar_data):
        """Test sqrt(1 + ‖b‖²)."""
        assert formulas.minimum_m(scalar_data(2.0)) == pytest.approx(math.sqrt(5.0))
