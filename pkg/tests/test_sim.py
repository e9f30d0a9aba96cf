"""Test control-law objects and the closed-loop simulator."""

from __future__ import annotations

import numpy as np
import pytest

from unified_clf import formulas
from unified_clf.clf_core import evaluate_state
from unified_clf.config import load_scenario
from unified_clf.const import BOUND_TOL
from unified_clf.exceptions import (
    ClfConfigurationError,
    ClfDivergenceError,
    ClfDomainError,
)
from unified_clf.models import (
    Branch,
    ClfData,
    ControllerOutput,
    ControllerSpec,
    LawKind,
    ScalingStrategy,
    SimConfig,
    StrategyKind,
    Trajectory,
)
from unified_clf.protocols import IControlLaw, ITrajectoryObserver
from unified_clf.runner import ScenarioRunner
from unified_clf.sim import (
    LinSontagLaw,
    OptimizationBasedLaw,
    SaturatedLaw,
    ScaledLaw,
    SontagLaw,
    UnifiedLaw,
    build_law,
    check_clf_decrease,
    cost_rate,
    simulate,
)

from .conftest import X0

pytestmark = pytest.mark.simulation


def _config(
    law: LawKind = LawKind.LIN_SONTAG,
    strategy: ScalingStrategy | None = None,
    xi: float = 0.0,
    x0: tuple[float, ...] = X0,
    t_end: float = 1.0,
    h: float = 0.01,
) -> SimConfig:
    return SimConfig(
        t_end=t_end,
        h=h,
        x0=np.array(x0),
        controller=ControllerSpec(law=law, strategy=strategy, xi=xi),
        m=10.0,
    )


class NanLaw:
    """Law returning a non-finite input."""

    name = "nan"
    bounded = True
    carries_kappa = False

    def evaluate(self, data: ClfData) -> ControllerOutput:
        return ControllerOutput(
            u=np.full(data.m_ctrl, np.nan), kappa=None, branch=Branch.UNIFIED
        )


class FailingLaw:
    """Lin-Sontag that raises a domain error after a fixed number of calls."""

    name = "failing"
    bounded = True
    carries_kappa = True

    def __init__(self, calls_before_failure: int) -> None:
        self._remaining = calls_before_failure

    def evaluate(self, data: ClfData) -> ControllerOutput:
        if self._remaining <= 0:
            raise ClfDomainError("kappa left K(x)")
        self._remaining -= 1
        return formulas.lin_sontag(data)


class RecordingObserver:
    """Collects simulator callbacks."""

    def __init__(self) -> None:
        self.progress: list[tuple[str, float]] = []
        self.finished: list[Trajectory] = []

    def on_progress(self, controller: str, t: float, x) -> None:
        self.progress.append((controller, t))

    def on_finished(self, trajectory: Trajectory) -> None:
        self.finished.append(trajectory)


# ==============================================================================
# Law Tests
# ==============================================================================


class TestLaws:
    """Test law objects and wrappers."""

    def test_protocol(self):
        """Test every law satisfies IControlLaw."""
        for law in (
            SontagLaw(),
            LinSontagLaw(),
            UnifiedLaw(ScalingStrategy(StrategyKind.KAPPA_TWO)),
            OptimizationBasedLaw(10.0),
            ScaledLaw(LinSontagLaw(), 1.0),
            SaturatedLaw(SontagLaw()),
        ):
            assert isinstance(law, IControlLaw)
        assert isinstance(RecordingObserver(), ITrajectoryObserver)

    def test_flags(self):
        """Test bounded and carries_kappa flags."""
        assert not SontagLaw().bounded
        assert not SontagLaw().carries_kappa
        assert LinSontagLaw().bounded
        assert OptimizationBasedLaw(10.0).carries_kappa
        assert not ScaledLaw(LinSontagLaw(), 1.0).bounded
        assert ScaledLaw(LinSontagLaw(), -0.5).bounded
        assert SaturatedLaw(SontagLaw()).bounded

    def test_names(self):
        """Test law names."""
        assert OptimizationBasedLaw(10.0).name == "opt_based_10"
        assert UnifiedLaw(ScalingStrategy(StrategyKind.KAPPA_ONE)).name == "unified_kappa_one"
        assert ScaledLaw(LinSontagLaw(), 9.0).name == "lin_sontag_xi_9"
        assert SaturatedLaw(SontagLaw()).name == "sontag_clipped"

    def test_unified_rejects_opt_based(self):
        """Test UnifiedLaw refuses the opt_based strategy."""
        with pytest.raises(ClfConfigurationError):
            UnifiedLaw(ScalingStrategy.opt_based(10.0))

    def test_opt_law_rejects_weight(self):
        """Test non-positive m."""
        with pytest.raises(ClfConfigurationError):
            OptimizationBasedLaw(0.0)

    def test_unified_matches_formula(self, x0_data):
        """Test UnifiedLaw evaluates the strategy's κ."""
        output = UnifiedLaw(ScalingStrategy(StrategyKind.KAPPA_TWO)).evaluate(x0_data)
        kappa = formulas.kappa_strategy(x0_data, ScalingStrategy(StrategyKind.KAPPA_TWO))
        assert output.kappa == kappa
        np.testing.assert_array_equal(output.u, formulas.unified(x0_data, kappa).u)
        assert not output.clamped

    def test_unified_clamped(self, planar_data):
        """Test κ₁ is clamped to K.hi where |a| > ‖b‖."""
        data = planar_data(-1.5, 0.0)
        output = UnifiedLaw(ScalingStrategy(StrategyKind.KAPPA_ONE)).evaluate(data)
        assert output.clamped
        assert output.norm == pytest.approx(1.0, abs=1e-12)

    def test_unified_zero_b(self, scalar_data):
        """Test b = 0 gives u = 0 without κ."""
        output = UnifiedLaw(ScalingStrategy(StrategyKind.KAPPA_TWO)).evaluate(scalar_data(0.0))
        assert output.kappa is None
        assert output.branch is Branch.ZERO_B
        np.testing.assert_array_equal(output.u, [0.0])

    def test_scaled_identity(self, x0_data):
        """Test ξ = 0 leaves the input unchanged."""
        base = LinSontagLaw()
        np.testing.assert_array_equal(
            ScaledLaw(base, 0.0).evaluate(x0_data).u, base.evaluate(x0_data).u
        )

    def test_scaled_zero(self, x0_data):
        """Test ξ = -1 gives u = 0."""
        np.testing.assert_array_equal(ScaledLaw(LinSontagLaw(), -1.0).evaluate(x0_data).u, [0, 0])

    def test_scaled_still_decreases(self, x0_data):
        """Test ξ = 9 keeps V̇ < 0 at x0."""
        u = ScaledLaw(OptimizationBasedLaw(10.0), 9.0).evaluate(x0_data).u
        assert formulas.clf_rate(x0_data, u) < 0

    def test_scaled_rejects_xi(self):
        """Test ξ < -1."""
        with pytest.raises(ClfDomainError):
            ScaledLaw(LinSontagLaw(), -1.5)

    def test_saturated_sontag(self, x0_data):
        """Test clipping brings Sontag onto the unit ball."""
        output = SaturatedLaw(SontagLaw()).evaluate(x0_data)
        assert output.norm == pytest.approx(1.0, abs=1e-12)
        assert output.bounded


class TestBuildLaw:
    """Test law construction from controller specs."""

    def test_kinds(self):
        """Test each law kind."""
        assert isinstance(build_law(ControllerSpec(LawKind.SONTAG)), SontagLaw)
        assert isinstance(build_law(ControllerSpec(LawKind.SONTAG_CLIPPED)), SaturatedLaw)
        assert isinstance(build_law(ControllerSpec(LawKind.LIN_SONTAG)), LinSontagLaw)
        unified = build_law(
            ControllerSpec(LawKind.UNIFIED, ScalingStrategy(StrategyKind.KAPPA_THREE))
        )
        assert isinstance(unified, UnifiedLaw)

    def test_opt_based(self):
        """Test an opt_based strategy builds the optimization-based law."""
        law = build_law(ControllerSpec(LawKind.UNIFIED, ScalingStrategy.opt_based(20.0)))
        assert isinstance(law, OptimizationBasedLaw)
        assert law.m == 20.0

    def test_margin_wrapper(self):
        """Test a nonzero ξ wraps the law."""
        law = build_law(
            ControllerSpec(LawKind.UNIFIED, ScalingStrategy(StrategyKind.KAPPA_TWO), xi=1.0)
        )
        assert isinstance(law, ScaledLaw)
        assert law.carries_kappa

    def test_missing_strategy(self):
        """Test a unified spec without strategy."""
        with pytest.raises(ClfConfigurationError):
            build_law(ControllerSpec(LawKind.UNIFIED))


# ==============================================================================
# Simulator Tests
# ==============================================================================


class TestCostRate:
    """Test the running cost."""

    def test_with_kappa(self):
        """Test ½(‖u‖² + m(1-κ)²)."""
        assert cost_rate(np.array([0.6, 0.8]), 0.5, 10.0, True) == pytest.approx(1.75)

    def test_without_kappa(self):
        """Test κ-free laws and absent κ count as κ = 1."""
        u = np.array([0.6, 0.8])
        assert cost_rate(u, 0.5, 10.0, False) == pytest.approx(0.5)
        assert cost_rate(u, None, 10.0, True) == pytest.approx(0.5)


class TestSimulate:
    """Test fixed-step RK4 simulation."""

    def test_time_grid(self, planar_system, half_square):
        """Test samples at t_k = k·h."""
        traj = simulate(planar_system, half_square, _config())
        assert len(traj) == 101
        np.testing.assert_allclose(traj.times, 0.01 * np.arange(101))
        np.testing.assert_array_equal(traj.states[0], X0)
        assert traj.controller == "lin_sontag"
        assert not traj.truncated

    def test_origin(self, planar_system, half_square):
        """Test x0 = 0 stays at the origin with zero input and cost."""
        traj = simulate(planar_system, half_square, _config(x0=(0.0, 0.0), t_end=0.1))
        assert not traj.states.any()
        assert not traj.controls.any()
        assert traj.total_cost == 0.0
        assert np.isnan(traj.kappas).all()

    def test_sontag_exceeds_bound(self, planar_system, half_square):
        """Test Sontag's input at x0 is above the unit bound."""
        traj = simulate(planar_system, half_square, _config(law=LawKind.SONTAG, t_end=0.1))
        assert traj.input_norms[0] == pytest.approx(1.336229, abs=1e-6)
        assert traj.bound_violations >= 1
        assert not traj.bounded
        assert not traj.carries_kappa

    def test_lin_sontag_bounded_and_decreasing(self, planar_system, half_square):
        """Test a 10 s Lin-Sontag run."""
        traj = simulate(planar_system, half_square, _config(t_end=10.0))
        assert traj.max_input_norm <= 1.0 + BOUND_TOL
        assert check_clf_decrease(traj, half_square).ok
        assert traj.final_state_norm < 0.05

    def test_trapezoidal_cost(self, planar_system, half_square):
        """Test cumulative cost integrates the rate with the trapezoid rule."""
        traj = simulate(
            planar_system,
            half_square,
            _config(LawKind.UNIFIED, ScalingStrategy.opt_based(10.0)),
        )
        increments = np.diff(traj.cost_cum)
        expected = 0.005 * (traj.cost_rates[:-1] + traj.cost_rates[1:])
        np.testing.assert_allclose(increments, expected, rtol=1e-10, atol=1e-15)
        assert traj.cost_cum[0] == 0.0
        assert np.all(increments >= 0)

    def test_kappa_recorded(self, planar_system, half_square, x0_data):
        """Test the first κ sample equals the closed form at x0."""
        traj = simulate(
            planar_system,
            half_square,
            _config(LawKind.UNIFIED, ScalingStrategy.opt_based(10.0)),
        )
        assert traj.kappas[0] == pytest.approx(formulas.opt_universal(x0_data, 10.0).kappa)
        sample = next(traj.samples)
        assert sample.kappa == traj.kappas[0]
        assert sample.v == pytest.approx(0.5 * (1.0 + 0.36))

    def test_scalar_opt_based(self, scalar_system, half_square):
        """Test ẋ = u from x = 2 crosses into S1 and keeps decreasing."""
        traj = simulate(
            scalar_system,
            half_square,
            _config(LawKind.UNIFIED, ScalingStrategy.opt_based(10.0), x0=(2.0,), t_end=5.0),
        )
        assert traj.controls[0, 0] == pytest.approx(-1.0)
        assert traj.kappas[0] == pytest.approx(0.5)
        assert check_clf_decrease(traj, half_square).ok
        assert traj.final_state_norm < 1.0

    def test_margin_run(self, planar_system, half_square):
        """Test ξ = 1 on κ₂ keeps V decreasing on every recorded sample."""
        traj = simulate(
            planar_system,
            half_square,
            _config(LawKind.UNIFIED, ScalingStrategy(StrategyKind.KAPPA_TWO), xi=1.0, t_end=2.0),
        )
        assert len(traj) > 1
        assert check_clf_decrease(traj, half_square).ok

    def test_domain_error_truncates(self, planar_system, half_square):
        """Test a law error stops the run and is recorded."""
        traj = simulate(planar_system, half_square, _config(), law=FailingLaw(8))
        assert traj.truncated
        assert len(traj) == 2
        assert "kappa left" in traj.error

    def test_divergence(self, planar_system, half_square):
        """Test a non-finite state raises."""
        with pytest.raises(ClfDivergenceError) as exc_info:
            simulate(planar_system, half_square, _config(), law=NanLaw())
        assert exc_info.value.controller == "lin_sontag"
        assert exc_info.value.time == pytest.approx(0.01)

    def test_observers(self, planar_system, half_square):
        """Test progress and completion callbacks."""
        observer = RecordingObserver()
        traj = simulate(planar_system, half_square, _config(), observers=[observer])
        assert observer.progress == [("lin_sontag", 0.0)]
        assert observer.finished == [traj]

    def test_wrong_dimension(self, planar_system, half_square):
        """Test x0 of the wrong size."""
        with pytest.raises(ClfConfigurationError):
            simulate(planar_system, half_square, _config(x0=(1.0,)))


class TestCheckClfDecrease:
    """Test the decrease checker."""

    def test_detects_increase(self, planar_system, half_square):
        """Test an input pushing away from the origin is flagged."""
        traj = simulate(
            planar_system,
            half_square,
            _config(LawKind.LIN_SONTAG, xi=-1.0, x0=(0.0, 0.0), t_end=0.1),
        )
        assert check_clf_decrease(traj, half_square).ok

        grown = Trajectory(
            controller="grown",
            times=np.array([0.0, 0.1]),
            states=np.array([[1.0, 0.0], [2.0, 0.0]]),
            controls=np.zeros((2, 2)),
            kappas=np.array([0.5, 0.5]),
            values=np.array([0.5, 2.0]),
            cost_rates=np.zeros(2),
            cost_cum=np.zeros(2),
            lie_a=np.array([0.0, 0.0]),
            lie_bu=np.array([0.0, 0.0]),
            sigmas=np.array([1.0, 1.0]),
        )
        report = check_clf_decrease(grown, half_square)
        assert not report.ok
        assert report.count("value") == 1
        assert report.count("pointwise") == 2


# ==============================================================================
# Full-horizon Runs
# ==============================================================================


@pytest.fixture(scope="module")
def planar_run() -> dict[str, Trajectory]:
    """Bundled planar scenario, 100 s at h = 1e-3."""
    return ScenarioRunner(load_scenario("planar_cubic")).run()


@pytest.mark.slow
class TestPlanarScenario:
    """Test the bundled planar comparison."""

    BOUNDED = ("lin_sontag", "kappa_one", "kappa_two", "kappa_three", "opt_based_m10")

    def test_no_truncation(self, planar_run):
        """Test every controller runs the full horizon."""
        for traj in planar_run.values():
            assert not traj.truncated
            assert len(traj) == 100_001

    def test_bounded_laws(self, planar_run):
        """Test the input bound holds for every bounded law."""
        for label in self.BOUNDED:
            assert planar_run[label].max_input_norm <= 1.0 + BOUND_TOL

    def test_sontag_unbounded(self, planar_run):
        """Test Sontag starts above the bound."""
        assert planar_run["sontag"].input_norms[0] > 1.0

    def test_value_decreases(self, planar_run, half_square):
        """Test V decreases off the origin for every law."""
        for traj in planar_run.values():
            assert check_clf_decrease(traj, half_square).ok

    def test_convergence(self, planar_run):
        """Test final state norms; κ₁ converges algebraically along the x1 axis."""
        for label in ("lin_sontag", "kappa_two", "kappa_three", "opt_based_m10"):
            assert planar_run[label].final_state_norm <= 1e-3
        assert planar_run["kappa_one"].final_state_norm <= 0.06

    def test_opt_based_lowest_cost(self, planar_run):
        """Test the optimization-based cost stays lowest among κ-laws at every sample."""
        best = planar_run["opt_based_m10"].cost_cum
        for label in ("lin_sontag", "kappa_one", "kappa_two", "kappa_three"):
            other = planar_run[label].cost_cum
            assert other.shape == best.shape
            assert np.all(best <= other + 1e-9), label


@pytest.mark.slow
def test_step_halving(planar_system, half_square):
    """Test halving h barely moves x(10) for Lin-Sontag."""
    coarse = simulate(planar_system, half_square, _config(t_end=10.0, h=1e-3))
    fine = simulate(planar_system, half_square, _config(t_end=10.0, h=5e-4))
    assert np.linalg.norm(coarse.states[-1] - fine.states[-1]) <= 1e-6


@pytest.fixture(scope="module")
def margin_run() -> dict[str, Trajectory]:
    """Bundled ξ-scaled scenario, 20 s at h = 1e-3."""
    return ScenarioRunner(load_scenario("planar_cubic_margin")).run()


@pytest.mark.slow
class TestMarginScenario:
    """Test the bundled gain-margin scenario over its full horizon."""

    def test_full_horizon(self, margin_run):
        """Test every scaled controller runs to t_end."""
        config = load_scenario("planar_cubic_margin")
        assert list(margin_run) == [spec.name for spec in config.controllers]
        for traj in margin_run.values():
            assert not traj.truncated
            assert traj.times[-1] == pytest.approx(config.t_end)

    def test_value_monotone(self, margin_run, half_square):
        """Test V decreases at every sample off the origin."""
        for traj in margin_run.values():
            assert check_clf_decrease(traj, half_square).ok
            moving = np.linalg.norm(traj.states[:-1], axis=1) > 1e-6
            assert np.all(np.diff(traj.values)[moving] < 0.0), traj.controller

    def test_margin_holds(self, margin_run, planar_system, half_square):
        """Test each ξ sits above the lower bound and keeps V̇ negative."""
        config = load_scenario("planar_cubic_margin")
        for spec in config.controllers:
            traj = margin_run[spec.name]
            for k in range(len(traj)):
                if np.linalg.norm(traj.states[k]) <= 1e-6:
                    continue
                data, _, _ = evaluate_state(planar_system, half_square, traj.states[k])
                bound = formulas.margin_lower_bound(data, float(traj.kappas[k]))
                assert bound is None or spec.xi > bound
                assert traj.lie_a[k] + traj.lie_bu[k] < 0.0
