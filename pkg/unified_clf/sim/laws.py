"""Control-law objects used by the simulator and probes.

Each class implements IControlLaw on top of the pure functions in
formulas. Wrappers add the stability-margin scale (1+ξ) and the
diagnostic ball clipping.
"""

from __future__ import annotations

from dataclasses import replace
import logging

from .. import formulas
from ..const import DEFAULT_M
from ..exceptions import ClfConfigurationError, ClfDomainError
from ..models import (
    ClfData,
    ControllerOutput,
    ControllerSpec,
    LawKind,
    ScalingStrategy,
    StrategyKind,
)
from ..protocols import IControlLaw

_LOGGER = logging.getLogger(__name__)


class SontagLaw:
    """Sontag's universal formula; not norm-bounded."""

    @property
    def name(self) -> str:
        return "sontag"

    @property
    def bounded(self) -> bool:
        return False

    @property
    def carries_kappa(self) -> bool:
        return False

    def evaluate(self, data: ClfData) -> ControllerOutput:
        return formulas.sontag(data)


class LinSontagLaw:
    """Lin-Sontag's norm-bounded formula."""

    @property
    def name(self) -> str:
        return "lin_sontag"

    @property
    def bounded(self) -> bool:
        return True

    @property
    def carries_kappa(self) -> bool:
        return True

    def evaluate(self, data: ClfData) -> ControllerOutput:
        return formulas.lin_sontag(data)


class UnifiedLaw:
    """Unified controller driven by a closed-form κ strategy."""

    def __init__(self, strategy: ScalingStrategy) -> None:
        """Initialize with the κ strategy; OPT_BASED belongs to OptimizationBasedLaw."""
        if strategy.kind is StrategyKind.OPT_BASED:
            raise ClfConfigurationError("Use OptimizationBasedLaw for opt_based")
        self._strategy = strategy

    @property
    def name(self) -> str:
        return f"unified_{self._strategy.label}"

    @property
    def bounded(self) -> bool:
        return True

    @property
    def carries_kappa(self) -> bool:
        return True

    @property
    def strategy(self) -> ScalingStrategy:
        return self._strategy

    def evaluate(self, data: ClfData) -> ControllerOutput:
        if data.b_is_zero:
            return formulas.unified(data, 0.0)
        kappa, clamped = formulas.resolve_kappa(data, self._strategy)
        output = formulas.unified(data, kappa)
        return replace(output, clamped=clamped) if clamped else output


class OptimizationBasedLaw:
    """Closed-form minimizer of the joint (u, κ) problem with weight m."""

    def __init__(self, m: float = DEFAULT_M) -> None:
        """Initialize with the κ weight m."""
        if m <= 0:
            raise ClfConfigurationError(f"m must be positive, got {m}")
        self._m = m

    @property
    def name(self) -> str:
        return f"opt_based_{self._m:g}"

    @property
    def bounded(self) -> bool:
        return True

    @property
    def carries_kappa(self) -> bool:
        return True

    @property
    def m(self) -> float:
        return self._m

    def evaluate(self, data: ClfData) -> ControllerOutput:
        return formulas.opt_universal(data, self._m)


class ScaledLaw:
    """Emits (1+ξ)·base(x) without re-saturating."""

    def __init__(self, base: IControlLaw, xi: float) -> None:
        """Wrap base with the gain factor 1 + xi."""
        if xi < -1.0:
            raise ClfDomainError(f"xi must be >= -1, got {xi}", {"xi": xi})
        self._base = base
        self._factor = 1.0 + xi

    @property
    def name(self) -> str:
        return f"{self._base.name}_xi_{self._factor - 1.0:g}"

    @property
    def bounded(self) -> bool:
        return self._base.bounded and self._factor <= 1.0

    @property
    def carries_kappa(self) -> bool:
        return self._base.carries_kappa

    def evaluate(self, data: ClfData) -> ControllerOutput:
        return self._base.evaluate(data).scaled(self._factor)


class SaturatedLaw:
    """Projects base(x) onto the unit ball. Diagnostic only."""

    def __init__(self, base: IControlLaw) -> None:
        """Wrap base."""
        self._base = base

    @property
    def name(self) -> str:
        return f"{self._base.name}_clipped"

    @property
    def bounded(self) -> bool:
        return True

    @property
    def carries_kappa(self) -> bool:
        return self._base.carries_kappa

    def evaluate(self, data: ClfData) -> ControllerOutput:
        output = self._base.evaluate(data)
        norm = output.norm
        if norm <= 1.0:
            return replace(output, bounded=True)
        return replace(output.scaled(1.0 / norm), bounded=True)


def scaled_controller(base: IControlLaw, xi: float) -> IControlLaw:
    """Stability-margin wrapper ũ = (1+ξ)·base(x)."""
    return ScaledLaw(base, xi)


def saturated_controller(base: IControlLaw) -> IControlLaw:
    """Clip base(x) onto ‖u‖ ≤ 1."""
    return SaturatedLaw(base)


def build_law(spec: ControllerSpec, m: float = DEFAULT_M) -> IControlLaw:
    """Instantiate the law a scenario entry describes.

    Args:
        spec: Law, strategy and ξ.
        m: Scenario weight used when an opt_based strategy omits its own.

    Raises:
        ClfConfigurationError: unified law without a strategy.
    """
    law: IControlLaw
    if spec.law is LawKind.SONTAG:
        law = SontagLaw()
    elif spec.law is LawKind.SONTAG_CLIPPED:
        law = saturated_controller(SontagLaw())
    elif spec.law is LawKind.LIN_SONTAG:
        law = LinSontagLaw()
    else:
        strategy = spec.strategy
        if strategy is None:
            raise ClfConfigurationError(f"Controller {spec.name!r} needs a strategy")
        if strategy.kind is StrategyKind.OPT_BASED:
            law = OptimizationBasedLaw(strategy.value if strategy.value is not None else m)
        else:
            law = UnifiedLaw(strategy)

    if spec.xi:
        law = scaled_controller(law, spec.xi)
    _LOGGER.debug("Built law %s for controller %s", law.name, spec.name)
    return law
