"""Scenario loading and validation.

Scenario files are JSON. Shape and ranges are checked with a
voluptuous schema; the validated dict becomes a frozen ScenarioConfig
through dacite; cross-field rules run last against the catalogue.
"""

from __future__ import annotations

from importlib import resources
import json
import logging
from pathlib import Path
from typing import Any

import dacite
import voluptuous as vol

from .catalogue import get_clf, get_system
from .clf_core import check_compatibility, lie_data
from .const import (
    CONF_CLF_ID,
    CONF_CONTROLLERS,
    CONF_GAMMA,
    CONF_KIND,
    CONF_LABEL,
    CONF_LAW,
    CONF_M,
    CONF_NAME,
    CONF_STEP,
    CONF_STRATEGY,
    CONF_SYSTEM_ID,
    CONF_T_END,
    CONF_VALUE,
    CONF_X0,
    CONF_XI,
    DEFAULT_GAMMA,
    DEFAULT_M,
    DEFAULT_STEP,
    DOMAIN,
)
from .exceptions import ClfConfigurationError, ClfError
from .models import LawKind, ScenarioConfig, StrategyKind

_LOGGER = logging.getLogger(__name__)

SCENARIO_DIR = "scenarios"

POSITIVE_FLOAT = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))

STRATEGY_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_KIND): vol.Coerce(StrategyKind),
        vol.Optional(CONF_VALUE): vol.All(vol.Coerce(float), vol.Range(min=0)),
    }
)

CONTROLLER_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_LAW): vol.Coerce(LawKind),
        vol.Optional(CONF_LABEL): vol.All(str, vol.Length(min=1)),
        vol.Optional(CONF_STRATEGY): STRATEGY_SCHEMA,
        vol.Optional(CONF_XI, default=0.0): vol.All(vol.Coerce(float), vol.Range(min=-1.0)),
    }
)

SCENARIO_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_NAME): vol.All(str, vol.Length(min=1)),
        vol.Required(CONF_SYSTEM_ID): str,
        vol.Required(CONF_CLF_ID): str,
        vol.Required(CONF_X0): vol.All(
            [vol.Coerce(float)], vol.Length(min=1), vol.Coerce(tuple)
        ),
        vol.Required(CONF_T_END): POSITIVE_FLOAT,
        vol.Optional(CONF_STEP, default=DEFAULT_STEP): POSITIVE_FLOAT,
        vol.Optional(CONF_M, default=DEFAULT_M): POSITIVE_FLOAT,
        vol.Optional(CONF_GAMMA, default=DEFAULT_GAMMA): POSITIVE_FLOAT,
        vol.Required(CONF_CONTROLLERS): vol.All(
            [CONTROLLER_SCHEMA], vol.Length(min=1), vol.Coerce(tuple)
        ),
    }
)


def _fill_strategy_weights(validated: dict[str, Any]) -> None:
    """Give opt_based strategies without a value the scenario m."""
    for controller in validated[CONF_CONTROLLERS]:
        strategy = controller.get(CONF_STRATEGY)
        if (
            strategy is not None
            and strategy[CONF_KIND] is StrategyKind.OPT_BASED
            and CONF_VALUE not in strategy
        ):
            strategy[CONF_VALUE] = validated[CONF_M]


def _check_cross_fields(config: ScenarioConfig) -> None:
    if config.h > config.t_end:
        raise ClfConfigurationError(f"h={config.h} exceeds t_end={config.t_end}")

    system = get_system(config.system_id)
    clf = get_clf(config.clf_id)
    if len(config.x0) != system.n:
        raise ClfConfigurationError(
            f"x0 has {len(config.x0)} entries, system {config.system_id!r} has n={system.n}"
        )

    labels: set[str] = set()
    for spec in config.controllers:
        if spec.law is LawKind.UNIFIED and spec.strategy is None:
            raise ClfConfigurationError(f"Controller {spec.name!r}: unified law needs a strategy")
        if spec.law is not LawKind.UNIFIED and spec.strategy is not None:
            raise ClfConfigurationError(
                f"Controller {spec.name!r}: strategy only applies to the unified law"
            )
        if spec.name in labels:
            raise ClfConfigurationError(f"Duplicate controller label {spec.name!r}")
        labels.add(spec.name)

    data = lie_data(system, clf, config.x0)
    if not check_compatibility(data, config.gamma):
        raise ClfConfigurationError(
            f"x0={list(config.x0)} is not compatible: a={data.a:.6g} > gamma*|b|"
        )


def parse_scenario(raw: Any) -> ScenarioConfig:
    """Validate a decoded scenario document.

    Raises:
        ClfConfigurationError: Schema, type or cross-field violation.
    """
    try:
        validated = SCENARIO_SCHEMA(raw)
    except vol.Invalid as err:
        raise ClfConfigurationError(f"Invalid scenario: {err}") from err

    _fill_strategy_weights(validated)
    try:
        config = dacite.from_dict(
            data_class=ScenarioConfig,
            data=validated,
            config=dacite.Config(strict=True),
        )
    except dacite.DaciteError as err:
        raise ClfConfigurationError(f"Invalid scenario: {err}") from err

    try:
        _check_cross_fields(config)
    except ClfConfigurationError:
        raise
    except ClfError as err:
        raise ClfConfigurationError(str(err)) from err

    _LOGGER.debug(
        "Loaded scenario %s with %d controllers", config.name, len(config.controllers)
    )
    return config


def bundled_scenarios() -> list[str]:
    """Names of the scenarios shipped with the package."""
    root = resources.files(DOMAIN).joinpath(SCENARIO_DIR)
    return sorted(
        entry.name.removesuffix(".json")
        for entry in root.iterdir()
        if entry.name.endswith(".json")
    )


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load a scenario from a file path or a bundled scenario name.

    Raises:
        ClfConfigurationError: Unreadable file, bad JSON or invalid content.
    """
    candidate = Path(path)
    try:
        if candidate.is_file():
            text = candidate.read_text(encoding="utf-8")
        elif str(path) in bundled_scenarios():
            text = (
                resources.files(DOMAIN)
                .joinpath(SCENARIO_DIR, f"{path}.json")
                .read_text(encoding="utf-8")
            )
        else:
            raise ClfConfigurationError(f"Scenario not found: {path}")
        raw = json.loads(text)
    except OSError as err:
        raise ClfConfigurationError(f"Cannot read scenario {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ClfConfigurationError(f"Scenario {path} is not valid JSON: {err}") from err
    return parse_scenario(raw)
