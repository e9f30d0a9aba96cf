"""Command-line entry point.

    unified-clf simulate --scenario <path|name> --out <dir>
    unified-clf verify --suite <name> [--seed N] [--samples K]
    unified-clf evaluate --system <id> --x <v1> ... [--clf <id>] [--m M]

Log level comes from CLF_LOG (quiet, info, debug).
"""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import json
import logging
import os
from pathlib import Path
from typing import Any

import colorlog

from . import formulas
from .catalogue import CLF_HALF_SQUARE_NORM, CLFS, SYSTEMS, get_clf, get_system
from .clf_core import check_compatibility, kappa_interval, lie_data
from .config import bundled_scenarios, load_scenario
from .const import (
    DEFAULT_LOG_LEVEL,
    DEFAULT_M,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DOMAIN,
    ENV_LOG_LEVEL,
    EXIT_CONFIG,
    EXIT_DIVERGED,
    EXIT_FAILED,
    EXIT_OK,
)
from .exceptions import ClfConfigurationError, ClfDivergenceError, ClfError
from .export import write_run
from .models import ControllerOutput, ScalingStrategy, StrategyKind
from .runner import LoggingObserver, ScenarioRunner
from .summary import build_summary
from .verify import SUITE_ALL, SUITES, format_table, run_suite

_LOGGER = logging.getLogger(__name__)

LOG_LEVELS = {
    "quiet": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

LOG_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"
HANDLER_NAME = f"{DOMAIN}.cli"


def setup_logging(level_name: str | None = None) -> int:
    """Install a colored handler on the package logger.

    Returns:
        The numeric level applied.
    """
    requested = (level_name or os.environ.get(ENV_LOG_LEVEL) or DEFAULT_LOG_LEVEL).lower()
    level = LOG_LEVELS.get(requested)
    logger = logging.getLogger(DOMAIN)
    if not any(h.get_name() == HANDLER_NAME for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.set_name(HANDLER_NAME)
        handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT))
        logger.addHandler(handler)
    logger.setLevel(level if level is not None else LOG_LEVELS[DEFAULT_LOG_LEVEL])
    if level is None:
        _LOGGER.warning("Unknown %s=%r, using %s", ENV_LOG_LEVEL, requested, DEFAULT_LOG_LEVEL)
        level = LOG_LEVELS[DEFAULT_LOG_LEVEL]
    return level


# ==============================================================================
# Commands
# ==============================================================================


def cmd_simulate(scenario: str, out_dir: Path) -> int:
    """Run a scenario and write CSVs plus summary.json."""
    try:
        config = load_scenario(scenario)
        runner = ScenarioRunner(config)
        runner.register_observer(LoggingObserver())
        trajectories = runner.run()
    except ClfConfigurationError as err:
        _LOGGER.error("Invalid scenario: %s", err)
        return EXIT_CONFIG
    except ClfDivergenceError as err:
        _LOGGER.error("Simulation diverged for controller %s: %s", err.controller, err)
        return EXIT_DIVERGED

    summary = build_summary(config.name, trajectories, get_clf(config.clf_id))
    try:
        write_run(out_dir, trajectories, summary)
    except OSError as err:
        _LOGGER.error("Cannot write results to %s: %s", out_dir, err)
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify(suite: str, seed: int, samples: int) -> int:
    """Run a property suite and print the result table."""
    try:
        results = run_suite(suite, seed=seed, samples=samples)
    except ClfConfigurationError as err:
        _LOGGER.error("%s", err)
        return EXIT_CONFIG
    print(format_table(results))
    failed = [r for r in results if not r.passed]
    if failed:
        _LOGGER.error("%d of %d checks failed", len(failed), len(results))
        return EXIT_FAILED
    return EXIT_OK


def _output_dict(output: ControllerOutput) -> dict[str, Any]:
    return {
        "u": output.u.tolist(),
        "norm": output.norm,
        "kappa": output.kappa,
        "branch": output.branch.value,
        "feasible": output.feasible,
        "clamped": output.clamped,
    }


def state_report(system_id: str, clf_id: str, x: Sequence[float], m: float) -> dict[str, Any]:
    """Every formula's output at one state as a JSON-ready dict.

    Strategies or weights inadmissible at this state are reported by
    their error message.
    """
    system = get_system(system_id)
    clf = get_clf(clf_id)
    data = lie_data(system, clf, x)
    interval = kappa_interval(data)
    report: dict[str, Any] = {
        "x": list(x),
        "a": data.a,
        "b": data.b.tolist(),
        "b_norm": data.b_norm,
        "sigma_stg": data.sigma_stg,
        "compatible": check_compatibility(data),
        "kappa_interval": [interval.lo, interval.hi] if interval.defined else None,
        "minimum_m": formulas.minimum_m(data),
        "sontag": _output_dict(formulas.sontag(data)),
        "lin_sontag": _output_dict(formulas.lin_sontag(data)),
    }

    unified: dict[str, Any] = {}
    for kind in StrategyKind:
        if kind in (StrategyKind.CONSTANT, StrategyKind.OPT_BASED):
            continue
        try:
            kappa, _ = formulas.resolve_kappa(data, ScalingStrategy(kind))
            unified[kind.value] = _output_dict(formulas.unified(data, kappa))
        except ClfError as err:
            unified[kind.value] = {"error": str(err)}
    report["unified"] = unified

    try:
        opt = formulas.opt_universal(data, m)
        lambda1, lambda2 = formulas.opt_multipliers(data, m)
        opt_entry = _output_dict(opt) | {"m": m, "lambda1": lambda1, "lambda2": lambda2}
        if opt.kappa is not None and interval.defined:
            inverse = formulas.inverse_optimal_data(data, opt.kappa)
            opt_entry["inverse_optimal"] = {
                "gamma": inverse.gamma_weight,
                "r_scale": inverse.r_scale,
                "l": inverse.l_value,
                "hjb_residual": inverse.hjb_residual,
            }
        report["opt_based"] = opt_entry
    except ClfError as err:
        report["opt_based"] = {"m": m, "error": str(err)}
    return report


def cmd_evaluate(system_id: str, clf_id: str, x: Sequence[float], m: float) -> int:
    """Print state_report as JSON."""
    try:
        report = state_report(system_id, clf_id, x, m)
    except ClfConfigurationError as err:
        _LOGGER.error("%s", err)
        return EXIT_CONFIG
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


# ==============================================================================
# Argument parsing
# ==============================================================================


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="unified-clf",
        description="Norm-bounded CLF controllers: simulation and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Run a scenario and write CSV/JSON output")
    simulate.add_argument(
        "--scenario",
        required=True,
        help=f"Scenario JSON path or bundled name ({', '.join(bundled_scenarios())})",
    )
    simulate.add_argument("--out", required=True, type=Path, help="Output directory")

    verify = sub.add_parser("verify", help="Run a seeded property suite")
    verify.add_argument("--suite", default=SUITE_ALL, choices=SUITES + (SUITE_ALL,))
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)

    evaluate = sub.add_parser("evaluate", help="Evaluate every formula at one state")
    evaluate.add_argument("--system", required=True, choices=sorted(SYSTEMS))
    evaluate.add_argument("--clf", default=CLF_HALF_SQUARE_NORM, choices=sorted(CLFS))
    evaluate.add_argument("--x", required=True, type=float, nargs="+")
    evaluate.add_argument("--m", type=float, default=DEFAULT_M)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, configure logging and dispatch."""
    args = build_parser().parse_args(argv)
    setup_logging()
    if args.command == "simulate":
        return cmd_simulate(args.scenario, args.out)
    if args.command == "verify":
        return cmd_verify(args.suite, args.seed, args.samples)
    return cmd_evaluate(args.system, args.clf, args.x, args.m)
