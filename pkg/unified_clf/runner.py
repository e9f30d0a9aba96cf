"""Controller sweep for one scenario.

Resolves catalogue entries, builds one SimConfig per controller and
simulates them on a thread pool. Results keep the scenario's controller
order regardless of completion order.
"""

from __future__ import annotations

from concurrent.futures import Future, ThreadPoolExecutor
import logging

import numpy as np

from .catalogue import get_clf, get_system
from .models import FloatArray, ScenarioConfig, SimConfig, Trajectory
from .protocols import ITrajectoryObserver
from .sim import simulate

_LOGGER = logging.getLogger(__name__)


class LoggingObserver:
    """Logs progress and completion of each controller."""

    def on_progress(self, controller: str, t: float, x: FloatArray) -> None:
        _LOGGER.debug("%s t=%.3f |x|=%.6g", controller, t, float(np.linalg.norm(x)))

    def on_finished(self, trajectory: Trajectory) -> None:
        if trajectory.truncated:
            _LOGGER.warning(
                "%s truncated after %d samples", trajectory.controller, len(trajectory)
            )
        else:
            _LOGGER.info(
                "%s finished: |x(T)|=%.3e max|u|=%.4f cost=%.6g",
                trajectory.controller,
                trajectory.final_state_norm,
                trajectory.max_input_norm,
                trajectory.total_cost,
            )


class _ObserverHub:
    """Fans callbacks out to registered observers; one failing observer does not stop a run."""

    def __init__(self, observers: list[ITrajectoryObserver]) -> None:
        self._observers = observers

    def on_progress(self, controller: str, t: float, x: FloatArray) -> None:
        for observer in self._observers:
            try:
                observer.on_progress(controller, t, x)
            except Exception as err:
                _LOGGER.warning("Observer notification failed: %s", err)

    def on_finished(self, trajectory: Trajectory) -> None:
        for observer in self._observers:
            try:
                observer.on_finished(trajectory)
            except Exception as err:
                _LOGGER.warning("Observer notification failed: %s", err)


class ScenarioRunner:
    """Runs every controller of a scenario."""

    def __init__(self, config: ScenarioConfig, max_workers: int | None = None) -> None:
        """Initialize the runner.

        Args:
            config: Validated scenario.
            max_workers: Thread pool size; one per controller by default.
        """
        self._config = config
        self._max_workers = max_workers or len(config.controllers)
        self._observers: list[ITrajectoryObserver] = []
        self._system = get_system(config.system_id)
        self._clf = get_clf(config.clf_id)

    @property
    def config(self) -> ScenarioConfig:
        return self._config

    def register_observer(self, observer: ITrajectoryObserver) -> None:
        """Register a trajectory observer."""
        if observer not in self._observers:
            self._observers.append(observer)

    def unregister_observer(self, observer: ITrajectoryObserver) -> None:
        """Unregister a trajectory observer."""
        if observer in self._observers:
            self._observers.remove(observer)

    def sim_configs(self) -> list[SimConfig]:
        """One SimConfig per controller, in scenario order."""
        x0 = np.array(self._config.x0, dtype=float)
        return [
            SimConfig(
                t_end=self._config.t_end,
                h=self._config.h,
                x0=x0,
                controller=spec,
                m=self._config.m,
            )
            for spec in self._config.controllers
        ]

    def run(self) -> dict[str, Trajectory]:
        """Simulate all controllers.

        Returns:
            Trajectories keyed by controller label, in scenario order.

        Raises:
            ClfDivergenceError: A controller's state became non-finite.
        """
        configs = self.sim_configs()
        hub = _ObserverHub(list(self._observers))
        _LOGGER.info(
            "Running scenario %s: %d controllers on %s",
            self._config.name,
            len(configs),
            self._config.system_id,
        )
        with ThreadPoolExecutor(max_workers=self._max_workers) as pool:
            futures: list[Future[Trajectory]] = [
                pool.submit(simulate, self._system, self._clf, cfg, observers=(hub,))
                for cfg in configs
            ]
            return {
                cfg.controller.name: future.result()
                for cfg, future in zip(configs, futures)
            }
