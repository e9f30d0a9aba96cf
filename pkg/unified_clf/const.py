"""Constants for the unified_clf package."""

from typing import Final

DOMAIN: Final = "unified_clf"

# Numerical tolerances
ZERO_B_TOL: Final = 1e-12  # ‖b‖ at or below this is treated as b = 0
ORIGIN_TOL: Final = 1e-9  # ‖x‖ at or below this emits u = 0 during simulation
BOUND_TOL: Final = 1e-9  # slack on ‖u‖ ≤ 1
KAPPA_TOL: Final = 1e-9  # slack on κ ∈ K(x)
REGION_TIE_TOL: Final = 1e-12  # S1 margin within this of zero routes to S2
DRIFT_ORIGIN_TOL: Final = 1e-12
FD_REL_TOL: Final = 1e-5
FD_STEP: Final = 1e-6
CLF_DECREASE_SLACK: Final = 1e-8
DECREASE_MIN_NORM: Final = 1e-6

# Defaults
DEFAULT_GAMMA: Final = 1.0
DEFAULT_M: Final = 10.0
DEFAULT_STEP: Final = 1e-3
DEFAULT_T_END: Final = 100.0
DEFAULT_BOX: Final = 2.0  # verify sampler draws from [-2, 2]^n
DEFAULT_SEED: Final = 7
DEFAULT_SAMPLES: Final = 1000
DEFAULT_MARGIN_XI: Final = (0.0, 1.0, 9.0, 99.0)
DEFAULT_RADII: Final = (1.0, 0.1, 0.01, 0.001)

# Oracle
ORACLE_KAPPA_MARGIN: Final = 0.1  # search extends 10% beyond K(x)
ORACLE_WIDTH_TOL: Final = 1e-8
ORACLE_MAX_ITER: Final = 200
ORACLE_ACTIVE_TOL: Final = 1e-6

# Simulation
PROGRESS_STRIDE: Final = 10_000  # steps between observer progress callbacks

# Scenario config keys
CONF_NAME: Final = "name"
CONF_SYSTEM_ID: Final = "system_id"
CONF_CLF_ID: Final = "clf_id"
CONF_X0: Final = "x0"
CONF_T_END: Final = "t_end"
CONF_STEP: Final = "h"
CONF_M: Final = "m"
CONF_GAMMA: Final = "gamma"
CONF_CONTROLLERS: Final = "controllers"
CONF_LAW: Final = "law"
CONF_LABEL: Final = "label"
CONF_STRATEGY: Final = "strategy"
CONF_KIND: Final = "kind"
CONF_VALUE: Final = "value"
CONF_XI: Final = "xi"

# CLI
ENV_LOG_LEVEL: Final = "CLF_LOG"
DEFAULT_LOG_LEVEL: Final = "info"
EXIT_OK: Final = 0
EXIT_FAILED: Final = 1
EXIT_CONFIG: Final = 2
EXIT_DIVERGED: Final = 3

# Output
CSV_PRECISION: Final = 17
SUMMARY_FILENAME: Final = "summary.json"
