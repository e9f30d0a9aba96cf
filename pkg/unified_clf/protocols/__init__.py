"""Protocol interfaces for unified_clf.

Contracts between the formulas, the simulator and the runner.
"""

from .control import IControlLaw
from .simulation import ITrajectoryObserver

__all__ = [
    "IControlLaw",
    "ITrajectoryObserver",
]
