"""Trajectory model - recorded result of a consensus simulation"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

import numpy as np


class ConservedKind(str, Enum):
    """Quantity the protocol keeps invariant, which fixes the final common state"""

    MEAN = "mean"
    WEIGHTED_MEAN = "omega-mean"
    LEADER = "leader"
    NONE = "none"


class CheckOutcome(str, Enum):
    """Result of comparing a run's consensus value with an expectation"""

    MATCH = "match"
    MISMATCH = "mismatch"
    INDETERMINATE = "indeterminate"  # run did not converge


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution of a consensus run.

    ``conserved`` holds the invariant of ``conserved_kind`` at each sample; for kind ``none``
    it holds the plain state average as a monitor.
    """

    times: np.ndarray
    states: np.ndarray  # shape (samples, n)
    disagreement: np.ndarray
    conserved: np.ndarray
    conserved_kind: ConservedKind
    consensus_tol: float
    lyapunov: Optional[np.ndarray] = None
    convergence_time: Optional[float] = None
    consensus_value: Optional[float] = None
    steps: int = 0

    def __post_init__(self):
        """Validate sample alignment and freeze arrays"""
        samples = len(self.times)
        if samples == 0:
            raise ValueError("Trajectory needs at least one sample")
        for name in ("states", "disagreement", "conserved", "lyapunov"):
            series = getattr(self, name)
            if series is None:
                continue
            if len(series) != samples:
                raise ValueError(f"{name} has {len(series)} samples, times has {samples}")
            series.setflags(write=False)
        self.times.setflags(write=False)
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("Sample times must be strictly increasing")

    @property
    def converged(self) -> bool:
        return self.convergence_time is not None

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def diagnostics(self) -> dict[str, Any]:
        """Summary written next to the trajectory CSV"""
        return {
            "convergence_time": self.convergence_time,
            "consensus_value": self.consensus_value,
            "conserved_kind": self.conserved_kind.value,
            "final_state": [float(v) for v in self.final_state],
            "converged": self.converged,
            "consensus_tol": self.consensus_tol,
            "steps": self.steps,
            "samples": len(self.times),
        }
