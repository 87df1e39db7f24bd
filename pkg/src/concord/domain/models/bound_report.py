"""BoundReport model - quantitative finite-time guarantees for a scenario"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple, Optional


class Guarantee(str, Enum):
    """Which convergence guarantee a scenario satisfies"""

    P2_UNDIRECTED = "p2-undirected"
    P2_NONUNIFORM = "p2-nonuniform"
    P2_LEADER = "p2-leader"
    P2_SWITCHING = "p2-switching"
    P2_DETAIL_BALANCED = "p2-detail-balanced"
    P1_UNDIRECTED = "p1-undirected"
    P1_STRONGLY_CONNECTED = "p1-strongly-connected"
    P1_LEADER = "p1-leader"
    P1_SPANNING_TREE = "p1-spanning-tree"
    LINEAR = "linear"
    NONE = "none"


class RateThresholds(NamedTuple):
    """Lyapunov levels separating the fast-exponent and slow-exponent regimes"""

    upper: float  # above it the larger exponent decays faster
    lower: float  # below it the smaller exponent decays faster


@dataclass
class ThresholdReport:
    functional: str  # "V5" for P1, "V3" for P2
    alpha_lo: float
    alpha_hi: float
    thresholds: RateThresholds

    def to_dict(self) -> dict[str, Any]:
        return {
            "functional": self.functional,
            "alpha_lo": self.alpha_lo,
            "alpha_hi": self.alpha_hi,
            "epsilon_upper": self.thresholds.upper,
            "epsilon_lower": self.thresholds.lower,
        }


@dataclass
class BoundReport:
    """Constants, convergence-time upper bound and rate thresholds of one scenario"""

    scenario: str
    basis: Guarantee
    v0: Optional[float] = None  # initial value of the Lyapunov functional behind the bound
    constants: dict[str, float] = field(default_factory=dict)
    bound: Optional[float] = None  # seconds; None when no closed form is available
    thresholds: Optional[ThresholdReport] = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """Check bound consistency; call again after filling fields in place

        Raises:
            ValueError: If the bound is negative or disagrees with V0 about being zero
        """
        if self.bound is not None:
            if self.bound < 0:
                raise ValueError(f"Bound must be nonnegative, got {self.bound}")
            if self.v0 is not None and (self.bound == 0) != (self.v0 == 0):
                raise ValueError("Bound is zero exactly when V0 is zero")

    @property
    def has_bound(self) -> bool:
        return self.bound is not None

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready mapping with the fixed report field names"""
        return {
            "scenario": self.scenario,
            "basis": self.basis.value,
            "V0": self.v0,
            "constants": dict(self.constants),
            "bound": self.bound,
            "thresholds": self.thresholds.to_dict() if self.thresholds else None,
            "notes": list(self.notes),
        }
