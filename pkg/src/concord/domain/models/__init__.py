"""Domain models"""

from concord.domain.models.bound_report import (
    BoundReport,
    Guarantee,
    RateThresholds,
    ThresholdReport,
)
from concord.domain.models.graph import WeightedDigraph
from concord.domain.models.protocol import (
    ExponentKind,
    ExponentProfile,
    ProtocolSpec,
    ProtocolVariant,
)
from concord.domain.models.scenario import AnalysisOptions, OutputFlags, Scenario
from concord.domain.models.schedule import (
    REPEAT_FOREVER,
    ActiveInterval,
    Segment,
    SwitchingSchedule,
)
from concord.domain.models.trajectory import CheckOutcome, ConservedKind, Trajectory

__all__ = [
    "ActiveInterval",
    "AnalysisOptions",
    "BoundReport",
    "CheckOutcome",
    "ConservedKind",
    "ExponentKind",
    "ExponentProfile",
    "Guarantee",
    "OutputFlags",
    "ProtocolSpec",
    "ProtocolVariant",
    "RateThresholds",
    "REPEAT_FOREVER",
    "Scenario",
    "Segment",
    "SwitchingSchedule",
    "ThresholdReport",
    "Trajectory",
    "WeightedDigraph",
]
