"""Scenario model - everything needed to simulate and analyze one consensus setup"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from concord.domain.config.integrator import IntegratorConfig
from concord.domain.models.protocol import (
    ExponentKind,
    ExponentProfile,
    ProtocolSpec,
    ProtocolVariant,
    check_exponents,
)
from concord.domain.models.schedule import Segment, SwitchingSchedule


@dataclass(frozen=True)
class OutputFlags:
    """Files a scenario run produces by default"""

    trajectory_csv: bool = True
    diagnostics_json: bool = True
    bound_report: bool = False


@dataclass(frozen=True)
class AnalysisOptions:
    """Optional inputs for the bound report"""

    k1: Optional[float] = None  # user-supplied K1 for strongly connected P1 graphs
    compare_alphas: Optional[tuple[float, float]] = None  # (alpha_lo, alpha_hi) rate comparison
    v0_override: Optional[float] = None  # externally quoted V0, reported next to the computed one

    def __post_init__(self):
        """Validate analysis options"""
        if self.k1 is not None and not self.k1 > 0:
            raise ValueError("k1 must be positive")
        if self.compare_alphas is not None:
            lo, hi = self.compare_alphas
            if not 0 < lo < hi < 1:
                raise ValueError("compare_alphas must satisfy 0 < alpha_lo < alpha_hi < 1")
            object.__setattr__(self, "compare_alphas", (float(lo), float(hi)))
        if self.v0_override is not None and self.v0_override < 0:
            raise ValueError("v0_override must be nonnegative")


@dataclass(frozen=True)
class Scenario:
    """A validated consensus scenario"""

    name: str
    x0: tuple[float, ...]
    protocol: ProtocolSpec
    schedule: SwitchingSchedule
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    outputs: OutputFlags = field(default_factory=OutputFlags)
    description: str = ""
    require_symmetric_exponents: bool = False
    analysis: AnalysisOptions = field(default_factory=AnalysisOptions)

    def __post_init__(self):
        """Validate cross-references before any run"""
        if not self.name:
            raise ValueError("Scenario name must not be empty")
        x0 = tuple(float(v) for v in self.x0)
        if not x0:
            raise ValueError("x0 must not be empty")
        if not all(math.isfinite(v) for v in x0):
            raise ValueError("x0 entries must be finite")
        object.__setattr__(self, "x0", x0)
        n = len(x0)
        if self.schedule.n != n:
            raise ValueError(f"x0 has {n} entries but the schedule's graphs have {self.schedule.n}")
        if self.protocol.n != n:
            raise ValueError(
                f"x0 has {n} entries but the protocol exponents cover {self.protocol.n}"
            )
        for k, segment in enumerate(self.schedule.segments):
            if segment.exponents is not None:
                try:
                    check_exponents(self.protocol.variant, segment.exponents)
                except ValueError as e:
                    raise ValueError(f"segment {k + 1}: {e}") from e
            if self.require_symmetric_exponents:
                pair = self.exponents_for(segment).asymmetric_pair(segment.graph)
                if pair is not None:
                    i, j = pair
                    raise ValueError(
                        f"segment {k + 1}: symmetric exponents required but "
                        f"alpha[{i + 1}][{j + 1}] != alpha[{j + 1}][{i + 1}]"
                    )

    @property
    def n(self) -> int:
        return len(self.x0)

    @property
    def initial_state(self) -> np.ndarray:
        return np.array(self.x0, dtype=float)

    @property
    def variant(self) -> ProtocolVariant:
        return self.protocol.variant

    def exponents_for(self, segment: Segment) -> ExponentProfile:
        """Effective exponents of a segment"""
        return segment.exponents if segment.exponents is not None else self.protocol.exponents

    def alpha_min(self) -> float:
        """Smallest exponent used anywhere in the schedule"""
        return min(self.exponents_for(s).alpha_min(s.graph) for s in self.schedule.segments)


def node_to_edge(values: Sequence[float]) -> ExponentProfile:
    """Edge profile alpha_ij = max(alpha_i, alpha_j) from per-agent exponents"""
    v = np.asarray(values, dtype=float)
    return ExponentProfile(ExponentKind.EDGE, np.maximum.outer(v, v))
