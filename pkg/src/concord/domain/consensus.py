"""Disagreement, conserved quantities and consensus checks"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from concord.domain.config.numerics import NumericsConfig
from concord.domain.models.graph import WeightedDigraph
from concord.domain.models.protocol import ExponentProfile, ProtocolSpec, ProtocolVariant
from concord.domain.models.trajectory import CheckOutcome, ConservedKind, Trajectory
from concord.domain.topology import (
    fixed_leader,
    is_detail_balanced,
    is_strongly_connected,
    left_null_vector,
)

logger = logging.getLogger(__name__)

# Relative agreement required between per-segment omega vectors of a schedule
_OMEGA_RTOL = 1e-9


def disagreement(x: np.ndarray) -> float:
    """max_i x_i - min_i x_i"""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("State must not be empty")
    return float(x.max() - x.min())


@dataclass(frozen=True, eq=False)
class ConservationLaw:
    """Invariant of a protocol on a topology, and hence the final common state"""

    kind: ConservedKind
    omega: Optional[np.ndarray] = None  # weights for WEIGHTED_MEAN, normalized to sum 1
    leader: Optional[int] = None  # 0-based agent for LEADER

    def value(self, x: np.ndarray) -> float:
        """Conserved quantity at state x; the plain average for kind NONE"""
        x = np.asarray(x, dtype=float)
        if self.kind == ConservedKind.LEADER:
            return float(x[self.leader])
        if self.kind == ConservedKind.WEIGHTED_MEAN:
            return float(np.dot(self.omega, x) / np.sum(self.omega))
        return float(np.mean(x))

    def agrees_with(self, other: "ConservationLaw") -> bool:
        if self.kind != other.kind:
            return False
        if self.kind == ConservedKind.LEADER:
            return self.leader == other.leader
        if self.kind == ConservedKind.WEIGHTED_MEAN:
            return bool(np.allclose(self.omega, other.omega, rtol=_OMEGA_RTOL, atol=0.0))
        return True


NO_LAW = ConservationLaw(ConservedKind.NONE)


def conservation_law(
    proto: ProtocolSpec,
    g: WeightedDigraph,
    exps: Optional[ExponentProfile] = None,
    numerics: Optional[NumericsConfig] = None,
) -> ConservationLaw:
    """Resolve what a protocol keeps invariant on a fixed topology.

    A unique leader never moves, whatever the protocol. Otherwise P2 and the linear protocol
    conserve the mean on symmetric graphs with symmetric exponents, and an omega-weighted mean
    on strongly connected detail-balanced graphs. P3 and the linear protocol conserve
    omega^T x for the left null vector of L(A) on strongly connected graphs.
    """
    numerics = numerics or NumericsConfig()
    profile = exps if exps is not None else proto.exponents
    variant = proto.variant

    leader = fixed_leader(g)
    if leader is not None:
        return ConservationLaw(ConservedKind.LEADER, leader=leader)

    if variant in (ProtocolVariant.P2, ProtocolVariant.LINEAR) and profile.is_symmetric(g):
        if g.is_symmetric:
            return ConservationLaw(ConservedKind.MEAN)
        if is_strongly_connected(g):
            omega = is_detail_balanced(
                g, rtol=numerics.detail_balance_rtol, zero_weight=numerics.zero_weight
            )
            if omega is not None:
                return ConservationLaw(ConservedKind.WEIGHTED_MEAN, omega=omega)

    if variant in (ProtocolVariant.P3, ProtocolVariant.LINEAR):
        if g.is_symmetric:
            return ConservationLaw(ConservedKind.MEAN)
        if is_strongly_connected(g):
            omega = left_null_vector(
                g, tol=numerics.perron_tol, max_iter=numerics.perron_max_iter
            )
            return ConservationLaw(ConservedKind.WEIGHTED_MEAN, omega=omega)

    return NO_LAW


def schedule_conservation_law(
    proto: ProtocolSpec,
    segments: Sequence[tuple[WeightedDigraph, Optional[ExponentProfile]]],
    numerics: Optional[NumericsConfig] = None,
) -> ConservationLaw:
    """Law shared by every segment of a schedule, or NONE when segments disagree"""
    laws = [conservation_law(proto, g, exps, numerics) for g, exps in segments]
    first = laws[0]
    if all(first.agrees_with(law) for law in laws[1:]):
        return first
    logger.debug("Segments conserve different quantities; no invariant for the schedule")
    return NO_LAW


def conserved_quantity(
    proto: ProtocolSpec,
    g: WeightedDigraph,
    x: np.ndarray,
    exps: Optional[ExponentProfile] = None,
) -> tuple[ConservedKind, Optional[float]]:
    """Kind of invariant and its value at x; the value is None when nothing is conserved"""
    law = conservation_law(proto, g, exps)
    if law.kind == ConservedKind.NONE:
        return law.kind, None
    return law.kind, law.value(x)


def expected_consensus_check(
    traj: Trajectory, expected: tuple[ConservedKind, float]
) -> CheckOutcome:
    """Compare a run's final common state with an expected one.

    Matches when the kinds agree and the values differ by at most ten consensus tolerances;
    runs that never converged are indeterminate.
    """
    kind, value = expected
    if not traj.converged:
        logger.warning("Run did not converge; consensus check is indeterminate")
        return CheckOutcome.INDETERMINATE
    if ConservedKind(kind) != traj.conserved_kind:
        return CheckOutcome.MISMATCH
    if abs(traj.consensus_value - value) <= 10.0 * traj.consensus_tol:
        return CheckOutcome.MATCH
    return CheckOutcome.MISMATCH
