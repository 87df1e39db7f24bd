"""Graph analysis service - structural and spectral report of a topology"""

import logging
from typing import Any, Optional

import numpy as np

from concord.domain.config.numerics import NumericsConfig
from concord.domain.models.graph import WeightedDigraph
from concord.domain.models.protocol import ProtocolVariant
from concord.domain.models.scenario import Scenario
from concord.domain.spectral import (
    SpectralSummary,
    gershgorin_contains,
    leader_connectivity,
    sym_eigenvalues,
    weighted_symmetric_part,
)
from concord.domain.topology import (
    exponent_graph,
    fixed_leader,
    follower_block,
    has_spanning_tree,
    is_detail_balanced,
    is_irreducible,
    laplacian,
    leaders,
    left_null_vector,
    scc_condensation,
)

logger = logging.getLogger(__name__)


def _labels(vertices) -> list[int]:
    """1-based agent labels"""
    return sorted(int(v) + 1 for v in vertices)


class GraphAnalysisService:
    """Service for analyzing communication topologies"""

    numerics: NumericsConfig

    def __init__(self, numerics: Optional[NumericsConfig] = None):
        """Initialize graph analysis service

        Args:
            numerics: Algorithm tolerances (defaults if None)
        """
        self.numerics = numerics or NumericsConfig()

    def spectrum(self, m: np.ndarray) -> SpectralSummary:
        """Symmetric eigenvalues with the configured Jacobi tolerances"""
        return sym_eigenvalues(
            m, tol=self.numerics.jacobi_tol, max_sweeps=self.numerics.jacobi_max_sweeps
        )

    def perron_vector(self, g: WeightedDigraph) -> np.ndarray:
        return left_null_vector(
            g, tol=self.numerics.perron_tol, max_iter=self.numerics.perron_max_iter
        )

    def detail_balance(self, g: WeightedDigraph) -> Optional[np.ndarray]:
        return is_detail_balanced(
            g, rtol=self.numerics.detail_balance_rtol, zero_weight=self.numerics.zero_weight
        )

    def algebraic_connectivity(self, g: WeightedDigraph) -> float:
        """lambda2 of L(A) for symmetric weights"""
        if not g.is_symmetric:
            raise ValueError("Algebraic connectivity needs symmetric weights")
        if g.n < 2:
            raise ValueError("Algebraic connectivity needs at least two agents")
        return self.spectrum(laplacian(g)).lambda2

    def is_connected_undirected(self, g: WeightedDigraph) -> bool:
        """Symmetric weights with lambda2 above the connectivity tolerance"""
        if not g.is_symmetric:
            return False
        if g.n == 1:
            return True
        return self.algebraic_connectivity(g) > self.numerics.connectivity_tol

    def analyze(self, g: WeightedDigraph, alpha0: Optional[float] = None) -> dict[str, Any]:
        """Structural and spectral report of one topology.

        Args:
            g: Topology to analyze
            alpha0: Largest exponent; adds exponent-graph connectivity when given

        Returns:
            JSON-ready dictionary; agent labels are 1-based
        """
        logger.info(f"Analyzing graph with {g.n} agents and {g.edge_count} edges")
        condensation = scc_condensation(g)
        strongly_connected = len(condensation.components) == 1
        report: dict[str, Any] = {
            "n": g.n,
            "edges": g.edge_count,
            "symmetric": g.is_symmetric,
            "components": [_labels(c) for c in condensation.components],
            "condensation_edges": [[u + 1, v + 1] for u, v in condensation.edges],
            "source_components": [k + 1 for k in condensation.sources],
            "strongly_connected": strongly_connected,
            "irreducible": is_irreducible(g),
            "has_spanning_tree": has_spanning_tree(g),
            "leaders": _labels(leaders(g)),
        }

        omega = self.detail_balance(g)
        report["detail_balance"] = omega.tolist() if omega is not None else None
        report["left_null_vector"] = self.perron_vector(g).tolist() if strongly_connected else None

        L = laplacian(g)
        if g.is_symmetric:
            summary = self.spectrum(L)
            report["laplacian_spectrum"] = summary.to_dict()
            report["connected"] = g.n == 1 or summary.lambda2 > self.numerics.connectivity_tol
            report["gershgorin_contains_spectrum"] = gershgorin_contains(
                L, summary.eigenvalues, slack=self.numerics.gershgorin_slack
            )
            if alpha0 is not None and g.n > 1:
                b_summary = self.spectrum(laplacian(exponent_graph(g, alpha0)))
                report["exponent_graph"] = {"alpha0": alpha0, **b_summary.to_dict()}
        elif strongly_connected:
            weighted = weighted_symmetric_part(L, self.perron_vector(g))
            summary = self.spectrum(weighted)
            report["weighted_symmetric_spectrum"] = summary.to_dict()
            report["gershgorin_contains_spectrum"] = gershgorin_contains(
                weighted, summary.eigenvalues, slack=self.numerics.gershgorin_slack
            )

        leader = fixed_leader(g)
        report["fixed_leader"] = leader + 1 if leader is not None else None
        if leader is not None and alpha0 is not None:
            block, _ = follower_block(g, leader)
            if block.is_symmetric:
                report["leader_connectivity"] = leader_connectivity(g, leader, alpha0)

        logger.debug(
            f"Analysis: {len(condensation.components)} components, leaders {report['leaders']}"
        )
        return report

    def analyze_scenario(self, scenario: Scenario, segment: int = 1) -> dict[str, Any]:
        """Analyze the topology of one segment (1-based) of a scenario"""
        segments = scenario.schedule.segments
        if not 1 <= segment <= len(segments):
            raise ValueError(f"Segment {segment} out of range 1..{len(segments)}")
        chosen = segments[segment - 1]
        alpha0 = None
        if scenario.variant != ProtocolVariant.LINEAR:
            alpha0 = scenario.exponents_for(chosen).alpha0(chosen.graph)
        report = self.analyze(chosen.graph, alpha0)
        report["scenario"] = scenario.name
        report["segment"] = segment
        return report
