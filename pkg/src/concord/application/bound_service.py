"""Bound service - convergence guarantees and settling-time bounds of scenarios"""

import logging
from typing import Callable, Optional

import numpy as np

from concord.application.graph_analysis_service import GraphAnalysisService
from concord.domain.bounds import (
    bound_leader_p1,
    bound_p1_undirected,
    bound_p2_general,
    bound_p2_undirected,
    bound_strongly_connected_p1,
    bound_switching,
    k2_constant,
    k3_constant,
    k4_constant,
    k4_general,
    p1_rate_thresholds,
    p2_rate_thresholds,
    sample_k1_diagnostic,
    switching_k6,
)
from concord.domain.config.numerics import NumericsConfig
from concord.domain.config.output import OutputConfig
from concord.domain.dynamics import complete_edge_exponents
from concord.domain.lyapunov import v_edge_energy, v_quadratic, weighted_power_sum
from concord.domain.models.bound_report import BoundReport, Guarantee, ThresholdReport
from concord.domain.models.graph import WeightedDigraph
from concord.domain.models.protocol import ProtocolVariant
from concord.domain.models.scenario import Scenario
from concord.domain.spectral import leader_connectivity, weighted_symmetric_part
from concord.domain.topology import (
    exponent_graph,
    fixed_leader,
    follower_block,
    has_spanning_tree,
    is_strongly_connected,
    laplacian,
)

logger = logging.getLogger(__name__)

BoundFn = Callable[[float], float]


class BoundService:
    """Service for classifying scenarios and computing their convergence-time bounds"""

    numerics: NumericsConfig
    output: OutputConfig
    analysis: GraphAnalysisService

    def __init__(
        self,
        numerics: Optional[NumericsConfig] = None,
        output: Optional[OutputConfig] = None,
    ):
        """Initialize bound service

        Args:
            numerics: Algorithm tolerances (defaults if None)
            output: Report settings, including the K1 diagnostic sampler (defaults if None)
        """
        self.numerics = numerics or NumericsConfig()
        self.output = output or OutputConfig()
        self.analysis = GraphAnalysisService(self.numerics)

    def classify(self, scenario: Scenario) -> tuple[Guarantee, list[str]]:
        """Which convergence guarantee applies, plus reasons when none does

        Args:
            scenario: Validated scenario

        Returns:
            Tuple of (guarantee, reasons)
        """
        variant = scenario.variant
        if variant == ProtocolVariant.LINEAR:
            return Guarantee.LINEAR, ["the linear protocol converges only asymptotically"]
        if variant == ProtocolVariant.P3:
            return Guarantee.NONE, [
                "P3 has no settling-time bound; its states reach zero in finite time "
                "only when omega^T x0 = 0"
            ]

        schedule = scenario.schedule
        if schedule.is_switching:
            if variant != ProtocolVariant.P2:
                return Guarantee.NONE, ["the switching bound covers P2 only"]
            for k, segment in enumerate(schedule.segments, 1):
                if not self.analysis.is_connected_undirected(segment.graph):
                    return Guarantee.NONE, [f"segment {k} is not a connected undirected graph"]
                if not scenario.exponents_for(segment).is_symmetric(segment.graph):
                    return Guarantee.NONE, [f"segment {k} has asymmetric exponents"]
            return Guarantee.P2_SWITCHING, []

        segment = schedule.segments[0]
        g = segment.graph
        profile = scenario.exponents_for(segment)
        leader = fixed_leader(g)

        if variant == ProtocolVariant.P2:
            if not profile.is_symmetric(g):
                return Guarantee.NONE, ["P2 guarantees need symmetric exponents"]
            if self.analysis.is_connected_undirected(g):
                if profile.is_uniform(g):
                    return Guarantee.P2_UNDIRECTED, []
                return Guarantee.P2_NONUNIFORM, []
            if leader is not None:
                block, _ = follower_block(g, leader)
                if self.analysis.is_connected_undirected(block):
                    return Guarantee.P2_LEADER, []
                return Guarantee.NONE, ["followers of the leader are not connected undirected"]
            if is_strongly_connected(g) and self.analysis.detail_balance(g) is not None:
                return Guarantee.P2_DETAIL_BALANCED, []
            if not has_spanning_tree(g):
                return Guarantee.NONE, ["the graph has no spanning tree"]
            return Guarantee.NONE, ["directed P2 topology outside the covered cases"]

        if self.analysis.is_connected_undirected(g) and profile.is_uniform(g):
            return Guarantee.P1_UNDIRECTED, []
        if is_strongly_connected(g):
            return Guarantee.P1_STRONGLY_CONNECTED, []
        if leader is not None and is_strongly_connected(follower_block(g, leader)[0]):
            return Guarantee.P1_LEADER, []
        if has_spanning_tree(g):
            return Guarantee.P1_SPANNING_TREE, []
        return Guarantee.NONE, ["the graph has no spanning tree"]

    def report(self, scenario: Scenario) -> BoundReport:
        """Assemble the bound report of a scenario

        Args:
            scenario: Validated scenario

        Returns:
            Report with V0, constants, bound, optional thresholds and notes
        """
        logger.info(f"Computing bound report for '{scenario.name}'")
        if scenario.n == 1:
            return BoundReport(
                scenario.name, Guarantee.NONE, 0.0, bound=0.0, notes=["a single agent"]
            )

        basis, reasons = self.classify(scenario)
        report = BoundReport(scenario.name, basis, notes=list(reasons))
        builders = {
            Guarantee.P2_UNDIRECTED: self._p2_undirected,
            Guarantee.P2_NONUNIFORM: self._p2_undirected,
            Guarantee.P2_LEADER: self._p2_leader,
            Guarantee.P2_SWITCHING: self._p2_switching,
            Guarantee.P2_DETAIL_BALANCED: self._p2_detail_balanced,
            Guarantee.P1_UNDIRECTED: self._p1_undirected,
            Guarantee.P1_STRONGLY_CONNECTED: self._p1_strongly_connected,
            Guarantee.P1_LEADER: self._p1_leader,
            Guarantee.P1_SPANNING_TREE: self._p1_spanning_tree,
            Guarantee.LINEAR: self._linear,
        }
        bound_fn: Optional[BoundFn] = None
        if basis in builders:
            bound_fn = builders[basis](scenario, report)
        if bound_fn is not None and report.v0 is not None:
            report.bound = bound_fn(report.v0)

        self._apply_override(scenario, report, bound_fn)
        report.thresholds = self._thresholds(scenario, report)
        logger.info(
            f"Bound report for '{scenario.name}': basis={basis.value}, bound={report.bound}"
        )
        report.validate()
        return report

    # --- fixed topologies, P2 -------------------------------------------------------------

    def _fixed(self, scenario: Scenario):
        segment = scenario.schedule.segments[0]
        return segment.graph, scenario.exponents_for(segment)

    def _exponent_lambda2(self, g: WeightedDigraph, alpha0: float) -> float:
        return self.analysis.algebraic_connectivity(exponent_graph(g, alpha0))

    def _p2_undirected(self, scenario: Scenario, report: BoundReport) -> BoundFn:
        g, profile = self._fixed(scenario)
        x0 = scenario.initial_state
        alpha = complete_edge_exponents(g, profile)
        alpha0 = profile.alpha0(g)
        lambda2_b = self._exponent_lambda2(g, alpha0)
        report.v0 = v_quadratic(x0 - x0.mean())
        report.constants.update(
            {
                "alpha0": alpha0,
                "lambda2_L": self.analysis.algebraic_connectivity(g),
                "lambda2_LB": lambda2_b,
            }
        )
        if report.v0 == 0:
            return lambda v0: 0.0
        k4 = k4_constant(g, alpha, x0)
        report.constants["K4"] = k4
        report.constants["K4_general"] = k4_general(g, alpha, x0)
        if profile.is_uniform(g):
            return lambda v0: bound_p2_undirected(v0, lambda2_b, alpha0)
        return lambda v0: bound_p2_general(v0, k4, lambda2_b, alpha0)

    def _p2_leader(self, scenario: Scenario, report: BoundReport) -> BoundFn:
        g, profile = self._fixed(scenario)
        x0 = scenario.initial_state
        leader = fixed_leader(g)
        alpha0 = profile.alpha0(g)
        alpha = complete_edge_exponents(g, profile)
        lam = leader_connectivity(g, leader, alpha0)
        report.v0 = v_quadratic(x0 - x0[leader])
        report.constants.update(
            {"alpha0": alpha0, "leader": leader + 1, "leader_connectivity": lam}
        )
        if report.v0 == 0:
            return lambda v0: 0.0
        k4 = self._k4_support(g, alpha, x0)
        report.constants["K4"] = k4
        return lambda v0: bound_p2_general(v0, k4, lam, alpha0)

    @staticmethod
    def _k4_support(g: WeightedDigraph, alpha: np.ndarray, x0: np.ndarray) -> float:
        """K4 over every edge of a possibly directed support"""
        defined = alpha[g.support]
        if np.all(defined == defined[0]):
            return 1.0
        return k4_general(g, alpha, x0)

    def _p2_switching(self, scenario: Scenario, report: BoundReport) -> BoundFn:
        x0 = scenario.initial_state
        segments = scenario.schedule.segments
        alpha0 = max(scenario.exponents_for(s).alpha0(s.graph) for s in segments)
        report.v0 = v_quadratic(x0 - x0.mean())
        report.constants["alpha0"] = alpha0
        if report.v0 == 0:
            return lambda v0: 0.0
        pairs = []
        for k, segment in enumerate(segments, 1):
            alpha = complete_edge_exponents(segment.graph, scenario.exponents_for(segment))
            k4 = k4_constant(segment.graph, alpha, x0)
            lambda2_b = self._exponent_lambda2(segment.graph, alpha0)
            report.constants[f"K4[{k}]"] = k4
            report.constants[f"lambda2_LB[{k}]"] = lambda2_b
            pairs.append((k4, lambda2_b))
        k6 = switching_k6(pairs)
        report.constants["K6"] = k6
        return lambda v0: bound_switching(v0, k6, alpha0)

    def _p2_detail_balanced(self, scenario: Scenario, report: BoundReport) -> None:
        g, _ = self._fixed(scenario)
        x0 = scenario.initial_state
        omega = self.analysis.detail_balance(g)
        weighted_mean = float(np.dot(omega, x0) / omega.sum())
        report.v0 = v_quadratic(x0 - weighted_mean, omega)
        report.constants.update({f"omega[{i + 1}]": float(w) for i, w in enumerate(omega)})
        report.notes.append(
            "finite-time convergence to the omega-weighted mean is guaranteed, "
            "but no closed-form settling bound is available"
        )

    # --- fixed topologies, P1 -------------------------------------------------------------

    def _p1_undirected(self, scenario: Scenario, report: BoundReport) -> BoundFn:
        g, profile = self._fixed(scenario)
        alpha = profile.alpha0()
        lambda2 = self.analysis.algebraic_connectivity(g)
        report.v0 = v_edge_energy(g, scenario.initial_state)
        report.constants.update({"alpha0": alpha, "lambda2_L": lambda2})
        return lambda v0: bound_p1_undirected(v0, lambda2, alpha)

    def _p1_strongly_connected(self, scenario: Scenario, report: BoundReport) -> Optional[BoundFn]:
        g, profile = self._fixed(scenario)
        x0 = scenario.initial_state
        alpha = profile.values
        alpha0 = float(alpha.max())
        omega = self.analysis.perron_vector(g)
        report.v0 = weighted_power_sum(omega, alpha, -laplacian(g) @ x0)
        report.constants["alpha0"] = alpha0
        report.constants.update({f"omega[{i + 1}]": float(w) for i, w in enumerate(omega)})

        if self.output.k1_samples > 0:
            sampled = sample_k1_diagnostic(
                omega, g, samples=self.output.k1_samples, seed=self.output.k1_seed
            )
            if sampled is not None:
                report.constants["K1_sampled"] = sampled
                report.notes.append(
                    f"K1_sampled is the smallest of {self.output.k1_samples} random sign-mixed "
                    "samples; it is not a certified lower bound"
                )

        if report.v0 == 0:
            return lambda v0: 0.0
        k2 = k2_constant(omega, alpha, g, x0)
        report.constants["K2"] = k2
        k1 = scenario.analysis.k1
        if k1 is None:
            report.notes.append("K1 not supplied; set analysis.k1 to obtain a bound")
            return None
        report.constants["K1"] = k1
        return lambda v0: bound_strongly_connected_p1(v0, k1, k2, alpha0)

    def _p1_leader(self, scenario: Scenario, report: BoundReport) -> BoundFn:
        g, profile = self._fixed(scenario)
        x0 = scenario.initial_state
        leader = fixed_leader(g)
        block, coupling = follower_block(g, leader)
        followers = [i for i in range(g.n) if i != leader]
        alpha_bar = profile.without(leader).values
        alpha0 = float(alpha_bar.max())
        omega_bar = self.analysis.perron_vector(block)
        b_bar = weighted_symmetric_part(laplacian(block), omega_bar) + np.diag(omega_bar * coupling)
        lambda1 = self.analysis.spectrum(b_bar).lambda_min
        y_bar = (-laplacian(g) @ x0)[followers]
        report.v0 = weighted_power_sum(omega_bar, alpha_bar, y_bar)
        report.constants.update(
            {"alpha0": alpha0, "leader": leader + 1, "lambda1_Bbar": lambda1}
        )
        if report.v0 == 0:
            return lambda v0: 0.0
        k3 = k3_constant(omega_bar, alpha_bar, g, x0)
        report.constants["K3"] = k3
        return lambda v0: bound_leader_p1(v0, lambda1, k3, alpha0)

    def _p1_spanning_tree(self, scenario: Scenario, report: BoundReport) -> None:
        report.notes.append(
            "finite-time consensus holds component by component along the condensation; "
            "no closed-form settling bound is available"
        )

    def _linear(self, scenario: Scenario, report: BoundReport) -> None:
        if scenario.schedule.is_switching:
            return
        g, _ = self._fixed(scenario)
        if self.analysis.is_connected_undirected(g):
            report.constants["lambda2_L"] = self.analysis.algebraic_connectivity(g)

    # --- extras -----------------------------------------------------------------------

    def _apply_override(
        self, scenario: Scenario, report: BoundReport, bound_fn: Optional[BoundFn]
    ) -> None:
        override = scenario.analysis.v0_override
        if override is None:
            return
        report.constants["V0_override"] = override
        if bound_fn is None:
            report.notes.append(f"V0 override {override:g} ignored: no bound for this basis")
            return
        with_override = bound_fn(override)
        report.constants["bound_with_V0_override"] = with_override
        if report.v0 is not None and report.v0 != override:
            logger.warning(
                f"Quoted V0={override:g} differs from computed V0={report.v0:g} "
                f"for '{scenario.name}'"
            )
            report.notes.append(
                f"quoted V0={override:g} differs from the computed V0={report.v0:g}; "
                f"the bound with the quoted value is {with_override:.4f}"
            )

    def _thresholds(self, scenario: Scenario, report: BoundReport) -> Optional[ThresholdReport]:
        """Rate-crossover levels for the requested exponent pair"""
        pair = scenario.analysis.compare_alphas
        if pair is None:
            return None
        alpha_lo, alpha_hi = pair
        g = scenario.schedule.segments[0].graph
        if scenario.schedule.is_switching or not self.analysis.is_connected_undirected(g):
            report.notes.append("rate comparison needs a fixed connected undirected topology")
            return None
        n = g.n
        if scenario.variant == ProtocolVariant.P1:
            summary = self.analysis.spectrum(laplacian(g))
            thresholds = p1_rate_thresholds(
                n, summary.lambda2, summary.lambda_max, alpha_lo, alpha_hi
            )
            return ThresholdReport("V5", alpha_lo, alpha_hi, thresholds)
        if scenario.variant == ProtocolVariant.P2:
            lo = self.analysis.spectrum(laplacian(exponent_graph(g, alpha_lo)))
            hi = self.analysis.spectrum(laplacian(exponent_graph(g, alpha_hi)))
            thresholds = p2_rate_thresholds(
                n, lo.lambda2, lo.lambda_max, hi.lambda2, hi.lambda_max, alpha_lo, alpha_hi
            )
            return ThresholdReport("V3", alpha_lo, alpha_hi, thresholds)
        report.notes.append("rate comparison applies to P1 and P2 only")
        return None
