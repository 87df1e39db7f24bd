"""Tests for Lyapunov functionals, bound formulas and rate thresholds"""

import math

import numpy as np
import pytest

from concord.domain.bounds import (
    bound_leader_p1,
    bound_p1_undirected,
    bound_p2_general,
    bound_p2_undirected,
    bound_strongly_connected_p1,
    bound_switching,
    comparison_solution,
    finite_time_bound,
    k2_constant,
    k3_constant,
    k4_constant,
    k4_general,
    p1_rate_thresholds,
    p2_rate_thresholds,
    sample_k1_diagnostic,
    switching_k6,
)
from concord.domain.dynamics import complete_edge_exponents, rhs_p1, rhs_p2
from concord.domain.integrator import rk4_step
from concord.domain.lyapunov import (
    lyapunov_rate_p1_undirected,
    lyapunov_rate_p2,
    power_sum_bounds,
    v_edge_energy,
    v_quadratic,
    weighted_power_sum,
)
from concord.domain.models.graph import WeightedDigraph
from concord.domain.models.protocol import ExponentProfile
from concord.domain.spectral import sym_eigenvalues
from concord.domain.topology import exponent_graph, laplacian

CYCLE6 = WeightedDigraph.cycle(6, weight=2.0)
PATH6 = WeightedDigraph.path(6, weight=2.0)
X0 = np.array([-5.0, -3, 7, 9, 4, 5])


def V5(x: np.ndarray) -> float:
    return v_edge_energy(CYCLE6, x)


def V3(x: np.ndarray) -> float:
    return v_quadratic(x - x.mean())


class TestLyapunovFunctionals:
    """Tests for the quadratic, edge-energy and power-sum functionals"""

    def test_quadratic(self):
        """Test half squared norm, plain and weighted"""
        assert v_quadratic(np.array([1.0, -1.0])) == 1.0
        assert v_quadratic(np.array([1.0, -1.0]), np.array([2.0, 1.0])) == 1.5

    def test_quadratic_length_mismatch(self):
        """Test omega must match delta"""
        with pytest.raises(ValueError, match="Length mismatch"):
            v_quadratic(np.zeros(2), np.ones(3))

    def test_cycle_initial_values(self):
        """Test V0 of the 6-cycle scenario"""
        delta = X0 - X0.mean()
        assert v_quadratic(delta) == pytest.approx(78.4167, abs=1e-4)
        assert v_edge_energy(CYCLE6, X0) == pytest.approx(234.0)

    def test_edge_energy_matches_laplacian_form(self):
        """Test the edge energy equals x^T L x / 2"""
        g = WeightedDigraph.path(2)
        assert v_edge_energy(g, np.array([0.0, 1.0])) == pytest.approx(0.5)

    def test_edge_energy_needs_symmetric(self):
        """Test directed weights are rejected"""
        with pytest.raises(ValueError, match="symmetric"):
            v_edge_energy(WeightedDigraph.from_rows([[0, 1], [2, 0]]), np.zeros(2))

    def test_weighted_power_sum(self):
        """Test hand-computed weighted power sum"""
        value = weighted_power_sum(np.ones(2), np.ones(2), np.array([1.0, 2.0]))
        assert value == pytest.approx(2.5)

    def test_p1_rate_matches_finite_difference(self):
        """Test the P1 rate equals the directional derivative of the edge energy"""
        alpha = np.array([0.5, 0.3, 0.7, 0.5, 0.6, 0.4])
        u = rhs_p1(PATH6, ExponentProfile.node(alpha), X0)
        h = 1e-6
        numeric = (v_edge_energy(PATH6, X0 + h * u) - v_edge_energy(PATH6, X0 - h * u)) / (2 * h)
        assert lyapunov_rate_p1_undirected(PATH6, alpha, X0) == pytest.approx(numeric, rel=1e-6)

    def test_p2_rate_matches_finite_difference(self):
        """Test the P2 rate equals the directional derivative of the quadratic functional"""
        exps = ExponentProfile.uniform(6, 0.5, "edge")
        u = rhs_p2(CYCLE6, exps, X0)

        def v(x):
            return v_quadratic(x - x.mean())

        h = 1e-6
        numeric = (v(X0 + h * u) - v(X0 - h * u)) / (2 * h)
        rate = lyapunov_rate_p2(CYCLE6, complete_edge_exponents(CYCLE6, exps), X0)
        assert rate < 0
        assert rate == pytest.approx(numeric, rel=1e-6)


class TestPowerSumBounds:
    """Tests for power_sum_bounds"""

    def test_equal_entries_attain_upper(self):
        """Test equal entries attain the upper bound"""
        bounds = power_sum_bounds(np.ones(4), 0.5)
        assert bounds.lower == pytest.approx(2.0)
        assert bounds.middle == pytest.approx(4.0)
        assert bounds.upper == pytest.approx(4.0)

    def test_single_nonzero_attains_lower(self):
        """Test one nonzero entry attains the lower bound"""
        bounds = power_sum_bounds(np.array([9.0, 0.0, 0.0]), 0.5)
        assert bounds.lower == pytest.approx(bounds.middle)

    def test_negative_rejected(self):
        """Test negative entries are rejected"""
        with pytest.raises(ValueError, match="nonnegative"):
            power_sum_bounds(np.array([-1.0, 1.0]), 0.5)

    def test_exponent_range(self):
        """Test p outside (0, 1] is rejected"""
        with pytest.raises(ValueError, match="p must lie"):
            power_sum_bounds(np.ones(2), 1.5)


class TestComparisonLemma:
    """Tests for finite_time_bound and comparison_solution"""

    def test_two_agent_settling_time(self):
        """Test the settling time of V0 = 0.0025, K = 2^1.5, a = 0.75"""
        assert finite_time_bound(0.0025, 2**1.5, 0.75) == pytest.approx(0.3162, abs=1e-4)

    def test_solution_values(self):
        """Test the exact solution before, during and after settling"""
        k = 2**1.5
        assert comparison_solution(0.0025, k, 0.75, 0.0) == pytest.approx(0.0025)
        assert comparison_solution(0.0025, k, 0.75, 0.1) == pytest.approx(5.465e-4, rel=1e-3)
        assert comparison_solution(0.0025, k, 0.75, 1.0) == 0.0

    def test_zero_v0(self):
        """Test V0 = 0 settles immediately"""
        assert finite_time_bound(0.0, 1.0, 0.5) == 0.0

    @pytest.mark.parametrize("a", [0.0, 1.0, 1.5])
    def test_rate_exponent_range(self, a):
        """Test decay exponents outside (0, 1) are rejected"""
        with pytest.raises(ValueError, match="Decay exponent"):
            finite_time_bound(1.0, 1.0, a)

    def test_nonpositive_k(self):
        """Test K must be positive"""
        with pytest.raises(ValueError, match="K must be positive"):
            finite_time_bound(1.0, 0.0, 0.5)


class TestBoundFormulas:
    """Tests for the settling-time bounds of each guarantee"""

    def test_p2_cycle(self):
        """Test the P2 bound on the 6-cycle"""
        assert bound_p2_undirected(78.4167, 2.5198, 0.5) == pytest.approx(4.2085, abs=2e-3)

    def test_p2_path(self):
        """Test the P2 bound on the 6-path"""
        assert bound_p2_undirected(78.4167, 0.6752, 0.5) == pytest.approx(11.2999, abs=5e-3)

    def test_p2_general_with_unit_k4(self):
        """Test the general form reduces to the uniform one at K4 = 1"""
        assert bound_p2_general(10.0, 1.0, 2.0, 0.4) == bound_p2_undirected(10.0, 2.0, 0.4)

    def test_smaller_k4_loosens(self):
        """Test a smaller edge constant gives a longer bound"""
        assert bound_p2_general(10.0, 0.5, 2.0, 0.4) > bound_p2_general(10.0, 1.0, 2.0, 0.4)

    def test_p1_cycle(self):
        """Test the P1 bound on the 6-cycle with V5(0) = 234"""
        assert bound_p1_undirected(234.0, 2.0, 0.5) == pytest.approx(5.531, abs=1e-3)

    def test_switching(self):
        """Test the switching bound with the path as worst segment"""
        assert bound_switching(78.4167, 0.6752, 0.5) == pytest.approx(11.2999, abs=5e-3)

    def test_switching_errors(self):
        """Test switching bound argument checks"""
        with pytest.raises(ValueError, match="K6"):
            bound_switching(1.0, 0.0, 0.5)
        with pytest.raises(ValueError, match="V0"):
            bound_switching(-1.0, 1.0, 0.5)

    def test_leader(self):
        """Test the leader bound with one follower"""
        assert bound_leader_p1(1.0, 1.0, 1.5 ** (2 / 3), 0.5) == pytest.approx(2.289, abs=1e-3)

    def test_strongly_connected(self):
        """Test the strongly connected P1 bound"""
        assert bound_strongly_connected_p1(1.0, 1.0, 1.0, 0.5) == pytest.approx(3.0)


class TestConstants:
    """Tests for K2, K3, K4 and K6"""

    def test_k2_two_agents(self):
        """Test K2 for two agents with alpha = 0.5 and x0 = (0, 1)"""
        g = WeightedDigraph.path(2)
        k2 = k2_constant(np.ones(2), np.full(2, 0.5), g, np.array([0.0, 1.0]))
        assert k2 == pytest.approx(0.6552, abs=1e-4)

    def test_k2_non_increasing_in_scale(self):
        """Test a larger initial state never raises K2 with mixed exponents"""
        omega = np.full(3, 1 / 3)
        alpha = np.array([0.3, 0.5, 0.7])
        g = WeightedDigraph.path(3)
        x0 = np.array([0.0, 1.0, 2.0])
        assert k2_constant(omega, alpha, g, 2 * x0) <= k2_constant(omega, alpha, g, x0)

    def test_k2_degenerate(self):
        """Test x0 = 0 and an edgeless graph are rejected"""
        with pytest.raises(ValueError, match="x0 = 0"):
            k2_constant(np.ones(2), np.full(2, 0.5), WeightedDigraph.path(2), np.zeros(2))
        with pytest.raises(ValueError, match="without edges"):
            k2_constant(np.ones(2), np.full(2, 0.5), WeightedDigraph.empty(2), np.ones(2))

    def test_k3_single_follower(self):
        """Test K3 = 1.5^(2/3) for one follower with alpha = 0.5"""
        g = WeightedDigraph.from_rows([[0, 1], [0, 0]])
        k3 = k3_constant(np.ones(1), np.full(1, 0.5), g, np.array([0.0, 1.0]))
        assert k3 == pytest.approx(1.5 ** (2 / 3))
        assert k3 == pytest.approx(1.3104, abs=1e-4)

    def test_k4_uniform_is_one(self):
        """Test K4 = 1 with equal exponents while the general form is conservative"""
        alpha = np.full((6, 6), 0.5)
        assert k4_constant(CYCLE6, alpha, X0) == 1.0
        assert k4_general(CYCLE6, alpha, X0) == pytest.approx(1 / 12)

    def test_k4_general_bounds(self):
        """Test K4 lies in (0, 1] with mixed exponents"""
        values = np.full((6, 6), 0.5)
        values[0, 1] = values[1, 0] = 0.3
        k4 = k4_constant(CYCLE6, values, X0)
        assert 0 < k4 <= 1

    def test_k4_degenerate(self):
        """Test constant x0 with mixed exponents and edgeless graphs are rejected"""
        values = np.full((2, 2), 0.5)
        values[0, 1] = 0.3
        g = WeightedDigraph.from_rows([[0, 1], [1, 0]])
        with pytest.raises(ValueError, match="degenerate"):
            k4_general(g, values, np.ones(2))
        with pytest.raises(ValueError, match="no edge constant"):
            k4_general(WeightedDigraph.empty(2), values, np.ones(2))

    def test_k6_minimum(self):
        """Test K6 takes the weakest segment"""
        assert switching_k6([(1.0, 2.5198), (1.0, 0.6752)]) == pytest.approx(0.6752)

    def test_k6_empty(self):
        """Test K6 needs a segment"""
        with pytest.raises(ValueError, match="at least one segment"):
            switching_k6([])


class TestRateThresholds:
    """Tests for the exponent crossover thresholds"""

    def test_p1_thresholds(self):
        """Test P1 thresholds for n = 6 with alpha 0.3 and 0.8"""
        thresholds = p1_rate_thresholds(6, 0.8262, 8.787, 0.3, 0.8)
        assert thresholds.upper == pytest.approx(7.4353, abs=1e-2)
        assert thresholds.lower == pytest.approx(0.0569, abs=1e-3)
        assert thresholds.lower < thresholds.upper

    def test_p2_thresholds(self):
        """Test P2 thresholds for n = 6 with alpha 0.3 and 0.8"""
        thresholds = p2_rate_thresholds(6, 1.2001, 12.763, 0.8923, 9.490, 0.3, 0.8)
        assert thresholds.upper == pytest.approx(42674, rel=2e-3)
        assert thresholds.lower == pytest.approx(2.9e-5, rel=5e-2)

    def test_alpha_order(self):
        """Test alpha_lo must be below alpha_hi"""
        with pytest.raises(ValueError, match="alpha_lo"):
            p1_rate_thresholds(6, 1.0, 2.0, 0.8, 0.3)
        with pytest.raises(ValueError, match="alpha_lo"):
            p2_rate_thresholds(6, 1.0, 2.0, 1.0, 2.0, 0.5, 0.5)

    def test_lambda_order(self):
        """Test lambda2 must not exceed lambda_n"""
        with pytest.raises(ValueError, match="lambda2 <= lambda_n"):
            p1_rate_thresholds(6, 3.0, 2.0, 0.3, 0.8)


class TestThresholdCrossover:
    """Tests that the thresholds separate the measured decay rates of the two exponents"""

    @staticmethod
    def _rate(functional, rhs, x, h=1e-6):
        """One-step finite difference of the functional along the protocol"""
        return (functional(rk4_step(rhs, x, h)) - functional(x)) / h

    @staticmethod
    def _scaled(functional, level):
        """X0 rescaled so the quadratic functional equals level"""
        return X0 * math.sqrt(level / functional(X0))

    def _p1_rates(self, x):
        rates = []
        for alpha in (0.3, 0.8):
            exps = ExponentProfile.uniform(6, alpha, "node")
            rates.append(self._rate(V5, lambda y: rhs_p1(CYCLE6, exps, y), x))
        return rates

    def _p2_rates(self, x):
        rates = []
        for alpha in (0.3, 0.8):
            exps = ExponentProfile.uniform(6, alpha, "edge")
            rates.append(self._rate(V3, lambda y: rhs_p2(CYCLE6, exps, y), x))
        return rates

    def _p2_thresholds(self):
        lo = sym_eigenvalues(laplacian(exponent_graph(CYCLE6, 0.3)))
        hi = sym_eigenvalues(laplacian(exponent_graph(CYCLE6, 0.8)))
        return p2_rate_thresholds(6, lo.lambda2, lo.lambda_max, hi.lambda2, hi.lambda_max, 0.3, 0.8)

    def test_p1_larger_exponent_faster_above_upper(self):
        """Test dV5/dt under alpha 0.8 is at most the one under 0.3 above the upper level"""
        thresholds = p1_rate_thresholds(6, 2.0, 8.0, 0.3, 0.8)
        for x in (X0, self._scaled(V5, 2.0 * thresholds.upper)):
            assert V5(x) > thresholds.upper
            rate_lo, rate_hi = self._p1_rates(x)
            assert rate_hi <= rate_lo + 1e-6

    def test_p1_smaller_exponent_faster_below_lower(self):
        """Test dV5/dt under alpha 0.3 is at most the one under 0.8 below the lower level"""
        thresholds = p1_rate_thresholds(6, 2.0, 8.0, 0.3, 0.8)
        x = self._scaled(V5, 0.5 * thresholds.lower)
        assert V5(x) < thresholds.lower
        rate_lo, rate_hi = self._p1_rates(x)
        assert rate_lo <= rate_hi + 1e-6

    def test_p2_larger_exponent_faster_above_upper(self):
        """Test dV3/dt under alpha 0.8 is at most the one under 0.3 above the upper level"""
        thresholds = self._p2_thresholds()
        x = self._scaled(V3, 2.0 * thresholds.upper)
        assert V3(x) > thresholds.upper
        rate_lo, rate_hi = self._p2_rates(x)
        assert rate_hi <= rate_lo + 1e-6

    def test_p2_smaller_exponent_faster_below_lower(self):
        """Test dV3/dt under alpha 0.3 is at most the one under 0.8 below the lower level"""
        thresholds = self._p2_thresholds()
        x = self._scaled(V3, 0.5 * thresholds.lower)
        assert V3(x) < thresholds.lower
        rate_lo, rate_hi = self._p2_rates(x)
        assert rate_lo <= rate_hi + 1e-6


class TestK1Diagnostic:
    """Tests for sample_k1_diagnostic"""

    def test_deterministic(self):
        """Test a fixed seed gives the same sampled minimum"""
        omega = np.full(6, 1 / 6)
        first = sample_k1_diagnostic(omega, CYCLE6, samples=500, seed=3)
        assert first == sample_k1_diagnostic(omega, CYCLE6, samples=500, seed=3)

    def test_undirected_nonnegative(self):
        """Test the sampled quadratic form is nonnegative on an undirected graph"""
        value = sample_k1_diagnostic(np.full(6, 1 / 6), PATH6, samples=500, seed=0)
        assert value is not None
        assert value >= -1e-12

    def test_single_agent(self):
        """Test one agent has no sign-mixed samples"""
        assert sample_k1_diagnostic(np.ones(1), WeightedDigraph.empty(1), samples=50) is None

    def test_upper_bounded_by_eigenvalue_scale(self):
        """Test the sampled minimum stays below the largest eigenvalue of the weighted form"""
        value = sample_k1_diagnostic(np.full(6, 1 / 6), CYCLE6, samples=500, seed=1)
        assert value <= 8.0 / 6 + 1e-12
        assert math.isfinite(value)
