"""Convergence-time bounds, their constants and the rate-crossover thresholds.

Every bound reduces to the finite-time comparison lemma: dV/dt <= -K V^a with a in (0, 1)
forces V to reach zero no later than V(0)^(1-a) / (K (1-a)).
"""

import logging
from typing import Iterable, Optional

import numpy as np

from concord.domain.models.bound_report import RateThresholds
from concord.domain.models.graph import WeightedDigraph
from concord.domain.spectral import weighted_symmetric_part
from concord.domain.topology import laplacian

logger = logging.getLogger(__name__)


def _check_rate_exponent(a: float) -> None:
    if not 0 < a < 1:
        raise ValueError(f"Decay exponent must lie in (0, 1), got {a}")


def finite_time_bound(v0: float, k: float, a: float) -> float:
    """Settling-time bound V0^(1-a) / (K (1-a))"""
    _check_rate_exponent(a)
    if v0 < 0:
        raise ValueError(f"V0 must be nonnegative, got {v0}")
    if k <= 0:
        raise ValueError(f"K must be positive, got {k}")
    return v0 ** (1.0 - a) / (k * (1.0 - a))


def comparison_solution(v0: float, k: float, a: float, t: float) -> float:
    """Exact solution of dV/dt = -K V^a, clamped at zero after the settling time"""
    _check_rate_exponent(a)
    base = v0 ** (1.0 - a) - k * (1.0 - a) * t
    if base <= 0:
        return 0.0
    return base ** (1.0 / (1.0 - a))


def _power_sum_constant(
    omega: np.ndarray, alpha: np.ndarray, g: WeightedDigraph, x0: np.ndarray
) -> float:
    omega = np.asarray(omega, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if omega.shape != alpha.shape:
        raise ValueError(f"Length mismatch: omega {omega.shape}, alpha {alpha.shape}")
    x_norm = float(np.max(np.abs(x0)))
    if x_norm == 0:
        raise ValueError("x0 = 0 makes the constant degenerate")
    scale = float(np.linalg.norm(laplacian(g), np.inf)) * x_norm
    if scale == 0:
        raise ValueError("Graph without edges makes the constant degenerate")
    a0 = float(alpha.max())
    q = 2.0 * a0 / (1.0 + a0)
    denominator = float(np.sum((omega / (1.0 + alpha)) ** q))
    exponents = 2.0 * alpha - (1.0 + alpha) * q
    exponents[alpha == a0] = 0.0
    return float(np.min(scale**exponents)) / denominator


def k2_constant(
    omega: np.ndarray, alpha: np.ndarray, g: WeightedDigraph, x0: np.ndarray
) -> float:
    """Lower bound on sig(y)^T sig(y) / V1^(2 a0 / (1 + a0)) along a P1 run.

    Uses the induced infinity norm of L(A) (largest absolute row sum).

    Raises:
        ValueError: If x0 = 0
    """
    return _power_sum_constant(omega, alpha, g, x0)


def k3_constant(
    omega_bar: np.ndarray, alpha_bar: np.ndarray, g: WeightedDigraph, x0: np.ndarray
) -> float:
    """Follower-block counterpart of K2; the row-sum norm is taken over the full graph"""
    return _power_sum_constant(omega_bar, alpha_bar, g, x0)


def k4_general(g: WeightedDigraph, alpha: np.ndarray, x0: np.ndarray) -> float:
    """Conservative edge constant of the non-uniform P2 analysis.

    Args:
        g: Graph, weights on the support
        alpha: Completed n x n edge exponents
        x0: Initial state

    Raises:
        ValueError: If the graph has no edges, or x0 is constant with non-uniform exponents
    """
    support = g.support
    if not support.any():
        raise ValueError("Graph without edges has no edge constant")
    alpha = np.asarray(alpha, dtype=float)
    defined = alpha[support]
    a0 = float(defined.max())
    b = g.weights[support] ** (2.0 / (1.0 + a0))
    spread = float(np.max(x0) - np.min(x0))
    exponents = 2.0 * ((1.0 + defined) / (1.0 + a0) - 1.0)
    exponents[defined == a0] = 0.0
    if spread == 0 and np.any(exponents != 0):
        raise ValueError("Constant x0 with non-uniform exponents makes K4 degenerate")
    return float(np.min(b * spread**exponents) / np.sum(b))


def k4_constant(g: WeightedDigraph, alpha: np.ndarray, x0: np.ndarray) -> float:
    """Edge constant of the P2 analysis; exactly 1 when every defined exponent is equal"""
    defined = np.asarray(alpha, dtype=float)[g.support]
    if defined.size == 0 or np.all(defined == defined[0]):
        return 1.0
    return k4_general(g, alpha, x0)


def bound_p1_undirected(v5_0: float, lambda2: float, alpha: float) -> float:
    """P1 on a connected undirected graph with one exponent"""
    rate = (1.0 + alpha) / 2.0
    return finite_time_bound(v5_0, (2.0 * lambda2) ** rate, rate)


def bound_p2_general(v3_0: float, k4: float, lambda2_b: float, alpha0: float) -> float:
    """P2 with edge constant K4 and connectivity lambda2 of the exponent graph"""
    rate = (1.0 + alpha0) / 2.0
    return finite_time_bound(v3_0, 0.5 * (4.0 * k4 * lambda2_b) ** rate, rate)


def bound_p2_undirected(v3_0: float, lambda2_b: float, alpha: float) -> float:
    """P2 on a connected undirected graph with one exponent"""
    return bound_p2_general(v3_0, 1.0, lambda2_b, alpha)


def switching_k6(pairs: Iterable[tuple[float, float]]) -> float:
    """Smallest K4 * lambda2(L(B)) over (K4, lambda2) pairs of the schedule's segments"""
    products = [k4 * lam for k4, lam in pairs]
    if not products:
        raise ValueError("K6 needs at least one segment")
    return min(products)


def bound_switching(v3_0: float, k6: float, alpha0: float) -> float:
    """P2 under switching undirected connected topologies"""
    _check_rate_exponent(alpha0)
    if k6 <= 0:
        raise ValueError(f"K6 must be positive, got {k6}")
    if v3_0 < 0:
        raise ValueError(f"V0 must be nonnegative, got {v3_0}")
    return (
        2.0 ** (1.0 - alpha0)
        * v3_0 ** ((1.0 - alpha0) / 2.0)
        / ((1.0 - alpha0) * k6 ** ((1.0 + alpha0) / 2.0))
    )


def bound_strongly_connected_p1(v1_0: float, k1: float, k2: float, alpha0: float) -> float:
    """P1 on a strongly connected graph; K1 is supplied by the caller"""
    return finite_time_bound(v1_0, k1 * k2, 2.0 * alpha0 / (1.0 + alpha0))


def bound_leader_p1(v2_0: float, lambda1_b: float, k3: float, alpha0: float) -> float:
    """Followers of a fixed leader under P1"""
    return finite_time_bound(v2_0, lambda1_b * k3, 2.0 * alpha0 / (1.0 + alpha0))


def _check_alpha_order(alpha_lo: float, alpha_hi: float) -> None:
    if not 0 < alpha_lo < alpha_hi < 1:
        raise ValueError(
            f"Need 0 < alpha_lo < alpha_hi < 1, got alpha_lo={alpha_lo}, alpha_hi={alpha_hi}"
        )


def p1_rate_thresholds(
    n: int, lambda2: float, lambda_n: float, alpha_lo: float, alpha_hi: float
) -> RateThresholds:
    """Edge-energy levels where P1 with the larger exponent starts or stops being faster.

    Above ``upper`` the larger exponent decays the edge energy at least as fast; below
    ``lower`` the smaller exponent does.
    """
    _check_alpha_order(alpha_lo, alpha_hi)
    if not 0 < lambda2 <= lambda_n:
        raise ValueError(f"Need 0 < lambda2 <= lambda_n, got {lambda2}, {lambda_n}")
    upper = n ** ((1.0 - alpha_lo) / (alpha_hi - alpha_lo)) / (2.0 * lambda2)
    return RateThresholds(upper, 1.0 / (2.0 * lambda_n))


def p2_rate_thresholds(
    n: int,
    lambda2_lo: float,
    lambda_n_lo: float,
    lambda2_hi: float,
    lambda_n_hi: float,
    alpha_lo: float,
    alpha_hi: float,
) -> RateThresholds:
    """Quadratic-functional levels where P2 with the larger exponent starts or stops being faster.

    The lambda arguments belong to the exponent graphs built at alpha_lo and alpha_hi.
    """
    _check_alpha_order(alpha_lo, alpha_hi)
    gap = alpha_hi - alpha_lo
    upper = (
        0.25
        * n ** (2.0 * (1.0 - alpha_lo) / gap)
        * lambda_n_lo ** ((1.0 + alpha_lo) / gap)
        * lambda2_hi ** (-(1.0 + alpha_hi) / gap)
    )
    lower = (
        0.25
        * n ** (-2.0 * (1.0 - alpha_hi) / gap)
        * lambda_n_hi ** (-(1.0 + alpha_hi) / gap)
        * lambda2_lo ** ((1.0 + alpha_lo) / gap)
    )
    return RateThresholds(upper, lower)


def sample_k1_diagnostic(
    omega: np.ndarray, g: WeightedDigraph, samples: int = 20_000, seed: int = 0
) -> Optional[float]:
    """Smallest sampled xi^T B xi over random sign-mixed unit vectors.

    B is the omega-weighted symmetric part of L(A). A sampled minimum is not a certified lower
    bound on K1; it is reported for orientation only.

    Returns:
        The sampled minimum, or None when no sign-mixed sample was drawn
    """
    rng = np.random.default_rng(seed)
    b = weighted_symmetric_part(laplacian(g), np.asarray(omega, dtype=float))
    xi = rng.standard_normal((samples, g.n))
    mixed = (xi > 0).any(axis=1) & (xi < 0).any(axis=1)
    xi = xi[mixed]
    if len(xi) == 0:
        return None
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    values = np.einsum("si,ij,sj->s", xi, b, xi)
    logger.debug(f"K1 diagnostic: {len(xi)} sign-mixed samples")
    return float(values.min())
