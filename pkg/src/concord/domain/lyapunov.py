"""Lyapunov functionals of the consensus protocols and their exact time derivatives"""

from typing import NamedTuple, Optional

import numpy as np

from concord.domain.models.graph import WeightedDigraph
from concord.domain.topology import laplacian


class PowerSumBounds(NamedTuple):
    """(sum xi)^p <= sum xi^p <= n^(1-p) (sum xi)^p"""

    lower: float
    middle: float
    upper: float


def weighted_power_sum(omega: np.ndarray, alpha: np.ndarray, y: np.ndarray) -> float:
    """sum_i omega_i / (alpha_i + 1) * |y_i|^(alpha_i + 1)"""
    omega = np.asarray(omega, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    y = np.asarray(y, dtype=float)
    if not omega.shape == alpha.shape == y.shape:
        raise ValueError(
            f"Length mismatch: omega {omega.shape}, alpha {alpha.shape}, y {y.shape}"
        )
    return float(np.sum(omega / (alpha + 1.0) * np.abs(y) ** (alpha + 1.0)))


def v_quadratic(delta: np.ndarray, omega: Optional[np.ndarray] = None) -> float:
    """Half the (optionally omega-weighted) squared norm of a disagreement vector"""
    delta = np.asarray(delta, dtype=float)
    if omega is None:
        return float(0.5 * np.dot(delta, delta))
    omega = np.asarray(omega, dtype=float)
    if omega.shape != delta.shape:
        raise ValueError(f"Length mismatch: omega {omega.shape}, delta {delta.shape}")
    return float(0.5 * np.dot(omega, delta * delta))


def v_edge_energy(g: WeightedDigraph, x: np.ndarray) -> float:
    """Quarter of the weighted sum of squared neighbor gaps; equals x^T L x / 2"""
    if not g.is_symmetric:
        raise ValueError("Edge energy needs symmetric weights")
    x = np.asarray(x, dtype=float)
    gaps = x[np.newaxis, :] - x[:, np.newaxis]
    return float(0.25 * np.sum(g.weights * gaps**2))


def lyapunov_rate_p1_undirected(g: WeightedDigraph, alpha: np.ndarray, x: np.ndarray) -> float:
    """Time derivative of the edge energy along P1: -sum_i |y_i|^(1 + alpha_i), y = -L x"""
    y = -laplacian(g) @ np.asarray(x, dtype=float)
    return float(-np.sum(np.abs(y) ** (1.0 + np.asarray(alpha, dtype=float))))


def lyapunov_rate_p2(g: WeightedDigraph, alpha: np.ndarray, x: np.ndarray) -> float:
    """Time derivative of the quadratic functional along P2 on a symmetric graph.

    ``alpha`` is the completed n x n edge exponent matrix.
    """
    x = np.asarray(x, dtype=float)
    gaps = np.abs(x[np.newaxis, :] - x[:, np.newaxis])
    return float(-0.5 * np.sum(g.weights * gaps ** (1.0 + np.asarray(alpha, dtype=float))))


def power_sum_bounds(xi: np.ndarray, p: float) -> PowerSumBounds:
    """Both sides of the power-sum inequality for nonnegative xi and p in (0, 1]"""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise ValueError("Power-sum inequality needs nonnegative entries")
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    total = float(np.sum(xi)) ** p
    return PowerSumBounds(total, float(np.sum(xi**p)), len(xi) ** (1.0 - p) * total)
