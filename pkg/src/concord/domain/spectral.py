"""Dense symmetric eigenvalues and the spectral quantities the bounds consume"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from concord.domain.models.graph import WeightedDigraph
from concord.domain.topology import exponent_graph, follower_block, laplacian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralSummary:
    """Eigenvalues of a symmetric matrix, sorted ascending"""

    eigenvalues: tuple[float, ...]

    @property
    def lambda_min(self) -> float:
        return self.eigenvalues[0]

    @property
    def lambda_max(self) -> float:
        return self.eigenvalues[-1]

    @property
    def lambda2(self) -> Optional[float]:
        """Second smallest eigenvalue, taken positionally"""
        return self.eigenvalues[1] if len(self.eigenvalues) > 1 else None

    def to_dict(self) -> dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "lambda_min": self.lambda_min,
            "lambda2": self.lambda2,
            "lambda_max": self.lambda_max,
        }


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Matrix must be square, got shape {a.shape}")
    scale = np.linalg.norm(a, np.inf)
    if np.linalg.norm(a - a.T, np.inf) > 1e-12 * scale:
        raise ValueError("Matrix is not symmetric")
    return a


def jacobi_eigenvalues(m: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi rotations in fixed row order until the off-diagonal part vanishes.

    Args:
        m: Symmetric matrix
        tol: Stop when the off-diagonal Frobenius norm drops below tol * ||m||_F
        max_sweeps: Sweep cap

    Returns:
        Eigenvalues sorted ascending
    """
    a = _check_symmetric(m)
    n = a.shape[0]
    scale = np.linalg.norm(a)
    for sweep in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            logger.debug(f"Jacobi converged after {sweep} sweeps (n={n})")
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < abs(diff) * 1.0e-36:
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + np.sqrt(theta**2 + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t**2 + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
    else:
        logger.warning(f"Jacobi stopped at the cap of {max_sweeps} sweeps")
    return np.sort(np.diag(a))


def sym_eigenvalues(m: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100) -> SpectralSummary:
    """Spectrum of a symmetric matrix.

    Raises:
        ValueError: If m is not symmetric
    """
    values = jacobi_eigenvalues(m, tol=tol, max_sweeps=max_sweeps)
    return SpectralSummary(tuple(float(v) for v in values))


def algebraic_connectivity(g: WeightedDigraph) -> float:
    """Second smallest Laplacian eigenvalue of an undirected graph; positive iff connected"""
    if not g.is_symmetric:
        raise ValueError("Algebraic connectivity needs symmetric weights")
    if g.n < 2:
        raise ValueError("Algebraic connectivity needs at least two agents")
    return sym_eigenvalues(laplacian(g)).lambda2


def smallest_eigenvalue_spd(m: np.ndarray) -> float:
    return sym_eigenvalues(m).lambda_min


def gershgorin_contains(m: np.ndarray, values: Iterable[complex], slack: float = 1e-9) -> bool:
    """True iff every value lies in the union of the Gershgorin discs of m"""
    a = np.asarray(m)
    centers = np.diag(a)
    radii = np.sum(np.abs(a), axis=1) - np.abs(centers)
    for value in values:
        if not np.any(np.abs(value - centers) <= radii + slack):
            return False
    return True


def weighted_symmetric_part(L: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """(diag(omega) L + L^T diag(omega)) / 2"""
    weighted = np.diag(omega) @ L
    return 0.5 * (weighted + weighted.T)


def leader_connectivity(g: WeightedDigraph, leader: int, alpha0: float) -> float:
    """lambda_1(L(B_bar) + diag(b_tilde)) for a leader with undirected followers.

    B_bar is the follower block raised to 2/(1+alpha0) and b_tilde the leader weights raised
    the same way.

    Raises:
        ValueError: If the followers are not undirected or the leader hears anyone
    """
    block, coupling = follower_block(g, leader)
    if not block.is_symmetric:
        raise ValueError("Leader connectivity needs undirected follower weights")
    power = 2.0 / (1.0 + alpha0)
    b_tilde = np.where(coupling > 0, coupling, 0.0) ** power
    matrix = laplacian(exponent_graph(block, alpha0)) + np.diag(b_tilde)
    return smallest_eigenvalue_spd(matrix)
