"""Right-hand sides of the consensus protocols"""

import logging
from typing import Callable, Optional, Union

import numpy as np

from concord.domain.models.graph import WeightedDigraph
from concord.domain.models.protocol import (
    ExponentKind,
    ExponentProfile,
    ProtocolSpec,
    ProtocolVariant,
)
from concord.domain.topology import laplacian

logger = logging.getLogger(__name__)

Rhs = Callable[[np.ndarray], np.ndarray]


def sig(r: Union[float, np.ndarray], a: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Signed power sign(r) * |r|^a, exactly 0 at r = 0 and exactly r when a = 1.

    Args:
        r: Scalar or array
        a: Positive exponent(s), broadcast against r

    Returns:
        Same shape as the broadcast inputs; a float for scalar inputs
    """
    r_arr = np.asarray(r, dtype=float)
    a_arr = np.broadcast_to(np.asarray(a, dtype=float), r_arr.shape)
    if np.any(a_arr <= 0):
        raise ValueError("sig exponent must be positive")
    magnitude = np.abs(r_arr)
    out = np.zeros(r_arr.shape)
    nz = magnitude > 0
    out[nz] = np.sign(r_arr[nz]) * np.exp(a_arr[nz] * np.log(magnitude[nz]))
    linear = a_arr == 1.0
    out[linear] = r_arr[linear]
    if out.ndim == 0:
        return float(out)
    return out


def complete_edge_exponents(g: WeightedDigraph, exps: ExponentProfile) -> np.ndarray:
    """Full n x n exponent matrix for P2.

    Node profiles expand to alpha_ij = max(alpha_i, alpha_j). Pairs without an edge take the
    largest defined exponent; their weight is zero so the value never enters the dynamics.
    """
    if exps.kind == ExponentKind.NODE:
        return np.maximum.outer(exps.values, exps.values)
    alpha = np.array(exps.values, dtype=float)
    alpha[~g.support] = exps.alpha0(g)
    return alpha


def _check_dims(g: WeightedDigraph, x: np.ndarray) -> None:
    if x.shape != (g.n,):
        raise ValueError(f"State has shape {x.shape}, graph has {g.n} agents")


def rhs_p1(g: WeightedDigraph, exps: ExponentProfile, x: np.ndarray) -> np.ndarray:
    """u_i = sig(sum_j a_ij (x_j - x_i), alpha_i); neighborless agents stay put"""
    x = np.asarray(x, dtype=float)
    _check_dims(g, x)
    return sig(-laplacian(g) @ x, exps.values)


def rhs_p2(g: WeightedDigraph, exps: ExponentProfile, x: np.ndarray) -> np.ndarray:
    """u_i = sum_j a_ij sig(x_j - x_i, alpha_ij)"""
    x = np.asarray(x, dtype=float)
    _check_dims(g, x)
    gaps = x[np.newaxis, :] - x[:, np.newaxis]
    return np.sum(g.weights * sig(gaps, complete_edge_exponents(g, exps)), axis=1)


def rhs_p3(g: WeightedDigraph, exps: ExponentProfile, x: np.ndarray) -> np.ndarray:
    """u_i = sum_j a_ij (sig(x_j, alpha_j) - sig(x_i, alpha_i))"""
    x = np.asarray(x, dtype=float)
    _check_dims(g, x)
    return -laplacian(g) @ sig(x, exps.values)


def rhs_linear(g: WeightedDigraph, x: np.ndarray) -> np.ndarray:
    """u = -L(A) x"""
    x = np.asarray(x, dtype=float)
    _check_dims(g, x)
    return -laplacian(g) @ x


def _p1_factory(g: WeightedDigraph, exps: ExponentProfile) -> Rhs:
    neg_l = -laplacian(g)
    alpha = exps.values
    return lambda x: sig(neg_l @ x, alpha)


def _p2_factory(g: WeightedDigraph, exps: ExponentProfile) -> Rhs:
    weights = g.weights
    alpha = complete_edge_exponents(g, exps)

    def rhs(x: np.ndarray) -> np.ndarray:
        gaps = x[np.newaxis, :] - x[:, np.newaxis]
        return np.sum(weights * sig(gaps, alpha), axis=1)

    return rhs


def _p3_factory(g: WeightedDigraph, exps: ExponentProfile) -> Rhs:
    neg_l = -laplacian(g)
    alpha = exps.values
    return lambda x: neg_l @ sig(x, alpha)


def _linear_factory(g: WeightedDigraph, exps: ExponentProfile) -> Rhs:
    neg_l = -laplacian(g)
    return lambda x: neg_l @ x


_FACTORIES: dict[ProtocolVariant, Callable[[WeightedDigraph, ExponentProfile], Rhs]] = {
    ProtocolVariant.P1: _p1_factory,
    ProtocolVariant.P2: _p2_factory,
    ProtocolVariant.P3: _p3_factory,
    ProtocolVariant.LINEAR: _linear_factory,
}


def make_rhs(
    proto: ProtocolSpec, g: WeightedDigraph, exps: Optional[ExponentProfile] = None
) -> Rhs:
    """Compile the velocity field of one topology segment.

    Args:
        proto: Protocol variant and its default exponents
        g: Active topology
        exps: Segment exponents (None = the protocol's own)

    Returns:
        Function mapping a state vector to the agents' velocities

    Raises:
        ValueError: If the variant is unknown or dimensions disagree
    """
    name = getattr(proto.variant, "value", proto.variant)
    factory = _FACTORIES.get(proto.variant)
    if factory is None:
        available = ", ".join(v.value for v in _FACTORIES)
        raise ValueError(f"Unknown protocol variant: {name}. Available: {available}")
    profile = exps if exps is not None else proto.exponents
    if profile.n != g.n:
        raise ValueError(f"Exponents cover {profile.n} agents, graph has {g.n}")
    logger.debug(f"Compiled {name} right-hand side for {g.n} agents")
    return factory(g, profile)
