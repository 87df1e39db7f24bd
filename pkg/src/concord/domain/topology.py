"""Structural graph algorithms on communication topologies.

Edge convention: ``a[i][j] > 0`` means agent ``i`` hears agent ``j`` (edge ``j -> i``), so
information flows from ``j`` to ``i``. "u reaches v" follows that direction.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from concord.domain.models.graph import WeightedDigraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Condensation:
    """Strongly connected components and the DAG between them.

    Components are sorted by their smallest agent; ``edges`` holds component index pairs
    ``(u, v)`` meaning information flows from component ``u`` into component ``v``.
    """

    components: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def sources(self) -> tuple[int, ...]:
        """Components without incoming condensation edges"""
        targets = {v for _, v in self.edges}
        return tuple(k for k in range(len(self.components)) if k not in targets)

    def component_of(self, vertex: int) -> int:
        for k, members in enumerate(self.components):
            if vertex in members:
                return k
        raise ValueError(f"Vertex {vertex} not in graph")


def laplacian(g: WeightedDigraph) -> np.ndarray:
    """Graph Laplacian L(A) = diag(row sums) - A; rows sum to zero up to 2 n eps max l_ii"""
    L = -np.array(g.weights, dtype=float)
    np.fill_diagonal(L, g.in_degrees)
    return L


def _strong_components(g: WeightedDigraph) -> list[list[int]]:
    """Tarjan's algorithm with an explicit stack"""
    n = g.n
    successors = [np.flatnonzero(g.support[:, v]).tolist() for v in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, pos = work[-1]
            if pos < len(successors[v]):
                work[-1] = (v, pos + 1)
                w = successors[v][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                components.append(sorted(component))
    return components


def scc_condensation(g: WeightedDigraph) -> Condensation:
    """Partition agents into strongly connected components and build the condensation DAG"""
    components = sorted(_strong_components(g), key=lambda c: c[0])
    owner = np.empty(g.n, dtype=int)
    for k, members in enumerate(components):
        owner[members] = k
    edges = set()
    for i, j in np.argwhere(g.support):
        if owner[j] != owner[i]:
            edges.add((int(owner[j]), int(owner[i])))
    logger.debug(f"Condensation: {len(components)} components, {len(edges)} edges")
    return Condensation(tuple(frozenset(c) for c in components), tuple(sorted(edges)))


def is_strongly_connected(g: WeightedDigraph) -> bool:
    return len(scc_condensation(g).components) == 1


def has_spanning_tree(g: WeightedDigraph) -> bool:
    """True iff some agent reaches every other agent.

    In a DAG every node is reachable from a source, so a single source component suffices.
    """
    return len(scc_condensation(g).sources) == 1


def leaders(g: WeightedDigraph) -> frozenset[int]:
    """Agents that reach all others; empty when no spanning tree exists"""
    condensation = scc_condensation(g)
    sources = condensation.sources
    if len(sources) != 1:
        return frozenset()
    return condensation.components[sources[0]]


def fixed_leader(g: WeightedDigraph) -> Optional[int]:
    """The unique leader, if there is exactly one.

    A unique leader never hears anyone: a follower feeding it would reach everyone too.
    """
    group = leaders(g)
    if len(group) != 1 or g.n < 2:
        return None
    (leader,) = group
    return int(leader)


def follower_block(g: WeightedDigraph, leader: int) -> tuple[WeightedDigraph, np.ndarray]:
    """Split a leader-follower graph.

    Args:
        g: Full graph
        leader: 0-based leader index

    Returns:
        (follower-only graph, vector of weights each follower places on the leader)

    Raises:
        ValueError: If the leader has incoming weights
    """
    if not 0 <= leader < g.n:
        raise ValueError(f"Leader index {leader} out of range")
    if np.any(g.weights[leader] > 0):
        raise ValueError(f"Agent {leader + 1} hears other agents and cannot be a fixed leader")
    keep = [i for i in range(g.n) if i != leader]
    block = WeightedDigraph(g.weights[np.ix_(keep, keep)])
    return block, np.array(g.weights[keep, leader], dtype=float)


def is_detail_balanced(
    g: WeightedDigraph, rtol: float = 1e-10, zero_weight: float = 1e-15
) -> Optional[np.ndarray]:
    """Find omega > 0 with omega_i a_ij = omega_j a_ji, normalized to sum 1.

    Ratios are propagated breadth-first over the symmetrized support, then every pair is
    re-checked.

    Returns:
        omega, or None when no such scalars exist
    """
    w = np.where(g.weights < zero_weight, 0.0, g.weights)
    support = w > 0
    if np.any(support != support.T):
        return None

    n = g.n
    omega = np.zeros(n)
    visited = np.zeros(n, dtype=bool)
    for root in range(n):
        if visited[root]:
            continue
        omega[root] = 1.0
        visited[root] = True
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(support[i]):
                if not visited[j]:
                    omega[j] = omega[i] * w[i, j] / w[j, i]
                    visited[j] = True
                    queue.append(j)

    flow = omega[:, np.newaxis] * w
    mismatch = np.abs(flow - flow.T)
    if np.any(mismatch > rtol * np.maximum(flow, flow.T)):
        return None
    return omega / omega.sum()


def left_null_vector(g: WeightedDigraph, tol: float = 1e-14, max_iter: int = 10_000) -> np.ndarray:
    """Positive omega with omega^T L(A) = 0 and sum 1, for strongly connected graphs.

    Power iteration on (d I - L)^T with d = max l_ii + 1; the matrix is nonnegative,
    irreducible and has a positive diagonal, so its Perron vector is the answer.

    Raises:
        ValueError: If g is not strongly connected
    """
    if not is_strongly_connected(g):
        raise ValueError("Left null vector requires a strongly connected graph")
    L = laplacian(g)
    d = float(L.diagonal().max()) + 1.0
    shifted = (d * np.eye(g.n) - L).T
    v = np.full(g.n, 1.0 / g.n)
    for iteration in range(1, max_iter + 1):
        nxt = shifted @ v
        nxt /= nxt.sum()
        change = np.max(np.abs(nxt - v)) / np.max(np.abs(nxt))
        v = nxt
        if change <= tol:
            logger.debug(f"Perron iteration converged after {iteration} iterations")
            break
    else:
        logger.warning(f"Perron iteration stopped at the cap of {max_iter} iterations")
    return v


def exponent_graph(g: WeightedDigraph, alpha0: float) -> WeightedDigraph:
    """Graph with weights b_ij = a_ij^(2/(1+alpha0)); the support is unchanged"""
    if not 0 < alpha0 <= 1:
        raise ValueError(f"alpha0 must lie in (0, 1], got {alpha0}")
    power = 2.0 / (1.0 + alpha0)
    b = np.zeros_like(g.weights)
    np.power(g.weights, power, out=b, where=g.weights > 0)
    return WeightedDigraph(b)


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def is_irreducible(g: WeightedDigraph) -> bool:
    """True iff (I + A)^(n-1) is entrywise positive, evaluated over the boolean semiring"""
    base = np.eye(g.n, dtype=bool) | g.support
    result = np.eye(g.n, dtype=bool)
    exponent = g.n - 1
    while exponent:
        if exponent & 1:
            result = _bool_matmul(result, base)
        base = _bool_matmul(base, base)
        exponent >>= 1
    return bool(result.all())
