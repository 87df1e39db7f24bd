"""WeightedDigraph model - the communication topology of a multi-agent system"""

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class WeightedDigraph:
    """Communication topology G(A) given by a nonnegative weight matrix.

    ``weights[i, j]`` is the weight agent ``i`` places on information from agent ``j``.
    A positive entry means the edge ``j -> i`` exists, i.e. ``j`` is a neighbor of ``i``.
    Agents are 0-indexed internally; reports use 1-based labels.
    """

    weights: np.ndarray

    def __post_init__(self):
        """Validate and freeze the weight matrix"""
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"Weight matrix must be square, got shape {w.shape}")
        if w.shape[0] < 1:
            raise ValueError("Graph must contain at least one agent")
        if not np.all(np.isfinite(w)):
            raise ValueError("Weights must be finite")
        negative = np.argwhere(w < 0)
        if len(negative):
            i, j = negative[0]
            raise ValueError(f"Weight a[{i + 1}][{j + 1}] = {w[i, j]} is negative")
        diagonal = np.flatnonzero(np.diag(w))
        if len(diagonal):
            i = diagonal[0]
            raise ValueError(f"Self weight a[{i + 1}][{i + 1}] must be zero")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "WeightedDigraph":
        """Build a graph from a row-major nested list"""
        return cls(np.asarray(rows, dtype=float))

    @classmethod
    def empty(cls, n: int) -> "WeightedDigraph":
        """Graph with ``n`` agents and no edges"""
        return cls(np.zeros((n, n)))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        weight: float = 1.0,
        undirected: bool = True,
    ) -> "WeightedDigraph":
        """Build a graph from 0-based ``(i, j)`` pairs meaning ``j`` is a neighbor of ``i``.

        Args:
            n: Agent count
            edges: Pairs ``(i, j)``; weight is placed at ``a[i][j]``
            weight: Weight for every listed edge
            undirected: Also place the weight at ``a[j][i]``

        Returns:
            WeightedDigraph
        """
        w = np.zeros((n, n))
        for i, j in edges:
            w[i, j] = weight
            if undirected:
                w[j, i] = weight
        return cls(w)

    @classmethod
    def cycle(cls, n: int, weight: float = 1.0) -> "WeightedDigraph":
        """Undirected cycle 1-2-...-n-1"""
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)], weight)

    @classmethod
    def path(cls, n: int, weight: float = 1.0) -> "WeightedDigraph":
        """Undirected path 1-2-...-n"""
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)], weight)

    @property
    def n(self) -> int:
        """Agent count"""
        return self.weights.shape[0]

    @property
    def support(self) -> np.ndarray:
        """Boolean edge pattern, ``support[i, j]`` iff j is a neighbor of i"""
        return self.weights > 0

    @property
    def is_symmetric(self) -> bool:
        """True for undirected graphs (A = A^T)"""
        return bool(np.array_equal(self.weights, self.weights.T))

    @property
    def in_degrees(self) -> np.ndarray:
        """Weighted in-degrees (row sums), the Laplacian diagonal"""
        return self.weights.sum(axis=1)

    @property
    def max_in_degree(self) -> float:
        return float(self.in_degrees.max())

    @property
    def edge_count(self) -> int:
        return int(self.support.sum())

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Agents whose information agent ``i`` receives"""
        return tuple(int(j) for j in np.flatnonzero(self.weights[i]))

    def to_rows(self) -> list[list[float]]:
        """Row-major nested list of weights"""
        return [[float(v) for v in row] for row in self.weights]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return bool(np.array_equal(self.weights, other.weights))

    def __hash__(self) -> int:
        return hash((self.n, self.weights.tobytes()))

    def __repr__(self) -> str:
        return f"WeightedDigraph(n={self.n}, edges={self.edge_count})"
