"""Protocol models - control law variants and their exponent profiles"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from concord.domain.models.graph import WeightedDigraph


class ProtocolVariant(str, Enum):
    """Consensus control law"""

    P1 = "P1"  # sig of the aggregated neighbor disagreement
    P2 = "P2"  # sum of per-edge sig terms
    P3 = "P3"  # differences of sig-transformed states
    LINEAR = "linear"


class ExponentKind(str, Enum):
    """Shape of an exponent profile"""

    NODE = "node"
    EDGE = "edge"


@dataclass(frozen=True, eq=False)
class ExponentProfile:
    """Exponents of a protocol, one per agent (node) or one per ordered pair (edge)"""

    kind: ExponentKind
    values: np.ndarray

    def __post_init__(self):
        """Validate shape and range, freeze the values"""
        kind = ExponentKind(self.kind)
        v = np.array(self.values, dtype=float)
        if kind == ExponentKind.NODE and v.ndim != 1:
            raise ValueError(f"Node exponents must be a vector, got shape {v.shape}")
        if kind == ExponentKind.EDGE and (v.ndim != 2 or v.shape[0] != v.shape[1]):
            raise ValueError(f"Edge exponents must be a square matrix, got shape {v.shape}")
        if v.size == 0:
            raise ValueError("Exponent profile is empty")
        if not np.all(np.isfinite(v)) or np.any(v <= 0) or np.any(v > 1):
            raise ValueError("Exponents must lie in (0, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "values", v)

    @classmethod
    def node(cls, values: Sequence[float]) -> "ExponentProfile":
        return cls(ExponentKind.NODE, np.asarray(values, dtype=float))

    @classmethod
    def edge(cls, values: Union[Sequence[Sequence[float]], np.ndarray]) -> "ExponentProfile":
        return cls(ExponentKind.EDGE, np.asarray(values, dtype=float))

    @classmethod
    def uniform(cls, n: int, alpha: float, kind: ExponentKind) -> "ExponentProfile":
        """Same exponent everywhere"""
        shape = (n,) if ExponentKind(kind) == ExponentKind.NODE else (n, n)
        return cls(kind, np.full(shape, float(alpha)))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def defined(self, g: Optional[WeightedDigraph] = None) -> np.ndarray:
        """Exponents that matter: all node values, or edge values on the graph's support"""
        if self.kind == ExponentKind.NODE or g is None:
            return self.values.ravel()
        picked = self.values[g.support]
        return picked if picked.size else self.values.ravel()

    def alpha0(self, g: Optional[WeightedDigraph] = None) -> float:
        """Largest defined exponent"""
        return float(self.defined(g).max())

    def alpha_min(self, g: Optional[WeightedDigraph] = None) -> float:
        """Smallest defined exponent"""
        return float(self.defined(g).min())

    def is_uniform(self, g: Optional[WeightedDigraph] = None) -> bool:
        values = self.defined(g)
        return bool(np.all(values == values[0]))

    def is_symmetric(self, g: WeightedDigraph) -> bool:
        """alpha_ij == alpha_ji wherever i and j are neighbors of each other"""
        if self.kind == ExponentKind.NODE:
            return True
        mutual = g.support & g.support.T
        return bool(np.array_equal(self.values[mutual], self.values.T[mutual]))

    def asymmetric_pair(self, g: WeightedDigraph) -> Optional[tuple[int, int]]:
        """First 0-based pair (i, j) violating alpha_ij == alpha_ji, if any"""
        if self.kind == ExponentKind.NODE:
            return None
        mutual = g.support & g.support.T
        bad = np.argwhere(mutual & (self.values != self.values.T))
        return (int(bad[0][0]), int(bad[0][1])) if len(bad) else None

    def without(self, index: int) -> "ExponentProfile":
        """Profile with one agent removed"""
        keep = [i for i in range(self.n) if i != index]
        if self.kind == ExponentKind.NODE:
            return ExponentProfile.node(self.values[keep])
        return ExponentProfile.edge(self.values[np.ix_(keep, keep)])

    def to_document(self) -> Union[list[float], list[list[float]]]:
        """Plain nested lists for serialization"""
        return self.values.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExponentProfile):
            return NotImplemented
        return self.kind == other.kind and bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.kind, self.values.tobytes()))


_EXPECTED_KIND = {
    ProtocolVariant.P1: ExponentKind.NODE,
    ProtocolVariant.P2: ExponentKind.EDGE,
    ProtocolVariant.P3: ExponentKind.NODE,
}


@dataclass(frozen=True)
class ProtocolSpec:
    """A protocol variant paired with a compatible exponent profile"""

    variant: ProtocolVariant
    exponents: ExponentProfile

    def __post_init__(self):
        """Enforce the variant/profile pairing"""
        variant = ProtocolVariant(self.variant)
        object.__setattr__(self, "variant", variant)
        check_exponents(variant, self.exponents)

    @classmethod
    def linear(cls, n: int) -> "ProtocolSpec":
        return cls(ProtocolVariant.LINEAR, ExponentProfile.uniform(n, 1.0, ExponentKind.NODE))

    @classmethod
    def uniform(cls, variant: ProtocolVariant, n: int, alpha: float) -> "ProtocolSpec":
        """Protocol with one exponent shared by every agent or edge"""
        variant = ProtocolVariant(variant)
        if variant == ProtocolVariant.LINEAR:
            return cls.linear(n)
        return cls(variant, ExponentProfile.uniform(n, alpha, _EXPECTED_KIND[variant]))

    @property
    def n(self) -> int:
        return self.exponents.n

    @property
    def is_finite_time(self) -> bool:
        return self.variant != ProtocolVariant.LINEAR


def check_exponents(variant: ProtocolVariant, exponents: ExponentProfile) -> None:
    """Raise ValueError when a profile cannot drive the given variant"""
    if variant == ProtocolVariant.LINEAR:
        if np.any(exponents.values != 1.0):
            raise ValueError("Linear protocol fixes every exponent to exactly 1")
        return
    expected = _EXPECTED_KIND[variant]
    if exponents.kind != expected:
        raise ValueError(
            f"Protocol {variant.value} needs {expected.value} exponents, got {exponents.kind.value}"
        )
    if np.any(exponents.values >= 1.0):
        raise ValueError(f"Protocol {variant.value} needs exponents strictly inside (0, 1)")
