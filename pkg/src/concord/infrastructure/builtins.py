"""Built-in scenario documents"""

import copy
import logging
from typing import Any, Callable, Iterable

logger = logging.getLogger(__name__)

Document = dict[str, Any]

X0_SIX = [-5.0, -3.0, 7.0, 9.0, 4.0, 5.0]
X0_SIX_SMALL = [0.01, 0.13, 0.05, -0.09, 0.05, 0.08]
DEMO7_ALPHAS = [0.3, 0.5, 0.7, 0.8, 0.5, 0.6, 0.55]
DEMO7_X0 = [-0.6, -1.0, 0.4, 0.0, 1.0, 0.6, 0.2]


def _matrix(n: int, edges: Iterable[tuple[int, int]], weight: float, undirected: bool) -> Document:
    """Graph document from 0-based pairs (i, j) meaning agent i hears agent j"""
    weights = [[0.0] * n for _ in range(n)]
    for i, j in edges:
        weights[i][j] = weight
        if undirected:
            weights[j][i] = weight
    return {"n": n, "weights": weights}


def _cycle(n: int, weight: float) -> Document:
    return _matrix(n, [(i, (i + 1) % n) for i in range(n)], weight, True)


def _path(n: int, weight: float) -> Document:
    return _matrix(n, [(i, i + 1) for i in range(n - 1)], weight, True)


def _chorded_cycle() -> Document:
    edges = [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)]
    return _matrix(6, edges, 2.0, True)


def _star() -> Document:
    return _matrix(6, [(0, j) for j in range(1, 6)], 2.0, True)


def _leader_graph() -> Document:
    # followers 1-3 form a triangle, follower 1 hears leader 4, the leader hears nobody
    doc = _matrix(4, [(0, 1), (1, 2), (0, 2)], 1.0, True)
    doc["weights"][0][3] = 1.0
    return doc


def _demo7_graph() -> Document:
    # directed ring where agent i hears agent i-1, plus two chords
    edges = [(i, (i - 1) % 7) for i in range(7)] + [(0, 3), (4, 1)]
    return _matrix(7, edges, 1.0, False)


def _cycle6() -> Document:
    return {
        "name": "cycle6",
        "description": (
            "P2 on the 6-cycle with weights 2 (lambda2(L) = 2, lambda2(L(B)) = 2.5198 at "
            "alpha = 0.5); consensus on the mean 17/6 with V3(0) = 78.4167"
        ),
        "x0": X0_SIX,
        "protocol": {"variant": "P2", "exponents": 0.5},
        "graph": _cycle(6, 2.0),
        "integrator": {"t_max": 10.0},
        "outputs": {"bound_report": True},
        "requirements": {"symmetric_exponents": True},
        "analysis": {"compare_alphas": [0.3, 0.8]},
    }


def _cycle6_p1() -> Document:
    return {
        "name": "cycle6-p1",
        "description": (
            "P1 on the 6-cycle with weights 2; the computed V5(0) is 234 while the quoted "
            "reference value 338 is kept as a V0 override"
        ),
        "x0": X0_SIX,
        "protocol": {"variant": "P1", "exponents": 0.5},
        "graph": _cycle(6, 2.0),
        "integrator": {"t_max": 10.0},
        "outputs": {"bound_report": True},
        "analysis": {"v0_override": 338.0},
    }


def _cycle6_linear() -> Document:
    return {
        "name": "cycle6-linear",
        "description": (
            "Linear baseline on the 6-cycle, stopped at 4.21 s where P2 has already reached "
            "consensus; converges only asymptotically"
        ),
        "x0": X0_SIX,
        "protocol": {"variant": "linear"},
        "graph": _cycle(6, 2.0),
        "integrator": {"t_max": 4.21, "consensus_tol": 1e-6},
    }


def _cycle6_small() -> Document:
    return {
        "name": "cycle6-small",
        "description": (
            "P2 on the 6-cycle from a small initial spread (V3(0) = 0.0138), used for the "
            "exponent rate comparison alpha = 0.3 against 0.8"
        ),
        "x0": X0_SIX_SMALL,
        "protocol": {"variant": "P2", "exponents": 0.5},
        "graph": _cycle(6, 2.0),
        "integrator": {"t_max": 5.0},
        "outputs": {"bound_report": True},
        "analysis": {"compare_alphas": [0.3, 0.8]},
    }


def _path6() -> Document:
    return {
        "name": "path6",
        "description": (
            "P2 on the 6-path with weights 2 (lambda2(L) = 0.5359, lambda2(L(B)) = 0.6752 at "
            "alpha = 0.5)"
        ),
        "x0": X0_SIX,
        "protocol": {"variant": "P2", "exponents": 0.5},
        "graph": _path(6, 2.0),
        "integrator": {"t_max": 20.0},
        "outputs": {"bound_report": True},
        "requirements": {"symmetric_exponents": True},
    }


def _path6_p1() -> Document:
    return {
        "name": "path6-p1",
        "description": "P1 on the 6-path with weights 2",
        "x0": X0_SIX,
        "protocol": {"variant": "P1", "exponents": 0.5},
        "graph": _path(6, 2.0),
        "integrator": {"t_max": 20.0},
        "outputs": {"bound_report": True},
    }


def _counterexample() -> Document:
    return {
        "name": "counterexample",
        "description": (
            "Two topologies, each disconnected, alternating every second: agents 1-2 average "
            "then agents 2-3 average. The state at t = 2k equals M^k x0 with "
            "M = [[0.5, 0.5, 0], [0.25, 0.25, 0.5], [0.25, 0.25, 0.5]], so consensus is only "
            "asymptotic even though every pairwise agreement is reached in finite time"
        ),
        "x0": [0.3, 0.4, 0.0],
        "protocol": {"variant": "P2", "exponents": 0.5},
        "schedule": {
            "segments": [
                {"duration": 1.0, "graph": _matrix(3, [(0, 1)], 1.0, True)},
                {"duration": 1.0, "graph": _matrix(3, [(1, 2)], 1.0, True)},
            ],
            "repeat": "infinite",
        },
        "integrator": {"t_max": 10.0},
    }


def _switching_demo() -> Document:
    return {
        "name": "switching-demo",
        "description": (
            "P2 switching every 0.25 s among a chorded 6-cycle, the 6-cycle, a 6-star and the "
            "6-path (all weights 2). The chorded cycle and the star are stand-in topologies; "
            "the smallest segment connectivity lambda2(L(B)) = 0.6752 belongs to the path"
        ),
        "x0": X0_SIX,
        "protocol": {"variant": "P2", "exponents": 0.5},
        "schedule": {
            "segments": [
                {"duration": 0.25, "graph": _chorded_cycle()},
                {"duration": 0.25, "graph": _cycle(6, 2.0)},
                {"duration": 0.25, "graph": _star()},
                {"duration": 0.25, "graph": _path(6, 2.0)},
            ],
            "repeat": "infinite",
        },
        "integrator": {"t_max": 15.0},
        "outputs": {"bound_report": True},
        "requirements": {"symmetric_exponents": True},
    }


def _leader_demo() -> Document:
    return {
        "name": "leader-demo",
        "description": (
            "P2 with a fixed leader (agent 4) heard by agent 1; followers 1-3 form an "
            "undirected triangle. All agents settle on the leader's state 0.5"
        ),
        "x0": [1.0, -2.0, 3.0, 0.5],
        "protocol": {"variant": "P2", "exponents": 0.5},
        "graph": _leader_graph(),
        "integrator": {"t_max": 20.0},
        "outputs": {"bound_report": True},
    }


def _leader_demo_p1() -> Document:
    doc = _leader_demo()
    doc.update(
        {
            "name": "leader-demo-p1",
            "description": (
                "P1 on the leader-follower topology of leader-demo; the followers form a "
                "strongly connected block"
            ),
            "protocol": {"variant": "P1", "exponents": 0.5},
        }
    )
    return doc


def _two_agent() -> Document:
    return {
        "name": "two-agent",
        "description": (
            "Two agents under P2 with alpha = 0.5: V3 follows (V3(0)^(1/4) - (2^1.5/4) t)^4 "
            "and hits zero at t = sqrt(0.1) = 0.3162"
        ),
        "x0": [0.3, 0.4],
        "protocol": {"variant": "P2", "exponents": 0.5},
        "graph": _matrix(2, [(0, 1)], 1.0, True),
        "integrator": {"t_max": 1.0, "record_stride": 1},
        "outputs": {"bound_report": True},
    }


def _demo7() -> Document:
    return {
        "name": "demo7",
        "description": (
            "P1 with heterogeneous exponents on a strongly connected 7-agent stand-in "
            "topology (directed ring plus two chords)"
        ),
        "x0": DEMO7_X0,
        "protocol": {"variant": "P1", "exponents": DEMO7_ALPHAS},
        "graph": _demo7_graph(),
        "integrator": {"t_max": 20.0},
        "outputs": {"bound_report": True},
    }


def _demo7_linear() -> Document:
    doc = _demo7()
    doc.update(
        {
            "name": "demo7-linear",
            "description": "Linear baseline on the demo7 stand-in topology",
            "protocol": {"variant": "linear"},
        }
    )
    return doc


_BUILTINS: dict[str, Callable[[], Document]] = {
    "cycle6": _cycle6,
    "cycle6-p1": _cycle6_p1,
    "cycle6-linear": _cycle6_linear,
    "cycle6-small": _cycle6_small,
    "path6": _path6,
    "path6-p1": _path6_p1,
    "counterexample": _counterexample,
    "switching-demo": _switching_demo,
    "leader-demo": _leader_demo,
    "leader-demo-p1": _leader_demo_p1,
    "two-agent": _two_agent,
    "demo7": _demo7,
    "demo7-linear": _demo7_linear,
}

BUILTIN_NAMES: tuple[str, ...] = tuple(_BUILTINS)


def builtin_document(name: str) -> Document:
    """Fresh document of a built-in scenario

    Raises:
        ValueError: If the name is unknown
    """
    if name not in _BUILTINS:
        raise ValueError(
            f"Unknown built-in scenario: {name}. Available: {', '.join(BUILTIN_NAMES)}"
        )
    logger.debug(f"Building built-in scenario '{name}'")
    return copy.deepcopy(_BUILTINS[name]())


def builtin_descriptions() -> dict[str, str]:
    """Name to description of every built-in"""
    return {name: builder()["description"] for name, builder in _BUILTINS.items()}
