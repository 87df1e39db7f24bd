"""Simulation service - fixed-step integration of consensus runs"""

import logging
from typing import Callable, Optional

import numpy as np

from concord.domain.config.integrator import IntegratorConfig
from concord.domain.config.numerics import NumericsConfig
from concord.domain.consensus import ConservationLaw, disagreement, schedule_conservation_law
from concord.domain.dynamics import Rhs, make_rhs
from concord.domain.integrator import rk4_step
from concord.domain.lyapunov import v_edge_energy, v_quadratic, weighted_power_sum
from concord.domain.models.protocol import ExponentProfile, ProtocolSpec, ProtocolVariant
from concord.domain.models.scenario import Scenario
from concord.domain.models.schedule import SwitchingSchedule
from concord.domain.models.trajectory import ConservedKind, Trajectory
from concord.domain.topology import (
    has_spanning_tree,
    is_strongly_connected,
    laplacian,
    left_null_vector,
)

logger = logging.getLogger(__name__)

Functional = Callable[[np.ndarray], float]

# Width of the chatter band in units of (h * g)^(1 / (1 - alpha_min))
CHATTER_FACTOR = 4.0


class SimulationDivergedError(RuntimeError):
    """The state became non-finite during integration"""

    def __init__(self, time: float, step: int):
        self.time = time
        self.step = step
        super().__init__(f"State became non-finite at t={time:.6g} (step {step})")


class SimulationService:
    """Service for integrating consensus protocols under fixed or switching topologies"""

    numerics: NumericsConfig

    def __init__(self, numerics: Optional[NumericsConfig] = None):
        """Initialize simulation service

        Args:
            numerics: Algorithm tolerances (defaults if None)
        """
        self.numerics = numerics or NumericsConfig()

    def run(self, scenario: Scenario) -> Trajectory:
        """Simulate a validated scenario"""
        logger.info(f"Simulating scenario '{scenario.name}' ({scenario.n} agents)")
        return self.simulate(
            scenario.schedule, scenario.protocol, scenario.initial_state, scenario.integrator
        )

    def simulate(
        self,
        schedule: SwitchingSchedule,
        proto: ProtocolSpec,
        x0: np.ndarray,
        cfg: IntegratorConfig,
    ) -> Trajectory:
        """Integrate the active segment's protocol with classical RK4.

        The step straddling a switch time is shortened to land on it. Once consensus is
        detected the state is snapped to the conserved quantity and held.

        Args:
            schedule: Topology over time
            proto: Protocol and its default exponents
            x0: Initial state
            cfg: Step, horizon, tolerance and sampling

        Returns:
            Recorded trajectory

        Raises:
            ValueError: If dimensions disagree
            SimulationDivergedError: If the state becomes non-finite
        """
        x = np.array(x0, dtype=float)
        if x.shape != (schedule.n,):
            raise ValueError(f"x0 has shape {x.shape}, schedule has {schedule.n} agents")
        if proto.n != schedule.n:
            raise ValueError(
                f"Protocol exponents cover {proto.n} agents, schedule has {schedule.n}"
            )

        profiles = [self._profile(proto, s.exponents) for s in schedule.segments]
        alpha_min = min(p.alpha_min(s.graph) for p, s in zip(profiles, schedule.segments))
        tol = cfg.resolve_tolerance(alpha_min)
        band = self._chatter_band(schedule, cfg.step, alpha_min)
        if band > 0.0 and not all(has_spanning_tree(s.graph) for s in schedule.segments):
            band = 0.0
        law = schedule_conservation_law(
            proto, [(s.graph, s.exponents) for s in schedule.segments], self.numerics
        )
        functional = self._lyapunov_functional(proto, schedule, profiles, law)
        logger.debug(
            f"Run setup: tol={tol:.3g}, chatter band={band:.3g}, conserved={law.kind.value}"
        )

        rhs_cache: dict[int, Rhs] = {}
        times = [0.0]
        states = [x.copy()]
        step_count = 0
        convergence_time: Optional[float] = None
        consensus_value: Optional[float] = None
        increment = np.zeros_like(x)
        overshot = False

        gap = disagreement(x)
        if gap <= tol:
            consensus_value = law.value(x)
            x = np.full_like(x, consensus_value)
            states[0] = x.copy()
            convergence_time = 0.0
            logger.info("Initial state already at consensus")

        h = cfg.step
        index = 0
        for interval in schedule.intervals(cfg.t_max):
            if interval.index not in rhs_cache:
                segment = interval.segment
                rhs_cache[interval.index] = make_rhs(proto, segment.graph, segment.exponents)
            rhs = rhs_cache[interval.index]
            m = 0
            t = interval.start
            while t < interval.end:
                t_next = interval.start + (m + 1) * h
                if t_next >= interval.end - 1e-9 * h:
                    t_next = interval.end
                m += 1
                index += 1
                just_converged = False
                if convergence_time is None:
                    x_new = rk4_step(rhs, x, t_next - t)
                    step_count += 1
                    previous_increment, increment = increment, x_new - x
                    x = x_new
                    if not np.all(np.isfinite(x)):
                        logger.error(f"Divergence at t={t_next:.6g}")
                        raise SimulationDivergedError(t_next, step_count)
                    previous, gap = gap, disagreement(x)
                    # chatter needs an actual overshoot; an equilibrium never reverses
                    if gap <= band:
                        overshot = overshot or bool(np.any(increment * previous_increment < 0))
                    else:
                        overshot = False
                    if gap <= tol or (overshot and gap >= previous):
                        consensus_value = law.value(x)
                        x = np.full_like(x, consensus_value)
                        convergence_time = t_next
                        just_converged = True
                        logger.info(
                            f"Consensus at t={t_next:.6g} on {consensus_value:.10g} "
                            f"(disagreement {gap:.3g})"
                        )
                t = t_next
                if just_converged or index % cfg.record_stride == 0 or t == interval.end:
                    times.append(t)
                    states.append(x.copy())

        if convergence_time is None:
            logger.warning(
                f"No consensus within t_max={cfg.t_max} "
                f"(final disagreement {disagreement(x):.3g}, tol {tol:.3g})"
            )
        logger.debug(f"Integration finished: {step_count} steps, {len(times)} samples")

        state_array = np.array(states)
        return Trajectory(
            times=np.array(times),
            states=state_array,
            disagreement=np.array([disagreement(s) for s in state_array]),
            conserved=np.array([law.value(s) for s in state_array]),
            conserved_kind=law.kind,
            consensus_tol=tol,
            lyapunov=(
                np.array([functional(s) for s in state_array]) if functional is not None else None
            ),
            convergence_time=convergence_time,
            consensus_value=consensus_value,
            steps=step_count,
        )

    @staticmethod
    def _profile(proto: ProtocolSpec, exps: Optional[ExponentProfile]) -> ExponentProfile:
        return exps if exps is not None else proto.exponents

    @staticmethod
    def _chatter_band(schedule: SwitchingSchedule, h: float, alpha_min: float) -> float:
        """Disagreement below which the fixed-step map may oscillate instead of contracting"""
        if alpha_min >= 1.0:
            return 0.0
        g = max(1.0, max(s.graph.max_in_degree for s in schedule.segments))
        return CHATTER_FACTOR * (h * g) ** (1.0 / (1.0 - alpha_min))

    def _lyapunov_functional(
        self,
        proto: ProtocolSpec,
        schedule: SwitchingSchedule,
        profiles: list[ExponentProfile],
        law: ConservationLaw,
    ) -> Optional[Functional]:
        """Lyapunov functional matching the scenario's convergence argument"""
        if law.kind == ConservedKind.LEADER:
            leader = law.leader
            return lambda x: v_quadratic(x - x[leader])

        if not schedule.is_switching and proto.variant in (ProtocolVariant.P1, ProtocolVariant.P3):
            g = schedule.segments[0].graph
            alpha = profiles[0].values
            if proto.variant == ProtocolVariant.P1:
                if g.is_symmetric:
                    return lambda x: v_edge_energy(g, x)
                if is_strongly_connected(g):
                    omega = left_null_vector(
                        g, tol=self.numerics.perron_tol, max_iter=self.numerics.perron_max_iter
                    )
                    neg_l = -laplacian(g)
                    return lambda x: weighted_power_sum(omega, alpha, neg_l @ x)
            elif law.kind in (ConservedKind.MEAN, ConservedKind.WEIGHTED_MEAN):
                omega = law.omega if law.omega is not None else np.full(g.n, 1.0 / g.n)
                return lambda x: weighted_power_sum(omega, alpha, x)

        if law.kind == ConservedKind.MEAN:
            return lambda x: v_quadratic(x - law.value(x))
        if law.kind == ConservedKind.WEIGHTED_MEAN:
            return lambda x: v_quadratic(x - law.value(x), law.omega)
        return None
