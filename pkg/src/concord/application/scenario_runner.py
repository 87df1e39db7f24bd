"""Scenario runner - complete runs of one or many scenarios with isolated outputs"""

import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Optional

from concord.application.bound_service import BoundService
from concord.application.simulation_service import SimulationDivergedError, SimulationService
from concord.domain.models.scenario import Scenario
from concord.infrastructure.writers import write_json, write_trajectory_csv

logger = logging.getLogger(__name__)

_UNSAFE_NAME_CHARS = re.compile(r"[^A-Za-z0-9._-]+")


def run_directory_name(index: int, name: str) -> str:
    """Directory of one batch entry, kept inside the output directory whatever the name"""
    slug = _UNSAFE_NAME_CHARS.sub("-", name).strip(".-") or "scenario"
    return f"{index:02d}-{slug}"


@dataclass
class RunOutcome:
    """Result of running one scenario"""

    index: int
    name: str
    status: str  # "ok", "diverged" or "error"
    converged: Optional[bool] = None
    convergence_time: Optional[float] = None
    files: List[str] = field(default_factory=list)
    error: Optional[str] = None
    duration_ms: int = 0

    @property
    def is_successful(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "name": self.name,
            "status": self.status,
            "converged": self.converged,
            "convergence_time": self.convergence_time,
            "files": list(self.files),
            "error": self.error,
        }


class ScenarioRunner:
    """Runs scenarios end to end and writes their result files"""

    simulation_service: SimulationService
    bound_service: BoundService
    max_workers: int
    json_indent: int

    def __init__(
        self,
        simulation_service: Optional[SimulationService] = None,
        bound_service: Optional[BoundService] = None,
        max_workers: int = 1,
        json_indent: int = 2,
    ):
        """Initialize scenario runner

        Args:
            simulation_service: Integrator service (creates default if None)
            bound_service: Bound report service (creates default if None)
            max_workers: Scenarios run concurrently in a batch
            json_indent: Indentation of JSON result files
        """
        self.simulation_service = simulation_service or SimulationService()
        self.bound_service = bound_service or BoundService()
        self.max_workers = max(1, max_workers)
        self.json_indent = json_indent

    def run_one(self, index: int, scenario: Scenario, out_dir: Path) -> RunOutcome:
        """Run one scenario and write the outputs its flags request into out_dir"""
        logger.info(f"Running scenario {index}: {scenario.name}")
        started = time.monotonic()
        outcome = RunOutcome(index=index, name=scenario.name, status="ok")
        try:
            traj = self.simulation_service.run(scenario)
            outcome.converged = traj.converged
            outcome.convergence_time = traj.convergence_time
            if scenario.outputs.trajectory_csv:
                path = write_trajectory_csv(traj, out_dir / "trajectory.csv")
                outcome.files.append(str(path))
            if scenario.outputs.diagnostics_json:
                diagnostics = traj.diagnostics()
                path = write_json(diagnostics, out_dir / "diagnostics.json", self.json_indent)
                outcome.files.append(str(path))
            if scenario.outputs.bound_report:
                report = self.bound_service.report(scenario)
                path = write_json(report.to_dict(), out_dir / "bound.json", self.json_indent)
                outcome.files.append(str(path))
        except SimulationDivergedError as e:
            logger.error(f"Scenario {scenario.name} diverged: {e}")
            outcome.status = "diverged"
            outcome.error = str(e)
        except Exception as e:
            logger.error(f"Error running scenario {scenario.name}: {e}", exc_info=True)
            outcome.status = "error"
            outcome.error = str(e)
        outcome.duration_ms = int((time.monotonic() - started) * 1000)
        return outcome

    def run_batch(self, scenarios: List[Scenario], out_dir: Path) -> List[RunOutcome]:
        """Run scenarios sequentially or in parallel.

        Each scenario writes into its own directory ``<out_dir>/<index>-<name>``; outcomes are
        returned in input order.
        """
        if not scenarios:
            return []

        jobs = [
            (i, scenario, Path(out_dir) / run_directory_name(i, scenario.name))
            for i, scenario in enumerate(scenarios, 1)
        ]
        if self.max_workers <= 1 or len(jobs) == 1:
            return [self.run_one(*job) for job in jobs]

        max_workers = min(self.max_workers, len(jobs))
        logger.info(f"Running {len(jobs)} scenarios with max_workers={max_workers}")
        outcomes: List[RunOutcome] = []
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            future_map = {executor.submit(self.run_one, *job): job[0] for job in jobs}
            for future in as_completed(future_map):
                outcomes.append(future.result())

        return sorted(outcomes, key=lambda outcome: outcome.index)
