"""Tests for ScenarioRunner"""

import json

from concord.application.scenario_runner import ScenarioRunner, run_directory_name
from concord.application.simulation_service import SimulationDivergedError, SimulationService
from concord.infrastructure.builtins import builtin_document
from concord.infrastructure.scenario_io import builtin_scenario, parse_scenario


class DivergingSimulationService(SimulationService):
    """Simulation service that blows up on scenarios with a chosen name."""

    def __init__(self, name: str):
        super().__init__()
        self.name = name

    def run(self, scenario):
        if scenario.name == self.name:
            raise SimulationDivergedError(0.5, 500)
        return super().run(scenario)


def _short(name: str, t_max: float = 0.5):
    doc = builtin_document(name)
    doc["integrator"] = {**doc.get("integrator", {}), "t_max": t_max}
    return parse_scenario(doc)


class TestRunOne:
    """Tests for ScenarioRunner.run_one"""

    def test_writes_requested_files(self, tmp_path):
        """Test the two-agent run writes CSV, diagnostics and bound report"""
        outcome = ScenarioRunner().run_one(1, builtin_scenario("two-agent"), tmp_path)
        assert outcome.is_successful
        assert outcome.converged is True
        assert [p.rsplit("/", 1)[-1] for p in outcome.files] == [
            "trajectory.csv",
            "diagnostics.json",
            "bound.json",
        ]
        bound = json.loads((tmp_path / "bound.json").read_text())
        assert bound["basis"] == "p2-undirected"

    def test_flags_disable_outputs(self, tmp_path):
        """Test output flags switch files off"""
        doc = builtin_document("two-agent")
        doc["outputs"] = {"trajectory_csv": False, "diagnostics_json": True, "bound_report": False}
        outcome = ScenarioRunner().run_one(1, parse_scenario(doc), tmp_path)
        assert [p.rsplit("/", 1)[-1] for p in outcome.files] == ["diagnostics.json"]
        assert not (tmp_path / "trajectory.csv").exists()

    def test_divergence_is_reported(self, tmp_path):
        """Test a diverged run is recorded instead of raised"""
        runner = ScenarioRunner(simulation_service=DivergingSimulationService("two-agent"))
        outcome = runner.run_one(3, builtin_scenario("two-agent"), tmp_path)
        assert outcome.status == "diverged"
        assert "non-finite" in outcome.error
        assert outcome.files == []

    def test_to_dict(self, tmp_path):
        """Test the outcome summary"""
        outcome = ScenarioRunner().run_one(2, builtin_scenario("two-agent"), tmp_path)
        data = outcome.to_dict()
        assert data["index"] == 2
        assert data["name"] == "two-agent"
        assert data["status"] == "ok"
        assert data["error"] is None


class TestRunBatch:
    """Tests for ScenarioRunner.run_batch"""

    def test_empty_batch(self, tmp_path):
        """Test no scenarios give no outcomes"""
        assert ScenarioRunner().run_batch([], tmp_path) == []

    def test_isolated_directories(self, tmp_path):
        """Test each scenario writes into its own numbered directory"""
        scenarios = [builtin_scenario("two-agent"), _short("path6")]
        outcomes = ScenarioRunner().run_batch(scenarios, tmp_path)
        assert [o.name for o in outcomes] == ["two-agent", "path6"]
        assert (tmp_path / "01-two-agent" / "trajectory.csv").exists()
        assert (tmp_path / "02-path6" / "bound.json").exists()

    def test_parallel_matches_sequential(self, tmp_path):
        """Test a parallel batch keeps input order and writes identical files"""
        scenarios = [_short("cycle6"), builtin_scenario("two-agent"), _short("counterexample")]
        sequential = ScenarioRunner(max_workers=1).run_batch(scenarios, tmp_path / "seq")
        parallel = ScenarioRunner(max_workers=3).run_batch(scenarios, tmp_path / "par")
        assert [o.index for o in parallel] == [1, 2, 3]
        assert [o.name for o in parallel] == [o.name for o in sequential]
        for folder in ("01-cycle6", "02-two-agent", "03-counterexample"):
            seq_csv = (tmp_path / "seq" / folder / "trajectory.csv").read_text()
            par_csv = (tmp_path / "par" / folder / "trajectory.csv").read_text()
            assert seq_csv == par_csv

    def test_failure_does_not_stop_batch(self, tmp_path):
        """Test one failing scenario leaves the others running"""
        runner = ScenarioRunner(
            simulation_service=DivergingSimulationService("path6"), max_workers=2
        )
        outcomes = runner.run_batch([_short("path6"), builtin_scenario("two-agent")], tmp_path)
        assert [o.status for o in outcomes] == ["diverged", "ok"]

    def test_name_cannot_escape_output_directory(self, tmp_path):
        """Test separators and dot segments in a name stay inside the output directory"""
        doc = builtin_document("two-agent")
        doc["name"] = "../../escape/run"
        outcomes = ScenarioRunner().run_batch([parse_scenario(doc)], tmp_path / "runs")
        assert outcomes[0].is_successful
        assert (tmp_path / "runs" / "01-escape-run" / "trajectory.csv").exists()
        assert not (tmp_path / "escape").exists()


class TestRunDirectoryName:
    """Tests for run_directory_name"""

    def test_plain_name_kept(self):
        """Test ordinary names pass through"""
        assert run_directory_name(3, "cycle6-small") == "03-cycle6-small"

    def test_unsafe_characters_replaced(self):
        """Test path separators and spaces collapse to dashes"""
        assert run_directory_name(1, "a/b c\\d") == "01-a-b-c-d"
        assert run_directory_name(2, "..") == "02-scenario"
