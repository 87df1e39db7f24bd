"""Tests for result file writers"""

import json

import numpy as np

from concord.domain.models.trajectory import ConservedKind, Trajectory
from concord.infrastructure.writers import (
    json_text,
    trajectory_csv,
    write_json,
    write_trajectory_csv,
)


def _trajectory() -> Trajectory:
    return Trajectory(
        times=np.array([0.0, 0.1]),
        states=np.array([[0.3, 0.4], [0.35, 0.35]]),
        disagreement=np.array([0.1, 0.0]),
        conserved=np.array([0.35, 0.35]),
        conserved_kind=ConservedKind.MEAN,
        consensus_tol=1e-6,
        convergence_time=0.1,
        consensus_value=0.35,
        steps=100,
    )


class TestTrajectoryCsv:
    """Tests for trajectory_csv"""

    def test_header_and_rows(self):
        """Test the header and one row per sample"""
        lines = trajectory_csv(_trajectory()).splitlines()
        assert lines[0] == "t,x_1,x_2,disagreement,conserved"
        assert len(lines) == 3
        assert lines[1].split(",") == [
            "0",
            "0.29999999999999999",
            "0.40000000000000002",
            "0.10000000000000001",
            "0.34999999999999998",
        ]

    def test_values_round_trip(self):
        """Test 17 significant digits reproduce every double"""
        rows = trajectory_csv(_trajectory()).splitlines()[1:]
        parsed = np.array([[float(v) for v in row.split(",")] for row in rows])
        np.testing.assert_array_equal(parsed[:, 1:3], _trajectory().states)

    def test_unix_line_endings(self):
        """Test rows end with a bare newline"""
        assert "\r" not in trajectory_csv(_trajectory())


class TestJsonFiles:
    """Tests for JSON helpers and file writing"""

    def test_json_text(self):
        """Test indentation and trailing newline"""
        assert json_text({"a": 1}, indent=2) == '{\n  "a": 1\n}\n'

    def test_write_creates_directories(self, tmp_path):
        """Test nested output directories are created"""
        path = write_json(_trajectory().diagnostics(), tmp_path / "a" / "b" / "diag.json")
        data = json.loads(path.read_text())
        assert data["converged"] is True
        assert data["conserved_kind"] == "mean"
        assert data["samples"] == 2

    def test_write_trajectory_csv(self, tmp_path):
        """Test the CSV file matches the in-memory text"""
        path = write_trajectory_csv(_trajectory(), tmp_path / "trajectory.csv")
        assert path.read_text() == trajectory_csv(_trajectory())
