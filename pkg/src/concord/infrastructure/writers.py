"""Result files: trajectory CSV and JSON reports"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any

from concord.domain.models.trajectory import Trajectory

logger = logging.getLogger(__name__)


def _fmt(value: float) -> str:
    """17 significant digits, enough to round-trip any double"""
    return f"{value:.17g}"


def trajectory_csv(traj: Trajectory) -> str:
    """CSV text with header t,x_1..x_n,disagreement,conserved"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["t"] + [f"x_{i + 1}" for i in range(traj.n)] + ["disagreement", "conserved"]
    )
    for t, state, gap, conserved in zip(
        traj.times, traj.states, traj.disagreement, traj.conserved
    ):
        writer.writerow([_fmt(t)] + [_fmt(v) for v in state] + [_fmt(gap), _fmt(conserved)])
    return buffer.getvalue()


def json_text(data: Any, indent: int = 2) -> str:
    return json.dumps(data, indent=indent) + "\n"


def write_text(path: Path, text: str) -> Path:
    """Write a result file, creating parent directories"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Wrote {path}")
    return path


def write_trajectory_csv(traj: Trajectory, path: Path) -> Path:
    return write_text(path, trajectory_csv(traj))


def write_json(data: Any, path: Path, indent: int = 2) -> Path:
    return write_text(path, json_text(data, indent))
