"""Scenario documents: parsing, validation, serialization and loading"""

import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import yaml
from pydantic import ValidationError

from concord.domain.config.integrator import IntegratorConfig
from concord.domain.models.graph import WeightedDigraph
from concord.domain.models.protocol import (
    ExponentKind,
    ExponentProfile,
    ProtocolSpec,
    ProtocolVariant,
)
from concord.domain.models.scenario import AnalysisOptions, OutputFlags, Scenario, node_to_edge
from concord.domain.models.schedule import Segment, SwitchingSchedule
from concord.infrastructure.builtins import builtin_document
from concord.infrastructure.scenario_schema import (
    ExponentsValue,
    GraphDocument,
    ScenarioDocument,
)

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"


class ScenarioError(ValueError):
    """Scenario document failed schema or semantic validation"""

    pass


def _fail(path: str, message: str) -> ScenarioError:
    return ScenarioError(f"Scenario validation failed:\n  - {path}: {message}")


def _graph(doc: GraphDocument, path: str) -> WeightedDigraph:
    try:
        return WeightedDigraph.from_rows(doc.weights)
    except ValueError as e:
        raise _fail(f"{path}.weights", str(e)) from e


def _exponents(
    value: Optional[ExponentsValue], variant: ProtocolVariant, n: int, path: str
) -> Optional[ExponentProfile]:
    """Turn a document exponent value into a profile compatible with the variant"""
    if value is None:
        return None
    try:
        if isinstance(value, (int, float)):
            kind = ExponentKind.EDGE if variant == ProtocolVariant.P2 else ExponentKind.NODE
            return ExponentProfile.uniform(n, float(value), kind)

        rows = list(value)
        if rows and isinstance(rows[0], list):
            matrix = np.array([[np.nan if v is None else v for v in row] for row in rows])
            if matrix.shape != (n, n):
                raise ValueError(f"exponent matrix must be {n} x {n}, got {matrix.shape}")
            undefined = np.isnan(matrix) | (matrix == 0)
            if undefined.all():
                raise ValueError("exponent matrix defines no exponent")
            matrix[undefined] = matrix[~undefined].max()
            return ExponentProfile.edge(matrix)

        if len(rows) != n:
            raise ValueError(f"expected {n} per-agent exponents, got {len(rows)}")
        if variant == ProtocolVariant.P2:
            return node_to_edge(rows)
        return ExponentProfile.node(rows)
    except ValueError as e:
        raise _fail(path, str(e)) from e


def build_scenario(doc: ScenarioDocument, defaults: Optional[IntegratorConfig] = None) -> Scenario:
    """Turn a schema-valid document into a validated Scenario

    Args:
        doc: Parsed document
        defaults: Integrator defaults for fields the document omits

    Returns:
        Validated scenario

    Raises:
        ScenarioError: On any semantic violation, with the offending field path
    """
    defaults = defaults or IntegratorConfig()
    n = len(doc.x0)
    variant = doc.protocol.variant

    profile = _exponents(doc.protocol.exponents, variant, n, "protocol.exponents")
    if profile is None:
        if variant != ProtocolVariant.LINEAR:
            raise _fail("protocol.exponents", f"required for protocol {variant.value}")
        profile = ProtocolSpec.linear(n).exponents
    try:
        protocol = ProtocolSpec(variant, profile)
    except ValueError as e:
        raise _fail("protocol.exponents", str(e)) from e

    try:
        integrator = IntegratorConfig(
            **{**defaults.model_dump(), **doc.integrator.model_dump(exclude_none=True)}
        )
    except ValidationError as e:
        raise _fail("integrator", e.errors()[0]["msg"]) from e

    if doc.graph is not None:
        graph = _graph(doc.graph, "graph")
        schedule = SwitchingSchedule.fixed(graph, duration=integrator.t_max)
    else:
        segments = []
        for k, seg in enumerate(doc.schedule.segments):
            path = f"schedule.segments.{k}"
            graph = _graph(seg.graph, f"{path}.graph")
            exps = _exponents(seg.exponents, variant, seg.graph.n, f"{path}.exponents")
            try:
                segments.append(Segment(seg.duration, graph, exps))
            except ValueError as e:
                raise _fail(path, str(e)) from e
        try:
            schedule = SwitchingSchedule(tuple(segments), doc.schedule.repeat)
        except ValueError as e:
            raise _fail("schedule", str(e)) from e

    try:
        analysis = AnalysisOptions(**doc.analysis.model_dump())
    except ValueError as e:
        raise _fail("analysis", str(e)) from e

    try:
        return Scenario(
            name=doc.name,
            x0=tuple(doc.x0),
            protocol=protocol,
            schedule=schedule,
            integrator=integrator,
            outputs=OutputFlags(**doc.outputs.model_dump()),
            description=doc.description,
            require_symmetric_exponents=doc.requirements.symmetric_exponents,
            analysis=analysis,
        )
    except ValueError as e:
        raise _fail("scenario", str(e)) from e


def parse_scenario(
    document: Union[str, dict[str, Any]],
    defaults: Optional[IntegratorConfig] = None,
    fmt: str = "json",
) -> Scenario:
    """Parse and validate a scenario document

    Args:
        document: JSON or YAML text, or an already decoded mapping
        defaults: Integrator defaults for fields the document omits
        fmt: "json" or "yaml" (ignored for mappings)

    Returns:
        Validated scenario

    Raises:
        ScenarioError: If the text is malformed or the content is invalid
    """
    if isinstance(document, str):
        try:
            data = yaml.safe_load(document) if fmt == "yaml" else json.loads(document)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ScenarioError(f"Malformed {fmt.upper()} document: {e}") from e
    else:
        data = document
    if not isinstance(data, dict):
        raise ScenarioError("Scenario document must be a mapping")

    try:
        doc = ScenarioDocument.model_validate(data)
    except ValidationError as e:
        errors = []
        for error in e.errors():
            field = ".".join(str(x) for x in error["loc"])
            errors.append(f"  - {field}: {error['msg']}")
        raise ScenarioError("Scenario validation failed:\n" + "\n".join(errors)) from e
    return build_scenario(doc, defaults)


def serialize_scenario(scenario: Scenario) -> dict[str, Any]:
    """Document form of a scenario; parse_scenario inverts it"""
    schedule = scenario.schedule
    return {
        "name": scenario.name,
        "description": scenario.description,
        "x0": list(scenario.x0),
        "protocol": {
            "variant": scenario.variant.value,
            "exponents": scenario.protocol.exponents.to_document(),
        },
        "schedule": {
            "segments": [
                {
                    "duration": segment.duration,
                    "graph": {"n": segment.graph.n, "weights": segment.graph.to_rows()},
                    "exponents": (
                        segment.exponents.to_document() if segment.exponents is not None else None
                    ),
                }
                for segment in schedule.segments
            ],
            "repeat": schedule.repeat,
        },
        "integrator": scenario.integrator.model_dump(),
        "outputs": {
            "trajectory_csv": scenario.outputs.trajectory_csv,
            "diagnostics_json": scenario.outputs.diagnostics_json,
            "bound_report": scenario.outputs.bound_report,
        },
        "requirements": {"symmetric_exponents": scenario.require_symmetric_exponents},
        "analysis": {
            "k1": scenario.analysis.k1,
            "compare_alphas": (
                list(scenario.analysis.compare_alphas)
                if scenario.analysis.compare_alphas is not None
                else None
            ),
            "v0_override": scenario.analysis.v0_override,
        },
    }


def builtin_scenario(name: str, defaults: Optional[IntegratorConfig] = None) -> Scenario:
    """Built-in scenario by name

    Raises:
        ValueError: If the name is unknown (the message lists the valid names)
    """
    return parse_scenario(builtin_document(name), defaults)


def dump_scenario(scenario: Scenario, indent: int = 2) -> str:
    return json.dumps(serialize_scenario(scenario), indent=indent) + "\n"


def parse_graph(document: Union[str, dict[str, Any]]) -> WeightedDigraph:
    """Parse a graph document {"n": int, "weights": [[...]]}

    Raises:
        ScenarioError: If the document is malformed or the weights are invalid
    """
    try:
        data = json.loads(document) if isinstance(document, str) else document
        doc = GraphDocument.model_validate(data)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Malformed JSON graph: {e}") from e
    except ValidationError as e:
        errors = [
            f"  - {'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors()
        ]
        raise ScenarioError("Graph validation failed:\n" + "\n".join(errors)) from e
    return _graph(doc, "graph")


def load_graph(path: Path) -> WeightedDigraph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_graph(f.read())


def load_scenario(ref: str, defaults: Optional[IntegratorConfig] = None) -> Scenario:
    """Load a scenario from a file path or a ``builtin:NAME`` reference

    Args:
        ref: Path to a .json/.yml/.yaml document, or builtin:NAME
        defaults: Integrator defaults for fields the document omits

    Returns:
        Validated scenario
    """
    if ref.startswith(BUILTIN_PREFIX):
        return builtin_scenario(ref[len(BUILTIN_PREFIX) :], defaults)

    path = Path(ref)
    if not path.exists():
        raise ScenarioError(f"Scenario file not found: {path}")
    fmt = "yaml" if path.suffix.lower() in (".yml", ".yaml") else "json"
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    logger.info(f"Loaded scenario document {path}")
    return parse_scenario(text, defaults, fmt)
