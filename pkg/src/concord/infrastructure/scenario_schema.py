"""Pydantic schema of scenario documents (JSON or YAML)"""

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from concord.domain.models.protocol import ProtocolVariant

# Scalar (uniform), per-agent list, or n x n matrix; null or 0 in a matrix means undefined
ExponentsValue = Union[float, list[float], list[list[Optional[float]]]]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GraphDocument(_Document):
    """Weight matrix with its agent count"""

    n: int = Field(ge=1)
    weights: list[list[float]]

    @model_validator(mode="after")
    def _square(self) -> "GraphDocument":
        if len(self.weights) != self.n or any(len(row) != self.n for row in self.weights):
            raise ValueError(f"weights must be a {self.n} x {self.n} matrix")
        return self


class ProtocolDocument(_Document):
    variant: ProtocolVariant
    exponents: Optional[ExponentsValue] = None


class SegmentDocument(_Document):
    duration: float = Field(gt=0)
    graph: GraphDocument
    exponents: Optional[ExponentsValue] = None


class ScheduleDocument(_Document):
    segments: list[SegmentDocument] = Field(min_length=1)
    repeat: Optional[Union[int, Literal["infinite"]]] = None

    @field_validator("repeat")
    @classmethod
    def _positive_repeat(cls, v):
        if isinstance(v, int) and v < 1:
            raise ValueError("repeat must be a positive integer or 'infinite'")
        return v


class IntegratorDocument(_Document):
    """Integrator overrides; missing fields come from the configured defaults"""

    step: Optional[float] = Field(None, gt=0)
    t_max: Optional[float] = Field(None, gt=0)
    consensus_tol: Optional[float] = Field(None, gt=0)
    record_stride: Optional[int] = Field(None, ge=1)


class OutputsDocument(_Document):
    trajectory_csv: bool = True
    diagnostics_json: bool = True
    bound_report: bool = False


class RequirementsDocument(_Document):
    symmetric_exponents: bool = False


class AnalysisDocument(_Document):
    k1: Optional[float] = Field(None, gt=0)
    compare_alphas: Optional[tuple[float, float]] = None
    v0_override: Optional[float] = Field(None, ge=0)


class ScenarioDocument(_Document):
    """Root of a scenario document.

    Exactly one of ``schedule`` and ``graph`` is given; ``graph`` is shorthand for a fixed
    topology.
    """

    name: str = Field(min_length=1)
    description: str = ""
    x0: list[float] = Field(min_length=1)
    protocol: ProtocolDocument
    schedule: Optional[ScheduleDocument] = None
    graph: Optional[GraphDocument] = None
    integrator: IntegratorDocument = Field(default_factory=IntegratorDocument)
    outputs: OutputsDocument = Field(default_factory=OutputsDocument)
    requirements: RequirementsDocument = Field(default_factory=RequirementsDocument)
    analysis: AnalysisDocument = Field(default_factory=AnalysisDocument)

    @model_validator(mode="after")
    def _one_topology(self) -> "ScenarioDocument":
        if (self.schedule is None) == (self.graph is None):
            raise ValueError("give exactly one of 'schedule' and 'graph'")
        return self
