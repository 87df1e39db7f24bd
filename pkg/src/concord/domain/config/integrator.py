"""Integrator configuration model."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Floor for the automatic consensus tolerance
MIN_CONSENSUS_TOL = 1e-6


class IntegratorConfig(BaseModel):
    """Configuration for fixed-step integration.

    Attributes:
        step: Integration step h in seconds
        t_max: Simulation horizon in seconds
        consensus_tol: Disagreement treated as consensus (None = derived from step and exponents)
        record_stride: Keep one sample every k steps (switch times and convergence always kept)
    """

    step: float = Field(1e-3, gt=0)
    t_max: float = Field(20.0, gt=0)
    consensus_tol: Optional[float] = Field(None, gt=0)
    record_stride: int = Field(10, ge=1)

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _horizon_covers_step(self) -> "IntegratorConfig":
        if self.t_max < self.step:
            raise ValueError(f"t_max ({self.t_max}) must be at least one step ({self.step})")
        return self

    def resolve_tolerance(self, alpha_min: float) -> float:
        """Consensus tolerance for a run whose smallest exponent is ``alpha_min``.

        Below roughly h^(1/(1-alpha)) the fixed-step map can overshoot consensus, so that is
        where detection starts; linear runs fall back to the floor.
        """
        if self.consensus_tol is not None:
            return self.consensus_tol
        if alpha_min >= 1.0:
            return MIN_CONSENSUS_TOL
        return max(MIN_CONSENSUS_TOL, self.step ** (1.0 / (1.0 - alpha_min)))
