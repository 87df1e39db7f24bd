"""Output configuration model."""

from pydantic import BaseModel, Field


class OutputConfig(BaseModel):
    """Configuration for result files.

    Attributes:
        json_indent: Indentation of JSON reports
        k1_samples: Random directions used by the non-certified K1 diagnostic (0 disables it)
        k1_seed: Seed of the K1 diagnostic sampler
    """

    json_indent: int = Field(2, ge=0, le=8)
    k1_samples: int = Field(20_000, ge=0)
    k1_seed: int = Field(0, ge=0)
