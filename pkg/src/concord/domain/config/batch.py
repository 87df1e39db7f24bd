"""Batch execution configuration model."""

from pydantic import BaseModel, Field


class BatchConfig(BaseModel):
    """Configuration for running several scenarios.

    Attributes:
        max_workers: Scenarios simulated concurrently
    """

    max_workers: int = Field(1, ge=1, le=16)
