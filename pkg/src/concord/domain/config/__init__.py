"""Configuration models with Pydantic validation."""

from concord.domain.config.app import AppConfig
from concord.domain.config.batch import BatchConfig
from concord.domain.config.integrator import IntegratorConfig
from concord.domain.config.numerics import NumericsConfig
from concord.domain.config.output import OutputConfig

__all__ = [
    "AppConfig",
    "BatchConfig",
    "IntegratorConfig",
    "NumericsConfig",
    "OutputConfig",
]
