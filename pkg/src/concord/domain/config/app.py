"""Main application configuration model."""

from pydantic import BaseModel, ConfigDict, Field

from concord.domain.config.batch import BatchConfig
from concord.domain.config.integrator import IntegratorConfig
from concord.domain.config.numerics import NumericsConfig
from concord.domain.config.output import OutputConfig


class AppConfig(BaseModel):
    """Main application configuration.

    Root of the optional .concord.yml file. Scenario documents override the integrator
    defaults declared here.

    Attributes:
        integrator: Default integration settings
        numerics: Algorithm tolerances
        output: Result file settings
        batch: Concurrent execution settings
    """

    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)
    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    batch: BatchConfig = Field(default_factory=BatchConfig)

    model_config = ConfigDict(
        validate_assignment=True,  # Validate on attribute assignment
        extra="forbid",  # Reject unknown fields
        json_schema_extra={
            "example": {
                "integrator": {
                    "step": 0.001,
                    "t_max": 20.0,
                    "consensus_tol": None,
                    "record_stride": 10,
                },
                "numerics": {
                    "perron_tol": 1e-14,
                    "perron_max_iter": 10000,
                    "jacobi_tol": 1e-13,
                    "jacobi_max_sweeps": 100,
                    "detail_balance_rtol": 1e-10,
                    "zero_weight": 1e-15,
                    "gershgorin_slack": 1e-9,
                    "connectivity_tol": 1e-9,
                },
                "output": {"json_indent": 2, "k1_samples": 20000, "k1_seed": 0},
                "batch": {"max_workers": 4},
            }
        },
    )
