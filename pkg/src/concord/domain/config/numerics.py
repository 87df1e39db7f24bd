"""Numerical tolerances configuration model."""

from pydantic import BaseModel, Field


class NumericsConfig(BaseModel):
    """Tolerances of the graph and spectral algorithms.

    Attributes:
        perron_tol: Relative change that stops the Perron power iteration
        perron_max_iter: Iteration cap of the Perron power iteration
        jacobi_tol: Off-diagonal norm (relative) that stops the Jacobi sweeps
        jacobi_max_sweeps: Sweep cap of the Jacobi eigensolver
        detail_balance_rtol: Relative slack of the detail-balance consistency sweep
        zero_weight: Weights below this are structural zeros in the detail-balance test
        gershgorin_slack: Slack added to every Gershgorin disc radius
        connectivity_tol: Eigenvalues at or below this count as zero
    """

    perron_tol: float = Field(1e-14, gt=0)
    perron_max_iter: int = Field(10_000, ge=1)
    jacobi_tol: float = Field(1e-13, gt=0)
    jacobi_max_sweeps: int = Field(100, ge=1)
    detail_balance_rtol: float = Field(1e-10, gt=0)
    zero_weight: float = Field(1e-15, ge=0)
    gershgorin_slack: float = Field(1e-9, ge=0)
    connectivity_tol: float = Field(1e-9, ge=0)
