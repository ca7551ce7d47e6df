from typing import Any, Literal

from pydantic import BaseModel, Field

SuiteStatus = Literal["pass", "fail"]


class SuiteResult(BaseModel):
    """Outcome of one verification suite."""

    name: str
    status: SuiteStatus
    measured: Any = Field(None, description="Headline measured value")
    tolerance: Any = Field(None, description="Acceptance threshold")
    runtime: float | None = Field(None, description="Seconds; only filled when timings are requested")
    details: dict[str, Any] = Field(default_factory=dict)


class Finding(BaseModel):
    """A place where the printed formula and the implemented one differ."""

    location: str = Field(..., description="Quantity or formula the finding concerns")
    printed: str
    implemented: str
    note: str = ""


class VerifyReport(BaseModel):
    """Machine-readable report of the verify subcommand."""

    quick: bool
    passed: bool
    suites: list[SuiteResult] = Field(default_factory=list)
    conventions: dict[str, Any] = Field(default_factory=dict)
    discrepancy_ledger: list[Finding] = Field(default_factory=list)


class SimulateReport(BaseModel):
    """Numeric oracle run next to the trajectory and closed-form predictions."""

    cycles: int
    dim: int = Field(..., description="Truncation accepted by the doubling policy")
    beta: float
    kappa: float = Field(..., description="X sqrt(hbar / 2 m nu)")
    numeric_beta_phase: float = Field(..., description="arg <alpha|U|alpha> - N phi0_cycle, rad")
    trajectory_beta_phase: float = Field(..., description="First-order phase along the coherent path, rad")
    closed_form_beta_phase: float = Field(..., description="2N(4N - 1) beta xi_tilde t_p^4, rad")
    loop_closure_defect: float = Field(..., description="||U_cycle - e^{i phi0_cycle}|| at beta = 0, interior")
    drift: dict[str, Any] = Field(default_factory=dict)
    detuning: dict[str, Any] = Field(default_factory=dict)
    conventions: dict[str, Any] = Field(default_factory=dict)
