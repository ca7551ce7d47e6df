from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, NonNegativeInt, PositiveFloat, model_validator

Mode = Literal["phase", "simulate", "verify", "bound", "table1"]
OutputFormat = Literal["json", "csv"]

PLAN_MODES: frozenset[str] = frozenset({"phase", "bound"})


class ParameterOverrides(BaseModel):
    """User overrides on top of a catalog species."""

    model_config = ConfigDict(extra="forbid")

    mass_u: PositiveFloat | None = None
    trap_freq_over_2pi: PositiveFloat | None = None
    cycles: NonNegativeInt | None = None
    dk_over_k: PositiveFloat | None = None
    wavelength_nm: PositiveFloat | None = None
    wavenumber_over_2pi: PositiveFloat | None = None
    pulse_duration: PositiveFloat | None = None
    omega1: PositiveFloat | None = None
    omega2: PositiveFloat | None = None
    detuning: PositiveFloat | None = None


class ExplicitParameters(BaseModel):
    """Plan given directly in SI units or in natural units (hbar = m = nu = 1)."""

    model_config = ConfigDict(extra="forbid")

    natural_units: bool = Field(False, description="Use hbar = c = M_p = 1")
    mass: PositiveFloat = Field(..., description="Oscillator mass, kg (or natural)")
    trap_freq: PositiveFloat = Field(..., description="Trap angular frequency, rad/s (or natural)")
    pulse_duration: PositiveFloat
    omega1: PositiveFloat
    omega2: PositiveFloat
    detuning: PositiveFloat
    delta_k: float = Field(..., description="Delta_k, rad/m (or natural)")
    cycles: NonNegativeInt = 1


class NumericOptions(BaseModel):
    """Numerical overrides of the Settings defaults."""

    model_config = ConfigDict(extra="forbid")

    dim: int | None = Field(None, ge=2, le=1024)
    precision_bits: int | None = Field(None, ge=128)
    convergence_rtol: PositiveFloat | None = None
    unitarity_tol: PositiveFloat | None = None


class OutputOptions(BaseModel):
    """Where and how to write the report."""

    model_config = ConfigDict(extra="forbid")

    path: Path | None = None
    format: OutputFormat = "json"


class RunConfig(BaseModel):
    """Validated run configuration."""

    model_config = ConfigDict(extra="forbid")

    mode: Mode
    species: str | None = None
    parameters: ExplicitParameters | None = None
    overrides: ParameterOverrides = Field(default_factory=ParameterOverrides)
    beta0: NonNegativeFloat | None = None
    accuracy: float | None = Field(None, gt=0, lt=1)
    kappa: PositiveFloat = Field(2.0, description="Natural-unit simulate plan: X sqrt(hbar / 2 m nu)")
    quick: bool = False
    timings: bool = False
    lamb_dicke: bool = True
    simplified_detuning: bool = False
    numeric: NumericOptions = Field(default_factory=NumericOptions)
    output: OutputOptions = Field(default_factory=OutputOptions)
    provenance: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _single_plan_source(self) -> "RunConfig":
        if self.species is not None and self.parameters is not None:
            raise ValueError("give exactly one plan source: species or parameters, not both")
        if self.mode in PLAN_MODES and self.species is None and self.parameters is None:
            raise ValueError(f"mode '{self.mode}' needs a plan source: species or parameters")
        return self
