from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator

Regime = Literal["linear", "quadratic", "wrap-limited"]


class SpeciesSpec(BaseModel):
    """One ion species row of the bound table."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., description="Catalog key, e.g. Yb171")
    wavelength_nm: PositiveFloat = Field(..., description="Transition wavelength, nm")
    cycles: PositiveInt = Field(..., description="Number of cycles N")
    trap_freq_over_2pi: PositiveFloat = Field(..., description="nu / 2 pi, Hz")
    dk_over_k: PositiveFloat = Field(..., description="Delta_k / |k|")
    mass_u: PositiveFloat = Field(..., description="Ion mass, u")
    level_labels: tuple[str, str, str] = Field(..., description="Levels (e, g, r)")
    claimed_bound: PositiveFloat | None = Field(None, description="Published beta0 bound, order of magnitude")
    wavenumber_over_2pi: PositiveFloat | None = Field(None, description="|k| / 2 pi override, 1/m")
    phi0_multiple_of_2pi: bool = Field(False, description="Treat the ordinary phase as a multiple of 2 pi")
    provenance: str = Field("", description="Where the row values come from")

    @field_validator("dk_over_k")
    @classmethod
    def _two_beam_pairs(cls, v: float) -> float:
        if v > 2:
            raise ValueError("dk_over_k cannot exceed 2 for two counter-propagating pairs")
        return v


class SharedParameters(BaseModel):
    """Parameters every catalog row inherits from the reference experiment."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    pulse_duration: PositiveFloat = Field(..., description="t_p, s")
    omega1: PositiveFloat = Field(..., description="Omega1 = Omega3, rad/s")
    omega2: PositiveFloat = Field(..., description="Omega2 = Omega4, rad/s")
    detuning: PositiveFloat = Field(..., description="Delta, rad/s")
    beta0: PositiveFloat = Field(..., description="Reference beta0 for phase reports")
    accuracy: PositiveFloat = Field(..., description="Default population accuracy epsilon")


class SpeciesCatalog(BaseModel):
    """Versioned species catalog."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    version: int = Field(..., ge=1)
    shared: SharedParameters
    species: list[SpeciesSpec] = Field(default_factory=list)

    def get(self, name: str) -> SpeciesSpec | None:
        for spec in self.species:
            if spec.name.lower() == name.lower():
                return spec
        return None


class SensitivityEntry(BaseModel):
    """How one input moves the accumulated phases."""

    parameter: str
    exponent_phi0: float = Field(..., description="d ln phi0 / d ln q")
    exponent_dphi: float = Field(..., description="d ln dphi / d ln q")
    d_phi0: float = Field(..., description="d phi0 / d ln q, rad")
    d_dphi: float = Field(..., description="d dphi / d ln q, rad")
    relative_uncertainty: float = Field(..., description="Relative uncertainty of q")
    phase_spread: float = Field(..., description="|d phi / d ln q| * relative uncertainty, rad")
    target_reachable: bool = Field(..., description="Quoted phases lie within the spread")


class BoundSensitivity(BaseModel):
    """Bound change under a +-1% perturbation of one parameter."""

    parameter: str
    bound_minus: float = Field(..., description="Bound at 0.99 x parameter")
    bound_plus: float = Field(..., description="Bound at 1.01 x parameter")
    relative_change: float = Field(..., description="max |bound_pm / bound - 1|")


class BoundReport(BaseModel):
    """Upper bound on beta0 for one species at one readout accuracy."""

    species: str
    accuracy: float = Field(..., description="Population accuracy epsilon")
    beta0_bound: float = Field(..., description="Full-precision bound")
    beta0_bound_headline: float = Field(..., description="Bound rounded to one significant figure")
    dphi_at_bound: float = Field(..., description="Unwrapped GUP phase at the bound, rad")
    phi0_wrapped: float = Field(..., description="Readout phase used, rad")
    phi0_computed: float = Field(..., description="Ordinary phase from the parameters, wrapped, rad")
    regime: Regime
    linear_closed_form: float | None = Field(None, description="2 eps / |sin phi0| bound, when sin phi0 != 0")
    claimed_bound: float | None = None
    agreement: bool | None = Field(None, description="Bound within one order of magnitude of the claim")
    sensitivity: list[BoundSensitivity] = Field(default_factory=list)
    discrepancy_notes: list[str] = Field(default_factory=list)


class ScalingPoint(BaseModel):
    """One point of the bound scaling grid."""

    accuracy: float = Field(..., description="Population accuracy epsilon")
    cycles: int = Field(..., description="Number of cycles N")
    phi0_wrapped: float = Field(..., description="Readout phase this N produces, rad")
    beta0_bound: float
    readout_law_bound: float = Field(..., description="Bound from the small-dphi readout law")
    regime: Regime
