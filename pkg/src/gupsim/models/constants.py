from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, model_validator


class PhysicalConstants(BaseModel):
    """Pinned physical constants (SI, or 1 in natural units)."""

    model_config = ConfigDict(frozen=True)

    name: str = Field("CODATA 2018", description="Table the values were transcribed from")
    hbar: PositiveFloat = Field(..., description="Reduced Planck constant, J*s")
    c: PositiveFloat = Field(..., description="Speed of light, m/s")
    planck_mass: PositiveFloat = Field(..., description="Planck mass, kg")
    atomic_mass_unit: PositiveFloat = Field(..., description="Unified atomic mass unit, kg")


class OscillatorScales(BaseModel):
    """Ground-state length and momentum scales of the trap mode."""

    model_config = ConfigDict(frozen=True)

    x0: PositiveFloat = Field(..., description="sqrt(hbar / 2 m nu), m")
    p0: PositiveFloat = Field(..., description="sqrt(hbar m nu / 2), kg*m/s")
    mass: PositiveFloat = Field(..., description="Oscillator mass, kg")
    trap_freq: PositiveFloat = Field(..., description="Trap angular frequency, rad/s")
    hbar: PositiveFloat = Field(..., description="hbar the scales were built with")

    @model_validator(mode="after")
    def _check_uncertainty_product(self) -> "OscillatorScales":
        half_hbar = self.hbar / 2
        if abs(self.x0 * self.p0 - half_hbar) > 1e-12 * half_hbar:
            raise ValueError("x0 * p0 must equal hbar / 2")
        return self
