import math
from collections.abc import Iterator

from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat, model_validator

QUARTER_TURN_SETTINGS: dict[int, tuple[float, float]] = {
    0: (math.pi / 2, math.pi / 2),
    1: (0.0, 0.0),
    2: (-math.pi / 2, -math.pi / 2),
    3: (math.pi, math.pi),
}


class GupParams(BaseModel):
    """Deformation strength together with the oscillator it acts on."""

    model_config = ConfigDict(frozen=True)

    beta0: NonNegativeFloat = Field(..., description="Dimensionless deformation parameter")
    beta: NonNegativeFloat = Field(..., description="beta0 / (M_p c)^2, (kg*m/s)^-2 or natural momentum^-2")
    mass: PositiveFloat = Field(..., description="Oscillator mass, kg")
    trap_freq: PositiveFloat = Field(..., description="Trap angular frequency, rad/s")

    @model_validator(mode="after")
    def _beta_zero_iff_beta0_zero(self) -> "GupParams":
        if (self.beta == 0) != (self.beta0 == 0):
            raise ValueError("beta must vanish exactly when beta0 vanishes")
        return self


class LaserConfig(BaseModel):
    """Four-beam Raman configuration for one interaction pulse."""

    model_config = ConfigDict(frozen=True)

    rabi: tuple[NonNegativeFloat, NonNegativeFloat, NonNegativeFloat, NonNegativeFloat] = Field(
        ..., description="Rabi frequencies (Omega1..Omega4), rad/s"
    )
    detuning: float = Field(..., description="Single-photon detuning Delta, rad/s")
    wavevector_projections: tuple[float, float, float, float] = Field(
        ..., description="Wavevector projections on the trap axis (k_x1..k_x4), rad/m"
    )
    phases: tuple[float, float, float, float] = Field((0.0, 0.0, 0.0, 0.0), description="Beam phases, rad")
    pulse_duration: PositiveFloat = Field(..., description="Pulse duration t_p, s")
    transition_wavelength: PositiveFloat | None = Field(None, description="Transition wavelength, m")
    delta_k: float | None = Field(None, description="k_x4 + k_x2 - k_x3 - k_x1, rad/m")

    @model_validator(mode="after")
    def _check_beams(self) -> "LaserConfig":
        o1, o2, o3, o4 = self.rabi
        if not (math.isclose(o1, o3, rel_tol=1e-12, abs_tol=0.0) and math.isclose(o2, o4, rel_tol=1e-12, abs_tol=0.0)):
            raise ValueError("Stark-shift cancellation requires Omega1 == Omega3 and Omega2 == Omega4")
        k1, k2, k3, k4 = self.wavevector_projections
        dk = k4 + k2 - k3 - k1
        if self.delta_k is None:
            object.__setattr__(self, "delta_k", dk)
        elif not math.isclose(self.delta_k, dk, rel_tol=1e-12, abs_tol=1e-300):
            raise ValueError(f"delta_k {self.delta_k} inconsistent with projections ({dk})")
        return self

    @classmethod
    def from_delta_k(
        cls,
        *,
        omega1: float,
        omega2: float,
        detuning: float,
        delta_k: float,
        pulse_duration: float,
        transition_wavelength: float | None = None,
    ) -> "LaserConfig":
        """Build a symmetric configuration: beams 2 and 4 carry +delta_k/2, beams 1 and 3 none."""
        return cls(
            rabi=(omega1, omega2, omega1, omega2),
            detuning=detuning,
            wavevector_projections=(0.0, delta_k / 2, 0.0, delta_k / 2),
            pulse_duration=pulse_duration,
            transition_wavelength=transition_wavelength,
            delta_k=delta_k,
        )


class SchedulePulse(BaseModel):
    """One entry of the quarter-period schedule."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0, description="Global pulse index i")
    quarter_turns: int = Field(..., ge=0, description="t_i * nu / (pi/2); equal to the index")
    phase_setting: tuple[float, float] = Field(..., description="(phi1 - phi2, phi4 - phi3), rad")

    def time(self, trap_freq: float) -> float:
        return self.quarter_turns * math.pi / (2 * trap_freq)


class PulsePlan(BaseModel):
    """Laser configuration, deformation and cycle count of one run."""

    model_config = ConfigDict(frozen=True)

    laser: LaserConfig
    gup: GupParams
    cycles: int = Field(..., ge=0, description="Number of four-pulse cycles N")
    simplified_detuning: bool = Field(False, description="Use Delta1 = Delta2 = Delta in the effective Rabi rate")
    lamb_dicke: bool = Field(True, description="Linearize the effective Hamiltonian in k*x")

    @property
    def schedule_length(self) -> int:
        return 4 * self.cycles

    def pulse(self, index: int) -> SchedulePulse:
        return SchedulePulse(index=index, quarter_turns=index, phase_setting=QUARTER_TURN_SETTINGS[index % 4])

    def iter_schedule(self) -> Iterator[SchedulePulse]:
        """Yield the 4N pulses lazily; N reaches ~1e9 for real species."""
        for index in range(self.schedule_length):
            yield self.pulse(index)
