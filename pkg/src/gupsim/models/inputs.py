import mpmath
from pydantic import BaseModel, ConfigDict, Field


class PhaseInputs(BaseModel):
    """Extended-precision inputs of the closed-form phase formulas."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    hbar: mpmath.mpf
    mass: mpmath.mpf
    trap_freq: mpmath.mpf
    pulse_duration: mpmath.mpf
    omega1: mpmath.mpf
    omega2: mpmath.mpf
    detuning: mpmath.mpf
    delta_k: mpmath.mpf
    beta: mpmath.mpf
    precision_bits: int = Field(256, ge=53)
