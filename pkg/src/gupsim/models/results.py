from typing import Any, Literal

import mpmath
from pydantic import BaseModel, ConfigDict, Field

from .angle import BigAngle

GeneratorLabel = Literal["+x", "-x", "+p", "-p"]


class PropagatorTerm(BaseModel):
    """Closed-form propagator of one pulse: displacement generator plus scalar beta phase."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0, description="Global pulse index")
    generator_label: GeneratorLabel = Field(..., description="Sign and quadrature in the exponent")
    displacement_strength: float = Field(..., description="eta*t_p for x, (eta/m nu)*t_p for p")
    beta_phase_increment: float = Field(..., description="index * beta * xi_tilde * t_p^4, rad")


class DetuningReport(BaseModel):
    """Effective Rabi rate with exact and simplified detunings."""

    exact: float = Field(..., description="hbar Omega1 Omega2 (Delta1 + Delta2) / (8 Delta1 Delta2)")
    simplified: float = Field(..., description="hbar Omega1 Omega2 / (4 Delta)")
    relative_difference: float = Field(..., description="(simplified - exact) / exact")


class EliminationReport(BaseModel):
    """How close one cycle comes to an ordinary phase that is a multiple of 2 pi."""

    cycles_per_turn: float = Field(..., description="phi0_cycle / 2 pi")
    nearest_integer: int = Field(..., description="Nearest integer m")
    residual: float = Field(..., description="phi0_cycle - 2 pi m, rad")
    note: str = Field(..., description="Exponent convention applied")


class DriftReport(BaseModel):
    """Estimate of the harmonic drift neglected by freezing x during a pulse."""

    nu_tp: float = Field(..., description="nu * t_p")
    commutator_scale: float = Field(..., description="t_p ||[H0, x]|| / (hbar ||x||) on the interior subspace")
    threshold: float = Field(..., description="Warning threshold")
    exceeds: bool = Field(..., description="True when the estimate is above the threshold")


class PhaseResult(BaseModel):
    """Accumulated ordinary and GUP phases after N cycles."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    cycles: int = Field(..., ge=0, description="Number of cycles N")
    phi0_unwrapped: BigAngle = Field(..., description="Ordinary phase before reduction")
    dphi_unwrapped: BigAngle = Field(..., description="GUP phase before reduction")
    phi0_wrapped: float = Field(..., description="phi0 in (-pi, pi]")
    dphi_wrapped: float = Field(..., description="dphi in (-pi, pi]")
    phi_wrapped: float = Field(..., description="(phi0 + dphi) in (-pi, pi]")
    wrap_error_bound: float = Field(..., description="Largest reduction error among the wrapped values, rad")
    beta_tolerance_d: mpmath.mpf = Field(..., description="Per-pulse beta phase step beta*xi_tilde*t_p^4, rad")
    per_pulse_beta_increments: list[float] = Field(default_factory=list, description="i*d for the leading pulses")
    increments_truncated: bool = Field(False, description="True when only the leading pulses are listed")
    eta: float = Field(..., description="Delta_k Omega1 Omega2 / (2 Delta), rad/(m*s)")
    xi_tilde: float = Field(..., description="hbar^3 pi / (256 m nu) (Delta_k Omega1 Omega2 / Delta)^4")
    simplified_detuning: bool = Field(..., description="Whether Delta1 = Delta2 = Delta was applied")
    conventions: dict[str, Any] = Field(default_factory=dict, description="Constants and conventions block")


class LeadingOrderGap(BaseModel):
    """Size of the operator Zassenhaus terms relative to the scalar one."""

    kappa: float = Field(..., description="t (Delta_k Omega1 Omega2 / Delta) sqrt(hbar / 2 m nu)")
    c1_norm: float = Field(..., ge=0, description="||C1|| on the interior subspace")
    c2_norm: float = Field(..., ge=0, description="||C2|| on the interior subspace")
    c3_norm: float = Field(..., ge=0, description="|C3|")
    c1_over_c3: float = Field(..., description="||C1|| / |C3|, 0 when all three terms vanish")
    c2_over_c3: float = Field(..., description="||C2|| / |C3|, 0 when all three terms vanish")


class GapSweep(BaseModel):
    """Leading-order gap over a kappa sweep with fitted power laws."""

    points: list[LeadingOrderGap] = Field(default_factory=list)
    c1_exponent: float = Field(..., description="Fitted d log(||C1||/|C3|) / d log kappa")
    c2_exponent: float = Field(..., description="Fitted d log(||C2||/|C3|) / d log kappa")


class TermComparison(BaseModel):
    """Closed-form Zassenhaus term against the nested-commutator one."""

    term: str = Field(..., description="C1, C2 or C3")
    ratio_re: float = Field(..., description="Real part of the least-squares factor generic / closed form")
    ratio_im: float = Field(..., description="Imaginary part of the factor")
    relative_residual: float = Field(..., description="||generic - ratio * closed|| / ||generic|| on the interior")
