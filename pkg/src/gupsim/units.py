"""
Pinned physical constants, SI/natural unit helpers and extended-precision phase reduction.

All frequencies are angular (rad/s). A value printed as "0.18 x 2 pi MHz" enters as
``angular(0.18e6)``; values printed without the 2 pi factor are taken as already angular.
"""

import logging
import math
from typing import Any

import mpmath

from gupsim.config import settings
from gupsim.exceptions import InvalidParameterError, PrecisionError
from gupsim.models import BigAngle, Finding, OscillatorScales, PhysicalConstants, WrappedPhase

logger = logging.getLogger(__name__)

# CODATA 2018 recommended values; c is exact, hbar is exact since the 2019 SI redefinition.
CODATA_2018: dict[str, str] = {
    "hbar": "1.054571817e-34",
    "c": "299792458",
    "planck_mass": "2.176434e-8",
    "atomic_mass_unit": "1.66053906660e-27",
}

CODATA_2018_RELATIVE_UNCERTAINTY: dict[str, float] = {
    "hbar": 0.0,
    "c": 0.0,
    "planck_mass": 1.1e-5,
    "atomic_mass_unit": 3.0e-10,
}

FREQUENCY_CONVENTION: str = (
    "angular: 'x 2pi MHz' values are multiplied by 2pi; Omega = 2 GHz and Delta = 12 GHz are taken as rad/s"
)
WRAP_CONVENTION: str = "(-pi, pi]"

CORRECTIONS: list[Finding] = [
    Finding(
        location="deformation parameter",
        printed="beta = beta0 / (M_p c)",
        implemented="beta = beta0 / (M_p c)^2",
        note="dimensional consistency with the modified commutator",
    ),
    Finding(
        location="deformed momentum",
        printed="p_hat = p (1 + beta p^3 / 3)",
        implemented="p_hat = p (1 + beta p^2 / 3)",
        note="reproduces [x, p_hat] = i hbar (1 + beta p^2) and the beta p^4 / 3m Hamiltonian term",
    ),
    Finding(
        location="Heisenberg position operator",
        printed="mixes omega and nu",
        implemented="omega == nu throughout",
    ),
    Finding(
        location="second-pulse propagator",
        printed="exp(i beta xi t^4) with xi already containing beta",
        implemented="xi_tilde without beta; a single explicit beta in the phase increment",
    ),
    Finding(
        location="round-trip elimination condition",
        printed="hbar / 4 m nu (t_p dk Omega1 Omega2 / Delta)^4 = 2 pi m",
        implemented="condition applied to the exponent-2 ordinary phase",
    ),
    Finding(
        location="parameter set",
        printed="Omega1 = Omega2 = 2 GMz",
        implemented="2e9 rad/s",
    ),
]


def _constants_from_table(name: str, table: dict[str, str]) -> PhysicalConstants:
    return PhysicalConstants(name=name, **{key: float(value) for key, value in table.items()})


def pinned_constants() -> PhysicalConstants:
    """Return the CODATA 2018 constants used by every report."""
    return _constants_from_table("CODATA 2018", CODATA_2018)


def natural_constants() -> PhysicalConstants:
    """hbar = c = M_p = u = 1; with these, beta equals beta0."""
    return PhysicalConstants(name="natural", hbar=1.0, c=1.0, planck_mass=1.0, atomic_mass_unit=1.0)


def angular(freq_over_2pi: float) -> float:
    """Convert a cyclic frequency (Hz) to angular frequency (rad/s)."""
    return 2 * math.pi * freq_over_2pi


def mass_from_u(mass_u: float, constants: PhysicalConstants) -> float:
    if mass_u <= 0:
        raise InvalidParameterError(f"mass must be positive, got {mass_u} u")
    return mass_u * constants.atomic_mass_unit


def oscillator_scales(mass: float, trap_freq: float, constants: PhysicalConstants) -> OscillatorScales:
    """
    Ground-state scales of the trap mode.

    Args:
        mass: Oscillator mass, kg
        trap_freq: Trap angular frequency, rad/s
        constants: Constant table (pinned or natural)

    Returns:
        Scales with x0 = sqrt(hbar / 2 m nu) and p0 = sqrt(hbar m nu / 2)

    Raises:
        InvalidParameterError: If mass or frequency is not positive
    """
    if not mass > 0:
        raise InvalidParameterError(f"mass must be positive, got {mass}")
    if not trap_freq > 0:
        raise InvalidParameterError(f"trap frequency must be positive, got {trap_freq}")
    hbar = constants.hbar
    return OscillatorScales(
        x0=math.sqrt(hbar / (2 * mass * trap_freq)),
        p0=math.sqrt(hbar * mass * trap_freq / 2),
        mass=mass,
        trap_freq=trap_freq,
        hbar=hbar,
    )


def decimal_mpf(x: float | int | str) -> mpmath.mpf:
    """Parse a number through its shortest decimal form at the current working precision."""
    if isinstance(x, float):
        return mpmath.mpf(repr(x))
    return mpmath.mpf(x)


def big_angle(value: Any, precision_bits: int | None = None) -> BigAngle:
    bits = precision_bits or settings.precision_bits
    with mpmath.workprec(bits):
        return BigAngle(value=+mpmath.mpf(value), precision_bits=bits)


def wrap_error_bound(value: mpmath.mpf, precision_bits: int) -> mpmath.mpf:
    """2^(1 - bits) * |value|: the reduction error of a value held at that precision."""
    with mpmath.workprec(precision_bits):
        return mpmath.ldexp(1, 1 - precision_bits) * abs(value)


def wrap_phase(angle: BigAngle, *, error_limit: float | None = None) -> WrappedPhase:
    """
    Reduce an extended-precision angle to (-pi, pi].

    Args:
        angle: Angle held at ``angle.precision_bits``
        error_limit: Largest acceptable error bound, defaults to ``settings.wrap_error_limit``

    Returns:
        Wrapped angle and the absolute error bound of the reduction

    Raises:
        PrecisionError: If the error bound exceeds the limit
    """
    limit = settings.wrap_error_limit if error_limit is None else error_limit
    bits = angle.precision_bits
    with mpmath.workprec(bits):
        value = +angle.value
        pi = +mpmath.pi
        two_pi = 2 * pi
        turns = mpmath.nint(value / two_pi)
        wrapped = value - turns * two_pi
        if wrapped <= -pi:
            wrapped += two_pi
        elif wrapped > pi:
            wrapped -= two_pi

        bound = wrap_error_bound(value, bits)
        # values within rounding of the branch cut belong to +pi
        slack = 4 * mpmath.ldexp(1, 1 - bits) * max(abs(value), mpmath.mpf(1))
        if abs(wrapped + pi) <= slack or abs(wrapped - pi) <= slack:
            wrapped = pi

    if bound > limit:
        raise PrecisionError(bound, bits)
    logger.debug("wrapped %s turns at %d bits, error bound %.3e", mpmath.nstr(turns, 20), bits, float(bound))
    return WrappedPhase(wrapped=float(wrapped), error_bound=float(bound), precision_bits=bits)


def conventions_block(constants: PhysicalConstants, precision_bits: int | None = None) -> dict[str, Any]:
    """Constants and conventions embedded in every report."""
    return {
        "constants": {
            "table": constants.name,
            "hbar": repr(constants.hbar),
            "c": repr(constants.c),
            "planck_mass": repr(constants.planck_mass),
            "atomic_mass_unit": repr(constants.atomic_mass_unit),
        },
        "frequency_convention": FREQUENCY_CONVENTION,
        "wrap_convention": WRAP_CONVENTION,
        "precision_bits": precision_bits or settings.precision_bits,
        "corrections": [finding.model_dump() for finding in CORRECTIONS],
    }
