"""
Deformed oscillator: beta conversion, deformed momentum and Hamiltonian, and the Heisenberg
position operator to first order in beta, both in closed form and by direct conjugation.
"""

import cmath
import logging
import math

import numpy as np

from gupsim.exceptions import InvalidParameterError
from gupsim.fock import FockOperator, converged_operator, expm_generator, ladder, quadratures
from gupsim.models import GupParams, OscillatorScales, PhysicalConstants

logger = logging.getLogger(__name__)

MONOMIALS: tuple[str, ...] = ("a", "adag", "a3", "adag_a2", "adag2_a", "adag3")


def beta_from_beta0(beta0: float, constants: PhysicalConstants) -> float:
    """beta = beta0 / (M_p c)^2."""
    if beta0 < 0:
        raise InvalidParameterError(f"beta0 must be non-negative, got {beta0}")
    return beta0 / (constants.planck_mass * constants.c) ** 2


def gup_params(beta0: float, mass: float, trap_freq: float, constants: PhysicalConstants) -> GupParams:
    return GupParams(beta0=beta0, beta=beta_from_beta0(beta0, constants), mass=mass, trap_freq=trap_freq)


def deformed_momentum(p: FockOperator, beta: float) -> FockOperator:
    """p_hat = p (1 + beta p^2 / 3)."""
    m = p.entries
    return FockOperator(m + (beta / 3) * (m @ m @ m), p.scale, hermitian=True)


def deformed_h0(params: GupParams, scales: OscillatorScales, dim: int) -> FockOperator:
    """p^2 / 2m + m nu^2 x^2 / 2 + beta p^4 / 3m on the truncated basis."""
    x, p = quadratures(dim, scales)
    m, nu = params.mass, params.trap_freq
    p2 = p.entries @ p.entries
    h = p2 / (2 * m) + m * nu**2 * (x.entries @ x.entries) / 2 + params.beta * (p2 @ p2) / (3 * m)
    return FockOperator(h, scales, hermitian=True)


def heisenberg_coefficients(
    t: float, params: GupParams, scales: OscillatorScales
) -> tuple[dict[str, complex], dict[str, complex]]:
    """
    Normal-ordered coefficients of x(t) = e^{iH0 t/hbar} x e^{-iH0 t/hbar} to first order in beta.

    Returns:
        (harmonic, first_order) dicts keyed by MONOMIALS; harmonic has only "a" and "adag"
    """
    theta = params.trap_freq * t
    hbar = scales.hbar

    def e(k: int) -> complex:
        return cmath.exp(1j * k * theta)

    harmonic = {"a": scales.x0 * e(-1), "adag": scales.x0 * e(1)}

    # transcribed term by term; omega == nu, theta = nu t
    pref = params.beta * e(-3) / 12 * math.sqrt(hbar**3 * params.mass * params.trap_freq / 2)
    s = math.sin(theta)
    first_order = {
        # -6 e^{2i nu t} (-1 + e^{2i nu t} + 2i t nu) a
        "a": pref * (-6 * e(2) * (-1 + e(2) + 2j * theta)),
        # 12i e^{3i nu t} (e^{i nu t} t nu + sin nu t) a^dag
        "adag": pref * (12j * e(3) * (e(1) * theta + s)),
        # (2 e^{2i nu t} - 3 + e^{4i nu t}) a^3
        "a3": pref * (2 * e(2) - 3 + e(4)),
        # -(12i e^{2i nu t} t nu + 12i e^{3i nu t} sin nu t) a^dag a^2
        "adag_a2": pref * -(12j * e(2) * theta + 12j * e(3) * s),
        # (12i e^{4i nu t} t nu + 12i e^{3i nu t} sin nu t) a^dag^2 a
        "adag2_a": pref * (12j * e(4) * theta + 12j * e(3) * s),
        # (e^{2i nu t} + 2 e^{4i nu t} - 3 e^{6i nu t}) a^dag^3
        "adag3": pref * (e(2) + 2 * e(4) - 3 * e(6)),
    }
    return harmonic, first_order


def _monomial_matrices(dim: int) -> dict[str, np.ndarray]:
    a, adag = ladder(dim)
    am, ad = a.entries, adag.entries
    return {
        "a": am,
        "adag": ad,
        "a3": am @ am @ am,
        "adag_a2": ad @ am @ am,
        "adag2_a": ad @ ad @ am,
        "adag3": ad @ ad @ ad,
    }


def _monomial_values(z: complex) -> dict[str, complex]:
    zc = z.conjugate()
    return {"a": z, "adag": zc, "a3": z**3, "adag_a2": zc * z * z, "adag2_a": zc * zc * z, "adag3": zc**3}


def x_heisenberg_analytic(t: float, params: GupParams, scales: OscillatorScales, dim: int) -> FockOperator:
    """Closed-form first-order x(t); reduces to x0 (a e^{-i nu t} + a^dag e^{i nu t}) at beta = 0."""
    harmonic, first_order = heisenberg_coefficients(t, params, scales)
    mats = _monomial_matrices(dim)
    entries = np.zeros((dim, dim), dtype=np.complex128)
    for key, coeff in harmonic.items():
        entries += coeff * mats[key]
    if params.beta != 0:
        for key, coeff in first_order.items():
            entries += coeff * mats[key]
    return FockOperator(entries, scales)


def x_heisenberg_symbol(
    t: float, params: GupParams, scales: OscillatorScales, z: complex, *, beta_only: bool = False
) -> float:
    """
    Coherent-state expectation <z| x(t) |z> of the first-order operator.

    Normal ordering lets a -> z and a^dag -> conj(z) directly.
    """
    harmonic, first_order = heisenberg_coefficients(t, params, scales)
    values = _monomial_values(complex(z))
    total = sum(coeff * values[key] for key, coeff in first_order.items())
    if not beta_only:
        total += sum(coeff * values[key] for key, coeff in harmonic.items())
    return float(total.real)


def x_heisenberg_numeric(
    t: float,
    params: GupParams,
    scales: OscillatorScales,
    dim: int,
    *,
    converge: bool = False,
    n_max: int | None = None,
) -> FockOperator:
    """
    Conjugate x(0) with the numerically exponentiated deformed Hamiltonian.

    Args:
        t: Evolution time
        params: Deformation and oscillator
        scales: Oscillator scales
        dim: Truncation dimension, or the first one tried with ``converge``
        converge: Double D until the block on phonon numbers <= n_max is stable
        n_max: Block checked for convergence, defaults to the interior cutoff of ``dim``

    Raises:
        TruncationError: If the block does not settle below ``settings.max_dim``
    """
    if converge:
        return converged_operator(lambda d: x_heisenberg_numeric(t, params, scales, d), dim, n_max)
    x, _ = quadratures(dim, scales)
    h0 = deformed_h0(params, scales, dim)
    u = expm_generator(FockOperator(-1j * h0.entries * t / scales.hbar, scales))
    logger.debug("numeric Heisenberg x at nu t = %.3f, D=%d", params.trap_freq * t, dim)
    return FockOperator(u.entries.conj().T @ x.entries @ u.entries, scales)
