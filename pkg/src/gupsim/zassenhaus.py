"""
Zassenhaus factorization of the deformed displacement: e^{A+B} = e^A e^B e^{C1} e^{C2} e^{C3} ...

A is the beta-free displacement generator and B the cubic beta term. The closed forms below
keep only first order in B; higher terms carry B twice and are O(beta^2).
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import stats

from gupsim.exceptions import DimensionMismatchError, InvalidParameterError
from gupsim.fock import FockOperator, commutator, expm_generator, interior_cutoff, ladder, matrix_norm
from gupsim.models import GapSweep, GupParams, LaserConfig, LeadingOrderGap, OscillatorScales, TermComparison

logger = logging.getLogger(__name__)

MAX_ORDER: int = 3
TERM_NAMES: tuple[str, ...] = ("C1", "C2", "C3")


class SplitGenerators(BaseModel):
    """Beta-free and beta-proportional generators of one deformed displacement."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    A: FockOperator
    B: FockOperator
    order: int = MAX_ORDER


def displacement_scale(laser: LaserConfig, scales: OscillatorScales, t: float) -> float:
    """K = hbar t dk Omega1 Omega2 / Delta."""
    if laser.detuning == 0:
        raise InvalidParameterError("detuning must be non-zero")
    return scales.hbar * t * laser.delta_k * laser.rabi[0] * laser.rabi[1] / laser.detuning


def split_generators(
    laser: LaserConfig, gup: GupParams, scales: OscillatorScales, t: float, dim: int
) -> SplitGenerators:
    """
    Generators of the pulse-1 propagator in ladder form.

    A = -(K x0 / 2 hbar)(a - a^dag) and B = (beta K p0 / 12) M with
    M = 2(a - a^dag)^3 + i pi (a + a^dag)^3 + (4 - i pi) a^dag^3 - (4 + i pi) a^3.
    """
    k = displacement_scale(laser, scales, t)
    a, adag = ladder(dim)
    am, ad = a.entries, adag.entries
    minus = am - ad
    plus = am + ad
    m = (
        2 * (minus @ minus @ minus)
        + 1j * math.pi * (plus @ plus @ plus)
        + (4 - 1j * math.pi) * (ad @ ad @ ad)
        - (4 + 1j * math.pi) * (am @ am @ am)
    )
    big_a = FockOperator(-(k * scales.x0 / (2 * scales.hbar)) * minus, scales)
    big_b = FockOperator(gup.beta * k * scales.p0 / 12 * m, scales)
    return SplitGenerators(A=big_a, B=big_b)


def zassenhaus_terms(
    A: FockOperator, B: FockOperator, order: int = MAX_ORDER, *, linear_in_b: bool = False
) -> list[FockOperator]:
    """
    Nested-commutator terms C1..C_order.

    Args:
        A: First generator
        B: Second generator
        order: Highest term, at most 3
        linear_in_b: Drop the contributions with two or more factors of B

    Returns:
        [C1, C2, C3][:order]

    Raises:
        DimensionMismatchError: If A and B have different dimensions
    """
    if A.dim != B.dim:
        raise DimensionMismatchError(A.dim, B.dim)
    if not 1 <= order <= MAX_ORDER:
        raise InvalidParameterError(f"Zassenhaus order must be 1..{MAX_ORDER}, got {order}")

    ab = commutator(A, B)
    a_ab = commutator(A, ab)
    a_a_ab = commutator(A, a_ab)

    c1 = -0.5 * ab
    c2 = a_ab / 6
    c3 = -a_a_ab / 24
    if not linear_in_b:
        c2 = c2 + commutator(B, ab) / 3
        c3 = c3 - (commutator(B, a_ab) + commutator(B, commutator(B, ab))) / 8
    return [c1, c2, c3][:order]


def c_terms_closed_form(
    laser: LaserConfig, gup: GupParams, scales: OscillatorScales, t: float, dim: int
) -> list[FockOperator]:
    """C1, C2, C3 from their ladder-operator closed forms; C3 is a multiple of the identity."""
    k = displacement_scale(laser, scales, t)
    beta = gup.beta
    hbar, m_nu = scales.hbar, scales.mass * scales.trap_freq
    a, adag = ladder(dim)
    am, ad = a.entries, adag.entries
    pi = math.pi

    c1 = (
        1j
        * beta
        * k**2
        / 32
        * (2 * pi * np.eye(dim) + (4j + pi) * (am @ am) + 4 * pi * (ad @ am) + (-4j + pi) * (ad @ ad))
    )
    c2 = 1j * beta * k**3 / 96 * math.sqrt(1 / (2 * hbar * m_nu)) * ((4j + 3 * pi) * am + (-4j + 3 * pi) * ad)
    c3 = 1j * beta * pi * k**4 / (256 * hbar * m_nu) * np.eye(dim)
    return [FockOperator(c, scales) for c in (c1, c2, c3)]


def compare_terms(
    closed: list[FockOperator], generic: list[FockOperator], n_max: int | None = None
) -> list[TermComparison]:
    """Least-squares factor between each closed-form term and its nested-commutator counterpart."""
    comparisons = []
    for name, c, g in zip(TERM_NAMES, closed, generic, strict=False):
        n = interior_cutoff(c.dim) if n_max is None else n_max
        cv, gv = c.interior(n).ravel(), g.interior(n).ravel()
        denom = np.vdot(cv, cv)
        ratio = complex(np.vdot(cv, gv) / denom) if denom != 0 else complex("nan")
        g_norm = np.linalg.norm(gv)
        residual = float(np.linalg.norm(gv - ratio * cv) / g_norm) if g_norm > 0 else 0.0
        comparisons.append(
            TermComparison(term=name, ratio_re=ratio.real, ratio_im=ratio.imag, relative_residual=residual)
        )
    return comparisons


def product_residual(split: SplitGenerators, n_max: int | None = None) -> float:
    """||e^{A+B} - e^A e^B e^{C1} e^{C2} e^{C3}|| restricted to phonon numbers <= n_max."""
    A, B = split.A, split.B
    n_max = interior_cutoff(A.dim) if n_max is None else n_max
    exact = expm_generator(A + B).entries
    product = expm_generator(A).entries @ expm_generator(B).entries
    for c in zassenhaus_terms(A, B, split.order):
        product = product @ expm_generator(c).entries
    return matrix_norm((exact - product)[: n_max + 1, : n_max + 1])


def leading_order_gap(
    laser: LaserConfig, gup: GupParams, scales: OscillatorScales, t: float, dim: int, n_max: int | None = None
) -> LeadingOrderGap:
    """
    Size of the operator terms C1, C2 against the scalar C3.

    All three terms carry beta and a power of t, so at t = 0 or beta = 0 they vanish together
    and both ratios are reported as 0.
    """
    c1, c2, c3 = c_terms_closed_form(laser, gup, scales, t, dim)
    n = interior_cutoff(dim) if n_max is None else n_max
    scalar = abs(c3.entries[0, 0])
    c1_norm, c2_norm = matrix_norm(c1.interior(n)), matrix_norm(c2.interior(n))
    kappa = displacement_scale(laser, scales, t) * scales.x0 / scales.hbar
    return LeadingOrderGap(
        kappa=kappa,
        c1_norm=c1_norm,
        c2_norm=c2_norm,
        c3_norm=scalar,
        c1_over_c3=c1_norm / scalar if scalar > 0 else 0.0,
        c2_over_c3=c2_norm / scalar if scalar > 0 else 0.0,
    )


def gap_sweep(
    laser: LaserConfig,
    gup: GupParams,
    scales: OscillatorScales,
    kappas: list[float],
    dim: int,
    n_max: int | None = None,
) -> GapSweep:
    """Evaluate the gap at each kappa and fit log-log exponents."""
    if len(kappas) < 2:
        raise InvalidParameterError("a gap sweep needs at least two kappa values")
    unit_scale = displacement_scale(laser, scales, 1.0) * scales.x0 / scales.hbar
    if gup.beta == 0 or any(kappa <= 0 for kappa in kappas):
        raise InvalidParameterError("a gap sweep needs beta > 0 and positive kappa values")
    points = [leading_order_gap(laser, gup, scales, kappa / unit_scale, dim, n_max) for kappa in kappas]

    log_k = np.log([p.kappa for p in points])
    c1_fit = stats.linregress(log_k, np.log([p.c1_over_c3 for p in points]))
    c2_fit = stats.linregress(log_k, np.log([p.c2_over_c3 for p in points]))
    logger.info("gap exponents: C1 %.3f, C2 %.3f", c1_fit.slope, c2_fit.slope)
    return GapSweep(points=points, c1_exponent=float(c1_fit.slope), c2_exponent=float(c2_fit.slope))
