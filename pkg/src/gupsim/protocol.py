"""
Four-pulse interaction schedule.

Pulse i fires at t_i = i * pi / (2 nu). In the Lamb-Dicke regime its effective Hamiltonian is
2 Omega_eff dk x(t_i) sin(nu t_i - dphi_i), which for the quarter-turn phase settings reduces
to -cos, +sin, +cos, -sin for i mod 4 = 0, 1, 2, 3. The ion stays in |g> and every Hamiltonian
is proportional to |g><g|, so only the motional space is evolved.
"""

import cmath
import logging
import math

import mpmath
import numpy as np

from gupsim.config import settings
from gupsim.exceptions import InvalidParameterError, PhysicsCheckError, ScheduleError
from gupsim.fock import (
    FockOperator,
    UnitaryOperator,
    coherent_state,
    converge_dimension,
    converged_operator,
    expm_generator,
    identity,
    interior_cutoff,
    matrix_norm,
    quadratures,
)
from gupsim.gup import deformed_h0, x_heisenberg_analytic, x_heisenberg_symbol
from gupsim.models import (
    DetuningReport,
    DriftReport,
    EliminationReport,
    GupParams,
    LaserConfig,
    OscillatorScales,
    PhaseInputs,
    PhaseResult,
    PropagatorTerm,
    PulsePlan,
    SimulateReport,
)
from gupsim.models.plan import QUARTER_TURN_SETTINGS
from gupsim.units import big_angle, decimal_mpf, natural_constants, oscillator_scales, wrap_phase

logger = logging.getLogger(__name__)

PULSE_SIGNS: dict[int, int] = {0: -1, 1: 1, 2: -1, 3: 1}
PULSE_TRIG: dict[int, str] = {0: "-cos", 1: "+sin", 2: "+cos", 3: "-sin"}
GENERATOR_LABELS: dict[int, str] = {0: "+x", 1: "-p", 2: "-x", 3: "+p"}
LISTED_INCREMENTS: int = 16
GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(4)


def phase_settings(index: int) -> tuple[float, float]:
    """(phi1 - phi2, phi4 - phi3) for pulse ``index``; depends only on index mod 4."""
    if index < 0:
        raise InvalidParameterError(f"pulse index must be non-negative, got {index}")
    return QUARTER_TURN_SETTINGS[index % 4]


def pulse_sign(index: int) -> int:
    """sin(nu t_i - dphi_i) for the quarter-turn schedule."""
    return PULSE_SIGNS[index % 4]


def pulse_time(index: int, trap_freq: float) -> float:
    return index * math.pi / (2 * trap_freq)


def check_pulse_time(index: int, t_i: float, trap_freq: float) -> None:
    expected = index * math.pi / 2
    if abs(t_i * trap_freq - expected) > 1e-9 * max(1.0, expected):
        raise ScheduleError(f"pulse {index} must fire at nu t = {expected:.12g}, got {t_i * trap_freq:.12g}")


def eta(laser: LaserConfig) -> float:
    """dk Omega1 Omega2 / (2 Delta)."""
    if laser.detuning == 0:
        raise InvalidParameterError("detuning must be non-zero")
    omega1, omega2 = laser.rabi[0], laser.rabi[1]
    return laser.delta_k * omega1 * omega2 / (2 * laser.detuning)


def xi_tilde(laser: LaserConfig, scales: OscillatorScales) -> float:
    """hbar^3 pi / (256 m nu) (dk Omega1 Omega2 / Delta)^4, without the beta factor."""
    return scales.hbar**3 * math.pi / (256 * scales.mass * scales.trap_freq) * (2 * eta(laser)) ** 4


def effective_rabi(laser: LaserConfig, scales: OscillatorScales, *, simplified: bool = False) -> float:
    """hbar Omega1 Omega2 (Delta1 + Delta2) / (8 Delta1 Delta2) with Delta1 = Delta and Delta2 = Delta + nu."""
    omega1, omega2 = laser.rabi[0], laser.rabi[1]
    delta1 = laser.detuning
    delta2 = laser.detuning if simplified else laser.detuning + scales.trap_freq
    if delta1 == 0 or delta2 == 0:
        raise InvalidParameterError("detunings must be non-zero")
    return scales.hbar * omega1 * omega2 * (delta1 + delta2) / (8 * delta1 * delta2)


def detuning_report(laser: LaserConfig, scales: OscillatorScales) -> DetuningReport:
    exact = effective_rabi(laser, scales)
    simplified = effective_rabi(laser, scales, simplified=True)
    return DetuningReport(exact=exact, simplified=simplified, relative_difference=(simplified - exact) / exact)


def effective_hamiltonian(
    index: int,
    t_i: float,
    x_op: FockOperator,
    laser: LaserConfig,
    *,
    lamb_dicke: bool = True,
    simplified: bool = False,
    scales: OscillatorScales | None = None,
) -> FockOperator:
    """
    Effective Hamiltonian of pulse ``index`` on the motional space of |g>.

    Args:
        index: Global pulse index
        t_i: Pulse time, must equal index * pi / (2 nu)
        x_op: Position operator x(t_i), frozen for the pulse
        laser: Beam configuration
        lamb_dicke: Linearize exp(i k x) in k x
        simplified: Use Delta1 = Delta2 = Delta in the effective Rabi rate
        scales: Oscillator scales, defaults to the scale the operator carries

    Raises:
        ScheduleError: If t_i is not the scheduled time of the pulse
    """
    scales = scales or x_op.scale
    if scales is None:
        raise InvalidParameterError("effective Hamiltonian needs oscillator scales")
    check_pulse_time(index, t_i, scales.trap_freq)
    rabi = effective_rabi(laser, scales, simplified=simplified)

    if lamb_dicke:
        return FockOperator(2 * rabi * laser.delta_k * pulse_sign(index) * x_op.entries, scales)

    x_sym = FockOperator((x_op.entries + x_op.entries.conj().T) / 2, scales)
    k1, k2, k3, k4 = laser.wavevector_projections
    dphi12, dphi43 = phase_settings(index)
    e12 = expm_generator(1j * (k1 - k2) * x_sym).entries
    e43 = expm_generator(1j * (k4 - k3) * x_sym).entries
    bracket = (-cmath.exp(1j * dphi12) * e12 + cmath.exp(1j * dphi43) * e43) * cmath.exp(
        -1j * scales.trap_freq * t_i
    )
    return FockOperator(rabi * (bracket + bracket.conj().T), scales)


def propagator_analytic(index: int, laser: LaserConfig, gup: GupParams, scales: OscillatorScales) -> PropagatorTerm:
    """Displacement generator of pulse ``index`` with its arithmetic-progression beta phase."""
    if index < 0:
        raise InvalidParameterError(f"pulse index must be non-negative, got {index}")
    strength = eta(laser) * laser.pulse_duration
    if index % 2 == 1:
        strength /= scales.mass * scales.trap_freq
    return PropagatorTerm(
        index=index,
        generator_label=GENERATOR_LABELS[index % 4],
        displacement_strength=strength,
        beta_phase_increment=index * gup.beta * xi_tilde(laser, scales) * laser.pulse_duration**4,
    )


def propagator_numeric(
    index: int,
    plan: PulsePlan,
    scales: OscillatorScales,
    dim: int,
    *,
    converge: bool = False,
    n_max: int | None = None,
) -> FockOperator:
    """
    exp(-i H_eff(t_i) t_p / hbar) with x(t_i) from the first-order Heisenberg operator.

    With ``converge`` D is doubled from ``dim`` until the block on phonon numbers <= n_max is
    stable and the accepted propagator is cut back to ``dim``; the cut block is not unitary.

    Raises:
        TruncationError: If the block does not settle below ``settings.max_dim``
    """
    if converge:
        return converged_operator(lambda d: propagator_numeric(index, plan, scales, d), dim, n_max)
    t_i = pulse_time(index, scales.trap_freq)
    x_op = x_heisenberg_analytic(t_i, plan.gup, scales, dim)
    h = effective_hamiltonian(
        index, t_i, x_op, plan.laser, lamb_dicke=plan.lamb_dicke, simplified=plan.simplified_detuning, scales=scales
    )
    return expm_generator(FockOperator(-1j * h.entries * plan.laser.pulse_duration / scales.hbar, scales))


def run_unitary(plan: PulsePlan, scales: OscillatorScales, dim: int, *, start: int = 0) -> UnitaryOperator:
    """Ordered product U_{4N-1} ... U_{start} over the plan's schedule."""
    total = UnitaryOperator(np.eye(dim), scales)
    for pulse in plan.iter_schedule():
        if pulse.index < start:
            continue
        total = propagator_numeric(pulse.index, plan, scales, dim) @ total
    return total


def numeric_cycle_phase(plan: PulsePlan, scales: OscillatorScales) -> float:
    """-hbar G^2 / (m nu) with G = 2 Omega_eff dk t_p / hbar, matching the numeric generators."""
    g = 2 * effective_rabi(plan.laser, scales, simplified=plan.simplified_detuning) * plan.laser.delta_k
    g *= plan.laser.pulse_duration / scales.hbar
    return -scales.hbar * g**2 / (scales.mass * scales.trap_freq)


def loop_closure_defect(plan: PulsePlan, scales: OscillatorScales, dim: int, n_max: int | None = None) -> float:
    """||U3 U2 U1 U0 - e^{i phi0_cycle} 1|| on phonon numbers <= n_max."""
    n_max = interior_cutoff(dim) if n_max is None else n_max
    one_cycle = plan.model_copy(update={"cycles": 1})
    u = run_unitary(one_cycle, scales, dim)
    target = cmath.exp(1j * numeric_cycle_phase(plan, scales)) * identity(dim).entries
    return matrix_norm((u.entries - target)[: n_max + 1, : n_max + 1])


def beta_overlap(plan: PulsePlan, scales: OscillatorScales, dim: int, alpha: complex = 0) -> complex:
    """<alpha| U_run |alpha> e^{-i N phi0_cycle}."""
    psi = coherent_state(alpha, dim)
    u = run_unitary(plan, scales, dim)
    overlap = np.vdot(psi, u.entries @ psi)
    return complex(overlap * cmath.exp(-1j * plan.cycles * numeric_cycle_phase(plan, scales)))


def numeric_beta_phase(plan: PulsePlan, scales: OscillatorScales, dim: int, alpha: complex = 0) -> float:
    """arg <alpha| U_run |alpha> with the ordinary phase N phi0_cycle removed."""
    return float(np.angle(beta_overlap(plan, scales, dim, alpha)))


def converged_beta_phase(
    plan: PulsePlan, scales: OscillatorScales, start_dim: int | None = None, alpha: complex = 0
) -> tuple[int, float]:
    """
    Numeric beta phase at the first D whose overlap agrees with the one at 2D.

    Returns:
        (accepted D, phase)

    Raises:
        TruncationError: If the overlap does not settle below ``settings.max_dim``
    """
    dim, overlap = converge_dimension(lambda d: beta_overlap(plan, scales, d, alpha), start_dim)
    return dim, float(np.angle(overlap))


def trajectory_beta_phase(plan: PulsePlan, scales: OscillatorScales, alpha: complex = 0) -> float:
    """
    First-order-in-beta phase of a coherent input, integrated along its displacement path.

    Each pulse exp(-i g (x + beta y)) expands as e^{-i g x} (1 - i g int_0^1 e^{i s g x} y e^{-i s g x} ds).
    Conjugation by e^{i s g x} shifts a by -i s g x0 e^{i nu t_i}, so the expectation is the
    normal-ordered symbol of y along the path; the integrand is cubic in s and Gauss-Legendre is exact.
    """
    rabi = effective_rabi(plan.laser, scales, simplified=plan.simplified_detuning)
    base = 2 * rabi * plan.laser.delta_k * plan.laser.pulse_duration / scales.hbar
    z = complex(alpha)
    phase = 0.0
    for pulse in plan.iter_schedule():
        t_i = pulse.time(scales.trap_freq)
        theta = scales.trap_freq * t_i
        g = base * pulse_sign(pulse.index)
        step = -1j * g * scales.x0 * cmath.exp(1j * theta)
        integral = 0.0
        for node, weight in zip(GAUSS_NODES, GAUSS_WEIGHTS, strict=True):
            s = (node + 1) / 2
            integral += weight / 2 * x_heisenberg_symbol(t_i, plan.gup, scales, z + s * step, beta_only=True)
        phase -= g * integral
        z += step
    return phase


def phase_inputs(plan: PulsePlan, scales: OscillatorScales, precision_bits: int | None = None) -> PhaseInputs:
    """Lift the plan's double-precision inputs to extended precision through their decimal form."""
    bits = precision_bits or settings.precision_bits
    with mpmath.workprec(bits):
        return PhaseInputs(
            hbar=decimal_mpf(scales.hbar),
            mass=decimal_mpf(plan.gup.mass),
            trap_freq=decimal_mpf(plan.gup.trap_freq),
            pulse_duration=decimal_mpf(plan.laser.pulse_duration),
            omega1=decimal_mpf(plan.laser.rabi[0]),
            omega2=decimal_mpf(plan.laser.rabi[1]),
            detuning=decimal_mpf(plan.laser.detuning),
            delta_k=decimal_mpf(plan.laser.delta_k),
            beta=decimal_mpf(plan.gup.beta),
            precision_bits=bits,
        )


def cycle_phase(inputs: PhaseInputs) -> tuple[mpmath.mpf, mpmath.mpf]:
    """
    Ordinary phase of one round trip and the per-pulse beta step d.

    Returns:
        (phi0_cycle, d) with phi0_cycle = -(hbar / 4 m nu) X^2, d = beta hbar^3 pi X^4 / (256 m nu),
        X = t_p dk Omega1 Omega2 / Delta
    """
    with mpmath.workprec(inputs.precision_bits):
        if inputs.detuning == 0:
            raise InvalidParameterError("detuning must be non-zero")
        big_x = inputs.pulse_duration * inputs.delta_k * inputs.omega1 * inputs.omega2 / inputs.detuning
        m_nu = inputs.mass * inputs.trap_freq
        phi0_cycle = -inputs.hbar / (4 * m_nu) * big_x**2

        eta_mp = inputs.delta_k * inputs.omega1 * inputs.omega2 / (2 * inputs.detuning)
        via_eta = -inputs.hbar * eta_mp**2 * inputs.pulse_duration**2 / m_nu
        if not mpmath.almosteq(phi0_cycle, via_eta, rel_eps=mpmath.ldexp(1, 8 - inputs.precision_bits)):
            raise PhysicsCheckError("cycle phase identity", float(via_eta), float(phi0_cycle))

        d = inputs.beta * inputs.hbar**3 * mpmath.pi / (256 * m_nu) * big_x**4
    return phi0_cycle, d


def progression_sum(count: int) -> int:
    """0 + 1 + ... + (count - 1) in integer arithmetic."""
    return count * (count - 1) // 2


def total_phase(
    plan: PulsePlan,
    scales: OscillatorScales,
    *,
    inputs: PhaseInputs | None = None,
    precision_bits: int | None = None,
    conventions: dict | None = None,
) -> PhaseResult:
    """
    Closed-form phases after N cycles.

    phi0 = N phi0_cycle and dphi = d * sum_{i < 4N} i = 2N(4N - 1) d, both kept unwrapped at the
    working precision and then reduced to (-pi, pi].

    Raises:
        PrecisionError: If a reduction exceeds the error limit
    """
    inputs = inputs or phase_inputs(plan, scales, precision_bits)
    bits = inputs.precision_bits
    n = plan.cycles
    phi0_cycle, d = cycle_phase(inputs)

    steps = progression_sum(4 * n)
    if steps != 2 * n * (4 * n - 1):
        raise PhysicsCheckError("arithmetic progression", steps, 2 * n * (4 * n - 1))

    with mpmath.workprec(bits):
        phi0 = big_angle(n * phi0_cycle, bits)
        dphi = big_angle(steps * d, bits)
        phi = big_angle(phi0.value + dphi.value, bits)
        listed = min(4 * n, LISTED_INCREMENTS)
        increments = [float(i * d) for i in range(listed)]

    wrapped0, wrapped_d, wrapped = wrap_phase(phi0), wrap_phase(dphi), wrap_phase(phi)
    logger.info(
        "phases after %d cycles: phi0 %.6f, dphi %.6f, phi %.6f",
        n,
        wrapped0.wrapped,
        wrapped_d.wrapped,
        wrapped.wrapped,
    )
    return PhaseResult(
        cycles=n,
        phi0_unwrapped=phi0,
        dphi_unwrapped=dphi,
        phi0_wrapped=wrapped0.wrapped,
        dphi_wrapped=wrapped_d.wrapped,
        phi_wrapped=wrapped.wrapped,
        wrap_error_bound=max(wrapped0.error_bound, wrapped_d.error_bound, wrapped.error_bound),
        beta_tolerance_d=d,
        per_pulse_beta_increments=increments,
        increments_truncated=4 * n > listed,
        eta=eta(plan.laser),
        xi_tilde=xi_tilde(plan.laser, scales),
        simplified_detuning=True,
        conventions=conventions or {},
    )


def elimination_condition(inputs: PhaseInputs) -> EliminationReport:
    """Distance of phi0_cycle from a multiple of 2 pi (exponent-2 reading of the round-trip condition)."""
    phi0_cycle, _ = cycle_phase(inputs)
    with mpmath.workprec(inputs.precision_bits):
        turns = phi0_cycle / (2 * mpmath.pi)
        m = int(mpmath.nint(turns))
        residual = phi0_cycle - 2 * mpmath.pi * m
    return EliminationReport(
        cycles_per_turn=float(turns),
        nearest_integer=m,
        residual=float(residual),
        note="applied to (t_p dk Omega1 Omega2 / Delta)^2; the printed condition uses exponent 4",
    )


def kappa(laser: LaserConfig, scales: OscillatorScales) -> float:
    """X sqrt(hbar / 2 m nu) with X = t_p dk Omega1 Omega2 / Delta."""
    return 2 * eta(laser) * laser.pulse_duration * scales.x0


def pulse_freeze_drift(plan: PulsePlan, scales: OscillatorScales, dim: int) -> DriftReport:
    """Size of the harmonic motion neglected by freezing x(t_i) over one pulse."""
    n_max = interior_cutoff(dim)
    x, _ = quadratures(dim, scales)
    h0 = deformed_h0(plan.gup, scales, dim).entries
    comm = h0 @ x.entries - x.entries @ h0
    scale = (
        plan.laser.pulse_duration
        * matrix_norm(comm[: n_max + 1, : n_max + 1])
        / (scales.hbar * matrix_norm(x.entries[: n_max + 1, : n_max + 1]))
    )
    threshold = settings.pulse_drift_warn
    nu_tp = scales.trap_freq * plan.laser.pulse_duration
    if scale > threshold:
        logger.warning("pulse-freeze drift %.3g exceeds %.3g (nu t_p = %.3g)", scale, threshold, nu_tp)
    return DriftReport(nu_tp=nu_tp, commutator_scale=scale, threshold=threshold, exceeds=scale > threshold)


def check_pulse_duration(plan: PulsePlan) -> float:
    """nu t_p of the plan; warns when it is above ``settings.nu_tp_warn``."""
    nu_tp = plan.gup.trap_freq * plan.laser.pulse_duration
    if nu_tp > settings.nu_tp_warn:
        logger.warning("nu t_p = %.3g exceeds %.3g; x(t) is not frozen over a pulse", nu_tp, settings.nu_tp_warn)
    return nu_tp


def natural_plan(
    strength: float,
    beta: float = 0.0,
    cycles: int = 1,
    *,
    lamb_dicke: bool = True,
    simplified: bool = True,
) -> tuple[PulsePlan, OscillatorScales]:
    """
    Plan in hbar = m = nu = 1 whose per-pulse displacement eta t_p x0 equals ``strength``.

    kappa of the resulting plan is 2 * strength.
    """
    if strength <= 0:
        raise InvalidParameterError(f"displacement strength must be positive, got {strength}")
    scales = oscillator_scales(1.0, 1.0, natural_constants())
    omega, detuning, delta_k = 1e3, 1e6, 1.0
    rate = delta_k * omega * omega / (2 * detuning)
    laser = LaserConfig.from_delta_k(
        omega1=omega,
        omega2=omega,
        detuning=detuning,
        delta_k=delta_k,
        pulse_duration=strength / (rate * scales.x0),
    )
    plan = PulsePlan(
        laser=laser,
        gup=GupParams(beta0=beta, beta=beta, mass=1.0, trap_freq=1.0),
        cycles=cycles,
        simplified_detuning=simplified,
        lamb_dicke=lamb_dicke,
    )
    check_pulse_duration(plan)
    return plan, scales


def closed_form_beta_phase(plan: PulsePlan, scales: OscillatorScales) -> float:
    """2N(4N - 1) beta xi_tilde t_p^4 in double precision."""
    d = plan.gup.beta * xi_tilde(plan.laser, scales) * plan.laser.pulse_duration**4
    return progression_sum(plan.schedule_length) * d


def simulate_plan(
    plan: PulsePlan,
    scales: OscillatorScales,
    dim: int,
    alpha: complex = 0,
    conventions: dict | None = None,
) -> SimulateReport:
    """
    Run the numeric oracle and put it next to the trajectory and closed-form predictions.

    ``dim`` is the first truncation tried; the report carries the accepted one.

    Raises:
        TruncationError: If the beta phase does not settle below ``settings.max_dim``
    """
    beta_free = plan.model_copy(update={"gup": plan.gup.model_copy(update={"beta0": 0.0, "beta": 0.0})})
    logger.debug("simulating %d cycles from D=%d", plan.cycles, dim)
    dim, phase = converged_beta_phase(plan, scales, dim, alpha)
    return SimulateReport(
        cycles=plan.cycles,
        dim=dim,
        beta=plan.gup.beta,
        kappa=kappa(plan.laser, scales),
        numeric_beta_phase=phase,
        trajectory_beta_phase=trajectory_beta_phase(plan, scales, alpha),
        closed_form_beta_phase=closed_form_beta_phase(plan, scales),
        loop_closure_defect=loop_closure_defect(beta_free, scales, dim),
        drift=pulse_freeze_drift(plan, scales, dim).model_dump(),
        detuning=detuning_report(plan.laser, scales).model_dump(),
        conventions=conventions or {},
    )
