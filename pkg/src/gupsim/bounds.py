"""
Population readout and beta0 bounds.

The ion is prepared in (|r> + |g>)/sqrt(2); only |g> picks up the phase phi. After a Hadamard the
population of |r> is sin^2(phi / 2), and a null result with accuracy eps bounds the GUP part dphi.
"""

import csv
import io
import json
import logging
import math
from importlib import resources
from pathlib import Path

import mpmath
from platformdirs import user_config_dir
from pydantic import ValidationError
from scipy import optimize

from gupsim.config import settings
from gupsim.exceptions import CatalogError, InvalidParameterError, NumericalError
from gupsim.gup import gup_params
from gupsim.models import (
    BoundReport,
    BoundSensitivity,
    ExplicitParameters,
    LaserConfig,
    OscillatorScales,
    ParameterOverrides,
    PhaseInputs,
    PhaseResult,
    PhysicalConstants,
    PulsePlan,
    ScalingPoint,
    SensitivityEntry,
    SharedParameters,
    SpeciesCatalog,
    SpeciesSpec,
)
from gupsim.models.species import Regime
from gupsim.protocol import check_pulse_duration, cycle_phase, progression_sum, total_phase
from gupsim.units import (
    CODATA_2018_RELATIVE_UNCERTAINTY,
    angular,
    big_angle,
    decimal_mpf,
    oscillator_scales,
    wrap_phase,
)

logger = logging.getLogger(__name__)

CATALOG_FILENAME: str = "species_catalog.json"
WRAP_LIMIT: float = math.pi / 4
SOLVER_XTOL: float = 1e-15
SOLVER_RTOL: float = 1e-13
BRACKET_FACTOR: float = 1.25
PERTURBATION: float = 0.01

# Quoted phases for Yb171 at beta0 = 1e33, in units of pi
QUOTED_PHI_OVER_PI: float = -0.1167241
QUOTED_DPHI_OVER_PI: float = 0.293155

CSV_COLUMNS: tuple[str, ...] = (
    "species",
    "lambda_nm",
    "N",
    "nu_over_2pi_hz",
    "dk_over_k",
    "phi0_wrapped",
    "regime",
    "beta0_bound",
    "claimed_bound",
    "agreement",
)

SPECIES_FIELDS: frozenset[str] = frozenset(
    {"mass_u", "trap_freq_over_2pi", "cycles", "dk_over_k", "wavelength_nm", "wavenumber_over_2pi"}
)
SHARED_FIELDS: frozenset[str] = frozenset({"pulse_duration", "omega1", "omega2", "detuning"})

# parameter -> (PhaseInputs field, power the field depends on it with)
SENSITIVITY_INPUTS: dict[str, tuple[str, int]] = {
    "hbar": ("hbar", 1),
    "planck_mass": ("beta", -2),
    "atomic_mass_unit": ("mass", 1),
    "mass_u": ("mass", 1),
    "trap_freq": ("trap_freq", 1),
    "pulse_duration": ("pulse_duration", 1),
    "omega1": ("omega1", 1),
    "omega2": ("omega2", 1),
    "detuning": ("detuning", 1),
    "delta_k": ("delta_k", 1),
}

# Half of the last printed digit of each catalog parameter, relative
PRINTED_UNCERTAINTY: dict[str, float] = {
    "mass_u": 0.005 / 173.04,
    "trap_freq": 0.005 / 0.18,
    "pulse_duration": 0.005 / 0.56,
    "omega1": 0.5 / 2,
    "omega2": 0.5 / 2,
    "detuning": 0.5 / 12,
    "delta_k": 0.005 / 1.54,
}

BOUND_SENSITIVITY_FIELDS: tuple[str, ...] = (
    "mass_u",
    "trap_freq_over_2pi",
    "pulse_duration",
    "omega1",
    "omega2",
    "detuning",
    "dk_over_k",
)


def readout_population(phi: float) -> float:
    """P_r = sin^2(phi / 2)."""
    return math.sin(phi / 2) ** 2


def delta_population(phi0: float, dphi: float) -> float:
    """sin^2((phi0 + dphi) / 2) - sin^2(phi0 / 2) as sin(dphi / 2) sin(phi0 + dphi / 2)."""
    return math.sin(dphi / 2) * math.sin(phi0 + dphi / 2)


def catalog_path() -> Path | None:
    """First existing catalog in settings, then the user config dir; None means the packaged one."""
    if settings.catalog is not None:
        return Path(settings.catalog)
    user_catalog = Path(user_config_dir("gupsim")) / CATALOG_FILENAME
    if user_catalog.exists():
        return user_catalog
    return None


def load_catalog(path: str | Path | None = None) -> SpeciesCatalog:
    """
    Load and validate a species catalog.

    Args:
        path: Explicit catalog file; defaults to the resolution in ``catalog_path``

    Raises:
        CatalogError: If the file is missing, not JSON, or fails validation
    """
    source = Path(path) if path is not None else catalog_path()
    try:
        if source is None:
            text = resources.files("gupsim").joinpath("data", CATALOG_FILENAME).read_text(encoding="utf-8")
            source = Path("<packaged>") / CATALOG_FILENAME
        else:
            text = source.read_text(encoding="utf-8")
        catalog = SpeciesCatalog.model_validate(json.loads(text))
    except OSError as e:
        raise CatalogError(f"cannot read species catalog {source}: {e}") from e
    except json.JSONDecodeError as e:
        raise CatalogError(f"species catalog {source} is not valid JSON: {e}") from e
    except ValidationError as e:
        raise CatalogError(f"species catalog {source} failed validation: {e}") from e
    logger.debug("loaded %d species from %s", len(catalog.species), source)
    return catalog


def lookup_species(catalog: SpeciesCatalog, name: str) -> SpeciesSpec:
    spec = catalog.get(name)
    if spec is None:
        known = ", ".join(s.name for s in catalog.species) or "none"
        raise CatalogError(f"unknown species '{name}' (known: {known})")
    return spec


def apply_overrides(
    spec: SpeciesSpec,
    shared: SharedParameters,
    overrides: ParameterOverrides | dict | None = None,
) -> tuple[SpeciesSpec, SharedParameters, dict[str, str]]:
    """
    Merge user overrides into a catalog row and record where every number came from.

    A wavelength override without a wavenumber one drops the catalog's wavenumber, which would
    otherwise take precedence.

    Raises:
        InvalidParameterError: If the overrides or the merged row fail validation
    """
    try:
        if not isinstance(overrides, ParameterOverrides):
            overrides = ParameterOverrides.model_validate(overrides or {})
        updates = overrides.model_dump(exclude_none=True)
        spec_updates = {k: v for k, v in updates.items() if k in SPECIES_FIELDS}
        if "wavelength_nm" in updates and "wavenumber_over_2pi" not in updates:
            spec_updates["wavenumber_over_2pi"] = None
        shared_updates = {k: v for k, v in updates.items() if k in SHARED_FIELDS}
        merged_spec = SpeciesSpec.model_validate({**spec.model_dump(), **spec_updates})
        merged_shared = SharedParameters.model_validate({**shared.model_dump(), **shared_updates})
    except ValidationError as e:
        raise InvalidParameterError(f"overrides for {spec.name} are invalid: {e}") from e

    provenance = {field: "catalog" for field in (*sorted(SPECIES_FIELDS), *sorted(SHARED_FIELDS))}
    provenance.update({field: "user" for field in spec_updates})
    provenance.update({field: "user" for field in shared_updates})
    return merged_spec, merged_shared, provenance


def spec_from_parameters(
    params: ExplicitParameters, constants: PhysicalConstants, beta0: float = 1.0, accuracy: float = 1e-5
) -> tuple[SpeciesSpec, SharedParameters]:
    """Express an explicit plan as a catalog row so phases and bounds share one path."""
    if params.delta_k == 0:
        raise InvalidParameterError("delta_k must be non-zero")
    if params.cycles < 1:
        raise InvalidParameterError("an explicit plan needs at least one cycle")
    wavenumber_over_2pi = abs(params.delta_k) / (2 * math.pi)
    spec = SpeciesSpec(
        name="explicit",
        wavelength_nm=1e9 / wavenumber_over_2pi,
        cycles=params.cycles,
        trap_freq_over_2pi=params.trap_freq / (2 * math.pi),
        dk_over_k=1.0,
        mass_u=params.mass / constants.atomic_mass_unit,
        level_labels=("e", "g", "r"),
        wavenumber_over_2pi=wavenumber_over_2pi,
        provenance="user parameters",
    )
    shared = SharedParameters(
        pulse_duration=params.pulse_duration,
        omega1=params.omega1,
        omega2=params.omega2,
        detuning=params.detuning,
        beta0=beta0 if beta0 > 0 else 1.0,
        accuracy=accuracy,
    )
    return spec, shared


def _wavenumber_mp(spec: SpeciesSpec) -> mpmath.mpf:
    if spec.wavenumber_over_2pi is not None:
        return 2 * mpmath.pi * decimal_mpf(spec.wavenumber_over_2pi)
    return 2 * mpmath.pi / (decimal_mpf(spec.wavelength_nm) * mpmath.mpf("1e-9"))


def species_inputs(
    spec: SpeciesSpec,
    shared: SharedParameters,
    constants: PhysicalConstants,
    beta0: float,
    precision_bits: int | None = None,
) -> PhaseInputs:
    """Catalog values parsed from their decimal form at the working precision."""
    bits = precision_bits or settings.precision_bits
    if beta0 < 0:
        raise InvalidParameterError(f"beta0 must be non-negative, got {beta0}")
    with mpmath.workprec(bits):
        return PhaseInputs(
            hbar=decimal_mpf(constants.hbar),
            mass=decimal_mpf(spec.mass_u) * decimal_mpf(constants.atomic_mass_unit),
            trap_freq=2 * mpmath.pi * decimal_mpf(spec.trap_freq_over_2pi),
            pulse_duration=decimal_mpf(shared.pulse_duration),
            omega1=decimal_mpf(shared.omega1),
            omega2=decimal_mpf(shared.omega2),
            detuning=decimal_mpf(shared.detuning),
            delta_k=decimal_mpf(spec.dk_over_k) * _wavenumber_mp(spec),
            beta=decimal_mpf(beta0) / (decimal_mpf(constants.planck_mass) * decimal_mpf(constants.c)) ** 2,
            precision_bits=bits,
        )


def species_plan(
    spec: SpeciesSpec, shared: SharedParameters, constants: PhysicalConstants, beta0: float
) -> tuple[PulsePlan, OscillatorScales]:
    """Double-precision plan for a catalog row; the closed-form path uses Delta1 = Delta2 = Delta."""
    mass = spec.mass_u * constants.atomic_mass_unit
    trap_freq = angular(spec.trap_freq_over_2pi)
    if spec.wavenumber_over_2pi is not None:
        wavenumber = angular(spec.wavenumber_over_2pi)
    else:
        wavenumber = 2 * math.pi / (spec.wavelength_nm * 1e-9)
    laser = LaserConfig.from_delta_k(
        omega1=shared.omega1,
        omega2=shared.omega2,
        detuning=shared.detuning,
        delta_k=spec.dk_over_k * wavenumber,
        pulse_duration=shared.pulse_duration,
        transition_wavelength=spec.wavelength_nm * 1e-9,
    )
    plan = PulsePlan(
        laser=laser,
        gup=gup_params(beta0, mass, trap_freq, constants),
        cycles=spec.cycles,
        simplified_detuning=True,
    )
    check_pulse_duration(plan)
    return plan, oscillator_scales(mass, trap_freq, constants)


def species_phase(
    spec: SpeciesSpec,
    shared: SharedParameters,
    constants: PhysicalConstants,
    beta0: float,
    *,
    precision_bits: int | None = None,
    conventions: dict | None = None,
) -> PhaseResult:
    plan, scales = species_plan(spec, shared, constants, beta0)
    inputs = species_inputs(spec, shared, constants, beta0, precision_bits)
    return total_phase(plan, scales, inputs=inputs, conventions=conventions)


def _unwrapped_phases(inputs: PhaseInputs, cycles: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    phi0_cycle, d = cycle_phase(inputs)
    with mpmath.workprec(inputs.precision_bits):
        return cycles * phi0_cycle, progression_sum(4 * cycles) * d


def _wrap_float(value: float) -> float:
    return math.remainder(value, 2 * math.pi)


def phase_sensitivity(
    spec: SpeciesSpec,
    shared: SharedParameters,
    constants: PhysicalConstants,
    beta0: float,
    precision_bits: int | None = None,
) -> list[SensitivityEntry]:
    """
    Log-derivatives of the unwrapped phases and the phase spread each input uncertainty implies.

    An entry is marked reachable when its spread covers the distance from the computed wrapped
    phases to the quoted ones.
    """
    inputs = species_inputs(spec, shared, constants, beta0, precision_bits)
    bits = inputs.precision_bits
    phi0, dphi = _unwrapped_phases(inputs, spec.cycles)
    with mpmath.workprec(bits):
        phi = phi0 + dphi
        target_phi_gap = abs(
            _wrap_float(float(mpmath.pi * mpmath.mpf(QUOTED_PHI_OVER_PI) - wrap_phase(big_angle(phi, bits)).wrapped))
        )
        target_dphi_gap = abs(
            _wrap_float(float(mpmath.pi * mpmath.mpf(QUOTED_DPHI_OVER_PI) - wrap_phase(big_angle(dphi, bits)).wrapped))
        )

    uncertainties = {**PRINTED_UNCERTAINTY, **CODATA_2018_RELATIVE_UNCERTAINTY}
    entries = []
    for parameter, (field, power) in SENSITIVITY_INPUTS.items():
        with mpmath.workprec(bits):
            h = mpmath.ldexp(1, -bits // 4)
            base = getattr(inputs, field)
            up = inputs.model_copy(update={field: base * (1 + h) ** power})
            down = inputs.model_copy(update={field: base * (1 - h) ** power})
            phi0_up, dphi_up = _unwrapped_phases(up, spec.cycles)
            phi0_down, dphi_down = _unwrapped_phases(down, spec.cycles)
            d_phi0 = (phi0_up - phi0_down) / (2 * h)
            d_dphi = (dphi_up - dphi_down) / (2 * h)
            exponent_phi0 = d_phi0 / phi0 if phi0 != 0 else mpmath.mpf(0)
            exponent_dphi = d_dphi / dphi if dphi != 0 else mpmath.mpf(0)

        rel = uncertainties[parameter]
        spread_phi = float(abs(d_phi0 + d_dphi)) * rel
        spread_dphi = float(abs(d_dphi)) * rel
        entries.append(
            SensitivityEntry(
                parameter=parameter,
                exponent_phi0=float(exponent_phi0),
                exponent_dphi=float(exponent_dphi),
                d_phi0=float(d_phi0),
                d_dphi=float(d_dphi),
                relative_uncertainty=rel,
                phase_spread=spread_phi,
                target_reachable=spread_phi >= target_phi_gap and spread_dphi >= target_dphi_gap,
            )
        )
    return entries


def _regime(phi0: float, dphi: float) -> Regime:
    if dphi > WRAP_LIMIT:
        return "wrap-limited"
    linear = abs(math.sin(phi0)) * dphi / 2
    quadratic = abs(math.cos(phi0)) * (dphi / 2) ** 2
    return "linear" if linear >= quadratic else "quadratic"


def solve_dphi(phi0: float, accuracy: float) -> tuple[float, Regime]:
    """
    Smallest dphi > 0 with |delta_population(phi0, dphi)| = accuracy.

    Raises:
        InvalidParameterError: If accuracy is outside (0, 1)
        NumericalError: If no crossing exists below 2 pi
    """
    if not 0 < accuracy < 1:
        raise InvalidParameterError(f"accuracy must lie in (0, 1), got {accuracy}")

    def excess(dphi: float) -> float:
        return abs(delta_population(phi0, dphi)) - accuracy

    # |delta P| <= dphi / 2, so nothing crosses below dphi = accuracy
    lo = accuracy
    hi = lo * BRACKET_FACTOR
    while excess(hi) < 0:
        lo, hi = hi, hi * BRACKET_FACTOR
        if lo > 2 * math.pi:
            raise NumericalError(f"|delta P| never reaches {accuracy:g} at phi0 = {phi0:.6f}")

    dphi = optimize.brentq(excess, lo, hi, xtol=SOLVER_XTOL * lo, rtol=SOLVER_RTOL)
    regime = _regime(phi0, dphi)
    if regime == "wrap-limited":
        logger.warning("bound is wrap-limited: dphi = %.3f rad exceeds pi/4", dphi)
    return dphi, regime


def _headline(value: float) -> float:
    return float(f"{value:.0e}")


def _agreement(bound: float, claimed: float | None) -> bool | None:
    if claimed is None or bound <= 0:
        return None
    return abs(math.log10(bound / claimed)) <= 1


def _bound_core(
    spec: SpeciesSpec,
    shared: SharedParameters,
    constants: PhysicalConstants,
    accuracy: float,
    precision_bits: int | None,
) -> tuple[float, float, float, float, Regime]:
    """(bound, dphi at bound, readout phi0, computed wrapped phi0, regime)."""
    inputs = species_inputs(spec, shared, constants, 1.0, precision_bits)
    phi0, dphi_unit = _unwrapped_phases(inputs, spec.cycles)
    phi0_computed = wrap_phase(big_angle(phi0, inputs.precision_bits)).wrapped
    phi0_readout = 0.0 if spec.phi0_multiple_of_2pi else phi0_computed
    if dphi_unit == 0:
        raise InvalidParameterError("GUP phase per unit beta0 vanishes; no bound can be set")
    dphi, regime = solve_dphi(phi0_readout, accuracy)
    return dphi / float(dphi_unit), dphi, phi0_readout, phi0_computed, regime


def bound_sensitivity(
    spec: SpeciesSpec,
    shared: SharedParameters,
    constants: PhysicalConstants,
    accuracy: float,
    bound: float,
    precision_bits: int | None = None,
) -> list[BoundSensitivity]:
    """Recompute the bound with each physical parameter moved by -1% and +1%."""
    rows = []
    for field in BOUND_SENSITIVITY_FIELDS:
        results = []
        for factor in (1 - PERTURBATION, 1 + PERTURBATION):
            if field in SPECIES_FIELDS:
                s, sh = spec.model_copy(update={field: getattr(spec, field) * factor}), shared
            else:
                s, sh = spec, shared.model_copy(update={field: getattr(shared, field) * factor})
            results.append(_bound_core(s, sh, constants, accuracy, precision_bits)[0])
        minus, plus = results
        rows.append(
            BoundSensitivity(
                parameter=field,
                bound_minus=minus,
                bound_plus=plus,
                relative_change=max(abs(minus / bound - 1), abs(plus / bound - 1)),
            )
        )
    return rows


def solve_beta0_bound(
    spec: SpeciesSpec,
    shared: SharedParameters,
    constants: PhysicalConstants,
    accuracy: float | None = None,
    *,
    precision_bits: int | None = None,
    with_sensitivity: bool = True,
) -> BoundReport:
    """
    Upper bound on beta0 from a null result at population accuracy eps.

    Args:
        spec: Species row, overrides already applied
        shared: Shared experiment parameters
        constants: Constant table
        accuracy: eps, defaults to the catalog's shared accuracy
        precision_bits: Working precision of the phase formulas
        with_sensitivity: Also recompute the bound at +-1% of every parameter

    Returns:
        Bound report with regime, linear closed form and the comparison with the claimed value
    """
    eps = shared.accuracy if accuracy is None else accuracy
    bound, dphi, phi0_readout, phi0_computed, regime = _bound_core(spec, shared, constants, eps, precision_bits)

    notes = []
    sin_phi0 = math.sin(phi0_readout)
    linear = None
    if sin_phi0 != 0:
        linear = bound * (2 * eps / abs(sin_phi0)) / dphi
    if spec.phi0_multiple_of_2pi:
        notes.append(
            f"phi0 taken as a multiple of 2 pi; the listed parameters give phi0 = {phi0_computed:.6f} rad (wrapped)"
        )
    agreement = _agreement(bound, spec.claimed_bound)
    if agreement is False:
        notes.append(f"computed bound {bound:.3e} differs from the claimed {spec.claimed_bound:.0e} by over 10x")
    if regime == "wrap-limited":
        notes.append("dphi at the bound exceeds pi/4; first crossing reported")

    sensitivity = (
        bound_sensitivity(spec, shared, constants, eps, bound, precision_bits) if with_sensitivity else []
    )
    logger.info("%s: beta0 < %.3e (%s regime)", spec.name, bound, regime)
    return BoundReport(
        species=spec.name,
        accuracy=eps,
        beta0_bound=bound,
        beta0_bound_headline=_headline(bound),
        dphi_at_bound=dphi,
        phi0_wrapped=phi0_readout,
        phi0_computed=phi0_computed,
        regime=regime,
        linear_closed_form=linear,
        claimed_bound=spec.claimed_bound,
        agreement=agreement,
        sensitivity=sensitivity,
        discrepancy_notes=notes,
    )


def table1(
    catalog: SpeciesCatalog,
    constants: PhysicalConstants,
    accuracy: float | None = None,
    *,
    precision_bits: int | None = None,
    with_sensitivity: bool = True,
) -> list[BoundReport]:
    """Bounds for every catalog row next to the claimed ones."""
    return [
        solve_beta0_bound(
            spec, catalog.shared, constants, accuracy, precision_bits=precision_bits, with_sensitivity=with_sensitivity
        )
        for spec in catalog.species
    ]


def _positive_roots(a: float, b: float, c: float) -> list[float]:
    """Real positive roots of a h^2 + b h + c, cancellation-free."""
    if a == 0:
        return [-c / b] if b != 0 and -c / b > 0 else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    q = -(b + math.copysign(math.sqrt(disc), b)) / 2
    roots = [q / a, c / q] if q != 0 else []
    return [r for r in roots if r > 0]


def readout_law_dphi(phi0: float, accuracy: float) -> float:
    """
    Small-dphi readout law: smallest dphi = 2h > 0 with |sin(phi0) h + cos(phi0) h^2| = accuracy.

    Reduces to 2 eps / |sin phi0| when sin phi0 dominates and to 2 sqrt(eps) at phi0 = 0.
    """
    s, c = math.sin(phi0), math.cos(phi0)
    roots = _positive_roots(c, s, -accuracy) + _positive_roots(c, s, accuracy)
    if not roots:
        raise NumericalError(f"readout law has no crossing at phi0 = {phi0:.6f}, eps = {accuracy:g}")
    return 2 * min(roots)


def bound_scaling_grid(
    spec: SpeciesSpec,
    shared: SharedParameters,
    constants: PhysicalConstants,
    accuracies: list[float],
    cycle_counts: list[int],
    precision_bits: int | None = None,
) -> list[ScalingPoint]:
    """
    Bounds over an (accuracy, N) grid, each read out at the phi0 its own N produces.

    Every point carries the small-dphi readout law next to the solved bound.
    """
    inputs = species_inputs(spec, shared, constants, 1.0, precision_bits)
    phi0_cycle, d = cycle_phase(inputs)

    points = []
    for n in cycle_counts:
        with mpmath.workprec(inputs.precision_bits):
            dphi_unit = float(progression_sum(4 * n) * d)
            phi0 = 0.0
            if not spec.phi0_multiple_of_2pi:
                phi0 = wrap_phase(big_angle(n * phi0_cycle, inputs.precision_bits)).wrapped
        for eps in accuracies:
            dphi, regime = solve_dphi(phi0, eps)
            points.append(
                ScalingPoint(
                    accuracy=eps,
                    cycles=n,
                    phi0_wrapped=phi0,
                    beta0_bound=dphi / dphi_unit,
                    readout_law_bound=readout_law_dphi(phi0, eps) / dphi_unit,
                    regime=regime,
                )
            )
    return points


def bound_rows(reports: list[tuple[BoundReport, SpeciesSpec]]) -> list[dict[str, object]]:
    """One CSV row per (report, species row the report was computed from)."""
    rows = []
    for report, spec in reports:
        rows.append(
            {
                "species": report.species,
                "lambda_nm": spec.wavelength_nm,
                "N": spec.cycles,
                "nu_over_2pi_hz": spec.trap_freq_over_2pi,
                "dk_over_k": spec.dk_over_k,
                "phi0_wrapped": repr(report.phi0_wrapped),
                "regime": report.regime,
                "beta0_bound": repr(report.beta0_bound),
                "claimed_bound": "" if report.claimed_bound is None else repr(report.claimed_bound),
                "agreement": "" if report.agreement is None else str(report.agreement).lower(),
            }
        )
    return rows


def to_csv(reports: list[tuple[BoundReport, SpeciesSpec]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(bound_rows(reports))
    return buffer.getvalue()
