"""
Command-line front end.

    gupsim phase --species Yb171 --beta0 1e33
    gupsim bound --species Yb171 --accuracy 1e-5 --format csv
    gupsim verify --quick

Exit codes: 0 success, 1 physics or numerical failure, 2 usage or configuration error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from gupsim import __version__
from gupsim.bounds import (
    apply_overrides,
    load_catalog,
    lookup_species,
    phase_sensitivity,
    solve_beta0_bound,
    spec_from_parameters,
    species_inputs,
    species_phase,
    species_plan,
    table1,
    to_csv,
)
from gupsim.config import scoped_settings, settings
from gupsim.exceptions import ConfigError, GupSimError
from gupsim.gup import gup_params
from gupsim.helpers import EXIT_OK, EXIT_PHYSICS, default_error_handler, dump_json
from gupsim.models import (
    LaserConfig,
    OscillatorScales,
    PhysicalConstants,
    PulsePlan,
    RunConfig,
    SharedParameters,
    SpeciesSpec,
)
from gupsim.protocol import (
    check_pulse_duration,
    detuning_report,
    elimination_condition,
    natural_plan,
    simulate_plan,
)
from gupsim.units import conventions_block, natural_constants, oscillator_scales, pinned_constants
from gupsim.verify import run_verify

logger = logging.getLogger(__name__)

SUBCOMMANDS: tuple[str, ...] = ("phase", "simulate", "verify", "bound", "table1")
CSV_MODES: frozenset[str] = frozenset({"bound", "table1"})
DEFAULT_SIMULATE_BETA: float = 1e-4


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--species", help="Catalog species, e.g. Yb171")
    common.add_argument("--beta0", type=float, help="Dimensionless deformation parameter")
    common.add_argument("--cycles", type=int, help="Number of four-pulse cycles N")
    common.add_argument("--dim", type=int, help="Fock truncation dimension D")
    common.add_argument("--precision-bits", type=int, help="Working precision of the phase formulas")
    common.add_argument("--accuracy", type=float, help="Population accuracy epsilon")
    common.add_argument("--kappa", type=float, help="Natural-unit simulate plan strength")
    common.add_argument("--output", type=Path, help="Write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), help="Report format")
    common.add_argument("--quick", action="store_true", default=None, help="Reduced verification grids")
    common.add_argument("--timings", action="store_true", default=None, help="Include runtimes in the report")
    common.add_argument("--lamb-dicke", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--simplified-detuning", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--log-level", default=None, help="Logging level for stderr diagnostics")

    parser = argparse.ArgumentParser(prog="gupsim", description="GUP phase accumulation in a trapped ion")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="mode", required=True)
    helps = {
        "phase": "Closed-form phases after N cycles",
        "simulate": "Numeric Fock-space oracle for a small plan",
        "verify": "Run the acceptance suites",
        "bound": "Upper bound on beta0 for one species",
        "table1": "Bounds for every catalog species",
    }
    for mode in SUBCOMMANDS:
        subparsers.add_parser(mode, parents=[common], help=helps[mode])
    return parser


def _field_errors(error: ValidationError) -> list[tuple[str, str]]:
    return [(".".join(str(part) for part in item["loc"]) or "<root>", item["msg"]) for item in error.errors()]


def load_config(path: str | Path) -> RunConfig:
    """
    Read and validate a JSON run configuration.

    Raises:
        ConfigError: If the file is unreadable, not JSON, or violates the schema
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    return validate_config(data, source=str(path))


def validate_config(data: Any, *, source: str = "<flags>") -> RunConfig:
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid run configuration in {source}", field_errors=_field_errors(e)) from e
    provenance = {field: "user" for field in config.overrides.model_dump(exclude_none=True)}
    if config.parameters is not None:
        provenance.update({field: "user" for field in config.parameters.model_dump()})
    return config.model_copy(update={"provenance": {**provenance, **config.provenance}})


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge the config file (if any) with command-line flags; flags win."""
    data: dict[str, Any] = {}
    if args.config is not None:
        data = load_config(args.config).model_dump(exclude_defaults=True, mode="json")
    data["mode"] = args.mode

    for flag, key in (
        ("species", "species"),
        ("beta0", "beta0"),
        ("accuracy", "accuracy"),
        ("kappa", "kappa"),
        ("quick", "quick"),
        ("timings", "timings"),
        ("lamb_dicke", "lamb_dicke"),
        ("simplified_detuning", "simplified_detuning"),
    ):
        value = getattr(args, flag)
        if value is not None:
            data[key] = value
    if args.cycles is not None:
        if data.get("parameters") is not None:
            data["parameters"]["cycles"] = args.cycles
        else:
            data.setdefault("overrides", {})["cycles"] = args.cycles
    if args.dim is not None:
        data.setdefault("numeric", {})["dim"] = args.dim
    if args.precision_bits is not None:
        data.setdefault("numeric", {})["precision_bits"] = args.precision_bits
    if args.output is not None:
        data.setdefault("output", {})["path"] = str(args.output)
    if args.format is not None:
        data.setdefault("output", {})["format"] = args.format
    return validate_config(data)


def _numeric_overrides(config: RunConfig) -> dict[str, float]:
    return config.numeric.model_dump(include={"convergence_rtol", "unitarity_tol"}, exclude_none=True)


def _resolve_plan_source(
    config: RunConfig,
) -> tuple[SpeciesSpec, SharedParameters, dict[str, str], PhysicalConstants]:
    """Species row, shared parameters, provenance and constants for phase and bound modes."""
    if config.parameters is not None:
        constants = natural_constants() if config.parameters.natural_units else pinned_constants()
        spec, shared = spec_from_parameters(
            config.parameters, constants, beta0=config.beta0 or 1.0, accuracy=config.accuracy or 1e-5
        )
        return spec, shared, dict(config.provenance), constants
    catalog = load_catalog()
    spec = lookup_species(catalog, config.species)
    spec, shared, provenance = apply_overrides(spec, catalog.shared, config.overrides)
    return spec, shared, provenance, pinned_constants()


def run_phase(config: RunConfig) -> dict[str, Any]:
    spec, shared, provenance, constants = _resolve_plan_source(config)
    bits = config.numeric.precision_bits or settings.precision_bits
    beta0 = shared.beta0 if config.beta0 is None else config.beta0
    conventions = conventions_block(constants, bits)
    result = species_phase(spec, shared, constants, beta0, precision_bits=bits, conventions=conventions)
    plan, scales = species_plan(spec, shared, constants, beta0)
    inputs = species_inputs(spec, shared, constants, beta0, bits)
    report: dict[str, Any] = {
        "mode": "phase",
        "species": spec.name,
        "beta0": beta0,
        "result": result,
        "elimination": elimination_condition(inputs),
        "detuning": detuning_report(plan.laser, scales),
        "provenance": provenance,
    }
    if beta0 > 0:
        report["sensitivity"] = phase_sensitivity(spec, shared, constants, beta0, bits)
    return report


def run_bound(config: RunConfig) -> tuple[dict[str, Any], list]:
    spec, shared, provenance, constants = _resolve_plan_source(config)
    bound = solve_beta0_bound(
        spec, shared, constants, config.accuracy, precision_bits=config.numeric.precision_bits
    )
    report = {
        "mode": "bound",
        "report": bound,
        "provenance": provenance,
        "conventions": conventions_block(constants, config.numeric.precision_bits),
    }
    return report, [(bound, spec)]


def run_table1(config: RunConfig) -> tuple[dict[str, Any], list]:
    catalog = load_catalog()
    constants = pinned_constants()
    reports = table1(catalog, constants, config.accuracy, precision_bits=config.numeric.precision_bits)
    report = {
        "mode": "table1",
        "rows": reports,
        "catalog_version": catalog.version,
        "conventions": conventions_block(constants, config.numeric.precision_bits),
    }
    return report, list(zip(reports, catalog.species, strict=True))


def _explicit_plan(config: RunConfig) -> tuple[PulsePlan, OscillatorScales]:
    params = config.parameters
    constants = natural_constants() if params.natural_units else pinned_constants()
    laser = LaserConfig.from_delta_k(
        omega1=params.omega1,
        omega2=params.omega2,
        detuning=params.detuning,
        delta_k=params.delta_k,
        pulse_duration=params.pulse_duration,
    )
    beta0 = DEFAULT_SIMULATE_BETA if config.beta0 is None else config.beta0
    plan = PulsePlan(
        laser=laser,
        gup=gup_params(beta0, params.mass, params.trap_freq, constants),
        cycles=params.cycles,
        simplified_detuning=config.simplified_detuning,
        lamb_dicke=config.lamb_dicke,
    )
    check_pulse_duration(plan)
    return plan, oscillator_scales(params.mass, params.trap_freq, constants)


def run_simulate(config: RunConfig) -> dict[str, Any]:
    if config.parameters is not None:
        plan, scales = _explicit_plan(config)
        constants = natural_constants() if config.parameters.natural_units else pinned_constants()
    else:
        beta = DEFAULT_SIMULATE_BETA if config.beta0 is None else config.beta0
        cycles = config.overrides.cycles if config.overrides.cycles is not None else 1
        plan, scales = natural_plan(
            config.kappa / 2,
            beta,
            cycles,
            lamb_dicke=config.lamb_dicke,
            simplified=True,
        )
        constants = natural_constants()
    dim = config.numeric.dim or settings.default_dim
    result = simulate_plan(plan, scales, dim, conventions=conventions_block(constants, config.numeric.precision_bits))
    return {"mode": "simulate", "result": result, "provenance": dict(config.provenance)}


def write_report(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.write_text(text, encoding="utf-8")
    logger.info("report written to %s", path)


def dispatch(config: RunConfig) -> int:
    """Run one mode and write its report; returns the exit code."""
    fmt = config.output.format
    if fmt == "csv" and config.mode not in CSV_MODES:
        raise ConfigError(f"csv output is only available for {', '.join(sorted(CSV_MODES))}")

    code = EXIT_OK
    rows: list = []
    with scoped_settings(**_numeric_overrides(config)):
        if config.mode == "phase":
            report: Any = run_phase(config)
        elif config.mode == "simulate":
            report = run_simulate(config)
        elif config.mode == "bound":
            report, rows = run_bound(config)
        elif config.mode == "table1":
            report, rows = run_table1(config)
        else:
            report = run_verify(quick=config.quick, timings=config.timings)
            if not report.passed:
                failed = [suite.name for suite in report.suites if suite.status == "fail"]
                logger.error("verification failed: %s", ", ".join(failed))
                code = EXIT_PHYSICS

    write_report(to_csv(rows) if fmt == "csv" else dump_json(report), config.output.path)
    return code


def _configure_logging(level: str | None) -> None:
    name = (level or settings.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def run(argv: list[str] | None = None) -> int:
    """
    Parse arguments, run the requested mode and return the exit status.

    Args:
        argv: Arguments without the program name, defaults to ``sys.argv[1:]``

    Returns:
        0 on success, 1 on a physics or numerical failure, 2 on a usage error
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)
    try:
        return dispatch(config_from_args(args))
    except GupSimError as e:
        return default_error_handler.handle(e)


def main() -> None:
    sys.exit(run())
