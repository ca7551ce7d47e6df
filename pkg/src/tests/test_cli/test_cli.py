"""
Tests for the gupsim command-line front end.
"""

import csv
import io
import json
import math

import pytest

from gupsim import __version__
from gupsim.bounds import CSV_COLUMNS
from gupsim.cli import build_parser, config_from_args, load_config, main, run, validate_config
from gupsim.exceptions import ConfigError
from gupsim.helpers import EXIT_OK, EXIT_PHYSICS, EXIT_USAGE, default_error_handler
from gupsim.models import SuiteResult, VerifyReport


def _natural_parameters(cycles: int = 3) -> dict:
    return {
        "natural_units": True,
        "mass": 1.0,
        "trap_freq": 1.0,
        "pulse_duration": 2 * math.sqrt(2),
        "omega1": 1e3,
        "omega2": 1e3,
        "detuning": 1e6,
        "delta_k": 1.0,
        "cycles": cycles,
    }


class TestParser:
    """Test argument parsing."""

    def test_subcommand_required(self):
        """Test a missing subcommand is a usage error."""
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args([])
        assert exc_info.value.code == 2

    def test_version(self, capsys):
        """Test --version prints the package version."""
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args(["--version"])
        assert exc_info.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_boolean_flags(self):
        """Test --no-lamb-dicke and --simplified-detuning."""
        args = build_parser().parse_args(["simulate", "--no-lamb-dicke", "--simplified-detuning"])
        assert args.lamb_dicke is False
        assert args.simplified_detuning is True

    def test_unset_flags_stay_none(self):
        """Test flags left out do not override a config file."""
        args = build_parser().parse_args(["verify"])
        assert args.quick is None
        assert args.lamb_dicke is None


class TestConfig:
    """Test run configuration loading and merging."""

    def test_load_config(self, temp_config_file):
        """Test a valid file loads with user provenance for explicit parameters."""
        temp_config_file.write_text(json.dumps({"mode": "phase", "parameters": _natural_parameters()}))
        config = load_config(temp_config_file)
        assert config.mode == "phase"
        assert config.parameters.cycles == 3
        assert config.provenance["omega1"] == "user"

    def test_unknown_key(self, temp_config_file):
        """Test unknown keys are reported with their path."""
        temp_config_file.write_text(json.dumps({"mode": "verify", "bogus": 1}))
        with pytest.raises(ConfigError) as exc_info:
            load_config(temp_config_file)
        assert any(path == "bogus" for path, _ in exc_info.value.field_errors)

    def test_invalid_json(self, temp_config_file):
        """Test a malformed file raises ConfigError."""
        temp_config_file.write_text("{")
        with pytest.raises(ConfigError):
            load_config(temp_config_file)

    def test_missing_file(self, tmp_path):
        """Test a missing file raises ConfigError."""
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")

    def test_two_plan_sources(self):
        """Test species and parameters together are rejected."""
        with pytest.raises(ConfigError):
            validate_config({"mode": "phase", "species": "Yb171", "parameters": _natural_parameters()})

    def test_plan_source_required(self):
        """Test bound mode needs a species or parameters."""
        with pytest.raises(ConfigError):
            validate_config({"mode": "bound"})

    def test_flags_override_file(self, temp_config_file):
        """Test command-line flags win over the config file."""
        temp_config_file.write_text(json.dumps({"mode": "bound", "species": "Yb171", "accuracy": 1e-4}))
        args = build_parser().parse_args(
            ["bound", "--config", str(temp_config_file), "--species", "Be9", "--cycles", "10"]
        )
        config = config_from_args(args)
        assert config.species == "Be9"
        assert config.accuracy == 1e-4
        assert config.overrides.cycles == 10
        assert config.provenance["cycles"] == "user"

    def test_cycles_flag_goes_to_parameters(self, temp_config_file):
        """Test --cycles updates explicit parameters instead of overrides."""
        temp_config_file.write_text(json.dumps({"mode": "phase", "parameters": _natural_parameters()}))
        args = build_parser().parse_args(["phase", "--config", str(temp_config_file), "--cycles", "5"])
        config = config_from_args(args)
        assert config.parameters.cycles == 5
        assert config.overrides.cycles is None


class TestPhaseMode:
    """Test the phase subcommand."""

    def test_species_phase(self, capsys):
        """Test the Yb report carries phases, diagnostics and provenance."""
        assert run(["phase", "--species", "Yb171"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["mode"] == "phase"
        assert report["beta0"] == 1e33
        result = report["result"]
        assert -math.pi < result["phi_wrapped"] <= math.pi
        assert result["cycles"] == 1944000000
        assert result["conventions"]["constants"]["table"] == "CODATA 2018"
        assert set(report["provenance"].values()) == {"catalog"}
        assert {"elimination", "detuning", "sensitivity"} <= set(report)

    def test_zero_beta0_has_no_sensitivity(self, capsys):
        """Test beta0 = 0 reports a vanishing GUP phase."""
        assert run(["phase", "--species", "Yb171", "--beta0", "0"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["result"]["dphi_wrapped"] == 0.0
        assert "sensitivity" not in report

    def test_override_provenance(self, capsys):
        """Test overridden fields are marked as user values."""
        assert run(["phase", "--species", "Yb171", "--cycles", "1000"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["result"]["cycles"] == 1000
        assert report["provenance"]["cycles"] == "user"
        assert report["provenance"]["mass_u"] == "catalog"

    def test_explicit_natural_parameters(self, temp_config_file, capsys):
        """Test an explicit natural-unit plan gives phi0 = -2 per cycle."""
        temp_config_file.write_text(
            json.dumps({"mode": "phase", "parameters": _natural_parameters(3), "beta0": 1e-4})
        )
        assert run(["phase", "--config", str(temp_config_file)]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["species"] == "explicit"
        assert report["result"]["phi0_wrapped"] == pytest.approx(2 * math.pi - 6.0, rel=1e-9)
        assert report["result"]["dphi_wrapped"] == pytest.approx(66 * 1e-4 * math.pi / 4, rel=1e-9)
        assert report["provenance"]["delta_k"] == "user"

    def test_output_file(self, tmp_path, capsys):
        """Test --output writes the report to disk."""
        out = tmp_path / "phase.json"
        assert run(["phase", "--species", "Be9", "--output", str(out)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text())["species"] == "Be9"

    def test_deterministic_output(self, capsys):
        """Test two identical runs print identical bytes."""
        run(["phase", "--species", "Ca40"])
        first = capsys.readouterr().out
        run(["phase", "--species", "Ca40"])
        assert capsys.readouterr().out == first


class TestBoundModes:
    """Test the bound and table1 subcommands."""

    def test_bound_json(self, capsys):
        """Test the Be bound is read out at phi0 = 0."""
        assert run(["bound", "--species", "Be9", "--accuracy", "1e-5"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["report"]["species"] == "Be9"
        assert report["report"]["phi0_wrapped"] == 0.0
        assert report["report"]["regime"] == "quadratic"
        assert len(report["report"]["sensitivity"]) == 7

    def test_bound_csv(self, capsys):
        """Test CSV output has the fixed columns."""
        assert run(["bound", "--species", "Yb171", "--format", "csv"]) == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert len(rows) == 1
        assert tuple(rows[0]) == CSV_COLUMNS
        assert rows[0]["species"] == "Yb171"
        assert float(rows[0]["beta0_bound"]) > 0

    def test_table1_csv(self, capsys):
        """Test one CSV row per catalog species."""
        assert run(["table1", "--format", "csv"]) == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert [row["species"] for row in rows] == ["Yb171", "Ca40", "Be9"]
        assert {row["agreement"] for row in rows} <= {"true", "false"}

    def test_table1_json(self, capsys):
        """Test the JSON table carries the catalog version."""
        assert run(["table1"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["catalog_version"] == 1
        assert len(report["rows"]) == 3


class TestSimulateMode:
    """Test the simulate subcommand."""

    @pytest.mark.slow
    def test_default_plan(self, capsys):
        """Test the natural-unit plan at kappa = 2."""
        assert run(["simulate", "--dim", "64"]) == EXIT_OK
        result = json.loads(capsys.readouterr().out)["result"]
        assert result["kappa"] == pytest.approx(2.0)
        assert result["dim"] == 64
        assert result["loop_closure_defect"] < 1e-6
        assert result["closed_form_beta_phase"] == pytest.approx(6 * 1e-4 * math.pi / 4, rel=1e-9)

    def test_truncation_cap_is_a_physics_error(self, monkeypatch, caplog):
        """Test a start dimension at the cap cannot be checked and exits with 1."""
        from gupsim import config as cfg

        monkeypatch.setattr(cfg.settings, "max_dim", 64, raising=True)
        assert run(["simulate", "--dim", "64"]) == EXIT_PHYSICS
        assert "truncation error" in caplog.text
        assert "last dim 64" in caplog.text

    def test_phase_warns_on_long_pulse(self, temp_config_file, caplog, capsys):
        """Test a plan with nu t_p above the threshold logs a warning."""
        temp_config_file.write_text(json.dumps({"mode": "phase", "parameters": _natural_parameters(1)}))
        assert run(["phase", "--config", str(temp_config_file)]) == EXIT_OK
        assert "nu t_p" in caplog.text

    @pytest.mark.slow
    def test_kappa_flag(self, capsys):
        """Test --kappa sets the plan strength."""
        assert run(["simulate", "--dim", "64", "--kappa", "1.0", "--beta0", "1e-3"]) == EXIT_OK
        result = json.loads(capsys.readouterr().out)["result"]
        assert result["kappa"] == pytest.approx(1.0)
        assert result["beta"] == 1e-3


class TestVerifyMode:
    """Test the verify subcommand exit codes."""

    def test_passing_report(self, mocker, capsys):
        """Test a passing verification exits with 0."""
        report = VerifyReport(quick=True, passed=True, suites=[SuiteResult(name="loop_closure", status="pass")])
        mock_verify = mocker.patch("gupsim.cli.run_verify", return_value=report)
        assert run(["verify", "--quick"]) == EXIT_OK
        mock_verify.assert_called_once_with(quick=True, timings=False)
        assert json.loads(capsys.readouterr().out)["passed"] is True

    def test_failing_report(self, mocker, capsys):
        """Test a failed suite exits with 1."""
        report = VerifyReport(quick=False, passed=False, suites=[SuiteResult(name="yb_bound", status="fail")])
        mocker.patch("gupsim.cli.run_verify", return_value=report)
        assert run(["verify"]) == EXIT_PHYSICS
        assert json.loads(capsys.readouterr().out)["suites"][0]["status"] == "fail"


class TestErrors:
    """Test exit codes of failing runs."""

    def test_unknown_species(self, caplog):
        """Test an unknown species is a usage error."""
        assert run(["phase", "--species", "Sr88"]) == EXIT_USAGE
        assert "Sr88" in caplog.text

    def test_csv_outside_bound_modes(self):
        """Test CSV output is refused for phase reports."""
        assert run(["phase", "--species", "Yb171", "--format", "csv"]) == EXIT_USAGE

    def test_accuracy_out_of_range(self, caplog):
        """Test eps >= 1 is reported as a config error."""
        assert run(["bound", "--species", "Yb171", "--accuracy", "2"]) == EXIT_USAGE
        assert "config error" in caplog.text

    def test_missing_plan_source(self):
        """Test bound without a species is a usage error."""
        assert run(["bound"]) == EXIT_USAGE

    def test_main_exits_with_code(self, monkeypatch):
        """Test main() turns the status into SystemExit."""
        monkeypatch.setattr("sys.argv", ["gupsim", "phase", "--species", "Sr88"])
        with pytest.raises(SystemExit) as exc_info:
            main()
        assert exc_info.value.code == EXIT_USAGE


class TestNumericOverrides:
    """Test numeric overrides are scoped to a single run."""

    def test_overrides_apply_during_run(self, temp_config_file, mocker):
        """Test the shared settings carry the override while the mode runs."""
        from gupsim import config as cfg

        seen = {}

        def record(config):
            seen["unitarity_tol"] = cfg.settings.unitarity_tol
            seen["convergence_rtol"] = cfg.settings.convergence_rtol
            raise ConfigError("stop")

        mocker.patch("gupsim.cli.run_phase", side_effect=record)
        temp_config_file.write_text(
            json.dumps({"mode": "phase", "species": "Be9", "numeric": {"unitarity_tol": 1e-6}})
        )
        assert run(["phase", "--config", str(temp_config_file)]) == EXIT_USAGE
        assert seen == {"unitarity_tol": 1e-6, "convergence_rtol": 1e-8}

    def test_overrides_do_not_leak(self, temp_config_file, capsys):
        """Test a second run sees the defaults again."""
        from gupsim import config as cfg

        temp_config_file.write_text(
            json.dumps(
                {
                    "mode": "phase",
                    "species": "Be9",
                    "numeric": {"unitarity_tol": 1e-6, "convergence_rtol": 1e-4},
                }
            )
        )
        assert run(["phase", "--config", str(temp_config_file)]) == EXIT_OK
        assert cfg.settings.unitarity_tol == 1e-10
        assert cfg.settings.convergence_rtol == 1e-8

    def test_restored_after_error(self, temp_config_file, mocker):
        """Test settings are restored when the mode raises."""
        from gupsim import config as cfg

        mocker.patch("gupsim.cli.run_phase", side_effect=ConfigError("stop"))
        temp_config_file.write_text(
            json.dumps({"mode": "phase", "species": "Be9", "numeric": {"unitarity_tol": 1e-6}})
        )
        run(["phase", "--config", str(temp_config_file)])
        assert cfg.settings.unitarity_tol == 1e-10

    def test_run_uses_default_error_handler(self, mocker):
        """Test run() reports failures through the shared error handler."""
        spy = mocker.spy(default_error_handler, "handle")
        assert run(["phase", "--species", "Sr88"]) == EXIT_USAGE
        spy.assert_called_once()
