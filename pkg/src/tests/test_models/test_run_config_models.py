"""
Tests for run configuration models.
"""

import pytest
from pydantic import ValidationError

from gupsim.models import RunConfig


class TestRunConfig:
    """Test RunConfig model."""

    def test_defaults(self):
        """Test a verify run needs nothing else."""
        config = RunConfig(mode="verify")
        assert config.kappa == 2.0
        assert config.output.format == "json"
        assert config.numeric.dim is None
        assert config.lamb_dicke is True

    def test_species_and_parameters_exclusive(self):
        """Test two plan sources are rejected."""
        parameters = {
            "mass": 1.0,
            "trap_freq": 1.0,
            "pulse_duration": 1.0,
            "omega1": 1.0,
            "omega2": 1.0,
            "detuning": 10.0,
            "delta_k": 1.0,
        }
        with pytest.raises(ValidationError):
            RunConfig(mode="phase", species="Yb171", parameters=parameters)

    @pytest.mark.parametrize("mode", ["phase", "bound"])
    def test_plan_modes_need_a_source(self, mode):
        """Test phase and bound need a species or parameters."""
        with pytest.raises(ValidationError):
            RunConfig(mode=mode)

    def test_simulate_without_source(self):
        """Test simulate falls back to the natural-unit plan."""
        assert RunConfig(mode="simulate").parameters is None

    @pytest.mark.parametrize("accuracy", [0.0, 1.0, -1e-5])
    def test_accuracy_range(self, accuracy):
        """Test eps must lie in (0, 1)."""
        with pytest.raises(ValidationError):
            RunConfig(mode="bound", species="Be9", accuracy=accuracy)

    def test_unknown_mode(self):
        """Test modes outside the subcommands are rejected."""
        with pytest.raises(ValidationError):
            RunConfig(mode="plot")

    def test_override_fields_checked(self):
        """Test overrides reject unknown and non-positive values."""
        with pytest.raises(ValidationError):
            RunConfig(mode="bound", species="Be9", overrides={"mass_u": -1.0})
        with pytest.raises(ValidationError):
            RunConfig(mode="bound", species="Be9", overrides={"laser_power": 1.0})

    def test_numeric_options(self):
        """Test the dimension cap and precision floor."""
        assert RunConfig(mode="simulate", numeric={"dim": 128}).numeric.dim == 128
        with pytest.raises(ValidationError):
            RunConfig(mode="simulate", numeric={"dim": 4096})
        with pytest.raises(ValidationError):
            RunConfig(mode="phase", species="Yb171", numeric={"precision_bits": 64})
