"""
Tests for species catalog and bound report models.
"""

import pytest
from pydantic import ValidationError

from gupsim.models import BoundReport, SpeciesCatalog, SpeciesSpec


class TestSpeciesSpec:
    """Test SpeciesSpec model."""

    def test_valid_row(self, catalog_data):
        """Test creating a species row from catalog data."""
        spec = SpeciesSpec(**catalog_data["species"][0])
        assert spec.name == "Yb171"
        assert spec.phi0_multiple_of_2pi is False

    def test_dk_over_k_limit(self, catalog_data):
        """Test Delta_k / |k| cannot exceed 2."""
        row = {**catalog_data["species"][0], "dk_over_k": 2.5}
        with pytest.raises(ValidationError):
            SpeciesSpec(**row)

    def test_unknown_field(self, catalog_data):
        """Test unknown fields are rejected."""
        row = {**catalog_data["species"][0], "colour": "blue"}
        with pytest.raises(ValidationError):
            SpeciesSpec(**row)

    def test_cycles_positive(self, catalog_data):
        """Test N must be at least one."""
        row = {**catalog_data["species"][0], "cycles": 0}
        with pytest.raises(ValidationError):
            SpeciesSpec(**row)


class TestSpeciesCatalog:
    """Test SpeciesCatalog model."""

    def test_get_is_case_insensitive(self, catalog_data):
        """Test lookup ignores case."""
        catalog = SpeciesCatalog.model_validate(catalog_data)
        assert catalog.get("yb171").name == "Yb171"
        assert catalog.get("Sr88") is None

    def test_version_required(self, catalog_data):
        """Test the version must be positive."""
        with pytest.raises(ValidationError):
            SpeciesCatalog.model_validate({**catalog_data, "version": 0})


class TestBoundReport:
    """Test BoundReport model."""

    def test_regime_values(self):
        """Test only the known regimes are accepted."""
        fields = {
            "species": "Be9",
            "accuracy": 1e-5,
            "beta0_bound": 1.2e18,
            "beta0_bound_headline": 1e18,
            "dphi_at_bound": 6.3e-3,
            "phi0_wrapped": 0.0,
            "phi0_computed": 0.4,
        }
        assert BoundReport(**fields, regime="quadratic").regime == "quadratic"
        with pytest.raises(ValidationError):
            BoundReport(**fields, regime="cubic")
