"""
Tests for configuration settings.
"""

from pathlib import Path
from unittest.mock import patch

from gupsim.config import Settings, settings


class TestSettings:
    """Test Settings class."""

    def test_default_values(self):
        """Test default configuration values."""
        config = Settings()
        assert config.catalog is None
        assert config.precision_bits == 256
        assert config.default_dim == 64
        assert config.max_dim == 1024
        assert config.wrap_error_limit == 1e-6
        assert config.log_level == "WARNING"

    def test_custom_values(self):
        """Test custom configuration values."""
        config = Settings(precision_bits=512, default_dim=128, convergence_rtol=1e-10, catalog="species.json")
        assert config.precision_bits == 512
        assert config.default_dim == 128
        assert config.convergence_rtol == 1e-10
        assert config.catalog == Path("species.json")

    @patch.dict("os.environ", {"GUPSIM_PRECISION_BITS": "384", "GUPSIM_CATALOG": "/tmp/catalog.json"})
    def test_environment_variables(self):
        """Test loading from GUPSIM_ environment variables."""
        config = Settings()
        assert config.precision_bits == 384
        assert config.catalog == Path("/tmp/catalog.json")

    @patch.dict("os.environ", {"PRECISION_BITS": "384"})
    def test_unprefixed_variables_ignored(self):
        """Test variables without the prefix do not apply."""
        assert Settings().precision_bits == 256


class TestGlobalSettings:
    """Test global settings instance."""

    def test_global_settings_defaults(self):
        """Test global settings hold the values pinned for the test session."""
        assert settings.catalog is None
        assert settings.precision_bits == 256
        assert settings.default_dim == 64
        assert settings.interior_fraction == 0.25
