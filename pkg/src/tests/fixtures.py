"""
Common fixtures for the gupsim test suite.
"""

import pytest

from gupsim.bounds import load_catalog
from gupsim.models import GupParams, LaserConfig, OscillatorScales, PhysicalConstants, SpeciesCatalog
from gupsim.protocol import natural_plan
from gupsim.units import natural_constants, oscillator_scales, pinned_constants

# ============================================================================
# Constants and Scales
# ============================================================================


@pytest.fixture
def si_constants() -> PhysicalConstants:
    """Pinned CODATA 2018 constants."""
    return pinned_constants()


@pytest.fixture
def natural() -> PhysicalConstants:
    """hbar = c = M_p = u = 1."""
    return natural_constants()


@pytest.fixture
def natural_scales(natural) -> OscillatorScales:
    """Oscillator scales with m = nu = hbar = 1."""
    return oscillator_scales(1.0, 1.0, natural)


@pytest.fixture
def natural_gup() -> GupParams:
    """Small deformation in natural units."""
    return GupParams(beta0=1e-4, beta=1e-4, mass=1.0, trap_freq=1.0)


@pytest.fixture
def beta_free() -> GupParams:
    """Undeformed oscillator in natural units."""
    return GupParams(beta0=0.0, beta=0.0, mass=1.0, trap_freq=1.0)


# ============================================================================
# Laser Fixtures
# ============================================================================


@pytest.fixture
def sample_laser() -> LaserConfig:
    """Reference beam set: Omega = 2e9 rad/s, Delta = 12e9 rad/s, dk = 1.54 * 2 pi * 2.7e6 rad/m."""
    return LaserConfig.from_delta_k(
        omega1=2e9,
        omega2=2e9,
        detuning=12e9,
        delta_k=1.54 * 2 * 3.141592653589793 * 2.7e6,
        pulse_duration=0.56e-6,
    )


@pytest.fixture
def natural_laser() -> LaserConfig:
    """Natural-unit beams whose per-pulse displacement eta t_p x0 is 1."""
    plan, _ = natural_plan(1.0)
    return plan.laser


# ============================================================================
# Catalog Fixtures
# ============================================================================


@pytest.fixture
def catalog() -> SpeciesCatalog:
    """Packaged species catalog."""
    return load_catalog()


@pytest.fixture
def catalog_data() -> dict:
    """Minimal valid catalog document."""
    return {
        "version": 1,
        "shared": {
            "pulse_duration": 0.56e-6,
            "omega1": 2e9,
            "omega2": 2e9,
            "detuning": 12e9,
            "beta0": 1e33,
            "accuracy": 1e-5,
        },
        "species": [
            {
                "name": "Yb171",
                "wavelength_nm": 369.5,
                "cycles": 1944000000,
                "trap_freq_over_2pi": 180000,
                "dk_over_k": 1.54,
                "mass_u": 173.04,
                "level_labels": ["2P1/2", "2S1/2", "2D3/2"],
                "claimed_bound": 1e24,
                "wavenumber_over_2pi": 2.7e6,
            }
        ],
    }


# ============================================================================
# File System Fixtures
# ============================================================================


@pytest.fixture
def temp_config_file(tmp_path):
    """Path for a run configuration inside tmp_path."""
    return tmp_path / "run.json"
