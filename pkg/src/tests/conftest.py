"""
Pytest configuration and shared fixtures for the gupsim test suite.
"""

import pytest
from fixtures import *  # noqa: F403

# -------- pytest configuration --------


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "units: Tests related to constants, unit conversion and phase wrapping")
    config.addinivalue_line("markers", "fock: Tests related to the truncated Fock-space algebra")
    config.addinivalue_line("markers", "gup: Tests related to the deformed oscillator")
    config.addinivalue_line("markers", "protocol: Tests related to the four-pulse schedule and phases")
    config.addinivalue_line("markers", "zassenhaus: Tests related to the Zassenhaus factorization")
    config.addinivalue_line("markers", "bounds: Tests related to readout and beta0 bounds")
    config.addinivalue_line("markers", "cli: Tests related to the command-line front end")
    config.addinivalue_line("markers", "verify: Tests related to the acceptance suites")
    config.addinivalue_line("markers", "exceptions: Tests related to exception handling")


AREA_MARKERS: dict[str, str] = {
    "test_units": "units",
    "test_fock": "fock",
    "test_gup": "gup",
    "test_protocol": "protocol",
    "test_zassenhaus": "zassenhaus",
    "test_bounds": "bounds",
    "test_cli": "cli",
    "test_verify": "verify",
    "test_exceptions": "exceptions",
}


def pytest_collection_modifyitems(config, items):
    """Automatically add markers based on test file location."""
    for item in items:
        path = str(item.fspath)
        for folder, marker in AREA_MARKERS.items():
            if folder in path:
                item.add_marker(getattr(pytest.mark, marker))
                break

        if "test_cli" in path:
            item.add_marker(pytest.mark.integration)
        elif "slow" not in item.keywords:
            item.add_marker(pytest.mark.unit)


# -------- fixtures --------


@pytest.fixture(autouse=True)
def patch_settings(monkeypatch, tmp_path):
    # Keep numerical settings deterministic regardless of the developer's environment
    from gupsim import config as cfg

    monkeypatch.setattr(cfg.settings, "catalog", None, raising=True)
    monkeypatch.setattr(cfg.settings, "precision_bits", 256, raising=True)
    monkeypatch.setattr(cfg.settings, "default_dim", 64, raising=True)
    monkeypatch.setattr(cfg.settings, "max_dim", 1024, raising=True)
    monkeypatch.setattr(cfg.settings, "convergence_rtol", 1e-8, raising=True)
    monkeypatch.setattr(cfg.settings, "unitarity_tol", 1e-10, raising=True)
    monkeypatch.setattr(cfg.settings, "wrap_error_limit", 1e-6, raising=True)
    monkeypatch.setattr(cfg.settings, "interior_fraction", 0.25, raising=True)
    monkeypatch.setattr(cfg.settings, "nu_tp_warn", 0.05, raising=True)

    # Keep the per-user catalog lookup inside tmp_path
    import gupsim.bounds as bounds

    monkeypatch.setattr(bounds, "user_config_dir", lambda *args, **kwargs: str(tmp_path), raising=True)
