"""
Tests for the deformed oscillator and the first-order Heisenberg position.
"""

import cmath
import math

import numpy as np
import pytest
from pydantic import ValidationError

from gupsim.exceptions import InvalidParameterError, TruncationError
from gupsim.fock import coherent_state, op_distance, quadratures
from gupsim.gup import (
    MONOMIALS,
    beta_from_beta0,
    deformed_h0,
    deformed_momentum,
    gup_params,
    heisenberg_coefficients,
    x_heisenberg_analytic,
    x_heisenberg_numeric,
    x_heisenberg_symbol,
)
from gupsim.models import GupParams


class TestGupParams:
    """Test the deformation parameter model."""

    def test_rejects_negative_beta0(self, natural):
        """Test beta0 < 0 is rejected."""
        with pytest.raises(InvalidParameterError):
            beta_from_beta0(-1.0, natural)

    def test_beta_vanishes_with_beta0(self):
        """Test beta and beta0 must vanish together."""
        with pytest.raises(ValidationError):
            GupParams(beta0=0.0, beta=1e-3, mass=1.0, trap_freq=1.0)
        with pytest.raises(ValidationError):
            GupParams(beta0=1.0, beta=0.0, mass=1.0, trap_freq=1.0)

    def test_gup_params_builds_beta(self, si_constants):
        """Test the helper converts beta0 with the constant table."""
        params = gup_params(1e33, 1e-25, 1e6, si_constants)
        assert params.beta == pytest.approx(beta_from_beta0(1e33, si_constants))
        assert params.mass == 1e-25


class TestDeformedOperators:
    """Test deformed momentum and Hamiltonian."""

    def test_deformed_momentum_reduces_at_zero_beta(self, natural_scales):
        """Test p_hat = p when beta = 0."""
        _, p = quadratures(12, natural_scales)
        np.testing.assert_allclose(deformed_momentum(p, 0.0).entries, p.entries)

    def test_deformed_momentum_cubic_term(self, natural_scales):
        """Test p_hat - p = beta p^3 / 3."""
        _, p = quadratures(12, natural_scales)
        beta = 1e-2
        diff = deformed_momentum(p, beta).entries - p.entries
        np.testing.assert_allclose(diff, beta / 3 * (p.entries @ p.entries @ p.entries), atol=1e-14)

    def test_harmonic_spectrum(self, beta_free, natural_scales):
        """Test H0 = n + 1/2 away from the edge when beta = 0."""
        h = deformed_h0(beta_free, natural_scales, 24)
        np.testing.assert_allclose(np.diag(h.entries)[:20].real, np.arange(20) + 0.5, atol=1e-12)

    def test_ground_state_shift(self, natural_gup, natural_scales):
        """Test <0|H0|0> = 1/2 + beta/4 since <0|p^4|0> = 3 p0^4."""
        h = deformed_h0(natural_gup, natural_scales, 32)
        assert h.entries[0, 0].real == pytest.approx(0.5 + natural_gup.beta / 4, rel=1e-12)
        assert h.hermitian


class TestHeisenbergPosition:
    """Test x(t) to first order in beta."""

    def test_coefficient_keys(self, natural_gup, natural_scales):
        """Test the first-order part carries every monomial."""
        harmonic, first_order = heisenberg_coefficients(0.5, natural_gup, natural_scales)
        assert set(harmonic) == {"a", "adag"}
        assert set(first_order) == set(MONOMIALS)

    def test_reduces_to_harmonic(self, beta_free, natural_scales):
        """Test x(t) = x0 (a e^{-i nu t} + a^dag e^{i nu t}) at beta = 0."""
        t = 0.9
        dim = 10
        x_t = x_heisenberg_analytic(t, beta_free, natural_scales, dim)
        a = np.diag(np.sqrt(np.arange(1, dim)), k=1)
        expected = natural_scales.x0 * (a * cmath.exp(-1j * t) + a.T * cmath.exp(1j * t))
        np.testing.assert_allclose(x_t.entries, expected, atol=1e-14)

    def test_initial_value(self, natural_gup, natural_scales):
        """Test x(0) = x for any beta."""
        x, _ = quadratures(12, natural_scales)
        x_0 = x_heisenberg_analytic(0.0, natural_gup, natural_scales, 12)
        np.testing.assert_allclose(x_0.entries, x.entries, atol=1e-14)

    def test_matches_numeric_conjugation(self, natural_gup, natural_scales):
        """Test the closed form agrees with exp(iHt) x exp(-iHt) far better than the first-order term itself."""
        dim = 64
        n_max = dim // 8
        t = 1.0
        beta_free = natural_gup.model_copy(update={"beta0": 0.0, "beta": 0.0})
        analytic = x_heisenberg_analytic(t, natural_gup, natural_scales, dim)
        numeric = x_heisenberg_numeric(t, natural_gup, natural_scales, dim)
        harmonic = x_heisenberg_analytic(t, beta_free, natural_scales, dim)
        first_order_size = op_distance(analytic, harmonic, n_max=n_max)
        assert op_distance(analytic, numeric, n_max=n_max) < 0.05 * first_order_size

    @pytest.mark.slow
    def test_second_order_residual(self, natural_scales):
        """Test the closed form misses x(t) only at second order in beta."""
        dim = 64
        n_max = dim // 8
        distances = []
        for beta in (1e-4, 1e-3):
            params = GupParams(beta0=beta, beta=beta, mass=1.0, trap_freq=1.0)
            analytic = x_heisenberg_analytic(0.5, params, natural_scales, dim)
            numeric = x_heisenberg_numeric(0.5, params, natural_scales, dim)
            distances.append(op_distance(analytic, numeric, n_max=n_max))
        slope = math.log10(distances[1] / distances[0])
        assert 1.8 <= slope <= 2.2

    def test_hermitian_at_random_times(self, natural_scales):
        """Test closed-form and numeric x(t) stay Hermitian at random times."""
        rng = np.random.default_rng(5)
        params = GupParams(beta0=1e-2, beta=1e-2, mass=1.0, trap_freq=1.0)
        for t in rng.uniform(0, 20, 100):
            analytic = x_heisenberg_analytic(float(t), params, natural_scales, 16)
            numeric = x_heisenberg_numeric(float(t), params, natural_scales, 16)
            assert analytic.hermiticity_defect() <= 1e-12 * np.linalg.norm(analytic.entries)
            assert numeric.hermiticity_defect() <= 1e-12 * np.linalg.norm(numeric.entries)

    def test_period_closes_only_without_beta(self, beta_free, natural_scales):
        """Test x(2 pi / nu) = x(0) at beta = 0 and the secular first-order part breaks it linearly in beta."""
        period = 2 * math.pi
        dim = 16
        x_0 = x_heisenberg_analytic(0.0, beta_free, natural_scales, dim)
        np.testing.assert_allclose(
            x_heisenberg_analytic(period, beta_free, natural_scales, dim).entries, x_0.entries, atol=1e-12
        )
        gaps = []
        for beta in (1e-4, 2e-4):
            params = GupParams(beta0=beta, beta=beta, mass=1.0, trap_freq=1.0)
            gaps.append(op_distance(x_heisenberg_analytic(period, params, natural_scales, dim), x_0))
            _, first_order = heisenberg_coefficients(period, params, natural_scales)
            assert abs(first_order["a3"]) < 1e-15
            assert abs(first_order["adag3"]) < 1e-15
            assert abs(first_order["a"]) > 0
        assert gaps[0] > 1e-6
        assert gaps[1] / gaps[0] == pytest.approx(2.0, rel=1e-9)

    def test_converged_numeric_keeps_start_dimension(self, beta_free, natural_scales):
        """Test a diagonal Hamiltonian converges at the first dimension tried."""
        x_t = x_heisenberg_numeric(0.9, beta_free, natural_scales, 16, converge=True)
        assert x_t.dim == 16
        expected = x_heisenberg_analytic(0.9, beta_free, natural_scales, 16)
        np.testing.assert_allclose(x_t.interior(4), expected.interior(4), atol=1e-12)

    def test_converged_numeric_hits_cap(self, natural_scales, monkeypatch):
        """Test a strong deformation on a tiny basis cannot converge under the cap."""
        from gupsim import config as cfg

        monkeypatch.setattr(cfg.settings, "max_dim", 16, raising=True)
        params = GupParams(beta0=0.1, beta=0.1, mass=1.0, trap_freq=1.0)
        with pytest.raises(TruncationError) as exc_info:
            x_heisenberg_numeric(1.0, params, natural_scales, 8, converge=True)
        assert exc_info.value.last_dim == 16
        assert exc_info.value.last_change > 1e-8


class TestHeisenbergSymbol:
    """Test coherent-state expectations of x(t)."""

    def test_harmonic_symbol(self, beta_free, natural_scales):
        """Test <z|x(t)|z> = 2 x0 Re(z e^{-i nu t}) at beta = 0."""
        z = 0.4 + 0.3j
        t = 0.8
        expected = 2 * natural_scales.x0 * (z * cmath.exp(-1j * t)).real
        assert x_heisenberg_symbol(t, beta_free, natural_scales, z) == pytest.approx(expected)

    def test_beta_only_vanishes_without_beta(self, beta_free, natural_scales):
        """Test the first-order symbol is zero at beta = 0."""
        assert x_heisenberg_symbol(1.2, beta_free, natural_scales, 1 + 1j, beta_only=True) == 0.0

    def test_symbol_matches_operator_on_coherent_state(self, natural_gup, natural_scales):
        """Test the symbol equals the expectation of the normal-ordered operator."""
        dim = 48
        z = 0.5 - 0.2j
        psi = coherent_state(z, dim)
        x_t = x_heisenberg_analytic(0.7, natural_gup, natural_scales, dim)
        expectation = np.vdot(psi, x_t.entries @ psi)
        assert x_heisenberg_symbol(0.7, natural_gup, natural_scales, z) == pytest.approx(expectation.real, abs=1e-12)
