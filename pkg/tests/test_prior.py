"""
Tests for the prior densities and the CSCG likelihood
"""
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import unitary_group

from src.core.errors import DomainError
from src.core.models import GammaParams
from src.core.prior import cscg_loglik, gamma_pdf, sample_block_prior


class TestGammaPdf:

    def test_zero_for_nonpositive(self):
        assert gamma_pdf(-1.0, GammaParams(a=2, b=3)) == 0.0
        assert gamma_pdf(0.0, GammaParams(a=2, b=3)) == 0.0

    def test_unit_exponential(self):
        assert gamma_pdf(1.0, GammaParams(a=1, b=1)) == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_mean_by_quadrature(self):
        p = GammaParams(a=3, b=2)
        mean, _ = quad(lambda v: v * gamma_pdf(v, p), 0, np.inf)
        assert mean == pytest.approx(1.5, abs=1e-8)

    @pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
    @pytest.mark.parametrize("b", [0.5, 1.0, 3.0])
    def test_integrates_to_one(self, a, b):
        p = GammaParams(a=a, b=b)
        total, _ = quad(lambda v: gamma_pdf(v, p), 0, np.inf, limit=200)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_tiny_shape_does_not_overflow(self):
        value = gamma_pdf(1.0, GammaParams())
        assert np.isfinite(value)
        assert value >= 0

    def test_vectorized(self):
        values = gamma_pdf(np.array([-1.0, 1.0, 2.0]), GammaParams(a=1, b=1))
        np.testing.assert_allclose(values, [0.0, math.exp(-1), math.exp(-2)], rtol=1e-12)


class TestSampleBlockPrior:

    def test_rho_zero_gives_zeros(self, rng):
        np.testing.assert_array_equal(sample_block_prior(4, GammaParams(a=2, b=1), 0.0, rng), np.zeros(4))

    def test_nonzero_fraction(self, rng):
        n, rho = 100_000, 0.3
        draws = sample_block_prior(n, GammaParams(a=2, b=1), rho, rng)
        assert np.all(draws >= 0)
        zeros = int(np.sum(draws == 0))
        sd = math.sqrt(n * rho * (1 - rho))
        assert abs(zeros - n * (1 - rho)) < 4 * sd
        assert np.mean(draws > 0) == pytest.approx(rho, abs=0.01)

    def test_slab_mean(self, rng):
        draws = sample_block_prior(100_000, GammaParams(a=2, b=1), 1.0, rng)
        assert draws.mean() == pytest.approx(2.0, abs=0.02)

    def test_rejects_bad_rho(self, rng):
        with pytest.raises(DomainError):
            sample_block_prior(4, GammaParams(), 1.5, rng)


class TestCscgLoglik:

    def test_zero_vector(self):
        assert cscg_loglik(np.zeros(3), np.eye(3)) == pytest.approx(-3 * math.log(math.pi))

    def test_scalar(self):
        assert cscg_loglik(np.array([1.0]), np.array([[1.0]])) == pytest.approx(-1 - math.log(math.pi))

    def test_scaled_identity(self, rng):
        y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        expected = -np.vdot(y, y).real / 2 - 3 * math.log(2 * math.pi)
        assert cscg_loglik(y, 2 * np.eye(3)) == pytest.approx(expected, rel=1e-12)

    def test_unitary_invariance(self, rng):
        n = 4
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        cov = B @ B.conj().T + np.eye(n)
        U = unitary_group.rvs(n, random_state=7)
        rotated = cscg_loglik(U @ y, U @ cov @ U.conj().T)
        assert rotated == pytest.approx(cscg_loglik(y, cov), abs=1e-10)

    def test_rejects_indefinite(self):
        with pytest.raises(DomainError):
            cscg_loglik(np.ones(2), np.array([[1.0, 0.0], [0.0, -1.0]]))
