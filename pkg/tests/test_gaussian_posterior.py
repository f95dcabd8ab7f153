"""
Tests for the linear module: posterior moments, χ and its gradient
"""
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from src.core.errors import DimensionError, DomainError
from src.core.prior import cscg_loglik
from src.solver import apply_floor, chi, chi_gradient, posterior_moments, variance_floor
from tests.conftest import direct_posterior, random_problem


def log_evidence(A, y, v, sigma2):
    cov = (A * v) @ A.conj().T + sigma2 * np.eye(A.shape[0])
    return cscg_loglik(y, cov)


class TestPosteriorMoments:

    def test_zero_variances_pin_to_zero(self, rng):
        A, y, _, sigma2 = random_problem(rng, 4, 8)
        pm = posterior_moments(A, y, np.zeros(8), sigma2)
        np.testing.assert_array_equal(pm.m, np.zeros(8))
        np.testing.assert_array_equal(pm.phi_diag, np.zeros(8))

    def test_scalar(self):
        pm = posterior_moments(np.array([[1.0]]), np.array([2.0]), np.array([1.0]), 1.0)
        assert pm.m[0] == pytest.approx(1.0)
        assert pm.phi_diag[0] == pytest.approx(0.5)

    @pytest.mark.parametrize("m,n", [(4, 8), (8, 16), (3, 3), (6, 2)])
    def test_matches_direct_form(self, rng, m, n):
        A, y, v, sigma2 = random_problem(rng, m, n)
        pm = posterior_moments(A, y, v, sigma2, full=True)
        m_ref, phi_ref = direct_posterior(A, y, v, sigma2)
        np.testing.assert_allclose(pm.m, m_ref, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(pm.phi, phi_ref, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(np.diag(pm.phi).real, pm.phi_diag, rtol=1e-10, atol=1e-12)

    def test_full_covariance_is_hermitian_psd(self, rng):
        A, y, v, sigma2 = random_problem(rng, 4, 8)
        phi = posterior_moments(A, y, v, sigma2, full=True).phi
        np.testing.assert_allclose(phi, phi.conj().T, atol=1e-12)
        assert np.min(np.linalg.eigvalsh(phi)) > -1e-10

    def test_posterior_variance_below_prior(self, rng):
        for _ in range(20):
            A, y, v, sigma2 = random_problem(rng, 5, 10)
            pm = posterior_moments(A, y, v, sigma2)
            assert np.all(pm.phi_diag >= 0)
            assert np.all(pm.phi_diag <= v + 1e-12)

    def test_partial_zero_variances(self, rng):
        A, y, v, sigma2 = random_problem(rng, 4, 8)
        v[[1, 5]] = 0.0
        pm = posterior_moments(A, y, v, sigma2)
        assert pm.m[1] == 0 and pm.m[5] == 0
        assert pm.phi_diag[1] == 0 and pm.phi_diag[5] == 0

    def test_dimension_mismatch(self, rng):
        A, y, v, sigma2 = random_problem(rng, 4, 8)
        with pytest.raises(DimensionError):
            posterior_moments(A, y[:3], v, sigma2)
        with pytest.raises(DimensionError):
            posterior_moments(A, y, v[:7], sigma2)

    def test_rejects_nonpositive_noise(self, rng):
        A, y, v, _ = random_problem(rng, 4, 8)
        with pytest.raises(DomainError):
            posterior_moments(A, y, v, 0.0)


class TestChi:

    def test_scalar(self):
        value = chi(np.array([[1.0]]), np.array([0.0]), np.array([1.0]), 1.0)
        assert value == pytest.approx(math.log(2.0), rel=1e-12)

    @pytest.mark.parametrize("seed", range(100))
    def test_differences_match_log_evidence(self, seed):
        rng = np.random.default_rng(seed)
        m = int(rng.integers(2, 9))
        n = int(rng.integers(2, 17))
        A, y, v, sigma2 = random_problem(rng, m, n)
        v2 = rng.uniform(0.1, 10.0, size=n)
        lhs = chi(A, y, v, sigma2) - chi(A, y, v2, sigma2)
        rhs = log_evidence(A, y, v2, sigma2) - log_evidence(A, y, v, sigma2)
        assert lhs == pytest.approx(rhs, abs=1e-8)

    def test_zero_data_removes_data_term(self, rng):
        A, _, v, sigma2 = random_problem(rng, 4, 8)
        phi = direct_posterior(A, np.zeros(4), v, sigma2)[1]
        expected = -np.linalg.slogdet(phi)[1] + np.sum(np.log(v))
        assert chi(A, np.zeros(4), v, sigma2) == pytest.approx(expected, abs=1e-9)

    def test_rejects_zero_variance(self, rng):
        A, y, v, sigma2 = random_problem(rng, 4, 8)
        v[0] = 0.0
        with pytest.raises(DomainError):
            chi(A, y, v, sigma2)
        with pytest.raises(DomainError):
            chi_gradient(A, y, v, sigma2)


class TestChiGradient:

    @pytest.mark.parametrize("seed", range(100))
    def test_finite_differences(self, seed):
        rng = np.random.default_rng(100 + seed)
        m = int(rng.integers(2, 9))
        n = int(rng.integers(2, 17))
        A, y, v, sigma2 = random_problem(rng, m, n)
        grad = chi_gradient(A, y, v, sigma2)
        for i in range(n):
            h = 1e-6 * v[i]
            up, down = v.copy(), v.copy()
            up[i] += h
            down[i] -= h
            fd = (chi(A, y, up, sigma2) - chi(A, y, down, sigma2)) / (2 * h)
            assert grad[i] == pytest.approx(fd, rel=1e-5, abs=1e-7)

    def test_zero_at_coordinate_fixed_point(self, rng):
        A, _, v, sigma2 = random_problem(rng, 4, 8)
        y = 20.0 * A[:, 0]

        def excess(t):
            w = v.copy()
            w[0] = t
            pm = posterior_moments(A, y, w, sigma2)
            return t - abs(pm.m[0]) ** 2 - pm.phi_diag[0]

        v[0] = brentq(excess, 1e-3, 1e4, xtol=1e-13)
        assert abs(chi_gradient(A, y, v, sigma2)[0]) < 1e-9

    def test_no_data_is_stationary(self):
        v = np.array([0.5, 2.0, 7.0])
        grad = chi_gradient(np.zeros((2, 3)), np.zeros(2), v, 1.0)
        np.testing.assert_allclose(grad, np.zeros(3), atol=1e-15)


class TestFloor:

    def test_floor_scale(self):
        assert variance_floor(np.array([0.0, 0.5])) == pytest.approx(1e-12)
        assert variance_floor(np.array([0.0, 100.0])) == pytest.approx(1e-10)

    def test_apply_floor(self):
        out = apply_floor(np.array([0.0, 3.0]))
        assert out[0] == pytest.approx(3e-12)
        assert out[1] == 3.0
