"""
Tests for the gradient-descent variance solver
"""
import numpy as np
import pytest

from src.core.models import LineSearchParams
from src.solver import chi, chi_gradient, gd_solve, gd_solver, variance_floor
from tests.conftest import random_problem


class TestGdSolve:

    def test_stationary_input_is_kept(self):
        mu = np.array([0.5, 2.0, 3.0])
        out = gd_solve(np.zeros((2, 3)), np.zeros(2), mu, t_in=10, sigma2=1.0)
        np.testing.assert_array_equal(out.mu, mu)
        assert out.accepted == [False] * 10
        assert out.step_sizes == [0.0] * 10

    def test_failed_line_search_fills_remaining_rounds(self, rng, mocker):
        A, y, v, sigma2 = random_problem(rng, 4, 8)
        real = gd_solver._backtrack
        calls = []

        def fail_on_third(*args):
            calls.append(1)
            return None if len(calls) == 3 else real(*args)

        mocker.patch("src.solver.gd_solver._backtrack", side_effect=fail_on_third)
        out = gd_solve(A, y, v, t_in=12, sigma2=sigma2)
        assert out.rounds == 12
        assert out.accepted == [True, True] + [False] * 10
        assert out.step_sizes[2:] == [0.0] * 10
        assert out.accepted_steps == 2
        assert len(out.chi_trace) == 3

    @pytest.mark.parametrize("seed", range(20))
    def test_chi_is_nonincreasing(self, seed):
        rng = np.random.default_rng(200 + seed)
        m = int(rng.integers(2, 9))
        n = int(rng.integers(m, 17))
        A, y, v, sigma2 = random_problem(rng, m, n)
        out = gd_solve(A, y, v, t_in=50, sigma2=sigma2)
        trace = np.array(out.chi_trace)
        assert np.all(np.diff(trace) <= 0.0)
        assert chi(A, y, out.mu, sigma2) == trace[-1]

    def test_output_is_floored(self, rng):
        A, y, v, sigma2 = random_problem(rng, 4, 10)
        v[:3] = 0.0
        out = gd_solve(A, y, v, t_in=20, sigma2=sigma2)
        assert np.all(out.mu >= variance_floor(v))
        assert np.all(out.mu > 0)

    def test_first_step_moves_along_negative_gradient(self, rng):
        A, y, v, sigma2 = random_problem(rng, 4, 8)
        grad = chi_gradient(A, y, v, sigma2)
        out = gd_solve(A, y, v, t_in=1, sigma2=sigma2)
        assert out.accepted == [True]
        eps = out.step_sizes[0]
        expected = np.maximum(v - eps * grad, variance_floor(v))
        np.testing.assert_allclose(out.mu, expected, rtol=0, atol=1e-12)

    def test_step_sizes_come_from_the_backtracking_ladder(self, rng):
        A, y, v, sigma2 = random_problem(rng, 4, 8)
        ls = LineSearchParams(eps0=2.0, shrink=0.5, max_halvings=40)
        out = gd_solve(A, y, v, t_in=10, sigma2=sigma2, ls=ls)
        for eps, ok in zip(out.step_sizes, out.accepted):
            if ok:
                k = np.log(ls.eps0 / eps) / np.log(2.0)
                assert k == pytest.approx(round(k), abs=1e-9)

    def test_reaches_grid_search_minimum(self):
        A = np.array([[1.0, 1.0]])
        y = np.array([3.0])
        sigma2 = 1.0
        out = gd_solve(A, y, np.array([1.0, 1.0]), t_in=500, sigma2=sigma2)

        grid = np.linspace(0.01, 10.0, 100)
        best = min(chi(A, y, np.array([a, b]), sigma2) for a in grid for b in grid)
        assert chi(A, y, out.mu, sigma2) == pytest.approx(best, abs=1e-3)

    def test_tolerance_stops_early(self, rng):
        A, y, v, sigma2 = random_problem(rng, 4, 8)
        out = gd_solve(A, y, v, t_in=5000, sigma2=sigma2, tolerance=1e-4)
        assert out.rounds < 5000

    def test_rejects_zero_rounds(self, rng):
        A, y, v, sigma2 = random_problem(rng, 2, 3)
        with pytest.raises(ValueError):
            gd_solve(A, y, v, t_in=0, sigma2=sigma2)
