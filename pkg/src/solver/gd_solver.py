"""
Gradient-descent solver for the variance means

All coordinates move along -∇χ with one common step size chosen by
backtracking; a step is accepted only if χ does not increase.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from ..core.models.vsp_config import LineSearchParams
from .gaussian_posterior import check_problem, chi, chi_gradient, variance_floor
from .solver_output import SolverOutput

logger = logging.getLogger(__name__)


def _backtrack(
    A: np.ndarray,
    y: np.ndarray,
    mu: np.ndarray,
    grad: np.ndarray,
    chi_old: float,
    sigma2: float,
    floor: float,
    ls: LineSearchParams,
) -> Optional[Tuple[float, np.ndarray, float]]:
    """Largest eps0 * shrink^k whose clamped step satisfies χ(new) <= χ(old)"""
    for k in range(ls.max_halvings + 1):
        eps = ls.eps0 * ls.shrink ** k
        candidate = np.maximum(mu - eps * grad, floor)
        value = chi(A, y, candidate, sigma2)
        if value <= chi_old:
            return eps, candidate, value
    return None


def _skip_remaining(out: SolverOutput, count: int) -> None:
    """Record count no-op rounds (μ unchanged, step 0.0)"""
    out.accepted.extend([False] * count)
    out.step_sizes.extend([0.0] * count)


def gd_solve(
    A: np.ndarray,
    y: np.ndarray,
    mu_in: np.ndarray,
    t_in: int,
    sigma2: float,
    ls: Optional[LineSearchParams] = None,
    tolerance: Optional[float] = None,
) -> SolverOutput:
    """
    Run t_in rounds of μ <- max(μ - ε∇χ(μ), floor)

    Args:
        A: M x N measurement matrix
        y: length-M measurements
        mu_in: starting variance means (>= 0; zeros are lifted to the floor)
        t_in: number of rounds (>= 1)
        sigma2: noise variance
        ls: backtracking parameters (defaults: eps0=1, shrink=0.5, 40 halvings)
        tolerance: optional relative χ-change early exit

    Returns:
        SolverOutput with the final μ (every entry >= floor > 0)
    """
    if t_in < 1:
        raise ValueError(f"t_in must be >= 1, got {t_in}")
    ls = ls or LineSearchParams()
    A, y, mu = check_problem(A, y, mu_in, sigma2)

    floor = variance_floor(mu)
    mu = np.maximum(mu, floor)
    chi_old = chi(A, y, mu, sigma2)
    out = SolverOutput(mu=mu, chi_trace=[chi_old])

    for t in range(t_in):
        grad = chi_gradient(A, y, mu, sigma2)
        if not np.any(grad):
            logger.debug(f"GD round {t}: zero gradient, stationary")
            _skip_remaining(out, t_in - t)
            break

        found = _backtrack(A, y, mu, grad, chi_old, sigma2, floor, ls)
        if found is None:
            # every remaining round would retry the same point
            logger.debug(f"GD round {t}: no step within {ls.max_halvings} halvings")
            _skip_remaining(out, t_in - t)
            break

        eps, mu, chi_new = found
        out.accepted.append(True)
        out.step_sizes.append(eps)
        out.chi_trace.append(chi_new)

        converged = (
            tolerance is not None
            and abs(chi_old - chi_new) <= tolerance * max(abs(chi_old), 1.0)
        )
        chi_old = chi_new
        if converged:
            logger.debug(f"GD converged after {t + 1} rounds")
            break

    out.mu = mu
    return out
