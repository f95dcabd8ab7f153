"""
ELBO (EM) solver for the variance means

Each round recomputes the posterior at the current means and sets
μ_i = |m_i|² + φ_ii for every i at once, the exact maximizer of the
evidence lower bound with q(x) fixed to the current posterior.
"""
import logging
from typing import Optional

import numpy as np

from .gaussian_posterior import apply_floor, check_problem, chi, posterior_moments, variance_floor
from .solver_output import SolverOutput

logger = logging.getLogger(__name__)


def elbo_solve(
    A: np.ndarray,
    y: np.ndarray,
    mu_in: np.ndarray,
    t_in: int,
    sigma2: float,
    track_chi: bool = False,
    tolerance: Optional[float] = None,
) -> SolverOutput:
    """
    Run t_in simultaneous fixed-point updates μ_i <- |m_i|² + φ_ii

    Coordinates that are exactly zero stay zero.

    Args:
        A: M x N measurement matrix
        y: length-M measurements
        mu_in: starting variance means (>= 0)
        t_in: number of rounds (>= 1)
        sigma2: noise variance
        track_chi: record χ (with the positive floor applied) every round
        tolerance: stop once the largest absolute change drops below it

    Returns:
        SolverOutput
    """
    if t_in < 1:
        raise ValueError(f"t_in must be >= 1, got {t_in}")
    A, y, mu = check_problem(A, y, mu_in, sigma2)

    floor = variance_floor(mu)
    out = SolverOutput(mu=mu)
    if track_chi:
        out.chi_trace.append(chi(A, y, apply_floor(mu, floor), sigma2))

    for t in range(t_in):
        pm = posterior_moments(A, y, mu, sigma2)
        updated = np.abs(pm.m) ** 2 + pm.phi_diag
        change = float(np.max(np.abs(updated - mu))) if mu.size else 0.0
        mu = updated
        out.accepted.append(True)
        if track_chi:
            out.chi_trace.append(chi(A, y, apply_floor(mu, floor), sigma2))
        if tolerance is not None and change < tolerance:
            logger.debug(f"ELBO converged after {t + 1} rounds (change {change:.3g})")
            break

    out.mu = mu
    return out
