"""
Linear module - posterior moments and the two inner solvers
"""
from .gaussian_posterior import (
    PosteriorMoments,
    apply_floor,
    check_problem,
    chi,
    chi_gradient,
    posterior_moments,
    variance_floor,
)
from .gd_solver import gd_solve
from .elbo_solver import elbo_solve
from .solver_output import SolverOutput

__all__ = [
    'PosteriorMoments',
    'apply_floor',
    'check_problem',
    'chi',
    'chi_gradient',
    'posterior_moments',
    'variance_floor',
    'gd_solve',
    'elbo_solve',
    'SolverOutput',
]
