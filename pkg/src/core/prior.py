"""
Elementary densities of the hierarchical prior and the CSCG likelihood
"""
import math
from typing import Union

import numpy as np
import scipy.linalg as la
from scipy.special import gammaln

from .errors import DomainError
from .models.vsp_config import GammaParams

ArrayLike = Union[float, np.ndarray]


def gamma_pdf(v: ArrayLike, p: GammaParams) -> ArrayLike:
    """
    Gamma(v; a, b) density with rate parameterization

    Evaluated in log space so that a = 1e-10 does not overflow Γ(a).
    Zero for v <= 0.

    Args:
        v: scalar or array of evaluation points
        p: shape/rate parameters

    Returns:
        Density values, same shape as v (float for scalar input)
    """
    v_arr = np.asarray(v, dtype=float)
    out = np.zeros_like(v_arr)
    pos = v_arr > 0
    if np.any(pos):
        vp = v_arr[pos]
        log_pdf = p.a * math.log(p.b) + (p.a - 1.0) * np.log(vp) - p.b * vp - gammaln(p.a)
        out[pos] = np.exp(log_pdf)
    if np.ndim(v) == 0:
        return float(out)
    return out


def sample_block_prior(
    n: int,
    p: GammaParams,
    rho: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Draw n i.i.d. variances from the Bernoulli-Gamma marginal

    Each entry is Gamma(a, b) with probability rho and exactly 0 otherwise.
    Only used by generative property tests; the outer loop never samples.

    Raises:
        DomainError: n < 1 or rho outside [0, 1]
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [0, 1], got {rho}")
    active = rng.random(n) < rho
    slab = rng.gamma(shape=p.a, scale=1.0 / p.b, size=n)
    return np.where(active, slab, 0.0)


def cscg_loglik(y: np.ndarray, cov: np.ndarray) -> float:
    """
    ln CN(y; 0, Σ) = -y^H Σ^{-1} y - ln det(πΣ)

    Args:
        y: length-M complex vector
        cov: M x M Hermitian positive definite covariance

    Returns:
        Log-density (real)

    Raises:
        DomainError: covariance is not Hermitian positive definite
    """
    y = np.asarray(y, dtype=complex).reshape(-1)
    cov = np.asarray(cov, dtype=complex)
    m = y.shape[0]
    if cov.shape != (m, m):
        raise DomainError(f"covariance shape {cov.shape} does not match y of length {m}")
    scale = max(float(np.max(np.abs(cov))), 1.0)
    if not np.allclose(cov, cov.conj().T, rtol=0.0, atol=1e-10 * scale):
        raise DomainError("covariance is not Hermitian")
    try:
        chol = la.cholesky(cov, lower=True)
    except la.LinAlgError as e:
        raise DomainError(f"covariance is not positive definite: {e}") from e
    z = la.solve_triangular(chol, y, lower=True)
    quad = float(np.vdot(z, z).real)
    logdet = 2.0 * float(np.sum(np.log(np.diag(chol).real)))
    return -quad - m * math.log(math.pi) - logdet
