"""
Linear module - Gaussian posterior of x given the variances v

Everything goes through the dual (Woodbury) form

    C = A D A^H + σ² I            (M x M)
    Φ = D - D A^H C^{-1} A D
    m = D A^H C^{-1} y            (= σ^{-2} Φ A^H y)

which stays well defined when some v_i are exactly zero and costs
O(M³ + M²N) instead of an N x N inversion.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as la

from ..core.errors import DimensionError, DomainError, SingularSystemError

logger = logging.getLogger(__name__)

FLOOR_SCALE = 1e-12


@dataclass
class PosteriorMoments:
    """
    Moments of p(x | y, v)

    Attributes:
        m: posterior mean (length N, complex)
        phi_diag: diagonal of the posterior covariance Φ
        phi: full Φ, only when requested
        logdet_c: ln det(A D A^H + σ² I)
        data_term: Re(y^H A m), equal to σ² m^H Φ^{-1} m
    """
    m: np.ndarray
    phi_diag: np.ndarray
    phi: Optional[np.ndarray] = None
    logdet_c: float = math.nan
    data_term: float = math.nan


def check_problem(
    A: np.ndarray,
    y: np.ndarray,
    v: np.ndarray,
    sigma2: float,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Coerce (A, y, v) to complex/complex/real arrays and validate them

    Raises:
        DimensionError: inconsistent shapes
        DomainError: negative or non-finite variances, sigma2 <= 0,
            non-finite A or y
    """
    A = np.asarray(A, dtype=complex)
    y = np.asarray(y, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    if A.ndim != 2:
        raise DimensionError(f"A must be a matrix, got {A.ndim} dimensions")
    m_rows, n_cols = A.shape
    if y.shape[0] != m_rows:
        raise DimensionError(f"y has length {y.shape[0]} but A has {m_rows} rows")
    if v.shape[0] != n_cols:
        raise DimensionError(f"v has length {v.shape[0]} but A has {n_cols} columns")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        raise DomainError("A and y must be finite")
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        raise DomainError("variances must be finite and nonnegative")
    if not sigma2 > 0:
        raise DomainError(f"sigma2 must be positive, got {sigma2}")
    return A, y, v


def variance_floor(v: np.ndarray) -> float:
    """Smallest variance the solvers let χ see: 1e-12 x max(max(v), 1)"""
    top = float(np.max(v)) if np.size(v) else 0.0
    return FLOOR_SCALE * max(top, 1.0)


def apply_floor(v: np.ndarray, floor: Optional[float] = None) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return np.maximum(v, variance_floor(v) if floor is None else floor)


def _factorize(A: np.ndarray, v: np.ndarray, sigma2: float) -> Tuple[np.ndarray, np.ndarray]:
    AD = A * v[np.newaxis, :]
    cov = AD @ A.conj().T
    cov[np.diag_indices_from(cov)] += sigma2
    try:
        chol = la.cholesky(cov, lower=True, check_finite=True)
    except (la.LinAlgError, ValueError) as e:
        raise SingularSystemError(f"A D A^H + σ²I could not be factorized: {e}") from e
    return chol, AD


def posterior_moments(
    A: np.ndarray,
    y: np.ndarray,
    v: np.ndarray,
    sigma2: float,
    full: bool = False,
) -> PosteriorMoments:
    """
    Posterior mean and covariance of x for prior variances v

    Args:
        A: M x N measurement matrix
        y: length-M measurements
        v: length-N prior variances, exact zeros allowed
        sigma2: noise variance (> 0)
        full: also materialize the N x N covariance

    Returns:
        PosteriorMoments
    """
    A, y, v = check_problem(A, y, v, sigma2)
    chol, AD = _factorize(A, v, sigma2)

    # W^H W = D A^H C^{-1} A D
    W = la.solve_triangular(chol, AD, lower=True)
    z = la.solve_triangular(chol, y, lower=True)
    m = W.conj().T @ z

    phi_diag = v - np.sum(np.abs(W) ** 2, axis=0)
    phi_diag = np.clip(phi_diag, 0.0, v)

    phi = None
    if full:
        phi = np.diag(v).astype(complex) - W.conj().T @ W

    return PosteriorMoments(
        m=m,
        phi_diag=phi_diag,
        phi=phi,
        logdet_c=2.0 * float(np.sum(np.log(np.diag(chol).real))),
        data_term=float(np.vdot(y, A @ m).real),
    )


def _require_positive(v: np.ndarray) -> None:
    if np.any(v <= 0):
        raise DomainError("χ is only defined for strictly positive variances; floor them first")


def chi(A: np.ndarray, y: np.ndarray, v: np.ndarray, sigma2: float) -> float:
    """
    χ(v) = -m^H Φ^{-1} m - ln|Φ| + Σ ln v_i

    The negative log-evidence up to a v-independent constant:
    χ(v) - χ(v') = ln p(y|v') - ln p(y|v). Evaluated as
    -σ^{-2} Re(y^H A m) - ln|Φ| + Σ ln v_i with
    ln|Φ| = Σ ln v_i - ln|C| + M ln σ² (Sylvester).

    Raises:
        DomainError: any v_i <= 0
    """
    A, y, v = check_problem(A, y, v, sigma2)
    _require_positive(v)
    pm = posterior_moments(A, y, v, sigma2)
    sum_log_v = float(np.sum(np.log(v)))
    logdet_phi = sum_log_v - pm.logdet_c + A.shape[0] * math.log(sigma2)
    return -pm.data_term / sigma2 - logdet_phi + sum_log_v


def chi_gradient(A: np.ndarray, y: np.ndarray, v: np.ndarray, sigma2: float) -> np.ndarray:
    """
    ∂χ/∂v_i = -|y^H A u_i|² / (σ⁴ v_i²) - φ_ii / v_i² + 1 / v_i

    u_i is the i-th column of Φ, so y^H A u_i / σ² is conj(m_i) and the
    first term is |m_i|² / v_i². The three terms are combined as
    (v_i - |m_i|² - φ_ii) / v_i², which vanishes exactly at the ELBO
    fixed point v_i = |m_i|² + φ_ii.

    Raises:
        DomainError: any v_i <= 0
    """
    A, y, v = check_problem(A, y, v, sigma2)
    _require_positive(v)
    pm = posterior_moments(A, y, v, sigma2)
    return (v - np.abs(pm.m) ** 2 - pm.phi_diag) / v ** 2
