"""
SNR calibration, error metrics and the LMMSE reference estimators
"""
import math
from typing import Sequence, Union

import numpy as np
import scipy.linalg as la

from ..core.errors import DomainError, SingularSystemError
from ..core.models.experiment import SnrConvention


def sigma_for_snr(A: np.ndarray, x: np.ndarray, snr_db: float) -> float:
    """
    σ with 20 log10(‖Ax‖ / σ) = snr_db

    Raises:
        DomainError: Ax = 0
    """
    power = float(np.linalg.norm(np.asarray(A) @ np.asarray(x)))
    if power == 0.0:
        raise DomainError("Ax is zero; SNR is undefined")
    return power * 10.0 ** (-snr_db / 20.0)


def noise_std(sigma: float, m: int, convention: Union[SnrConvention, str] = SnrConvention.TOTAL) -> float:
    """
    Per-component noise standard deviation

    TOTAL: σ/√M so that E‖w‖² = σ²; PER_COMPONENT: σ itself.
    """
    if SnrConvention(convention) == SnrConvention.TOTAL:
        return sigma / math.sqrt(m)
    return sigma


def draw_noise(m: int, std: float, rng: np.random.Generator) -> np.ndarray:
    """CN(0, std² I) noise of length m"""
    return std * (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / math.sqrt(2.0)


def nmse(x_hat: np.ndarray, x: np.ndarray) -> float:
    """
    ‖x̂ - x‖² / ‖x‖²

    Raises:
        DomainError: x = 0
    """
    x = np.asarray(x)
    ref = float(np.vdot(x, x).real)
    if ref == 0.0:
        raise DomainError("reference signal is zero; NMSE is undefined")
    diff = np.asarray(x_hat) - x
    return float(np.vdot(diff, diff).real) / ref


def to_db(value: float) -> float:
    return 10.0 * math.log10(value) if value > 0 else -math.inf


def nmse_db(x_hat: np.ndarray, x: np.ndarray) -> float:
    return to_db(nmse(x_hat, x))


def genie_lmmse(
    y: np.ndarray,
    A: np.ndarray,
    support: Sequence[int],
    sigma2: float,
) -> np.ndarray:
    """
    LMMSE estimate with the support known and unit-variance coefficients

    x̂_S = A_S^H (A_S A_S^H + σ² I)^{-1} y, zeros elsewhere.

    Raises:
        DomainError: empty support or sigma2 <= 0
    """
    A = np.asarray(A, dtype=complex)
    y = np.asarray(y, dtype=complex).reshape(-1)
    idx = np.asarray(support, dtype=int)
    if idx.size == 0:
        raise DomainError("support must be nonempty")
    if not sigma2 > 0:
        raise DomainError(f"sigma2 must be positive, got {sigma2}")

    a_s = A[:, idx]
    gram = a_s @ a_s.conj().T + sigma2 * np.eye(A.shape[0])
    try:
        factor = la.cho_factor(gram, lower=True)
    except la.LinAlgError as e:
        raise SingularSystemError(f"genie system not positive definite: {e}") from e
    x_hat = np.zeros(A.shape[1], dtype=complex)
    x_hat[idx] = a_s.conj().T @ la.cho_solve(factor, y)
    return x_hat


def lmmse_estimate(y: np.ndarray, A: np.ndarray, sigma2: float) -> np.ndarray:
    """LMMSE with every coordinate treated as active (all-ones variances)"""
    return genie_lmmse(y, A, np.arange(np.asarray(A).shape[1]), sigma2)
