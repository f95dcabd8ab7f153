"""
One synthetic problem y = A x + w drawn from a single seed
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..core.models.experiment import MatrixKind, SnrConvention
from .generators import gen_block_sparse_signal, gen_matrix
from .metrics import draw_noise, noise_std, sigma_for_snr


@dataclass(frozen=True)
class ProblemInstance:
    """
    Attributes:
        x: ground-truth signal
        support: indices of the nonzeros
        A: measurement matrix
        w: noise realization
        y: A x + w
        sigma: σ of the SNR definition
        sigma2: per-component noise variance handed to the solver
    """
    x: np.ndarray
    support: np.ndarray
    A: np.ndarray
    w: np.ndarray
    y: np.ndarray
    sigma: float
    sigma2: float

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    @property
    def m(self) -> int:
        return int(self.y.shape[0])


def measure(
    x: np.ndarray,
    support: np.ndarray,
    A: np.ndarray,
    snr_db: float,
    convention: Union[SnrConvention, str],
    rng: np.random.Generator,
) -> ProblemInstance:
    """Calibrate σ to the target SNR and add noise to A x"""
    sigma = sigma_for_snr(A, x, snr_db)
    std = noise_std(sigma, A.shape[0], convention)
    w = draw_noise(A.shape[0], std, rng)
    y = A @ x + w
    return ProblemInstance(x=x, support=support, A=A, w=w, y=y, sigma=sigma, sigma2=std ** 2)


def make_instance(
    n: int,
    m: int,
    k: int,
    l: int,
    snr_db: float,
    kind: Union[MatrixKind, str],
    convention: Union[SnrConvention, str],
    seed: int,
) -> ProblemInstance:
    """
    Draw x, then A, then w from one generator seeded with ``seed``

    The draw order is fixed so that a seed always reproduces the same instance.
    """
    rng = np.random.default_rng(seed)
    x, support = gen_block_sparse_signal(n, k, l, rng)
    A = gen_matrix(kind, m, n, rng)
    return measure(x, support, A, snr_db, convention, rng)
