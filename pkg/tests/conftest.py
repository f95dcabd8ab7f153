"""
Shared fixtures and brute-force oracles
"""
import itertools
import math
from typing import Tuple

import numpy as np
import pytest

from src.mrf import MrfTopology


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def random_problem(
    rng: np.random.Generator,
    m: int,
    n: int,
    sigma2: float = 0.5,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """(A, y, v, sigma2) with SCG A and y and v drawn from [0.1, 10]"""
    A = (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / math.sqrt(2)
    y = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / math.sqrt(2)
    v = rng.uniform(0.1, 10.0, size=n)
    return A, y, v, sigma2


def direct_posterior(A: np.ndarray, y: np.ndarray, v: np.ndarray, sigma2: float) -> Tuple[np.ndarray, np.ndarray]:
    """Primal form (σ^{-2} A^H A + D^{-1})^{-1}; only valid for v > 0"""
    phi = np.linalg.inv(A.conj().T @ A / sigma2 + np.diag(1.0 / v))
    m = phi @ A.conj().T @ y / sigma2
    return m, phi


def enumerate_cavity(pi_in: np.ndarray, topo: MrfTopology, alpha: float, beta: float) -> np.ndarray:
    """
    P(s_i = +1) under Π e^{-α s_k} Π_edges e^{β s_j s_k} Π_{k≠i} ν_k(s_k)

    Exhaustive over {-1, +1}^N; keep N small.
    """
    n = topo.n
    undirected = [(j, i) for j, i in topo.edges if j < i]
    out = np.zeros(n)
    states = np.array(list(itertools.product((-1, 1), repeat=n)))
    log_prior = -alpha * states.sum(axis=1)
    for j, i in undirected:
        log_prior = log_prior + beta * states[:, j] * states[:, i]
    with np.errstate(divide="ignore"):
        log_nu = np.where(states > 0, np.log(pi_in), np.log1p(-pi_in))
    for i in range(n):
        cavity = log_nu.sum(axis=1) - log_nu[:, i]
        weights = np.exp(log_prior + cavity)
        out[i] = weights[states[:, i] > 0].sum() / weights.sum()
    return out
