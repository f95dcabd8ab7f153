"""
Synthetic block-sparse signals and measurement matrices
"""
import math
from typing import List, Tuple, Union

import numpy as np

from ..core.errors import DomainError, InfeasibleGeometryError
from ..core.models.experiment import MatrixKind

MAX_REDRAWS = 100


def scg(shape: Union[int, Tuple[int, ...]], rng: np.random.Generator) -> np.ndarray:
    """Standard circularly-symmetric complex Gaussian samples (E|z|² = 1)"""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def block_sizes(k: int, proportions: np.ndarray) -> List[int]:
    """B_l = ceil(K r_l) for all but the last block, which takes the remainder"""
    sizes = [int(math.ceil(k * r)) for r in proportions[:-1]]
    sizes.append(k - sum(sizes))
    return sizes


def super_block_edges(n: int, proportions: np.ndarray) -> List[int]:
    """Boundaries 0 = e_0 <= ... <= e_L = N of the L super-blocks"""
    cumulative = np.cumsum(proportions)[:-1]
    inner = [int(math.floor(n * c + 0.5)) for c in cumulative]
    return [0] + inner + [n]


def gen_block_sparse_signal(
    n: int,
    k: int,
    l: int,
    rng: np.random.Generator,
    max_redraws: int = MAX_REDRAWS,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw an x with exactly K nonzeros split into L blocks

    Proportions r are uniform on the simplex (normalized exponentials). The
    same r sizes both the blocks and the L super-blocks partitioning
    [0, N); each block sits uniformly at random inside its super-block.

    Args:
        n: signal length
        k: number of nonzeros
        l: number of blocks
        rng: random generator

    Returns:
        (x, support) with x complex of length N and support sorted ascending

    Raises:
        DomainError: unless 1 <= L <= K <= N
        InfeasibleGeometryError: no feasible layout after max_redraws draws
    """
    if not 1 <= l <= k <= n:
        raise DomainError(f"need 1 <= L <= K <= N, got N={n} K={k} L={l}")

    for _ in range(max_redraws):
        r = rng.exponential(size=l)
        r /= r.sum()
        sizes = block_sizes(k, r)
        if sizes[-1] <= 0:
            continue
        edges = super_block_edges(n, r)
        if any(size > edges[i + 1] - edges[i] for i, size in enumerate(sizes)):
            continue

        support: List[int] = []
        for i, size in enumerate(sizes):
            start = int(rng.integers(edges[i], edges[i + 1] - size + 1))
            support.extend(range(start, start + size))
        support_arr = np.asarray(support, dtype=int)
        x = np.zeros(n, dtype=complex)
        x[support_arr] = scg(k, rng)
        return x, support_arr

    raise InfeasibleGeometryError(
        f"could not place K={k} nonzeros in L={l} blocks within N={n} after {max_redraws} draws"
    )


def _exp_part(shape: Tuple[int, int], rate: float, rng: np.random.Generator) -> np.ndarray:
    return rng.exponential(scale=1.0 / rate, size=shape)


def gen_matrix(
    kind: Union[MatrixKind, str],
    m: int,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Draw an M x N measurement matrix

    Kinds:
        scg: i.i.d. standard complex Gaussian
        cropped_hermitian: first M rows of A1 A1^H, A1 an N x N SCG matrix
        concat_exp_gauss: [SCG | Exp(3) + j Exp(3)] column halves
        concat_exp: [Exp(3) | Exp(1)] real column halves
        real_normal: i.i.d. standard normal, zero imaginary part

    Raises:
        DomainError: unknown kind, M outside [1, N], odd N for a concat kind
    """
    try:
        kind = MatrixKind(kind)
    except ValueError:
        raise DomainError(
            f"unknown matrix kind '{kind}'. Valid kinds: {', '.join(MatrixKind.names())}"
        ) from None
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= M <= N, got M={m} N={n}")

    if kind == MatrixKind.SCG:
        return scg((m, n), rng)
    if kind == MatrixKind.CROPPED_HERMITIAN:
        a1 = scg((n, n), rng)
        return (a1 @ a1.conj().T)[:m, :]
    if kind == MatrixKind.REAL_NORMAL:
        return rng.standard_normal((m, n)).astype(complex)

    if n % 2:
        raise DomainError(f"matrix kind {kind.value} requires even N, got {n}")
    half = (m, n // 2)
    if kind == MatrixKind.CONCAT_EXP_GAUSS:
        left = scg(half, rng)
        right = _exp_part(half, 3.0, rng) + 1j * _exp_part(half, 3.0, rng)
    else:
        left = _exp_part(half, 3.0, rng).astype(complex)
        right = _exp_part(half, 1.0, rng).astype(complex)
    return np.hstack([left, right])
