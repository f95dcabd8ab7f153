"""
Sum-product message passing on the Ising support MRF

Prior p(s) ∝ Π_i e^{-α s_i} Π_{(i,j)} e^{β s_i s_j}, evidence
ν_{f_i→s_i}(+1) = π_i. Messages are Bernoulli parameters; products are
accumulated in log space.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..core.errors import DimensionError, DomainError
from .topology import MessageBoard, MrfTopology

logger = logging.getLogger(__name__)


@dataclass
class MrfResult:
    """Output of a full MRF pass"""
    pi_out: np.ndarray
    board: MessageBoard
    sweeps_run: int
    converged: bool

    @property
    def degeneracies(self) -> int:
        return self.board.degeneracies


def _log_pair(p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """log p and log(1 - p); zeros map to -inf"""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(p), np.log1p(-p)


def _check_pi(pi_in: np.ndarray, topo: MrfTopology) -> np.ndarray:
    pi = np.asarray(pi_in, dtype=float).reshape(-1)
    if pi.shape[0] != topo.n:
        raise DimensionError(f"pi_in has length {pi.shape[0]}, topology has {topo.n} nodes")
    if not np.all(np.isfinite(pi)) or np.any(pi < 0) or np.any(pi > 1):
        raise DomainError("pi_in must lie in [0, 1]")
    return pi


def mrf_sweep(
    pi_in: np.ndarray,
    topo: MrfTopology,
    alpha: float,
    beta: float,
    board: MessageBoard,
    damping: float = 1.0,
) -> MessageBoard:
    """
    Recompute every directed message once, in raster order, in place

    For edge j -> i with P = π_j e^{-α} Π λ_{k→j}, Q = (1-π_j) e^{α} Π (1-λ_{k→j})
    over k in D_j \\ {i}:

        λ_{j→i} = (P e^{β} + Q e^{-β}) / ((e^{β} + e^{-β}) (P + Q))

    Later edges see the values written by earlier ones. A 0/0 ratio leaves
    an uninformative 0.5 and increments the degeneracy counter.

    Args:
        pi_in: evidence π_{f→s} per node
        topo: MRF topology
        alpha: sparsity bias
        beta: coupling strength (>= 0)
        board: messages from the previous sweep (not modified)
        damping: weight of the new value, 1.0 = undamped

    Returns:
        New MessageBoard
    """
    pi = _check_pi(pi_in, topo)
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    if not 0.0 < damping <= 1.0:
        raise DomainError(f"damping must lie in (0, 1], got {damping}")

    result = board.copy()
    values = result.values
    log_lam, log_lam_c = _log_pair(values)
    log_pi, log_pi_c = _log_pair(pi)
    log_norm = np.logaddexp(beta, -beta)
    degenerate = 0

    for e, (j, _) in enumerate(topo.edges):
        cav = list(topo.cavity[e])
        log_p = log_pi[j] - alpha + log_lam[cav].sum()
        log_q = log_pi_c[j] + alpha + log_lam_c[cav].sum()
        log_den = log_norm + np.logaddexp(log_p, log_q)
        if not np.isfinite(log_den):
            fresh = 0.5
            degenerate += 1
        else:
            log_num = np.logaddexp(log_p + beta, log_q - beta)
            fresh = float(np.clip(np.exp(log_num - log_den), 0.0, 1.0))
        values[e] = damping * fresh + (1.0 - damping) * values[e]
        log_lam[e], log_lam_c[e] = _log_pair(values[e])

    result.degeneracies += degenerate
    if degenerate:
        logger.warning(f"MRF sweep hit {degenerate} degenerate messages (reset to 0.5)")
    return result


def output_probabilities(board: MessageBoard, alpha: float) -> np.ndarray:
    """
    π_{s_i→f_i} = e^{-α} Π λ_{k→i} / (e^{-α} Π λ_{k→i} + e^{α} Π (1 - λ_{k→i}))

    Boundary nodes just have fewer factors.
    """
    topo = board.topology
    log_lam, log_lam_c = _log_pair(board.values)
    out = np.full(topo.n, 0.5)
    for i in range(topo.n):
        # extrinsic: the evidence of node i itself is left out
        inc = list(topo.incoming[i])
        log_plus = -alpha + log_lam[inc].sum()
        log_minus = alpha + log_lam_c[inc].sum()
        total = np.logaddexp(log_plus, log_minus)
        if np.isfinite(total):
            out[i] = np.exp(log_plus - total)
    return np.clip(out, 0.0, 1.0)


def run_mrf(
    pi_in: np.ndarray,
    topo: MrfTopology,
    alpha: float,
    beta: float,
    sweeps: int,
    tolerance: float = 1e-8,
    damping: float = 1.0,
) -> MrfResult:
    """
    Start from uniform messages, sweep until the largest change drops below
    the tolerance or the sweep budget runs out, then emit π_{s→f}
    """
    if sweeps < 1:
        raise ValueError(f"sweeps must be >= 1, got {sweeps}")
    board = MessageBoard.uniform(topo)
    converged = False
    done = 0
    for done in range(1, sweeps + 1):
        updated = mrf_sweep(pi_in, topo, alpha, beta, board, damping)
        change = updated.max_change(board)
        board = updated
        if change < tolerance:
            converged = True
            break
    logger.debug(f"MRF: {done} sweeps, converged={converged}")
    return MrfResult(pi_out=output_probabilities(board, alpha), board=board, sweeps_run=done, converged=converged)


def mrf_output(
    pi_in: np.ndarray,
    topo: MrfTopology,
    alpha: float,
    beta: float,
    sweeps: int,
    tolerance: float = 1e-8,
    damping: float = 1.0,
) -> np.ndarray:
    """π_{s_i→f_i} for every node (see run_mrf)"""
    return run_mrf(pi_in, topo, alpha, beta, sweeps, tolerance, damping).pi_out
