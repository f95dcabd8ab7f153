"""
VSP Orchestrator - outer loop between the linear module and the support MRF

Each outer round:
1. Inner solve (GD or ELBO) from μ_{v→g} to μ_{g→v}
2. κ = mean of the K' largest μ_{g→v}; π_{f→s} = min(μ/κ, 1)
3. MRF message passing to π_{s→f}
4. μ_{v→g} = κ · max(π_{s→f}, pi_floor)

The last round skips steps 2-4 and the estimate is the posterior mean at
the final μ_{g→v}.
"""
import logging
import time
from dataclasses import replace
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.errors import DegenerateKappaError, DomainError, NonFiniteStateError
from ..core.models.belief_state import BeliefState
from ..core.models.recovery_result import RecoveryResult, RoundRecord
from ..core.models.vsp_config import InitStrategy, SolverKind, VspConfig
from ..mrf import MrfTopology, run_mrf
from ..solver import SolverOutput, apply_floor, check_problem, chi, elbo_solve, gd_solve, posterior_moments


def kappa(mu_g_to_v: np.ndarray, k_prime: int) -> float:
    """
    Mean of the k_prime largest entries; ties go to the lower index

    Raises:
        ValueError: k_prime outside [1, N]
    """
    mu = np.asarray(mu_g_to_v, dtype=float).reshape(-1)
    if not 1 <= k_prime <= mu.shape[0]:
        raise ValueError(f"k_prime must lie in [1, {mu.shape[0]}], got {k_prime}")
    order = np.argsort(-mu, kind="stable")
    return float(np.mean(mu[order[:k_prime]]))


def pi_from_mu(mu_g_to_v: np.ndarray, kappa_val: float) -> np.ndarray:
    """
    π_i = min(μ_i / κ, 1)

    Raises:
        DegenerateKappaError: kappa_val <= 0
    """
    if not kappa_val > 0:
        raise DegenerateKappaError(f"kappa must be positive, got {kappa_val}")
    mu = np.asarray(mu_g_to_v, dtype=float).reshape(-1)
    return np.minimum(mu / kappa_val, 1.0)


def mu_from_pi(pi_s_to_f: np.ndarray, kappa_val: float, pi_floor: float) -> np.ndarray:
    """μ_i = κ · max(π_i, pi_floor)"""
    pi = np.asarray(pi_s_to_f, dtype=float).reshape(-1)
    return kappa_val * np.maximum(pi, pi_floor)


def initial_variances(y: np.ndarray, A: np.ndarray, config: VspConfig) -> np.ndarray:
    """
    Starting μ_{v→g}

    POWER: ‖y‖² / ‖A‖_F² · N / K, CONSTANT: init_value, ZERO: all zeros
    (a fixed point of the ELBO update, kept for comparison runs).

    Raises:
        DomainError: POWER with an all-zero A
    """
    n = A.shape[1]
    if config.init_strategy == InitStrategy.ZERO:
        return np.zeros(n)
    if config.init_strategy == InitStrategy.CONSTANT:
        return np.full(n, config.init_value)
    a_power = float(np.linalg.norm(A, "fro") ** 2)
    if a_power == 0.0:
        raise DomainError("A is all zeros; cannot scale the initial variances")
    y_power = float(np.linalg.norm(y) ** 2)
    return np.full(n, y_power / a_power * n / config.resolve_k(n))


class VspOrchestrator:
    """
    Runs the VSP outer loop for one (y, A) pair

    A single instance is not meant to be shared across threads; create one
    per concurrent recovery.
    """

    def __init__(self, config: Optional[VspConfig] = None):
        """
        Initialize orchestrator

        Args:
            config: VspConfig, sigma2 must be positive by the time recover() runs
        """
        self.config = config or VspConfig()
        self.logger = logging.getLogger(__name__)

    def recover(self, y: np.ndarray, A: np.ndarray) -> RecoveryResult:
        """
        Estimate x from y = A x + w

        Args:
            y: length-M measurements
            A: M x N measurement matrix

        Returns:
            RecoveryResult with x̂ and per-round diagnostics

        Raises:
            DimensionError: inconsistent shapes or topology
            DomainError: sigma2 <= 0 or non-finite inputs
            NonFiniteStateError: a NaN/Inf appeared in an intermediate message
        """
        cfg = self.config
        start = time.perf_counter()
        A = np.asarray(A, dtype=complex)
        n = A.shape[1] if A.ndim == 2 else 0
        A, y, _ = check_problem(A, y, np.zeros(n), cfg.sigma2)

        topology = MrfTopology.from_spec(cfg.topology, n)
        k_prime = cfg.k_prime(n)
        beliefs = BeliefState.initial(initial_variances(y, A, cfg))
        rounds: List[RoundRecord] = []

        self.logger.debug(
            f"VSP start: N={n} M={A.shape[0]} solver={cfg.solver.value} "
            f"T_out={cfg.t_out} T_in={cfg.t_in} K'={k_prime}"
        )

        for t in range(cfg.t_out):
            output = self._inner_solve(A, y, beliefs.mu_v_to_g)
            mu_g = output.mu
            self._ensure_finite("mu_g_to_v", mu_g, t, beliefs)

            record = RoundRecord(
                round_index=t,
                chi=chi(A, y, apply_floor(mu_g), cfg.sigma2),
                inner_rounds=output.rounds,
                accepted_steps=output.accepted_steps,
            )

            if t == cfg.t_out - 1:
                beliefs = replace(beliefs, mu_g_to_v=mu_g, round_index=t)
            else:
                beliefs = self._update_support(mu_g, k_prime, topology, record, beliefs, t)

            rounds.append(record)
            self.logger.info(
                f"Round {t + 1}/{cfg.t_out}: chi={record.chi:.6g} kappa={record.kappa} "
                f"inner={record.inner_rounds}"
            )

        x_hat = posterior_moments(A, y, beliefs.mu_g_to_v, cfg.sigma2).m
        if not np.all(np.isfinite(x_hat)):
            raise NonFiniteStateError("posterior mean is not finite", snapshot=self._snapshot(cfg.t_out, beliefs))

        runtime_ms = (time.perf_counter() - start) * 1000.0
        return RecoveryResult(x_hat=x_hat, beliefs=beliefs, rounds=rounds, runtime_ms=runtime_ms)

    def _inner_solve(self, A: np.ndarray, y: np.ndarray, mu: np.ndarray) -> SolverOutput:
        cfg = self.config
        if cfg.solver == SolverKind.GD:
            return gd_solve(A, y, mu, cfg.t_in, cfg.sigma2, cfg.line_search, cfg.gd_tolerance)
        return elbo_solve(A, y, mu, cfg.t_in, cfg.sigma2)

    def _update_support(
        self,
        mu_g: np.ndarray,
        k_prime: int,
        topology: MrfTopology,
        record: RoundRecord,
        beliefs: BeliefState,
        t: int,
    ) -> BeliefState:
        """Moment-match μ_{g→v} into the MRF and back"""
        cfg = self.config
        kap = kappa(mu_g, k_prime)
        record.kappa = kap
        record.k_prime = k_prime
        try:
            pi_f = pi_from_mu(mu_g, kap)
        except DegenerateKappaError:
            # previous π kept; the next solve warm-starts from μ_{g→v}
            self.logger.warning(f"Round {t + 1}: kappa={kap} is degenerate, MRF step skipped")
            record.skipped_mrf = True
            return replace(beliefs, mu_v_to_g=mu_g, mu_g_to_v=mu_g, round_index=t + 1)

        mrf = run_mrf(
            pi_f,
            topology,
            cfg.mrf.alpha,
            cfg.mrf.beta,
            cfg.mrf_sweeps,
            tolerance=cfg.mrf_tolerance,
            damping=cfg.mrf_damping,
        )
        record.pi_f_to_s = pi_f
        record.pi_s_to_f = mrf.pi_out
        record.mrf_sweeps = mrf.sweeps_run
        record.mrf_degeneracies = mrf.degeneracies

        mu_v = mu_from_pi(mrf.pi_out, kap, cfg.pi_floor)
        self._ensure_finite("mu_v_to_g", mu_v, t, beliefs)
        return BeliefState(
            mu_v_to_g=mu_v,
            mu_g_to_v=mu_g,
            pi_f_to_s=pi_f,
            pi_s_to_f=mrf.pi_out,
            round_index=t + 1,
        )

    def _ensure_finite(self, name: str, values: np.ndarray, t: int, beliefs: BeliefState) -> None:
        if np.all(np.isfinite(values)):
            return
        snapshot = self._snapshot(t, beliefs)
        snapshot[name] = np.asarray(values).tolist()
        self.logger.error(f"Non-finite {name} in round {t + 1}")
        raise NonFiniteStateError(f"non-finite {name} in outer round {t + 1}", snapshot=snapshot)

    @staticmethod
    def _snapshot(t: int, beliefs: BeliefState) -> Dict[str, Any]:
        snapshot: Dict[str, Any] = {"round": t}
        snapshot.update(beliefs.to_dict())
        return snapshot


def run_vsp(y: np.ndarray, A: np.ndarray, config: VspConfig) -> RecoveryResult:
    """Recover x from y = A x + w with the given configuration"""
    return VspOrchestrator(config).recover(y, A)
