"""
Recovery result models for a single VSP run
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .belief_state import BeliefState


@dataclass
class RoundRecord:
    """Diagnostics of one outer round"""
    round_index: int
    chi: float
    inner_rounds: int
    accepted_steps: int
    kappa: Optional[float] = None
    k_prime: Optional[int] = None
    pi_f_to_s: Optional[np.ndarray] = None
    pi_s_to_f: Optional[np.ndarray] = None
    mrf_sweeps: int = 0
    mrf_degeneracies: int = 0
    skipped_mrf: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "round": self.round_index,
            "chi": self.chi,
            "inner_rounds": self.inner_rounds,
            "accepted_steps": self.accepted_steps,
            "kappa": self.kappa,
            "k_prime": self.k_prime,
            "pi_f_to_s": None if self.pi_f_to_s is None else self.pi_f_to_s.tolist(),
            "pi_s_to_f": None if self.pi_s_to_f is None else self.pi_s_to_f.tolist(),
            "mrf_sweeps": self.mrf_sweeps,
            "mrf_degeneracies": self.mrf_degeneracies,
            "skipped_mrf": self.skipped_mrf,
        }


@dataclass
class RecoveryResult:
    """Signal estimate plus the per-round trace that produced it"""
    x_hat: np.ndarray
    beliefs: BeliefState
    rounds: List[RoundRecord] = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def chi_trace(self) -> List[float]:
        return [r.chi for r in self.rounds]

    @property
    def kappa_trace(self) -> List[Optional[float]]:
        return [r.kappa for r in self.rounds]

    def get_summary(self) -> str:
        """One-line summary for console output"""
        active = int(np.count_nonzero(self.beliefs.mu_g_to_v > 1e-6 * max(self.beliefs.mu_g_to_v.max(initial=0.0), 1e-300)))
        last_chi = self.rounds[-1].chi if self.rounds else float("nan")
        return (
            f"{len(self.rounds)} outer rounds | final chi {last_chi:.6g} | "
            f"{active}/{self.x_hat.shape[0]} active variances | {self.runtime_ms:.1f} ms"
        )

    def to_dict(self) -> Dict[str, Any]:
        """Diagnostics payload (the estimate itself is written separately)"""
        return {
            "n": int(self.x_hat.shape[0]),
            "runtime_ms": self.runtime_ms,
            "chi": self.chi_trace,
            "kappa": self.kappa_trace,
            "rounds": [r.to_dict() for r in self.rounds],
            "beliefs": self.beliefs.to_dict(),
        }
