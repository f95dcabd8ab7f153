"""
Messages exchanged between the linear module and the MRF
"""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np


@dataclass(frozen=True)
class BeliefState:
    """
    Per-coordinate variance means and activity probabilities

    Attributes:
        mu_v_to_g: variance means fed into the linear module
        mu_g_to_v: variance means produced by the inner solver
        pi_f_to_s: activity probabilities entering the MRF
        pi_s_to_f: activity probabilities leaving the MRF
    """
    mu_v_to_g: np.ndarray
    mu_g_to_v: np.ndarray
    pi_f_to_s: np.ndarray
    pi_s_to_f: np.ndarray
    round_index: int = field(default=0)

    def __post_init__(self) -> None:
        self.validate()

    @classmethod
    def initial(cls, mu: np.ndarray) -> "BeliefState":
        """State before the first inner solve: only mu_v_to_g is meaningful"""
        mu = np.asarray(mu, dtype=float)
        half = np.full(mu.shape, 0.5)
        return cls(mu_v_to_g=mu, mu_g_to_v=mu.copy(), pi_f_to_s=half, pi_s_to_f=half.copy())

    @property
    def n(self) -> int:
        return int(self.mu_v_to_g.shape[0])

    def validate(self) -> None:
        """
        Check the message invariants

        Raises:
            ValueError: on a length mismatch, negative or non-finite mean,
                or a probability outside [0, 1]
        """
        n = self.mu_v_to_g.shape[0]
        for name in ("mu_v_to_g", "mu_g_to_v", "pi_f_to_s", "pi_s_to_f"):
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise ValueError(f"{name} has shape {arr.shape}, expected ({n},)")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        if np.any(self.mu_v_to_g < 0) or np.any(self.mu_g_to_v < 0):
            raise ValueError("variance means must be nonnegative")
        for name in ("pi_f_to_s", "pi_s_to_f"):
            arr = getattr(self, name)
            if np.any(arr < 0) or np.any(arr > 1):
                raise ValueError(f"{name} must lie in [0, 1]")

    def to_dict(self) -> Dict[str, list]:
        return {
            "mu_v_to_g": self.mu_v_to_g.tolist(),
            "mu_g_to_v": self.mu_g_to_v.tolist(),
            "pi_f_to_s": self.pi_f_to_s.tolist(),
            "pi_s_to_f": self.pi_s_to_f.tolist(),
        }
