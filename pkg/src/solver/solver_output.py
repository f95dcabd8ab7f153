"""
Result container shared by the inner solvers
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np


@dataclass
class SolverOutput:
    """
    Final variance means plus the per-round trace

    Attributes:
        mu: updated variance means μ_{g→v}
        chi_trace: χ before the first round and after every executed round
            (GD always; ELBO only when tracking is on)
        accepted: per-round flag, False when the round left μ unchanged
        step_sizes: accepted GD step per round (0.0 for no-op rounds)
    """
    mu: np.ndarray
    chi_trace: List[float] = field(default_factory=list)
    accepted: List[bool] = field(default_factory=list)
    step_sizes: List[float] = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.accepted)

    @property
    def accepted_steps(self) -> int:
        return sum(self.accepted)
