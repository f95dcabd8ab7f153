"""
Hyperparameter models for the VSP outer loop and its inner solvers
"""
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SolverKind(str, Enum):
    """Inner solver used to update the variance means"""
    GD = "gd"
    ELBO = "elbo"


class TopologyKind(str, Enum):
    """Neighbor structure of the hidden-state MRF"""
    CHAIN = "chain"
    GRID = "grid"


class InitStrategy(str, Enum):
    """How the first variance means fed to the linear module are chosen"""
    POWER = "power"
    CONSTANT = "constant"
    ZERO = "zero"


class GammaParams(BaseModel):
    """Shape/rate of the Gamma slab on active variances"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = Field(1e-10, gt=0)
    b: float = Field(1e-10, gt=0)

    @property
    def mean(self) -> float:
        return self.a / self.b


class MrfParams(BaseModel):
    """Ising prior on the support states"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = 1.0
    beta: float = Field(3.0, ge=0)
    rho: float = Field(0.1, ge=0, le=1)


class LineSearchParams(BaseModel):
    """Backtracking knobs of the gradient-descent solver"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    eps0: float = Field(1.0, gt=0)
    shrink: float = Field(0.5, gt=0, lt=1)
    max_halvings: int = Field(40, ge=1)


class TopologySpec(BaseModel):
    """Serializable description of an MRF topology; sized against N at run time"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: TopologyKind = TopologyKind.CHAIN
    rows: Optional[int] = Field(None, ge=1)
    cols: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _grid_needs_shape(self) -> "TopologySpec":
        if self.kind == TopologyKind.GRID and (self.rows is None or self.cols is None):
            raise ValueError("grid topology requires both rows and cols")
        return self


# flat configuration key -> path inside the nested VspConfig
FLAT_KEYS: Dict[str, Tuple[str, ...]] = {
    "a": ("gamma", "a"),
    "b": ("gamma", "b"),
    "alpha": ("mrf", "alpha"),
    "beta": ("mrf", "beta"),
    "rho": ("mrf", "rho"),
    "eps0": ("line_search", "eps0"),
    "shrink": ("line_search", "shrink"),
    "max_halvings": ("line_search", "max_halvings"),
    "topology": ("topology", "kind"),
    "rows": ("topology", "rows"),
    "cols": ("topology", "cols"),
    "t_out": ("t_out",),
    "t_in": ("t_in",),
    "vartheta": ("vartheta",),
    "sigma2": ("sigma2",),
    "k_sparsity": ("k_sparsity",),
    "solver": ("solver",),
    "mrf_sweeps": ("mrf_sweeps",),
    "mrf_tolerance": ("mrf_tolerance",),
    "mrf_damping": ("mrf_damping",),
    "pi_floor": ("pi_floor",),
    "init_strategy": ("init_strategy",),
    "init_value": ("init_value",),
    "gd_tolerance": ("gd_tolerance",),
}


class VspConfig(BaseModel):
    """
    All inputs of the VSP outer loop besides y and A

    Defaults are the benchmark settings:
    ELBO solver, T_out = 2, T_in = 30, K' = 2K.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma: GammaParams = Field(default_factory=GammaParams)
    mrf: MrfParams = Field(default_factory=MrfParams)
    line_search: LineSearchParams = Field(default_factory=LineSearchParams)
    topology: TopologySpec = Field(default_factory=TopologySpec)

    t_out: int = Field(2, ge=1)
    t_in: int = Field(30, ge=1)
    vartheta: float = Field(2.0, ge=1, le=2)
    sigma2: float = Field(0.0, ge=0)
    k_sparsity: Optional[int] = Field(None, ge=1)
    solver: SolverKind = SolverKind.ELBO

    mrf_sweeps: int = Field(10, ge=1)
    mrf_tolerance: float = Field(1e-8, gt=0)
    mrf_damping: float = Field(1.0, gt=0, le=1)
    pi_floor: float = Field(1e-5, gt=0, lt=1)

    init_strategy: InitStrategy = InitStrategy.POWER
    init_value: float = Field(1.0, ge=0)
    gd_tolerance: Optional[float] = Field(None, gt=0)

    def resolve_k(self, n: int) -> int:
        """K from the config, or round(rho * N) when it was not given"""
        if self.k_sparsity is not None:
            return self.k_sparsity
        return max(1, round_half_up(self.mrf.rho * n))

    def k_prime(self, n: int) -> int:
        """Number of largest variance means averaged into kappa"""
        return min(n, max(1, round_half_up(self.vartheta * self.resolve_k(n))))

    def with_overrides(self, flat: Mapping[str, Any]) -> "VspConfig":
        """
        Return a copy with flat keys (alpha, t_in, rows, ...) applied

        None values are skipped so unset CLI flags do not clobber lower layers.

        Raises:
            ValueError: unknown key or a value violating a field constraint
        """
        data = self.model_dump()
        for key, value in flat.items():
            if value is None:
                continue
            path = FLAT_KEYS.get(key)
            if path is None:
                raise ValueError(
                    f"Unknown configuration key '{key}'. Valid keys: {', '.join(sorted(FLAT_KEYS))}"
                )
            target = data
            for part in path[:-1]:
                target = target[part]
            target[path[-1]] = value
        return VspConfig.model_validate(data)

    @classmethod
    def from_flat(cls, flat: Mapping[str, Any]) -> "VspConfig":
        return cls().with_overrides(flat)


def round_half_up(value: float) -> int:
    """Nearest integer, halves rounded away from zero for positive inputs"""
    return int(value + 0.5) if value >= 0 else -int(-value + 0.5)
