"""
Benchmark models: sweep description, per-trial record, aggregate report
"""
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, model_validator

from .vsp_config import SolverKind, VspConfig


class MatrixKind(str, Enum):
    """Measurement-matrix families of the synthetic experiments"""
    SCG = "scg"
    CROPPED_HERMITIAN = "cropped_hermitian"
    CONCAT_EXP_GAUSS = "concat_exp_gauss"
    CONCAT_EXP = "concat_exp"
    REAL_NORMAL = "real_normal"

    @classmethod
    def names(cls) -> List[str]:
        return [kind.value for kind in cls]


class SnrConvention(str, Enum):
    """Whether sigma in 20 log10(||Ax|| / sigma) is the total or per-component noise std"""
    TOTAL = "total"
    PER_COMPONENT = "per_component"


class TrialStatus(Enum):
    """Outcome of a trial"""
    SUCCESS = "success"
    ERROR = "error"


GENIE_TAG = "genie"


@dataclass(frozen=True)
class GridPoint:
    """
    One (M, SNR, solver overrides) point of a sweep

    ``cell`` numbers the (M, SNR) pair alone, so every solver variant of a
    cell sees the same seeded instances.
    """
    index: int
    m: int
    snr_db: float
    cell: int = 0
    overrides: Dict[str, Any] = field(default_factory=dict, hash=False)


class ExperimentSpec(BaseModel):
    """
    One benchmark sweep

    M and SNR may each be a single value or a grid; the sweep covers their
    Cartesian product. ``solver`` holds flat VspConfig overrides, and an
    override given as a list (``vartheta: [1.0, 1.5, 2.0]``) adds one more
    axis to the product.
    """
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    experiment_id: str = "experiment"
    n: int = Field(validation_alias=AliasChoices("n", "N"), ge=1)
    m: Union[int, List[int]] = Field(validation_alias=AliasChoices("m", "M"))
    k: int = Field(validation_alias=AliasChoices("k", "K"), ge=1)
    l: int = Field(validation_alias=AliasChoices("l", "L"), ge=1)
    snr_db: Union[float, List[float]]
    matrix_kind: MatrixKind = MatrixKind.SCG
    trials: int = Field(100, ge=1)
    base_seed: int = Field(0, ge=0)
    snr_convention: SnrConvention = SnrConvention.TOTAL
    record_runtime: bool = True
    solver: Dict[str, Any] = Field(default_factory=dict)

    @property
    def m_grid(self) -> List[int]:
        return list(self.m) if isinstance(self.m, list) else [self.m]

    @property
    def snr_grid(self) -> List[float]:
        return [float(s) for s in self.snr_db] if isinstance(self.snr_db, list) else [float(self.snr_db)]

    @property
    def solver_axes(self) -> Dict[str, List[Any]]:
        """Swept solver keys and their values, in spec order"""
        return {key: list(value) for key, value in self.solver.items() if isinstance(value, list)}

    @property
    def solver_fixed(self) -> Dict[str, Any]:
        return {key: value for key, value in self.solver.items() if not isinstance(value, list)}

    @property
    def swept_keys(self) -> List[str]:
        return list(self.solver_axes)

    def solver_variants(self) -> List[Dict[str, Any]]:
        """Every combination of the swept solver values ([{}] when nothing is swept)"""
        axes = self.solver_axes
        return [dict(zip(axes, combo)) for combo in itertools.product(*axes.values())]

    @model_validator(mode="after")
    def _check_geometry(self) -> "ExperimentSpec":
        problems: List[str] = []
        if self.k > self.n:
            problems.append(f"K={self.k} exceeds N={self.n}")
        if self.l > self.k:
            problems.append(f"L={self.l} exceeds K={self.k}")
        if not self.m_grid:
            problems.append("M grid is empty")
        if not self.snr_grid:
            problems.append("SNR grid is empty")
        for m in self.m_grid:
            if m < 1 or m > self.n:
                problems.append(f"M={m} outside [1, N={self.n}]")
        if self.matrix_kind in (MatrixKind.CONCAT_EXP_GAUSS, MatrixKind.CONCAT_EXP) and self.n % 2:
            problems.append(f"matrix kind {self.matrix_kind.value} requires even N, got {self.n}")
        empty = [key for key, values in self.solver_axes.items() if not values]
        if empty:
            problems.append(f"solver grid is empty for {', '.join(empty)}")
        else:
            for variant in self.solver_variants():
                try:
                    VspConfig.from_flat({**self.solver_fixed, **variant})
                except ValueError as e:
                    problems.append(f"solver overrides invalid: {e}")
                    break
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def grid_points(self) -> List[GridPoint]:
        """Solver variants outermost, then M, then SNR"""
        cells = list(itertools.product(self.m_grid, self.snr_grid))
        points: List[GridPoint] = []
        for variant in self.solver_variants():
            for cell, (m, snr) in enumerate(cells):
                points.append(GridPoint(index=len(points), m=m, snr_db=snr, cell=cell, overrides=variant))
        return points

    def _flat_solver(self, point: Optional[GridPoint]) -> Dict[str, Any]:
        variant = point.overrides if point is not None else self.solver_variants()[0]
        return {**self.solver_fixed, **variant}

    def vsp_config(self, sigma2: float, point: Optional[GridPoint] = None) -> VspConfig:
        """Solver config for one trial: overrides + known K and noise variance"""
        return VspConfig.from_flat({**self._flat_solver(point), "k_sparsity": self.k, "sigma2": sigma2})

    def algorithm_for(self, point: Optional[GridPoint] = None) -> str:
        kind = VspConfig.from_flat(self._flat_solver(point)).solver
        return "vsp-gd" if kind == SolverKind.GD else "vsp-elbo"

    @property
    def algorithm_tag(self) -> str:
        return self.algorithm_for()


@dataclass
class TrialResult:
    """Outcome of one seeded trial: VSP and the genie bound on the same instance"""
    experiment_id: str
    matrix_kind: str
    n: int
    m: int
    k: int
    l: int
    snr_db: float
    grid_index: int
    trial: int
    seed: int
    algorithm: str
    nmse: float = math.nan
    nmse_db: float = math.nan
    genie_nmse: float = math.nan
    genie_nmse_db: float = math.nan
    runtime_ms: float = 0.0
    genie_runtime_ms: float = 0.0
    status: TrialStatus = TrialStatus.SUCCESS
    error_message: Optional[str] = None
    overrides: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_success(self) -> bool:
        return self.status == TrialStatus.SUCCESS

    def mark_error(self, error: str) -> None:
        self.status = TrialStatus.ERROR
        self.error_message = error
        self.nmse = self.nmse_db = self.genie_nmse = self.genie_nmse_db = math.nan

    def csv_rows(self) -> List[Dict[str, Any]]:
        """Expand into the algorithm row and the genie row of the per-trial CSV"""
        base = {
            "experiment_id": self.experiment_id,
            "matrix_kind": self.matrix_kind,
            "N": self.n,
            "M": self.m,
            "K": self.k,
            "L": self.l,
            "snr_db": _fmt(self.snr_db),
            "trial": self.trial,
            "seed": self.seed,
        }
        base.update(_override_cells(self.overrides))
        status = self.status.value
        rows = []
        for tag, nmse, nmse_db, runtime in (
            (self.algorithm, self.nmse, self.nmse_db, self.runtime_ms),
            (GENIE_TAG, self.genie_nmse, self.genie_nmse_db, self.genie_runtime_ms),
        ):
            ok = self.is_success
            rows.append({
                **base,
                "algorithm": tag,
                "nmse": _fmt(nmse) if ok else "",
                "nmse_db": _fmt(nmse_db) if ok else "",
                "runtime_ms": _fmt(runtime),
                "status": status,
            })
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "experiment_id": self.experiment_id,
            "grid_index": self.grid_index,
            "trial": self.trial,
            "seed": self.seed,
            "algorithm": self.algorithm,
            "nmse": self.nmse,
            "nmse_db": self.nmse_db,
            "genie_nmse_db": self.genie_nmse_db,
            "runtime_ms": self.runtime_ms,
            "status": self.status.value,
            "error_message": self.error_message,
            "overrides": dict(self.overrides),
        }


@dataclass
class AggregateRow:
    """Mean NMSE of one grid point"""
    experiment_id: str
    matrix_kind: str
    n: int
    m: int
    k: int
    l: int
    snr_db: float
    algorithm: str
    mean_nmse_db: float
    genie_mean_nmse_db: float
    trial_count: int
    failure_count: int
    overrides: Dict[str, Any] = field(default_factory=dict)

    def to_csv_row(self) -> Dict[str, Any]:
        return {
            "experiment_id": self.experiment_id,
            "matrix_kind": self.matrix_kind,
            "N": self.n,
            "M": self.m,
            "K": self.k,
            "L": self.l,
            "snr_db": _fmt(self.snr_db),
            "algorithm": self.algorithm,
            "mean_nmse_db": _fmt(self.mean_nmse_db),
            "genie_mean_nmse_db": _fmt(self.genie_mean_nmse_db),
            **_override_cells(self.overrides),
            "trial_count": self.trial_count,
            "failure_count": self.failure_count,
        }


@dataclass
class ExperimentReport:
    """Collected trials of a sweep and their per-grid-point aggregates"""
    spec: ExperimentSpec
    results: List[TrialResult] = field(default_factory=list)
    total_duration_seconds: float = 0.0

    def add_result(self, result: TrialResult) -> None:
        self.results.append(result)

    def sorted_results(self) -> List[TrialResult]:
        return sorted(self.results, key=lambda r: (r.grid_index, r.trial))

    @property
    def failed_trials(self) -> int:
        return sum(1 for r in self.results if not r.is_success)

    def aggregate(self) -> List[AggregateRow]:
        """
        Mean of linear NMSE per grid point, then converted to dB

        Failed trials are excluded from the means and counted separately.
        """
        rows: List[AggregateRow] = []
        for point in self.spec.grid_points():
            cell = [r for r in self.results if r.grid_index == point.index]
            ok = [r for r in cell if r.is_success]
            rows.append(AggregateRow(
                experiment_id=self.spec.experiment_id,
                matrix_kind=self.spec.matrix_kind.value,
                n=self.spec.n,
                m=point.m,
                k=self.spec.k,
                l=self.spec.l,
                snr_db=point.snr_db,
                algorithm=self.spec.algorithm_for(point),
                mean_nmse_db=mean_db([r.nmse for r in ok]),
                genie_mean_nmse_db=mean_db([r.genie_nmse for r in ok]),
                trial_count=len(ok),
                failure_count=len(cell) - len(ok),
                overrides=dict(point.overrides),
            ))
        return rows

    def get_summary(self) -> str:
        lines = [
            f"Experiment {self.spec.experiment_id}",
            "=" * 40,
            f"Trials: {len(self.results)} ({self.failed_trials} failed)",
        ]
        for row in self.aggregate():
            variant = "".join(f" {key}={value}" for key, value in row.overrides.items())
            lines.append(
                f"M={row.m:<4d} SNR={row.snr_db:5.1f} dB{variant}  {row.algorithm}: {row.mean_nmse_db:7.2f} dB"
                f"  genie: {row.genie_mean_nmse_db:7.2f} dB"
            )
        lines.append(f"Duration: {self.total_duration_seconds:.2f} seconds")
        return "\n".join(lines)


def mean_db(values: List[float]) -> float:
    """10 log10 of the arithmetic mean; NaN for an empty list"""
    if not values:
        return math.nan
    mean = sum(values) / len(values)
    return 10.0 * math.log10(mean) if mean > 0 else -math.inf


def _fmt(value: float) -> str:
    return repr(float(value))


def _override_cells(overrides: Dict[str, Any]) -> Dict[str, str]:
    """CSV cells of the swept solver values; floats keep full precision"""
    return {
        key: _fmt(value) if isinstance(value, float) else str(value)
        for key, value in overrides.items()
    }
