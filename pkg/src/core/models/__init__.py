"""Core models"""
from .vsp_config import (
    GammaParams,
    InitStrategy,
    LineSearchParams,
    MrfParams,
    SolverKind,
    TopologyKind,
    TopologySpec,
    VspConfig,
)
from .belief_state import BeliefState
from .recovery_result import RecoveryResult, RoundRecord
from .experiment import (
    AggregateRow,
    ExperimentReport,
    ExperimentSpec,
    GridPoint,
    MatrixKind,
    SnrConvention,
    TrialResult,
    TrialStatus,
)

__all__ = [
    'GammaParams',
    'InitStrategy',
    'LineSearchParams',
    'MrfParams',
    'SolverKind',
    'TopologyKind',
    'TopologySpec',
    'VspConfig',
    'BeliefState',
    'RecoveryResult',
    'RoundRecord',
    'AggregateRow',
    'ExperimentReport',
    'ExperimentSpec',
    'GridPoint',
    'MatrixKind',
    'SnrConvention',
    'TrialResult',
    'TrialStatus',
]
