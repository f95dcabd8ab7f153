"""
Exception hierarchy shared by the solver, MRF, bench and I/O layers
"""
from typing import Any, Dict, Optional


class VspError(Exception):
    """Base class for all errors raised by this package"""


class DimensionError(VspError, ValueError):
    """Array shapes disagree at an operation boundary"""


class DomainError(VspError, ValueError):
    """Argument outside the mathematical domain of an operation"""


class DegenerateKappaError(DomainError):
    """Sample-mean variance estimate is not strictly positive"""


class SingularSystemError(VspError, ArithmeticError):
    """A matrix that must be positive definite could not be factorized"""


class InfeasibleGeometryError(VspError, ValueError):
    """Block layout cannot be placed inside the signal length"""


class ContainerFormatError(VspError, ValueError):
    """Malformed matrix/vector file"""


class NonFiniteStateError(VspError, FloatingPointError):
    """
    Non-finite value appeared in the outer-loop state

    The snapshot holds copies of the arrays that were live when the
    problem was detected so the caller can dump them for inspection.
    """

    def __init__(self, message: str, snapshot: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.snapshot: Dict[str, Any] = snapshot or {}
