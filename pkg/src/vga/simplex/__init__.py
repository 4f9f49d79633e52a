from ._kernel import BACKEND
from .core import (
    CS_TOL,
    DUALITY_TOL,
    FEAS_TOL,
    PIVOT_TOL,
    BasisInfeasibleError,
    LinearProgram,
    LpSolution,
    NotOptimalError,
    NumericalBreakdownError,
    RhsRange,
    SolverError,
    resolve_with_basis,
    rhs_range,
    solve,
)

__all__ = [
    "BACKEND",
    "CS_TOL",
    "DUALITY_TOL",
    "FEAS_TOL",
    "PIVOT_TOL",
    "BasisInfeasibleError",
    "LinearProgram",
    "LpSolution",
    "NotOptimalError",
    "NumericalBreakdownError",
    "RhsRange",
    "SolverError",
    "resolve_with_basis",
    "rhs_range",
    "solve",
]
