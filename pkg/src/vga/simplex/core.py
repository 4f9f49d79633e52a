"""Deterministic dense LP solver with exact duals and RHS ranging.

The solver standardizes a general-form program (max/min, mixed
relations, nonnegative or free variables) into equality form with
nonnegative right-hand sides, runs the two-phase kernel, and maps the
primal point, the dual vector, and the optimal basis back to the
caller's row/column conventions.  Instances here are desk-scale, so
everything is dense and the dual vector is recovered by a fresh
``solve(B.T, c_B)`` rather than tracked through the tableau.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernel

FEAS_TOL = 1e-9
DUALITY_TOL = 1e-7
CS_TOL = 1e-7
PIVOT_TOL = 1e-10
DEGEN_TOL = 1e-9

_DEGEN_SWITCH = 40  # consecutive degenerate pivots before Bland's rule takes over


class SolverError(Exception):
    """Base class for solver failures."""


class NumericalBreakdownError(SolverError):
    """Pivot magnitudes decayed below pivot_tol or the solve stalled."""


class NotOptimalError(SolverError):
    """An operation required an optimal solution and did not get one."""


class BasisInfeasibleError(SolverError):
    """A supplied basis is not primal-feasible/optimal for the program."""


@dataclass(frozen=True)
class LinearProgram:
    """General-form LP: ``sense c.x`` s.t. ``A x (rel) b`` with x >= 0 or free."""

    sense: str
    c: np.ndarray
    A: np.ndarray
    relations: tuple[str, ...]
    b: np.ndarray
    free: tuple[bool, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        object.__setattr__(self, "A", np.atleast_2d(np.asarray(self.A, dtype=float)))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        m, n = self.A.shape
        if self.c.shape != (n,):
            raise ValueError(f"objective length {self.c.shape} does not match {n} columns")
        if self.b.shape != (m,):
            raise ValueError(f"rhs length {self.b.shape} does not match {m} rows")
        if len(self.relations) != m:
            raise ValueError("one relation per row is required")
        for rel in self.relations:
            if rel not in ("<=", "=", ">="):
                raise ValueError(f"unknown relation {rel!r}")
        if not self.free:
            object.__setattr__(self, "free", (False,) * n)
        elif len(self.free) != n:
            raise ValueError("one sign restriction per variable is required")
        else:
            object.__setattr__(self, "free", tuple(bool(f) for f in self.free))
        if not (np.isfinite(self.A).all() and np.isfinite(self.b).all() and np.isfinite(self.c).all()):
            raise ValueError("LP coefficients must be finite")

    @property
    def n_vars(self) -> int:
        return self.A.shape[1]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class _StandardForm:
    """Equality-form snapshot the kernel ran on; kept for duals/ranging."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray          # min-sense costs, artificials included at 0
    n_real: int
    row_sign: np.ndarray   # +/-1 per original row
    plus_col: np.ndarray   # column of each variable's nonnegative part
    minus_col: np.ndarray  # column of the negated part, -1 if not free
    basis0: np.ndarray
    sense_factor: float    # +1 min, -1 max


@dataclass(frozen=True)
class RhsRange:
    """Allowable RHS perturbation of one constraint at a fixed optimal basis."""

    constraint: int
    allowable_decrease: float
    allowable_increase: float


@dataclass(frozen=True)
class LpSolution:
    status: str
    x: np.ndarray | None
    duals: np.ndarray | None
    objective: float | None
    basis: tuple[int, ...] | None
    degenerate: bool
    iterations: int
    _std: _StandardForm | None = field(default=None, repr=False, compare=False)

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def _standardize(lp: LinearProgram) -> _StandardForm:
    m, n = lp.A.shape
    plus_col = np.arange(n, dtype=np.int64)
    minus_col = np.full(n, -1, dtype=np.int64)
    cols = [lp.A.copy()]
    ncol = n
    for j in range(n):
        if lp.free[j]:
            cols.append(-lp.A[:, j : j + 1])
            minus_col[j] = ncol
            ncol += 1

    slack = np.zeros((m, m))
    has_slack = np.zeros(m, dtype=bool)
    for i, rel in enumerate(lp.relations):
        if rel == "<=":
            slack[i, i] = 1.0
            has_slack[i] = True
        elif rel == ">=":
            slack[i, i] = -1.0
            has_slack[i] = True
    slack = slack[:, has_slack]
    slack_col = np.full(m, -1, dtype=np.int64)
    slack_col[has_slack] = ncol + np.arange(slack.shape[1])
    ncol += slack.shape[1]
    cols.append(slack)

    A_std = np.hstack(cols)
    b_std = lp.b.astype(float).copy()
    row_sign = np.ones(m)
    for i in range(m):
        if b_std[i] < 0.0:
            A_std[i, :] *= -1.0
            b_std[i] *= -1.0
            row_sign[i] = -1.0

    basis0 = np.full(m, -1, dtype=np.int64)
    art_cols = []
    for i in range(m):
        sc = slack_col[i]
        if sc >= 0 and A_std[i, sc] > 0.0:
            basis0[i] = sc
        else:
            art_cols.append(i)
    n_real = A_std.shape[1]
    if art_cols:
        art = np.zeros((m, len(art_cols)))
        for k, i in enumerate(art_cols):
            art[i, k] = 1.0
            basis0[i] = n_real + k
        A_std = np.hstack([A_std, art])

    sense_factor = 1.0 if lp.sense == "min" else -1.0
    c_std = np.zeros(A_std.shape[1])
    c_std[:n] = sense_factor * lp.c
    for j in range(n):
        if minus_col[j] >= 0:
            c_std[minus_col[j]] = -sense_factor * lp.c[j]

    return _StandardForm(
        A=A_std,
        b=b_std,
        c=c_std,
        n_real=n_real,
        row_sign=row_sign,
        plus_col=plus_col,
        minus_col=minus_col,
        basis0=basis0,
        sense_factor=sense_factor,
    )


def _solution_from_basis(lp: LinearProgram, std: _StandardForm, basis: np.ndarray,
                         x_std: np.ndarray, iterations: int) -> LpSolution:
    x = x_std[std.plus_col].copy()
    for j in range(lp.n_vars):
        if std.minus_col[j] >= 0:
            x[j] -= x_std[std.minus_col[j]]
    objective = float(lp.c @ x)

    B = std.A[:, basis]
    y = np.linalg.solve(B.T, std.c[basis])
    # Duals refer to the rows as the caller wrote them: undo the rhs sign
    # flip, and negate for max problems (the kernel minimized -c).
    duals = std.sense_factor * std.row_sign * y

    degenerate = bool(np.any(np.abs(x_std[basis]) <= DEGEN_TOL))
    return LpSolution(
        status="optimal",
        x=x,
        duals=duals,
        objective=objective,
        basis=tuple(sorted(int(j) for j in basis)),
        degenerate=degenerate,
        iterations=iterations,
        _std=_StandardForm(
            A=std.A, b=std.b, c=std.c, n_real=std.n_real, row_sign=std.row_sign,
            plus_col=std.plus_col, minus_col=std.minus_col,
            basis0=np.asarray(basis, dtype=np.int64), sense_factor=std.sense_factor,
        ),
    )


def solve(lp: LinearProgram) -> LpSolution:
    """Solve an LP; returns primal values, duals per original row, and the basis.

    Deterministic: identical inputs take the identical pivot path.  Raises
    NumericalBreakdownError instead of looping when pivots decay.
    """
    std = _standardize(lp)
    max_iter = 200 + 60 * (std.A.shape[0] + std.A.shape[1])
    status, x_std, basis, iters = _kernel.two_phase(
        std.A, std.b, std.c, std.n_real, std.basis0,
        1e-9, PIVOT_TOL, _DEGEN_SWITCH, max_iter,
    )
    if status == _kernel.STATUS_INFEASIBLE:
        return LpSolution("infeasible", None, None, None, None, False, iters)
    if status == _kernel.STATUS_UNBOUNDED:
        return LpSolution("unbounded", None, None, None, None, False, iters)
    if status == _kernel.STATUS_BREAKDOWN:
        raise NumericalBreakdownError("pivot magnitudes fell below pivot_tol; tableau unusable")
    if status == _kernel.STATUS_ITERATION_LIMIT:
        raise NumericalBreakdownError(f"simplex stalled after {iters} iterations")
    return _solution_from_basis(lp, std, basis, x_std, iters)


def resolve_with_basis(lp: LinearProgram, basis: tuple[int, ...]) -> LpSolution:
    """Evaluate an LP at a known optimal basis (no pivoting).

    Used when the caller knows the basis stays optimal under an RHS change
    (standard ranging): the primal point is recomputed, the duals are
    unchanged by construction.  Raises BasisInfeasibleError if the basis is
    not primal-feasible or not dual-feasible for this program.
    """
    std = _standardize(lp)
    basis_arr = np.asarray(sorted(basis), dtype=np.int64)
    if basis_arr.shape != (std.A.shape[0],):
        raise BasisInfeasibleError("basis size does not match row count")
    B = std.A[:, basis_arr]
    try:
        xb = np.linalg.solve(B, std.b)
    except np.linalg.LinAlgError as exc:
        raise BasisInfeasibleError("singular basis") from exc
    if np.min(xb) < -1e-7:
        raise BasisInfeasibleError(f"basis infeasible at this rhs (min basic value {np.min(xb):.3e})")
    y = np.linalg.solve(B.T, std.c[basis_arr])
    reduced = std.c - y @ std.A
    if np.min(reduced[: std.n_real]) < -1e-7:
        raise BasisInfeasibleError("basis is not dual-feasible for this program")
    x_std = np.zeros(std.A.shape[1])
    x_std[basis_arr] = np.maximum(xb, 0.0)
    return _solution_from_basis(lp, std, basis_arr, x_std, 0)


def rhs_range(lp: LinearProgram, sol: LpSolution, constraint: int) -> RhsRange:
    """Standard RHS ranging: the interval of b[constraint] over which the
    optimal basis stays primal-feasible (dual values constant throughout)."""
    if not sol.is_optimal or sol._std is None:
        raise NotOptimalError("rhs_range requires an optimal solution of this lp")
    if not 0 <= constraint < lp.n_rows:
        raise IndexError(f"constraint index {constraint} out of range")
    std = sol._std
    basis = std.basis0
    B = std.A[:, basis]
    xb = np.maximum(np.linalg.solve(B, std.b), 0.0)
    e = np.zeros(std.A.shape[0])
    e[constraint] = 1.0
    d = std.row_sign[constraint] * np.linalg.solve(B, e)

    inc = np.inf
    dec = np.inf
    for i in range(d.shape[0]):
        if d[i] < -PIVOT_TOL:
            inc = min(inc, xb[i] / -d[i])
        elif d[i] > PIVOT_TOL:
            dec = min(dec, xb[i] / d[i])
    return RhsRange(constraint=constraint, allowable_decrease=float(dec), allowable_increase=float(inc))
