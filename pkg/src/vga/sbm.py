"""Constant-returns slack-based measure, the comparison baseline.

The fractional program is linearized by the standard change of
variables (every variable scaled by a normalizer t, the denominator
pinned to 1).  Primal quantities are mapped back to the original space
by dividing by t; the dual prices are reported as the linearized LP
returns them, which is what makes the baseline's goal point drift off
the boundary and motivates the comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .models import AssessmentError, ProgramKind, VgaError, assess
from .simplex import LinearProgram, solve


@dataclass(frozen=True)
class SbmResult:
    o: str
    rho: float
    t_cc: float
    Q: np.ndarray            # input slack ratios q / x_o
    P: np.ndarray            # output slack ratios p / y_o
    q: np.ndarray            # input surpluses (original units)
    p: np.ndarray            # output shortfalls (original units)
    lambdas: np.ndarray
    v: np.ndarray
    u: np.ndarray
    xi: float
    e_rel: float
    x_hat: np.ndarray
    y_hat: np.ndarray
    goal_input_value: float   # alpha-hat at the LP's own slack scale
    goal_output_value: float  # beta-hat at the LP's own slack scale
    degenerate: bool

    @property
    def goal_ratio(self) -> float:
        return self.goal_output_value / self.goal_input_value


@dataclass(frozen=True)
class SbmComparison:
    o: str
    rho: float
    e_rel: float
    e_pte: float
    goal_ratio: float
    flagged: bool
    sbm: SbmResult
    pte: object


def _sbm_lp(dataset: Dataset, idx: int) -> LinearProgram:
    X, Y = dataset.X, dataset.Y
    n, m, s = dataset.n, dataset.m, dataset.s
    x_o, y_o = X[idx], Y[idx]
    nv = 1 + n + m + s  # t, lambdas, input slacks, output slacks

    A = np.zeros((1 + m + s, nv))
    b = np.zeros(1 + m + s)
    A[0, 0] = 1.0
    A[0, 1 + n + m :] = 1.0 / (s * y_o)
    b[0] = 1.0
    for i in range(m):
        A[1 + i, 0] = -x_o[i]
        A[1 + i, 1 : 1 + n] = X[:, i]
        A[1 + i, 1 + n + i] = 1.0
    for r in range(s):
        A[1 + m + r, 0] = -y_o[r]
        A[1 + m + r, 1 : 1 + n] = Y[:, r]
        A[1 + m + r, 1 + n + m + r] = -1.0

    c = np.zeros(nv)
    c[0] = 1.0
    c[1 + n : 1 + n + m] = -1.0 / (m * x_o)
    return LinearProgram("min", c, A, ("=",) * (1 + m + s), b)


def solve_sbm(dataset: Dataset, o: str) -> SbmResult:
    """Solve the slack-based measure for one unit."""
    idx = dataset.index_of(o)
    x_o = dataset.dmus[idx].inputs
    y_o = dataset.dmus[idx].outputs
    if np.any(x_o <= 0) or np.any(y_o <= 0):
        raise AssessmentError(f"DMU {o!r} has a zero level; the ratio objective is undefined")

    n, m, s = dataset.n, dataset.m, dataset.s
    sol = solve(_sbm_lp(dataset, idx))
    if sol.status != "optimal":
        raise VgaError(f"slack-based program ended {sol.status!r} for DMU {o!r}")

    t = float(sol.x[0])
    if t <= 1e-12:
        raise VgaError("normalizer collapsed to zero")
    lambdas = sol.x[1 : 1 + n] / t
    s_minus = sol.x[1 + n : 1 + n + m]
    s_plus = sol.x[1 + n + m :]
    q = s_minus / t
    p = s_plus / t
    Q = q / x_o
    P = p / y_o

    v = -sol.duals[1 : 1 + m]
    u = sol.duals[1 + m :].copy()
    xi = float(sol.duals[0])
    rho = float(sol.objective)
    if np.any(v <= 0) or np.any(u <= 0):
        raise VgaError("slack-based dual prices must be positive for positive data")

    return SbmResult(
        o=o,
        rho=rho,
        t_cc=t,
        Q=Q,
        P=P,
        q=q,
        p=p,
        lambdas=lambdas,
        v=v,
        u=u,
        xi=xi,
        e_rel=float(u @ y_o) / float(v @ x_o),
        x_hat=x_o - q,
        y_hat=y_o + p,
        goal_input_value=float(v @ (x_o - s_minus)),
        goal_output_value=float(u @ (y_o + s_plus)),
        degenerate=sol.degenerate,
    )


def compare_sbm_vga(dataset: Dataset, o: str, tol: float = 1e-6) -> SbmComparison:
    """Put the baseline next to the plain virtual-gap assessment.

    Flags the baseline as incomplete when its ratio score falls short of
    the relative efficiency implied by its own prices, or when its goal
    point misses the boundary (ratio != 1).
    """
    sbm = solve_sbm(dataset, o)
    pte = assess(dataset, o, ProgramKind.pte())
    flagged = (sbm.rho < sbm.e_rel - tol) or (abs(sbm.goal_ratio - 1.0) > tol)
    return SbmComparison(
        o=o,
        rho=sbm.rho,
        e_rel=sbm.e_rel,
        e_pte=pte.E,
        goal_ratio=sbm.goal_ratio,
        flagged=flagged,
        sbm=sbm,
        pte=pte,
    )
