"""Total-slack-price programs and the two-step price normalization.

Step I solves the slack-maximizing LP at a unit goal price and reads
the interim virtual prices off the duals.  Step II rescales every
money-denominated quantity by the dimensionless normalizer t so the
(affected) virtual input price of the assessed unit becomes exactly
$1, which turns the gap into a relative efficiency in (0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .simplex import (
    CS_TOL,
    DUALITY_TOL,
    LinearProgram,
    LpSolution,
    resolve_with_basis,
    solve,
)

PEER_TOL = 1e-7
W_TOL = 1e-7  # |w| below this asserts no scale direction


class VgaError(Exception):
    """Base class for assessment failures."""


class AssessmentError(VgaError):
    """The assessed DMU cannot be evaluated (zero level, unknown id, ...)."""


class InfeasibleScalarError(VgaError):
    """The scale-constrained program is infeasible at the requested scalar."""


@dataclass(frozen=True)
class ProgramKind:
    """Program variant: plain slack program, or with the sum-of-intensities
    condition pinned to a positive scalar."""

    variant: str  # "pte" | "stea"
    kappa: float | None = None

    def __post_init__(self):
        if self.variant not in ("pte", "stea"):
            raise ValueError(f"unknown program variant {self.variant!r}")
        if self.variant == "stea":
            if self.kappa is None or not np.isfinite(self.kappa) or self.kappa <= 0:
                raise ValueError("scale-constrained program needs a positive scalar")
        elif self.kappa is not None:
            raise ValueError("plain program takes no scalar")

    @classmethod
    def pte(cls) -> "ProgramKind":
        return cls("pte")

    @classmethod
    def stea(cls, kappa: float) -> "ProgramKind":
        return cls("stea", float(kappa))

    @property
    def has_sic(self) -> bool:
        return self.variant == "stea"


@dataclass(frozen=True)
class StepISolution:
    """Optimal slacks, intensities, and interim ($1-goal) prices."""

    o: str
    kind: ProgramKind
    tau_sharp: float
    Q: np.ndarray
    P: np.ndarray
    pi: np.ndarray
    v_sharp: np.ndarray
    u_sharp: np.ndarray
    w_sharp: float
    delta_sharp: float
    Delta_sharp: float
    degenerate: bool
    _lp: LinearProgram = field(repr=False, compare=False, default=None)
    _solution: LpSolution = field(repr=False, compare=False, default=None)

    @property
    def omega_sharp(self) -> float:
        return (self.kind.kappa or 0.0) * self.w_sharp if self.kind.has_sic else 0.0


@dataclass(frozen=True)
class VgaAssessment:
    """Normalized (Step II) assessment with targets and decomposition terms."""

    dataset: Dataset = field(repr=False, compare=False)
    step1: StepISolution
    gamma: float
    t: float
    tau_star: float
    v_star: np.ndarray
    u_star: np.ndarray
    w_star: float
    omega_star: float
    delta_star: float
    Delta_star: float
    alpha: float
    beta: float
    alpha_aff: float
    beta_aff: float
    alpha_hat: float
    beta_hat: float
    x_hat: np.ndarray
    y_hat: np.ndarray
    peers: tuple[str, ...]
    E: float
    F: float
    T_check: float
    T_dot: float
    T: float
    S: float
    Xi: float
    goal_input_prices: np.ndarray
    goal_output_prices: np.ndarray

    @property
    def o(self) -> str:
        return self.step1.o

    @property
    def kind(self) -> ProgramKind:
        return self.step1.kind

    @property
    def degenerate(self) -> bool:
        return self.step1.degenerate


def _assessed_index(dataset: Dataset, o: str) -> int:
    idx = dataset.index_of(o)
    rec = dataset.dmus[idx]
    if np.any(rec.inputs <= 0) or np.any(rec.outputs <= 0):
        raise AssessmentError(
            f"DMU {o!r} has a zero input or output level; its goal-price bounds are unsatisfiable"
        )
    return idx


def build_tsp(dataset: Dataset, o: str, kind: ProgramKind, tau: float = 1.0) -> LinearProgram:
    """Slack-maximizing LP for assessing `o`.

    Variables are (pi_1..pi_n, Q_1..Q_m, P_1..P_s), all nonnegative; rows are
    the m input equalities, the s output equalities (written with negative
    rhs, standardized inside the solver), and the intensity-sum equality when
    the scalar condition applies.  `tau` scales the objective only; the
    optimal (Q, P, pi) do not depend on it.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    idx = _assessed_index(dataset, o)
    X, Y = dataset.X, dataset.Y
    n, m, s = dataset.n, dataset.m, dataset.s
    nv = n + m + s

    rows = m + s + (1 if kind.has_sic else 0)
    A = np.zeros((rows, nv))
    b = np.zeros(rows)
    relations = ("=",) * rows
    for i in range(m):
        A[i, :n] = X[:, i]
        A[i, n + i] = X[idx, i]
        b[i] = X[idx, i]
    for r in range(s):
        A[m + r, :n] = -Y[:, r]
        A[m + r, n + m + r] = Y[idx, r]
        b[m + r] = -Y[idx, r]
    if kind.has_sic:
        A[m + s, :n] = 1.0
        b[m + s] = kind.kappa

    c = np.zeros(nv)
    c[n:] = tau
    return LinearProgram("max", c, A, relations, b)


def solve_step1(dataset: Dataset, o: str, kind: ProgramKind,
                warm_basis: tuple[int, ...] | None = None) -> StepISolution:
    """Solve the Step-I program at a $1 goal price.

    `warm_basis` evaluates a known optimal basis instead of pivoting from
    scratch; the four-phase driver uses it so that every scalar inside the
    ranging interval reports the same interim prices (the basis is optimal
    across the whole interval).
    """
    idx = _assessed_index(dataset, o)
    lp = build_tsp(dataset, o, kind)
    sol = resolve_with_basis(lp, warm_basis) if warm_basis is not None else solve(lp)
    if sol.status == "infeasible":
        if kind.has_sic:
            raise InfeasibleScalarError(
                f"no peer combination satisfies the intensity sum {kind.kappa:.6g} for DMU {o!r}"
            )
        raise AssessmentError(f"program infeasible for DMU {o!r}")
    if sol.status != "optimal":
        raise AssessmentError(f"unexpected solver status {sol.status!r} for DMU {o!r}")

    n, m, s = dataset.n, dataset.m, dataset.s
    pi = sol.x[:n].copy()
    Q = sol.x[n : n + m].copy()
    P = sol.x[n + m :].copy()
    v = sol.duals[:m].copy()
    u = sol.duals[m : m + s].copy()
    w = float(sol.duals[m + s]) if kind.has_sic else 0.0

    delta = float(sol.objective)
    Delta = float(sol.duals @ lp.b)
    if abs(delta - Delta) > DUALITY_TOL * max(1.0, abs(delta)):
        raise VgaError(f"primal/dual objectives disagree: {delta} vs {Delta}")
    if np.any(v <= 0) or np.any(u <= 0):
        raise VgaError("interim prices must be positive; the goal-price bounds guarantee it")

    return StepISolution(
        o=o, kind=kind, tau_sharp=1.0, Q=Q, P=P, pi=pi,
        v_sharp=v, u_sharp=u, w_sharp=w,
        delta_sharp=delta, Delta_sharp=Delta,
        degenerate=sol.degenerate, _lp=lp, _solution=sol,
    )


def compute_gamma(step1: StepISolution) -> float:
    """Input share of the total slack price, used to split the scale price.

    Falls back to 0.5 when there is nothing to split: either the unit is
    efficient (no slack) or the scale price is zero.
    """
    total = float(np.sum(step1.Q) + np.sum(step1.P))
    if total <= PEER_TOL:
        return 0.5
    if abs(step1.omega_sharp) <= W_TOL:
        return 0.5
    return float(np.sum(step1.Q) / total)


def _targets(x_o: np.ndarray, y_o: np.ndarray, Q: np.ndarray, P: np.ndarray):
    return x_o * (1.0 - Q), y_o * (1.0 + P)


def normalize_step2(dataset: Dataset, step1: StepISolution, gamma: float | None = None) -> VgaAssessment:
    """Rescale a Step-I solution into the $1-normalized assessment."""
    if gamma is None:
        gamma = compute_gamma(step1)
    idx = dataset.index_of(step1.o)
    x_o = dataset.dmus[idx].inputs
    y_o = dataset.dmus[idx].outputs

    vx = float(step1.v_sharp @ x_o)
    uy = float(step1.u_sharp @ y_o)
    omega_sharp = step1.omega_sharp
    if step1.kind.has_sic:
        t = 1.0 / (vx + (1.0 - gamma) * omega_sharp)
    else:
        t = 1.0 / vx

    v_star = t * step1.v_sharp
    u_star = t * step1.u_sharp
    w_star = t * step1.w_sharp
    omega_star = t * omega_sharp
    alpha = t * vx
    beta = t * uy
    if step1.kind.has_sic:
        alpha_aff = alpha + (1.0 - gamma) * omega_star
        beta_aff = beta - gamma * omega_star
    else:
        alpha_aff, beta_aff = alpha, beta

    x_hat, y_hat = _targets(x_o, y_o, step1.Q, step1.P)
    alpha_hat = float(v_star @ x_hat)
    beta_hat = float(u_star @ y_hat)
    if step1.kind.has_sic:
        alpha_hat += (1.0 - gamma) * omega_star
        beta_hat -= gamma * omega_star

    E = beta_aff / alpha_aff
    F = 1.0 - E
    T_check = (alpha - beta) / alpha_aff
    T = 1.0 - T_check
    T_dot = (alpha - beta) / alpha
    S = omega_star / alpha_aff
    if step1.kind.has_sic:
        Xi = (beta_hat / beta_aff) / (alpha_hat / alpha_aff)
    else:
        Xi = (beta_hat / beta) / (alpha_hat / alpha)

    peers = tuple(
        dataset.dmus[j].id for j in range(dataset.n) if step1.pi[j] > PEER_TOL
    )
    tau_star = t * step1.tau_sharp
    return VgaAssessment(
        dataset=dataset,
        step1=step1,
        gamma=float(gamma),
        t=float(t),
        tau_star=float(tau_star),
        v_star=v_star,
        u_star=u_star,
        w_star=float(w_star),
        omega_star=float(omega_star),
        delta_star=float(t * step1.delta_sharp),
        Delta_star=float(t * step1.Delta_sharp),
        alpha=float(alpha),
        beta=float(beta),
        alpha_aff=float(alpha_aff),
        beta_aff=float(beta_aff),
        alpha_hat=float(alpha_hat),
        beta_hat=float(beta_hat),
        x_hat=x_hat,
        y_hat=y_hat,
        peers=peers,
        E=float(E),
        F=float(F),
        T_check=float(T_check),
        T_dot=float(T_dot),
        T=float(T),
        S=float(S),
        Xi=float(Xi),
        goal_input_prices=tau_star / x_o,
        goal_output_prices=tau_star / y_o,
    )


def assess(dataset: Dataset, o: str, kind: ProgramKind,
           warm_basis: tuple[int, ...] | None = None) -> VgaAssessment:
    """Full assessment: Step I, slack-share split, Step II normalization."""
    step1 = solve_step1(dataset, o, kind, warm_basis=warm_basis)
    return normalize_step2(dataset, step1, compute_gamma(step1))


def compute_targets(dataset: Dataset, a: VgaAssessment) -> tuple[np.ndarray, np.ndarray]:
    """Benchmark levels x_o(1-Q), y_o(1+P); cross-checked against the peer
    combination, which must agree within the slackness tolerance."""
    idx = dataset.index_of(a.o)
    x_o = dataset.dmus[idx].inputs
    y_o = dataset.dmus[idx].outputs
    x_hat, y_hat = _targets(x_o, y_o, a.step1.Q, a.step1.P)
    combo_x = dataset.X.T @ a.step1.pi
    combo_y = dataset.Y.T @ a.step1.pi
    scale = max(1.0, float(np.max(np.abs(combo_x))), float(np.max(np.abs(combo_y))))
    if np.max(np.abs(combo_x - x_hat)) > CS_TOL * scale or np.max(np.abs(combo_y - y_hat)) > CS_TOL * scale:
        raise VgaError("peer combination does not reproduce the slack-based targets")
    return x_hat, y_hat


def boundary_efficiency(a: VgaAssessment) -> float:
    """Target point's output-to-input price ratio; 1 on the boundary."""
    return a.beta_hat / a.alpha_hat


@dataclass(frozen=True)
class DualityCheck:
    name: str
    residual: float
    passed: bool


@dataclass(frozen=True)
class DualityReport:
    checks: tuple[DualityCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> tuple[DualityCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def verify_duality(dataset: Dataset, a: VgaAssessment, tol: float = CS_TOL) -> DualityReport:
    """Certify the optimality conditions of an assessment.

    Covers objective equality, target/peer-combination agreement, the
    per-index and per-DMU complementary slackness products, the binding
    goal-price bounds, the intensity-sum slackness, and the nonnegativity
    of every DMU's gap.  Failed checks are reported with their residuals,
    never raised.
    """
    checks = []

    def add(name, residual):
        residual = float(abs(residual))
        checks.append(DualityCheck(name, residual, residual <= tol))

    idx = dataset.index_of(a.o)
    x_o = dataset.dmus[idx].inputs
    y_o = dataset.dmus[idx].outputs
    X, Y = dataset.X, dataset.Y
    s1 = a.step1
    kappa = s1.kind.kappa if s1.kind.has_sic else None

    add("objective_equality", a.delta_star - a.Delta_star)

    combo_x = X.T @ s1.pi
    combo_y = Y.T @ s1.pi
    add("peer_combination_inputs", np.max(np.abs(combo_x - a.x_hat) / np.maximum(1.0, np.abs(x_o))))
    add("peer_combination_outputs", np.max(np.abs(combo_y - a.y_hat) / np.maximum(1.0, np.abs(y_o))))

    add("slackness_inputs", np.max(np.abs((combo_x - a.x_hat) * a.v_star)))
    add("slackness_outputs", np.max(np.abs((combo_y - a.y_hat) * a.u_star)))

    gaps = X @ a.v_star - Y @ a.u_star + (a.w_star if s1.kind.has_sic else 0.0)
    add("gap_nonnegative", max(0.0, float(-np.min(gaps))))
    add("peer_gap_slackness", np.max(np.abs(gaps * s1.pi)))
    peer_idx = [j for j in range(dataset.n) if dataset.dmus[j].id in a.peers]
    if peer_idx:
        add("peers_zero_gap", np.max(np.abs(gaps[peer_idx])))

    add("goal_bound_inputs", np.max(np.abs((a.v_star * x_o - a.tau_star) * s1.Q)))
    add("goal_bound_outputs", np.max(np.abs((a.u_star * y_o - a.tau_star) * s1.P)))
    add("goal_floor_inputs", max(0.0, float(np.max(a.tau_star - a.v_star * x_o))))
    add("goal_floor_outputs", max(0.0, float(np.max(a.tau_star - a.u_star * y_o))))

    if s1.kind.has_sic:
        add("intensity_sum_slackness", (float(np.sum(s1.pi)) - kappa) * a.w_star)

    return DualityReport(tuple(checks))
