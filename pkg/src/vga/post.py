"""Post-analysis of a normalized assessment.

Everything here is pure arithmetic over the assessment's stored prices:
the efficiency decomposition, the best-returns-to-practice ratio, the
scale classification from the sign of the intensity-sum price, the 2D
virtual-technology geometry (points, boundary diagonal, anchor), and
the per-index interlinkage shares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .models import W_TOL, VgaAssessment

RTS_DECREASING = "decreasing"
RTS_INCREASING = "increasing"
RTS_CONSTANT = "constant"
RTS_NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Decomposition:
    E: float
    F: float
    T_check: float
    T_dot: float
    T: float
    S: float
    Xi: float
    rts_class: str


@dataclass(frozen=True)
class GeometryPoint:
    id: str
    x: float
    y: float
    kind: str  # dmu | peer | assessed | target | origin
    quadrant: str


@dataclass(frozen=True)
class GeometryReport:
    frame: str  # "pte" | "ste"
    points: tuple[GeometryPoint, ...]
    anchor: tuple[float, float]
    boundary: str
    vectors: tuple[dict, ...]


@dataclass(frozen=True)
class InterlinkageReport:
    gamma_q: np.ndarray           # per-input share of the scale price
    gamma_p: np.ndarray           # per-output share
    affected_input_prices: np.ndarray
    affected_output_prices: np.ndarray

    @property
    def input_total(self) -> float:
        return float(np.sum(self.affected_input_prices))

    @property
    def output_total(self) -> float:
        return float(np.sum(self.affected_output_prices))


def rts_classify(a: VgaAssessment, tol_w: float = W_TOL) -> str:
    """Scale direction from the sign of the intensity-sum price."""
    if not a.kind.has_sic:
        return RTS_NOT_APPLICABLE
    if a.w_star > tol_w:
        return RTS_DECREASING
    if a.w_star < -tol_w:
        return RTS_INCREASING
    return RTS_CONSTANT


def brtp(a: VgaAssessment) -> float:
    """Best returns to practice: output improvement factor over input
    improvement factor at the target (affected values under a scale
    condition, plain values otherwise)."""
    if a.kind.has_sic:
        return (a.beta_hat / a.beta_aff) / (a.alpha_hat / a.alpha_aff)
    return (a.beta_hat / a.beta) / (a.alpha_hat / a.alpha)


def decompose(a: VgaAssessment) -> Decomposition:
    """Efficiency split: E = T - S and F = T_check + S, with S the scale
    share of the affected virtual input price."""
    return Decomposition(
        E=a.E, F=a.F, T_check=a.T_check, T_dot=a.T_dot, T=a.T, S=a.S,
        Xi=a.Xi, rts_class=rts_classify(a),
    )


def _quadrant(x: float, y: float, tol: float = 1e-12) -> str:
    if abs(x) <= tol and abs(y) <= tol:
        return "origin"
    if x >= -tol and y >= -tol:
        return "I"
    if x < 0 and y >= -tol:
        return "II"
    if x < 0 and y < 0:
        return "III"
    return "IV"


def geometry(dataset: Dataset, a: VgaAssessment) -> GeometryReport:
    """Virtual-technology scatter for one assessment.

    Every DMU is a point; peers sit on the boundary diagonal, everyone else
    below it.  Under a scale condition the per-DMU coordinates absorb a unit
    of the scale price split by gamma, the assessed unit absorbs its full
    scale price, and the anchor marks that price in the plane.
    """
    frame = "ste" if a.kind.has_sic else "pte"
    gamma = a.gamma
    w = a.w_star if a.kind.has_sic else 0.0
    shift_x = (1.0 - gamma) * w
    shift_y = -gamma * w

    points = []
    X, Y = dataset.X, dataset.Y
    for j, rec in enumerate(dataset.dmus):
        if rec.id == a.o:
            x, y = a.alpha_aff, a.beta_aff
            kind = "assessed"
        else:
            x = float(a.v_star @ X[j]) + shift_x
            y = float(a.u_star @ Y[j]) + shift_y
            kind = "peer" if rec.id in a.peers else "dmu"
        points.append(GeometryPoint(rec.id, x, y, kind, _quadrant(x, y)))
    points.append(GeometryPoint("T", a.alpha_hat, a.beta_hat, "target",
                                _quadrant(a.alpha_hat, a.beta_hat)))
    points.append(GeometryPoint("O", 0.0, 0.0, "origin", "origin"))

    anchor = ((1.0 - gamma) * a.omega_star, -gamma * a.omega_star)
    vectors = [{"from": "O", "to": a.o, "label": "total_gap"}]
    if a.kind.has_sic:
        vectors += [
            {"from": "AP", "to": "O", "label": "scale_price"},
            {"from": "AP", "to": a.o, "label": "technical_gap"},
        ]
    return GeometryReport(
        frame=frame,
        points=tuple(points),
        anchor=anchor,
        boundary="diagonal",
        vectors=tuple(vectors),
    )


def interlinkage(a: VgaAssessment) -> InterlinkageReport:
    """Split the scale price across indices in proportion to their slacks.

    When one side carries a share of the scale price but has no slack at
    all, the share is spread uniformly over that side's indices so the
    affected prices still total the affected virtual input/output price.
    """
    s1 = a.step1
    dataset = a.dataset
    idx = dataset.index_of(a.o)
    x_o = dataset.dmus[idx].inputs
    y_o = dataset.dmus[idx].outputs

    sum_q = float(np.sum(s1.Q))
    sum_p = float(np.sum(s1.P))
    m, s = s1.Q.shape[0], s1.P.shape[0]
    if sum_q > 0.0:
        gamma_q = (1.0 - a.gamma) * s1.Q / sum_q
    else:
        gamma_q = np.full(m, (1.0 - a.gamma) / m)
    if sum_p > 0.0:
        gamma_p = a.gamma * s1.P / sum_p
    else:
        gamma_p = np.full(s, a.gamma / s)

    return InterlinkageReport(
        gamma_q=gamma_q,
        gamma_p=gamma_p,
        affected_input_prices=a.v_star * x_o + gamma_q * a.omega_star,
        affected_output_prices=a.u_star * y_o - gamma_p * a.omega_star,
    )
