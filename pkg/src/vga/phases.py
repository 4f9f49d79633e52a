"""Four-phase benchmark-selection procedure.

Phase 1 assesses without a scale condition and reads off the intensity
sum kappa1.  Phase 2 re-assesses with the sum pinned to kappa1.  Phase
3 ranges the pinned row's right-hand side to find the other end kappa2
of the scalar interval (toward improving efficiency, per the sign of
the scale price).  Phase 4 is interactive: what-if trials inside
[kappa_min, kappa_max], peer exclusion with a fresh phase 1-3 rerun,
and a final scalar choice.

Sessions are immutable; every operation returns a new session object.
Scalar trials inside the interval are evaluated on the phase-2 optimal
basis, which stays optimal across the whole interval, so the interim
prices match at both ends exactly as the ranging theory promises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dataset import Dataset, exclude_dmus
from .models import (
    W_TOL,
    ProgramKind,
    VgaAssessment,
    VgaError,
    assess,
)
from .simplex import BasisInfeasibleError, rhs_range


class KappaOutsideIntervalError(VgaError):
    """Requested scalar lies outside the feasible interval."""


class AlreadyFinalizedError(VgaError):
    """The session has a final scalar; it is read-only."""


@dataclass(frozen=True)
class WhatIfRejection:
    kappa: float
    reason: str


@dataclass(frozen=True)
class Phase4Session:
    dataset: Dataset
    o: str
    excluded: frozenset[str]
    phase1: VgaAssessment
    kappa1: float
    phase2: VgaAssessment
    kappa2: float
    kappa2_open: bool
    interval: tuple[float, float]
    phase3: VgaAssessment
    what_if_log: tuple[tuple[float, VgaAssessment], ...] = ()
    final: tuple[float, VgaAssessment] | None = None
    parent: "Phase4Session | None" = None

    @property
    def kappa_min(self) -> float:
        return self.interval[0]

    @property
    def kappa_max(self) -> float:
        return self.interval[1]

    @property
    def peer_ids(self) -> frozenset[str]:
        return frozenset(self.phase1.peers) | frozenset(self.phase2.peers)

    def contains(self, kappa: float) -> bool:
        lo, hi = self.interval
        tol = 1e-9 * max(1.0, abs(hi))
        return lo - tol <= kappa <= hi + tol


def phase1(dataset: Dataset, o: str) -> tuple[VgaAssessment, float]:
    """Initial assessment without a scale condition; kappa1 is the optimal
    intensity sum."""
    a = assess(dataset, o, ProgramKind.pte())
    return a, float(np.sum(a.step1.pi))


def phase2(dataset: Dataset, o: str, kappa1: float,
           reference: VgaAssessment | None = None) -> VgaAssessment:
    """Assessment with the intensity sum pinned to kappa1.

    Pinning at the phase-1 optimum changes the prices but not the slacks:
    that relationship is verified against the phase-1 assessment when one
    is supplied.
    """
    a = assess(dataset, o, ProgramKind.stea(kappa1))
    if reference is not None:
        s_new, s_ref = a.step1, reference.step1
        if (
            abs(s_new.delta_sharp - s_ref.delta_sharp) > 1e-7
            or np.max(np.abs(s_new.Q - s_ref.Q)) > 1e-7
            or np.max(np.abs(s_new.P - s_ref.P)) > 1e-7
            or abs(float(np.sum(s_new.pi)) - kappa1) > 1e-7
        ):
            raise VgaError("pinned-scalar program disagrees with the unconstrained slacks")
    return a


def phase3(ste1: VgaAssessment) -> tuple[float, bool, VgaAssessment]:
    """Range the pinned intensity-sum row to get the second scalar.

    Moves in the direction that improves efficiency: down when the scale
    price is positive, up when negative.  An unbounded direction is capped
    at ten times kappa1 and reported as an open bound.  The second-scalar
    assessment is evaluated on the same optimal basis, so its interim
    prices equal phase 2's.
    """
    step1 = ste1.step1
    kappa1 = step1.kind.kappa
    dataset = ste1.dataset
    if abs(step1.w_sharp) <= W_TOL:
        return kappa1, False, ste1

    sic_row = dataset.m + dataset.s
    rng = rhs_range(step1._lp, step1._solution, sic_row)
    open_bound = False
    if step1.w_sharp > 0:
        delta = rng.allowable_decrease
        if math.isinf(delta):
            open_bound = True
            delta = 10.0 * kappa1
        kappa2 = max(kappa1 - delta, 1e-12)
    else:
        delta = rng.allowable_increase
        if math.isinf(delta):
            open_bound = True
            delta = 10.0 * kappa1
        kappa2 = kappa1 + delta

    ste2 = _assess_on_interval_basis(ste1, kappa2)
    if np.max(np.abs(ste2.step1.v_sharp - step1.v_sharp)) > 1e-7 or \
       np.max(np.abs(ste2.step1.u_sharp - step1.u_sharp)) > 1e-7 or \
       abs(ste2.step1.w_sharp - step1.w_sharp) > 1e-7:
        raise VgaError("interim prices moved across the ranging interval")
    return float(kappa2), open_bound, ste2


def _assess_on_interval_basis(ste1: VgaAssessment, kappa: float) -> VgaAssessment:
    basis = ste1.step1._solution.basis
    try:
        return assess(ste1.dataset, ste1.o, ProgramKind.stea(kappa), warm_basis=basis)
    except BasisInfeasibleError:
        # Tolerance slip right at an endpoint; a fresh solve settles it.
        return assess(ste1.dataset, ste1.o, ProgramKind.stea(kappa))


def start_session(dataset: Dataset, o: str, excluded=frozenset(),
                  parent: Phase4Session | None = None) -> Phase4Session:
    """Run phases 1-3 and open the interactive session."""
    pte, kappa1 = phase1(dataset, o)
    ste1 = phase2(dataset, o, kappa1, reference=pte)
    kappa2, open_bound, ste2 = phase3(ste1)
    interval = (min(kappa1, kappa2), max(kappa1, kappa2))
    return Phase4Session(
        dataset=dataset,
        o=o,
        excluded=frozenset(excluded),
        phase1=pte,
        kappa1=kappa1,
        phase2=ste1,
        kappa2=kappa2,
        kappa2_open=open_bound,
        interval=interval,
        phase3=ste2,
        parent=parent,
    )


def _interval_assessment(session: Phase4Session, kappa: float) -> VgaAssessment:
    lo, hi = session.interval
    return _assess_on_interval_basis(session.phase2, min(max(kappa, lo), hi))


def what_if(session: Phase4Session, kappa: float):
    """Trial assessment at a scalar inside the feasible interval.

    Returns ``(new_session, assessment)`` on acceptance and
    ``(session, WhatIfRejection)`` otherwise; rejection is an outcome,
    not an exception.
    """
    if session.final is not None:
        return session, WhatIfRejection(kappa, "session is finalized and read-only")
    if not session.contains(kappa):
        lo, hi = session.interval
        return session, WhatIfRejection(
            kappa, f"outside feasible interval [{lo:.6g}, {hi:.6g}]"
        )
    a = _interval_assessment(session, kappa)
    new = replace(session, what_if_log=session.what_if_log + ((float(kappa), a),))
    return new, a


def exclude_and_rerun(session: Phase4Session, ids) -> Phase4Session:
    """Drop incompatible peers and rerun phases 1-3 on the reduced dataset.

    Only current best peers may be excluded; the prior session is kept as
    the new session's parent.
    """
    ids = frozenset(ids)
    if not ids:
        return session
    if session.o in ids:
        raise VgaError("cannot exclude the assessed DMU")
    non_peers = ids - session.peer_ids
    if non_peers:
        raise VgaError(f"not current best peers: {sorted(non_peers)}")
    reduced = exclude_dmus(session.dataset, ids)
    return start_session(reduced, session.o, excluded=session.excluded | ids, parent=session)


def finalize(session: Phase4Session, kappa: float) -> Phase4Session:
    """Lock in the target scalar; the session becomes read-only."""
    if session.final is not None:
        raise AlreadyFinalizedError(f"session already finalized at {session.final[0]:.6g}")
    if not session.contains(kappa):
        lo, hi = session.interval
        raise KappaOutsideIntervalError(
            f"kappa {kappa:.6g} outside feasible interval [{lo:.6g}, {hi:.6g}]"
        )
    a = _interval_assessment(session, kappa)
    return replace(session, final=(float(kappa), a))
