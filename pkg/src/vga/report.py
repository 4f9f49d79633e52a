"""Machine-readable reports and the one JSON serialization path.

The CLI and the HTTP service both funnel through ``dump_json`` so that
identical inputs produce byte-identical documents.  Floats are fixed
at 15 significant digits; the CSV rendering rounds to 4 decimals to
match a printed-table presentation.
"""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass

import numpy as np

from . import dataset as ds_mod
from .models import VgaAssessment, boundary_efficiency, verify_duality
from .phases import Phase4Session
from .post import decompose, geometry, interlinkage
from .sbm import SbmComparison

SCHEMA_VERSION = "1"


def _f15(x: float) -> float:
    return float(f"{float(x):.15g}")


def jsonable(value):
    """Recursively convert reports to plain JSON types (floats at 15 sig digits)."""
    if isinstance(value, (np.floating, float)):
        return _f15(value)
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if is_dataclass(value) and not isinstance(value, type):
        return jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (frozenset, set)):
        return sorted(jsonable(v) for v in value)
    return value


def dump_json(payload) -> str:
    return json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n"


def geometry_dict(g) -> dict:
    return {
        "frame": g.frame,
        "points": [
            {"id": p.id, "x": p.x, "y": p.y, "kind": p.kind, "quadrant": p.quadrant}
            for p in g.points
        ],
        "anchor": {"x": g.anchor[0], "y": g.anchor[1]},
        "boundary": g.boundary,
        "vectors": list(g.vectors),
    }


def assessment_report(a: VgaAssessment) -> dict:
    """Full machine-readable mirror of one assessment (both steps)."""
    dataset = a.dataset
    s1 = a.step1
    il = interlinkage(a)
    dec = decompose(a)
    duality = verify_duality(dataset, a)
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "assessment",
        "dmu": a.o,
        "program": {"variant": s1.kind.variant, "kappa": s1.kind.kappa},
        "dataset": {"n": dataset.n, "m": dataset.m, "s": dataset.s, "ids": list(dataset.ids),
                    "input_names": list(dataset.input_names), "output_names": list(dataset.output_names)},
        "degenerate": s1.degenerate,
        "step1": {
            "tau": s1.tau_sharp,
            "delta": s1.delta_sharp,
            "Delta": s1.Delta_sharp,
            "Q": s1.Q,
            "P": s1.P,
            "pi": s1.pi,
            "v": s1.v_sharp,
            "u": s1.u_sharp,
            "w": s1.w_sharp,
            "omega": s1.omega_sharp,
        },
        "step2": {
            "t": a.t,
            "tau": a.tau_star,
            "gamma": a.gamma,
            "delta": a.delta_star,
            "Delta": a.Delta_star,
            "v": a.v_star,
            "u": a.u_star,
            "w": a.w_star,
            "omega": a.omega_star,
            "alpha": a.alpha,
            "beta": a.beta,
            "alpha_affected": a.alpha_aff,
            "beta_affected": a.beta_aff,
            "alpha_target": a.alpha_hat,
            "beta_target": a.beta_hat,
            "x_target": a.x_hat,
            "y_target": a.y_hat,
            "peers": list(a.peers),
            "E": a.E,
            "F": a.F,
            "boundary_efficiency": boundary_efficiency(a),
            "goal_input_prices": a.goal_input_prices,
            "goal_output_prices": a.goal_output_prices,
        },
        "decomposition": {
            "E": dec.E, "F": dec.F, "T_check": dec.T_check, "T_dot": dec.T_dot,
            "T": dec.T, "S": dec.S, "Xi": dec.Xi, "rts_class": dec.rts_class,
        },
        "interlinkage": {
            "gamma_q": il.gamma_q,
            "gamma_p": il.gamma_p,
            "affected_input_prices": il.affected_input_prices,
            "affected_output_prices": il.affected_output_prices,
            "input_total": il.input_total,
            "output_total": il.output_total,
        },
        "geometry": geometry_dict(geometry(dataset, a)),
        "duality": {
            "checks": [{"name": c.name, "residual": c.residual, "passed": c.passed}
                       for c in duality.checks],
            "all_passed": duality.all_passed,
        },
    }


def session_snapshot(session: Phase4Session, session_id: str | None = None,
                     parent_id: str | None = None) -> dict:
    what_ifs = [{"kappa": k, "report": assessment_report(a)} for k, a in session.what_if_log]
    final = None
    if session.final is not None:
        final = {"kappa": session.final[0], "report": assessment_report(session.final[1])}
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "session",
        "session_id": session_id,
        "parent": parent_id,
        "o": session.o,
        "excluded": sorted(session.excluded),
        "dataset": ds_mod.to_jsonable(session.dataset),
        "kappa1": session.kappa1,
        "kappa2": session.kappa2,
        "kappa2_open": session.kappa2_open,
        "interval": [session.interval[0], session.interval[1]],
        "finalized": session.final is not None,
        "phase_reports": {
            "pte": assessment_report(session.phase1),
            "ste1": assessment_report(session.phase2),
            "ste2": assessment_report(session.phase3),
        },
        "what_if_log": what_ifs,
        "final": final,
    }


def comparison_report(cmp: SbmComparison) -> dict:
    sbm = cmp.sbm
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "sbm_comparison",
        "dmu": cmp.o,
        "rho": cmp.rho,
        "e_rel": cmp.e_rel,
        "e_pte": cmp.e_pte,
        "goal_ratio": cmp.goal_ratio,
        "flagged": cmp.flagged,
        "sbm": {
            "rho": sbm.rho,
            "t_cc": sbm.t_cc,
            "Q": sbm.Q,
            "P": sbm.P,
            "q": sbm.q,
            "p": sbm.p,
            "lambdas": sbm.lambdas,
            "v": sbm.v,
            "u": sbm.u,
            "xi": sbm.xi,
            "x_target": sbm.x_hat,
            "y_target": sbm.y_hat,
            "goal_input_value": sbm.goal_input_value,
            "goal_output_value": sbm.goal_output_value,
            "degenerate": sbm.degenerate,
        },
    }


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list):
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            rows.append((prefix, ";".join(_fmt4(v) for v in value)))
        else:
            for i, v in enumerate(value):
                _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, _fmt4(value)))


def _fmt4(value) -> str:
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return str(value)
    return f"{float(value):.4f}"


def report_csv(report: dict) -> str:
    """Key,value rendering with 4-decimal rounding."""
    rows: list = []
    _flatten("", jsonable(report), rows)
    return "field,value\n" + "\n".join(f"{k},{v}" for k, v in rows) + "\n"
