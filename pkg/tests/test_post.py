import dataclasses

import numpy as np
import pytest

from conftest import random_dataset
from tablevals import printed
from vga.dataset import Dataset, DmuRecord
from vga.models import ProgramKind, assess
from vga.phases import start_session, what_if
from vga.post import (
    RTS_CONSTANT,
    RTS_DECREASING,
    RTS_INCREASING,
    RTS_NOT_APPLICABLE,
    brtp,
    decompose,
    geometry,
    interlinkage,
    rts_classify,
)


@pytest.fixture(scope="module")
def session(table1):
    return start_session(table1, "K")


@pytest.fixture(scope="module")
def pte(session):
    return session.phase1


@pytest.fixture(scope="module")
def ste1(session):
    return session.phase2


@pytest.fixture(scope="module")
def ste2(session):
    return session.phase3


@pytest.fixture(scope="module")
def ste3(session):
    _, a = what_if(session, 1.0)
    return a


def test_decompose_ste1(ste1):
    d = decompose(ste1)
    assert d.E == printed(0.411, 3)
    assert d.T == printed(1.046, 3)
    assert d.S == printed(0.635, 3)
    assert d.rts_class == RTS_DECREASING


def test_decompose_ste3(ste3):
    d = decompose(ste3)
    assert d.E == printed(0.508, 3)
    assert d.T == printed(1.060, 3)
    assert d.S == printed(0.552, 3)


def test_decompose_pte(pte):
    d = decompose(pte)
    assert d.S == 0.0
    assert d.T == pytest.approx(d.E, abs=1e-12)
    assert d.rts_class == RTS_NOT_APPLICABLE


def test_decomposition_identities_random():
    rng = np.random.default_rng(17)
    for _ in range(10):
        ds = random_dataset(rng)
        for o in ds.ids[:4]:
            pte_a = assess(ds, o, ProgramKind.pte())
            k1 = float(np.sum(pte_a.step1.pi))
            for a in (pte_a, assess(ds, o, ProgramKind.stea(k1))):
                d = decompose(a)
                assert d.E == pytest.approx(d.T - d.S, abs=1e-9)
                assert d.F == pytest.approx(d.T_check + d.S, abs=1e-9)
                assert d.E + d.F == pytest.approx(1.0, abs=1e-12)


def test_brtp_values(pte, ste2):
    assert brtp(pte) == printed(1.699, 3)
    assert brtp(ste2) == printed(1.497, 3)


def test_brtp_efficient_unit(table1):
    assert brtp(assess(table1, "B", ProgramKind.pte())) == pytest.approx(1.0, abs=1e-9)


def test_brtp_scale_invariant(ste1):
    # Computed from Step-I quantities instead: identical ratio.
    s1 = ste1.step1
    rec = ste1.dataset.dmu(ste1.o)
    om = s1.omega_sharp
    g = ste1.gamma
    a_aff = float(s1.v_sharp @ rec.inputs) + (1 - g) * om
    b_aff = float(s1.u_sharp @ rec.outputs) - g * om
    a_hat = float(s1.v_sharp @ ste1.x_hat) + (1 - g) * om
    b_hat = float(s1.u_sharp @ ste1.y_hat) - g * om
    xi_step1 = (b_hat / b_aff) / (a_hat / a_aff)
    assert xi_step1 == pytest.approx(ste1.Xi, abs=1e-9)
    assert ste1.Xi == printed(2.435, 3)


def test_rts_classification(pte, ste1):
    assert rts_classify(pte) == RTS_NOT_APPLICABLE
    assert rts_classify(ste1) == RTS_DECREASING
    assert rts_classify(dataclasses.replace(ste1, w_star=0.0)) == RTS_CONSTANT
    assert rts_classify(dataclasses.replace(ste1, w_star=-0.3)) == RTS_INCREASING


def test_rts_increasing_constructed():
    # One input, one output; the assessed unit sits under a small
    # high-yield peer that the benchmark scales up several-fold, and the
    # pinned-sum price comes out negative: increasing returns.
    x = [5.7, 1.8, 4.5, 4.1, 6.7, 1.7]
    y = [2.4, 5.1, 4.2, 6.3, 3.7, 2.6]
    ds = Dataset(tuple(DmuRecord(f"d{j}", [x[j]], [y[j]]) for j in range(6)),
                 ("x[u]",), ("y[u]",))
    pte_a = assess(ds, "d0", ProgramKind.pte())
    k1 = float(np.sum(pte_a.step1.pi))
    assert k1 > 1  # the peer is scaled up
    ste = assess(ds, "d0", ProgramKind.stea(k1))
    assert ste.w_star < -1e-7
    assert rts_classify(ste) == RTS_INCREASING


def test_geometry_pte_frame(table1, pte):
    g = geometry(table1, pte)
    assert g.frame == "pte"
    assert g.boundary == "diagonal"
    by_id = {p.id: p for p in g.points}
    for peer in ("B", "D"):
        assert abs(by_id[peer].x - by_id[peer].y) <= 1e-7
        assert by_id[peer].kind == "peer"
    for p in g.points:
        if p.kind in ("dmu", "peer", "assessed"):
            assert p.y <= p.x + 1e-7
    assert g.anchor == (0.0, 0.0)
    assert by_id["K"].x == pytest.approx(1.0, abs=1e-9)
    assert by_id["T"].x == pytest.approx(by_id["T"].y, abs=1e-9)


def test_geometry_ste_frame(table1, ste1):
    g = geometry(table1, ste1)
    assert g.frame == "ste"
    by_id = {p.id: p for p in g.points}
    # table values for the affected coordinates
    assert by_id["A"].x == printed(0.902, 3)
    assert by_id["A"].y == printed(0.796, 3)
    assert by_id["B"].x == printed(0.533, 3)
    assert abs(by_id["B"].x - by_id["B"].y) <= 1e-7
    assert abs(by_id["D"].x - by_id["D"].y) <= 1e-7
    # anchor in the fourth quadrant at ((1-gamma) omega, -gamma omega)
    assert g.anchor[0] == printed(0.488, 3)
    assert g.anchor[1] == printed(-0.147, 3)
    assert g.anchor[0] > 0 > g.anchor[1]
    labels = {v["label"] for v in g.vectors}
    assert labels == {"total_gap", "scale_price", "technical_gap"}


def test_geometry_vector_identity(table1, ste1, ste3):
    # alpha_aff - (1-gamma) omega = v.x_o and beta_aff + gamma omega = u.y_o
    rec = table1.dmu("K")
    for a in (ste1, ste3):
        lhs_x = a.alpha_aff - (1 - a.gamma) * a.omega_star
        lhs_y = a.beta_aff + a.gamma * a.omega_star
        assert lhs_x == pytest.approx(float(a.v_star @ rec.inputs), abs=1e-9)
        assert lhs_y == pytest.approx(float(a.u_star @ rec.outputs), abs=1e-9)


def test_geometry_anchor_shrinks_with_omega(table1, ste1, ste2):
    g1 = geometry(table1, ste1)
    g2 = geometry(table1, ste2)
    assert abs(g2.anchor[0]) + abs(g2.anchor[1]) < abs(g1.anchor[0]) + abs(g1.anchor[1])


def test_interlinkage_ste1(ste1):
    il = interlinkage(ste1)
    assert float(np.sum(il.gamma_q)) == pytest.approx(1 - ste1.gamma, abs=1e-12)
    assert float(np.sum(il.gamma_p)) == pytest.approx(ste1.gamma, abs=1e-12)
    assert il.input_total == pytest.approx(ste1.alpha_aff, abs=1e-9)
    assert il.output_total == pytest.approx(ste1.beta_aff, abs=1e-9)
    assert il.input_total == pytest.approx(1.0, abs=1e-9)


def test_interlinkage_ste2_no_output_slack(ste2):
    # All output slack is zero, so the scale share spreads uniformly and the
    # affected outputs still total the affected output price.
    il = interlinkage(ste2)
    assert float(np.sum(ste2.step1.P)) == pytest.approx(0.0, abs=1e-9)
    assert il.output_total == pytest.approx(ste2.beta_aff, abs=1e-9)
    assert il.output_total == printed(0.668, 3)
    np.testing.assert_allclose(il.gamma_p, ste2.gamma / len(il.gamma_p), atol=1e-12)


def test_interlinkage_pte_degenerates_to_raw_prices(table1, pte):
    il = interlinkage(pte)
    rec = table1.dmu("K")
    np.testing.assert_allclose(il.affected_input_prices, pte.v_star * rec.inputs, atol=1e-12)
    np.testing.assert_allclose(il.affected_output_prices, pte.u_star * rec.outputs, atol=1e-12)


def test_diagonal_law_random():
    rng = np.random.default_rng(23)
    for _ in range(8):
        ds = random_dataset(rng)
        o = ds.ids[0]
        pte_a = assess(ds, o, ProgramKind.pte())
        k1 = float(np.sum(pte_a.step1.pi))
        for a in (pte_a, assess(ds, o, ProgramKind.stea(k1))):
            g = geometry(ds, a)
            for p in g.points:
                if p.kind in ("dmu", "peer", "assessed"):
                    assert p.y <= p.x + 1e-7
                if p.kind == "peer":
                    assert abs(p.x - p.y) <= 1e-7
