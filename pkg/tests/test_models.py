import numpy as np
import pytest

from conftest import random_dataset
from tablevals import printed
from vga.dataset import Dataset, DmuRecord
from vga.models import (
    AssessmentError,
    InfeasibleScalarError,
    ProgramKind,
    assess,
    boundary_efficiency,
    build_tsp,
    compute_gamma,
    compute_targets,
    normalize_step2,
    solve_step1,
    verify_duality,
)
from vga.simplex import solve


@pytest.fixture(scope="module")
def kappa1(table1):
    s1 = solve_step1(table1, "K", ProgramKind.pte())
    return float(np.sum(s1.pi))


@pytest.fixture(scope="module")
def kappa2(table1, kappa1):
    from vga.phases import phase3
    from vga.models import assess as _assess
    ste1 = _assess(table1, "K", ProgramKind.stea(kappa1))
    k2, _, _ = phase3(ste1)
    return k2


def test_program_kind_validation():
    with pytest.raises(ValueError):
        ProgramKind.stea(0.0)
    with pytest.raises(ValueError):
        ProgramKind.stea(-1.0)
    with pytest.raises(ValueError):
        ProgramKind("pte", 2.0)
    assert ProgramKind.pte().has_sic is False
    assert ProgramKind.stea(1.5).kappa == 1.5


def test_build_tsp_dimensions(table1):
    lp = build_tsp(table1, "K", ProgramKind.pte())
    assert lp.A.shape == (4, 10)
    lp2 = build_tsp(table1, "K", ProgramKind.stea(1.5153))
    assert lp2.A.shape == (5, 10)
    assert lp2.b[-1] == pytest.approx(1.5153)


def test_build_tsp_zero_level_rejected():
    recs = [DmuRecord(f"r{j}", [1.0 + j, 1.0], [2.0, 1.0]) for j in range(6)]
    recs[0] = DmuRecord("r0", [0.0, 1.0], [2.0, 1.0])
    ds = Dataset(tuple(recs), ("a[u]", "b[u]"), ("c[u]", "d[u]"))
    with pytest.raises(AssessmentError, match="zero"):
        build_tsp(ds, "r0", ProgramKind.pte())
    # a peer with a zero level does not block assessing someone else
    assert build_tsp(ds, "r1", ProgramKind.pte()).A.shape == (4, 10)


def test_step1_pte_matches_table(table1):
    s1 = solve_step1(table1, "K", ProgramKind.pte())
    assert s1.delta_sharp == printed(2.3010, 4)
    assert s1.Delta_sharp == pytest.approx(s1.delta_sharp, abs=1e-7)
    np.testing.assert_allclose(s1.Q, [0.0, 0.5334], atol=2.5e-3)
    np.testing.assert_allclose(s1.P, [0.0, 1.7677], atol=2.5e-3)
    assert s1.pi[2] == printed(1.421, 3)   # unit B
    assert s1.pi[3] == printed(0.094, 3)   # unit D
    np.testing.assert_allclose(s1.v_sharp, [2.8713, 0.0069], atol=2.5e-3)
    np.testing.assert_allclose(s1.u_sharp, [0.0022, 0.0204], atol=2.5e-3)
    assert s1.w_sharp == 0.0
    assert not s1.degenerate


def test_step1_ste1_matches_table(table1, kappa1):
    assert kappa1 == printed(1.5153, 4)
    s1 = solve_step1(table1, "K", ProgramKind.stea(kappa1))
    np.testing.assert_allclose(s1.Q, [0.0, 0.5334], atol=2.5e-3)
    np.testing.assert_allclose(s1.P, [0.0, 1.7677], atol=2.5e-3)
    np.testing.assert_allclose(s1.v_sharp, [0.6250, 0.0069], atol=2.5e-3)
    np.testing.assert_allclose(s1.u_sharp, [0.0011, 0.0204], atol=2.5e-3)
    assert s1.w_sharp == printed(1.6362, 4)
    assert s1.degenerate  # the pinned sum sits exactly at the slack optimum


def test_step1_ste2_matches_table(table1, kappa2):
    assert kappa2 == printed(0.5150, 4)
    s1 = solve_step1(table1, "K", ProgramKind.stea(kappa2))
    np.testing.assert_allclose(s1.Q, [0.4554, 0.2089], atol=2.5e-3)
    np.testing.assert_allclose(s1.P, [0.0, 0.0], atol=1e-9)
    assert s1.pi[2] == printed(0.119, 3)
    assert s1.pi[3] == printed(0.396, 3)
    assert s1.delta_sharp == printed(0.6643, 4)
    assert s1.w_sharp == printed(1.6362, 4)


def test_gamma_rules(table1, kappa1, kappa2):
    ste1 = solve_step1(table1, "K", ProgramKind.stea(kappa1))
    assert compute_gamma(ste1) == printed(0.232, 3)
    ste2 = solve_step1(table1, "K", ProgramKind.stea(kappa2))
    assert compute_gamma(ste2) == pytest.approx(1.0, abs=1e-9)
    # zero scale price -> 0.5 regardless of slacks
    pte = solve_step1(table1, "K", ProgramKind.pte())
    assert compute_gamma(pte) == 0.5
    # efficient unit -> 0.5
    eff = solve_step1(table1, "B", ProgramKind.pte())
    assert compute_gamma(eff) == 0.5


def test_normalize_pte(table1):
    a = assess(table1, "K", ProgramKind.pte())
    assert a.t == printed(0.179, 3)
    assert a.alpha == pytest.approx(1.0, abs=1e-9)
    assert a.delta_star == printed(0.4113, 4)
    assert a.E == printed(0.589, 3)
    assert a.F == pytest.approx(1 - a.E, abs=1e-12)
    assert a.Xi == printed(1.699, 3)
    np.testing.assert_allclose(a.v_star, [0.5133, 0.0012], atol=2.5e-3)
    np.testing.assert_allclose(a.u_star, [0.0004, 0.0036], atol=2.5e-3)
    assert a.peers == ("B", "D")


def test_normalize_ste1(table1, kappa1):
    a = assess(table1, "K", ProgramKind.stea(kappa1))
    assert a.t == printed(0.256, 3)
    assert a.alpha_aff == pytest.approx(1.0, abs=1e-9)
    assert a.delta_star == printed(0.5893, 4)
    assert a.E == printed(0.411, 3)
    assert a.omega_star == printed(0.635, 3)
    assert a.w_star == printed(0.4190, 4)
    assert a.alpha_aff / a.t == printed(3.905, 3)
    assert a.beta_aff / a.t == printed(1.604, 3)


def test_scale_identity_between_steps(table1):
    # Every money quantity in Step II is t times its Step-I counterpart;
    # slack ratios and intensities are shared.
    for kind in (ProgramKind.pte(), ProgramKind.stea(1.0)):
        a = assess(table1, "K", kind)
        s1 = a.step1
        np.testing.assert_allclose(a.v_star, a.t * s1.v_sharp, rtol=1e-12)
        np.testing.assert_allclose(a.u_star, a.t * s1.u_sharp, rtol=1e-12)
        assert a.w_star == pytest.approx(a.t * s1.w_sharp, rel=1e-12)
        assert a.delta_star == pytest.approx(a.t * s1.delta_sharp, rel=1e-12)
        assert a.tau_star == pytest.approx(a.t, rel=1e-12)


def test_objective_invariant_to_goal_price(table1):
    base = solve(build_tsp(table1, "K", ProgramKind.pte()))
    scaled = solve(build_tsp(table1, "K", ProgramKind.pte(), tau=7.3))
    np.testing.assert_allclose(scaled.x, base.x, atol=1e-9)
    assert scaled.objective == pytest.approx(7.3 * base.objective, rel=1e-9)


def test_targets_pte(table1):
    a = assess(table1, "K", ProgramKind.pte())
    assert a.x_hat[0] == printed(1.6, 1)
    assert a.x_hat[1] == printed(67.66, 2)
    assert a.y_hat[0] == printed(1036.0, 0)
    assert a.y_hat[1] == printed(135.6, 1)
    xh, yh = compute_targets(table1, a)
    np.testing.assert_allclose(xh, a.x_hat)
    np.testing.assert_allclose(yh, a.y_hat)


def test_targets_ste2(table1, kappa2):
    a = assess(table1, "K", ProgramKind.stea(kappa2))
    np.testing.assert_allclose(a.x_hat, [0.8713, 114.72], atol=2e-2)
    np.testing.assert_allclose(a.y_hat, [1036.0, 49.0], atol=1e-6)


def test_efficient_unit_is_its_own_benchmark(table1):
    for o in ("B", "D"):
        a = assess(table1, o, ProgramKind.pte())
        assert a.E == pytest.approx(1.0, abs=1e-9)
        assert a.delta_star == pytest.approx(0.0, abs=1e-9)
        rec = table1.dmu(o)
        np.testing.assert_allclose(a.x_hat, rec.inputs, atol=1e-9)
        np.testing.assert_allclose(a.y_hat, rec.outputs, atol=1e-9)
        assert a.Xi == pytest.approx(1.0, abs=1e-9)


def test_goal_price_floor(table1):
    for kind in (ProgramKind.pte(), ProgramKind.stea(1.0)):
        a = assess(table1, "K", kind)
        rec = table1.dmu("K")
        assert np.min(a.v_star * rec.inputs) >= a.tau_star - 1e-9
        assert np.min(a.u_star * rec.outputs) >= a.tau_star - 1e-9
        np.testing.assert_allclose(a.goal_input_prices * rec.inputs, a.tau_star, rtol=1e-12)


def test_boundary_efficiency_is_one(table1, kappa1):
    for kind in (ProgramKind.pte(), ProgramKind.stea(kappa1), ProgramKind.stea(1.0)):
        a = assess(table1, "K", kind)
        assert boundary_efficiency(a) == pytest.approx(1.0, abs=1e-7)
    pte = assess(table1, "K", ProgramKind.pte())
    assert pte.alpha_hat == printed(0.905, 3)
    assert pte.beta_hat == printed(0.905, 3)


def test_verify_duality_table1(table1):
    for o in table1.ids:
        a = assess(table1, o, ProgramKind.pte())
        rep = verify_duality(table1, a)
        assert rep.all_passed, rep.failed()


def test_peer_zero_gap_with_scale_price(table1, kappa1):
    # For pinned-scale assessments the peers satisfy v.x_j - u.y_j + w = 0.
    a = assess(table1, "K", ProgramKind.stea(kappa1))
    for o in a.peers:
        rec = table1.dmu(o)
        gap = float(a.v_star @ rec.inputs - a.u_star @ rec.outputs + a.w_star)
        assert gap == pytest.approx(0.0, abs=1e-7)


def test_binding_bound_for_positive_slack(table1):
    a = assess(table1, "K", ProgramKind.pte())
    rec = table1.dmu("K")
    assert a.step1.Q[1] > 0
    assert a.v_star[1] * rec.inputs[1] == pytest.approx(a.tau_star, abs=1e-9)
    assert a.v_star[1] * rec.inputs[1] == printed(0.179, 3)


def test_infeasible_scalar(table1):
    with pytest.raises(InfeasibleScalarError):
        assess(table1, "K", ProgramKind.stea(2.0))


def test_pinned_sum_at_phase1_value_always_feasible():
    rng = np.random.default_rng(5)
    for _ in range(15):
        d = random_dataset(rng)
        o = d.ids[int(rng.integers(0, d.n))]
        pte = assess(d, o, ProgramKind.pte())
        kappa1 = float(np.sum(pte.step1.pi))
        ste1 = assess(d, o, ProgramKind.stea(kappa1))
        assert ste1.delta_star >= -1e-12
        np.testing.assert_allclose(ste1.step1.Q, pte.step1.Q, atol=1e-8)
        np.testing.assert_allclose(ste1.step1.P, pte.step1.P, atol=1e-8)


def test_efficiency_iff_zero_slack():
    rng = np.random.default_rng(6)
    for _ in range(10):
        d = random_dataset(rng)
        for o in d.ids:
            a = assess(d, o, ProgramKind.pte())
            zero_slack = float(np.sum(a.step1.Q) + np.sum(a.step1.P)) <= 1e-9
            assert (a.E >= 1 - 1e-9) == zero_slack
            assert (a.delta_star <= 1e-9) == zero_slack


def test_normalize_step2_accepts_explicit_gamma(table1, kappa1):
    s1 = solve_step1(table1, "K", ProgramKind.stea(kappa1))
    a = normalize_step2(table1, s1, gamma=compute_gamma(s1))
    b = normalize_step2(table1, s1)
    assert a.E == b.E
    assert a.gamma == b.gamma
