import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

import mixedpls.power as power
from mixedpls.correlation import exact_eta, secure_one_bob
from mixedpls.geometry import PolarLocation
from mixedpls.power import (
    LOG2E,
    CaseUndetermined,
    EmptySchedule,
    ScaConfig,
    SolverStall,
    allocate_two_bob_closed,
    bob_interference_log,
    eve_total_log,
    ffb_allocate,
    grid_certificate,
    grid_search_two_bob,
    hs_allocate,
    hs_schedule,
    high_snr_objective,
    mfb_allocate,
    project_budget,
    ratio_allocation,
    sca_allocate,
    sca_on_gains,
    solve_p6,
    surrogate_objective,
    taylor_coeffs,
    waterfill_two,
)
from mixedpls.rates import GainTable, Scenario, gain_table, sum_secrecy_rate, unclamped_objective

from conftest import BETA, CFG, SIGMA2, los_user, ring_scenario, two_bob_scenario
from test_rates import five_bob_scenario


def random_gains(K, M, seed, hi=40.0):
    rng = np.random.default_rng(seed)
    return GainTable(rng.uniform(0, hi, (K, K)), rng.uniform(0, hi, (M, K)))


def simplex_samples(K, n, budget, rng):
    # uniform on {p >= 0, sum p <= budget}
    x = rng.dirichlet(np.ones(K + 1), size=n)[:, :K]
    return budget * x


def surrogate_grid_max(gt, co, budget, points=401):
    ax = np.linspace(0, budget, points)
    P1, P2 = np.meshgrid(ax, ax, indexing="ij")
    m = P1 + P2 <= budget * (1 + 1e-12)
    return surrogate_objective(gt, co, np.stack([P1[m], P2[m]], -1)).max()


# --- config and projection


def test_sca_config_validation():
    with pytest.raises(ValueError):
        ScaConfig(convergence_eps=0.0)
    with pytest.raises(ValueError):
        ScaConfig(max_iters=0)
    with pytest.raises(ValueError):
        ScaConfig(init="custom")


@given(hnp.arrays(float, st.integers(1, 8), elements=st.floats(-5, 5)), st.floats(0.01, 10))
def test_projection_feasible_and_idempotent(v, budget):
    p = project_budget(v, budget)
    assert np.all(p >= 0) and p.sum() <= budget * (1 + 1e-12) + 1e-12
    np.testing.assert_allclose(project_budget(p, budget), p, atol=1e-12)


@given(hnp.arrays(float, 4, elements=st.floats(-5, 5)), st.integers(0, 1000))
def test_projection_is_nearest(v, seed):
    p = project_budget(v, 1.0)
    others = simplex_samples(4, 200, 1.0, np.random.default_rng(seed))
    assert np.all(np.linalg.norm(others - v, axis=1) >= np.linalg.norm(p - v) - 1e-12)


# --- Taylor coefficients


def test_taylor_at_origin():
    gt = random_gains(3, 2, 0)
    co = taylor_coeffs(gt, np.zeros(3))
    np.testing.assert_array_equal(co.A, 0)
    np.testing.assert_array_equal(co.C, 0)
    off = ~np.eye(3, dtype=bool)
    np.testing.assert_allclose(co.B[off], (gt.v_bob**2 * LOG2E)[off])
    np.testing.assert_array_equal(np.diag(co.B), 0)
    np.testing.assert_allclose(co.D, gt.v_eve**2 * LOG2E)


@pytest.mark.parametrize("seed", range(10))
def test_taylor_bounds_and_tangency(seed):
    sc = ring_scenario(seed, num_bobs=4, num_eves=2)
    gt = gain_table(sc)
    rng = np.random.default_rng(seed)
    p0 = simplex_samples(4, 1, 1.0, rng)[0]
    co = taylor_coeffs(gt, p0)
    P = simplex_samples(4, 1000, 1.0, rng)
    lin_b = co.A + (P - p0) @ co.B.T
    lin_e = co.C + (P - p0) @ co.D.T
    assert np.all(bob_interference_log(gt, P) <= lin_b + 1e-9)
    assert np.all(eve_total_log(gt, P) <= lin_e + 1e-9)
    assert np.max(np.abs(bob_interference_log(gt, p0) - co.A)) <= 1e-6
    assert np.max(np.abs(eve_total_log(gt, p0) - co.C)) <= 1e-6
    assert np.all(co.B >= 0) and np.all(co.D >= 0)


@given(st.integers(1, 4), st.integers(0, 3), st.integers(0, 10_000))
def test_surrogate_minorises_and_touches(K, M, seed):
    gt = random_gains(K, M, seed)
    rng = np.random.default_rng(seed)
    p0 = simplex_samples(K, 1, 1.0, rng)[0]
    co = taylor_coeffs(gt, p0)
    P = simplex_samples(K, 200, 1.0, rng)
    assert np.all(surrogate_objective(gt, co, P) <= unclamped_objective(gt, P) + 1e-9)
    assert surrogate_objective(gt, co, p0) == pytest.approx(unclamped_objective(gt, p0), abs=1e-9)


# --- (P6)


def test_p6_no_eves_no_interference_is_waterfilling():
    gt = GainTable(np.diag([2.0, 1.0]), np.zeros((0, 2)))
    co = taylor_coeffs(gt, np.array([0.5, 0.5]))
    p = solve_p6(gt, co, 1.0).powers
    # water level: 1/2^2 + p1 = 1/1^2 + p2, p1 + p2 = 1
    np.testing.assert_allclose(p, [0.875, 0.125], atol=1e-6)
    np.testing.assert_allclose(p, waterfill_two((0.25, 1.0), 1.0), atol=1e-6)


def test_p6_single_bob_single_eve():
    # surrogate log2(1+9p) - [1 + (p-1) log2(e)/2] peaks at 1 + 9p = 18
    gt = GainTable(np.array([[3.0]]), np.array([[1.0]]))
    co = taylor_coeffs(gt, np.array([1.0]))
    assert solve_p6(gt, co, 2.0).powers[0] == pytest.approx(17 / 9, abs=1e-6)


@pytest.mark.parametrize("vb,ve,expected", [(3.0, 1.0, 2.0), (1.0, 3.0, 0.0)])
def test_sca_single_bob_sign_rule(vb, ve, expected):
    gt = GainTable(np.array([[vb]]), np.array([[ve]]))
    assert sca_on_gains(gt, 2.0).powers[0] == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("seed", range(6))
def test_p6_against_grid_certificate(seed):
    sc = ring_scenario(seed, num_bobs=2, num_eves=2)
    gt = gain_table(sc)
    co = taylor_coeffs(gt, np.array([0.3, 0.4]))
    p = solve_p6(gt, co, 1.0).powers
    assert surrogate_objective(gt, co, p) >= surrogate_grid_max(gt, co, 1.0) - 1e-3


@pytest.mark.parametrize("method", ["slsqp", "pga"])
def test_p6_never_worse_than_expansion_point(method):
    for seed in range(5):
        gt = random_gains(3, 2, seed)
        p0 = np.array([0.2, 0.3, 0.1])
        co = taylor_coeffs(gt, p0)
        p = solve_p6(gt, co, 1.0, method=method).powers
        assert surrogate_objective(gt, co, p) >= surrogate_objective(gt, co, p0) - 1e-12


def test_p6_conic_fallback_on_ill_conditioned_instance(monkeypatch):
    # one Eve sees a single beam 1e5 times stronger than the others
    ve2 = np.array([[6.3, 3.2, 7.9, 1.3e5, 5.0, 0.16, 63.0, 5.0, 31.6, 0.8]])
    rng = np.random.default_rng(0)
    vb2 = np.diag(rng.uniform(300, 900, 10)) + rng.uniform(0, 0.05, (10, 10)) * (1 - np.eye(10))
    gt = GainTable(np.sqrt(vb2), np.sqrt(ve2))
    p0 = np.full(10, 0.1)
    co = taylor_coeffs(gt, p0)
    monkeypatch.setattr(power, "_solve_slsqp", lambda *a: (p0, False))
    monkeypatch.setattr(power, "_solve_pga", lambda gt, co, b, tol, x0, **k: (x0, False))
    p = solve_p6(gt, co, 1.0).powers
    assert surrogate_objective(gt, co, p) > surrogate_objective(gt, co, p0)


def test_p6_stall_raised_when_all_solvers_fail(monkeypatch):
    gt = random_gains(2, 1, 0)
    co = taylor_coeffs(gt, np.array([0.5, 0.5]))
    monkeypatch.setattr(power, "_solve_slsqp", lambda *a: (np.array([0.5, 0.5]), False))
    monkeypatch.setattr(power, "_solve_pga", lambda gt, co, b, tol, x0, **k: (x0, False))
    monkeypatch.setattr(power, "_solve_conic", lambda *a: None)
    with pytest.raises(SolverStall) as exc:
        solve_p6(gt, co, 1.0)
    assert exc.value.allocation is not None


# --- SCA


def test_sca_single_bob_no_eve():
    sc = Scenario(CFG, [los_user(0.1, 150.0)], [], SIGMA2, 1.0, BETA)
    a = sca_allocate(sc)
    assert a.powers[0] == pytest.approx(1.0, abs=1e-9)
    assert a.iterations == 1


@given(st.integers(1, 5), st.integers(0, 3), st.integers(0, 10_000), st.floats(0.1, 5.0))
def test_sca_feasible_and_monotone(K, M, seed, budget):
    gt = random_gains(K, M, seed)
    a = sca_on_gains(gt, budget)
    assert np.all(a.powers >= 0) and a.powers.sum() <= budget + 1e-9
    assert np.all(np.diff(a.trace) >= -1e-8)
    assert sum_secrecy_rate(gt, a.powers) >= unclamped_objective(gt, a.powers) - 1e-12


def test_sca_custom_init():
    gt = random_gains(3, 1, 2)
    a = sca_on_gains(gt, 1.0, ScaConfig(init="custom", custom_init=(1.0, 0.0, 0.0)))
    assert a.trace[0] == pytest.approx(unclamped_objective(gt, [1.0, 0.0, 0.0]))


def test_sca_propagates_stall_with_best_so_far(monkeypatch):
    gt = random_gains(2, 1, 0)

    def stall(*a, **k):
        raise SolverStall("cap", None)

    monkeypatch.setattr(power, "solve_p6", stall)
    with pytest.raises(SolverStall) as exc:
        sca_on_gains(gt, 1.0)
    np.testing.assert_allclose(exc.value.allocation.powers, [0.5, 0.5])


@pytest.mark.parametrize("theta_b2", [-0.2, -0.06, 0.04, 0.12, 0.25])
def test_sca_matches_unclamped_grid_on_two_bob_geometry(theta_b2):
    sc = two_bob_scenario(theta_b2)
    gt = gain_table(sc)
    ax = np.linspace(0, 1, 401)
    P1, P2 = np.meshgrid(ax, ax, indexing="ij")
    pts = np.stack([P1[P1 + P2 <= 1], P2[P1 + P2 <= 1]], -1)
    best = unclamped_objective(gt, pts).max()
    assert unclamped_objective(gt, sca_allocate(sc).powers) >= best - 1e-4


def test_sca_regression_on_five_bob_layout():
    # run-and-record baseline on the LoS five-Bob, one-Eve layout at 1 W
    sc = five_bob_scenario()
    a = sca_allocate(sc)
    assert a.converged and a.iterations <= 100
    assert np.all(np.diff(a.trace) >= -1e-8)
    assert sum_secrecy_rate(gain_table(sc), a.powers) == pytest.approx(29.548327542742804, abs=1e-4)


def test_unclamped_problem_can_miss_clamped_optimum():
    # a Bob whose own link is insecure can still jam Eve for the others, so
    # maximising the clamped sum may pay off where the unclamped sum does not
    sc = ring_scenario(3)
    gt = gain_table(sc)
    a = sca_allocate(sc)
    _, cert_clamped = grid_certificate(gt, 1.0)
    ax = np.linspace(0, 1, 401)
    P1, P2 = np.meshgrid(ax, ax, indexing="ij")
    pts = np.stack([P1[P1 + P2 <= 1], P2[P1 + P2 <= 1]], -1)
    assert unclamped_objective(gt, a.powers) >= unclamped_objective(gt, pts).max() - 1e-6
    assert cert_clamped > sum_secrecy_rate(gt, a.powers) + 0.5


# --- two-Bob closed forms


def test_ratio_rule_examples():
    np.testing.assert_allclose(ratio_allocation(0.2, 0.2, 1.0), [0.5, 0.5])
    np.testing.assert_allclose(ratio_allocation(0.1, 0.3, 2.0), [1.5, 0.5])


def test_waterfilling_examples():
    np.testing.assert_allclose(waterfill_two((0.3, 0.3), 1.0), [0.5, 0.5])
    np.testing.assert_allclose(waterfill_two((0.0, 5.0), 1.0), [1.0, 0.0])
    np.testing.assert_allclose(waterfill_two((5.0, 0.0), 1.0), [0.0, 1.0])


@given(st.floats(0, 3), st.floats(0, 3), st.floats(0.01, 5))
def test_waterfilling_feasible(n1, n2, budget):
    p = waterfill_two((n1, n2), budget)
    assert np.all(p >= 0) and p.sum() == pytest.approx(budget)


def test_case_IIa_symmetric_split():
    # Bobs far from a distant Eve, equal ranges: both Eve correlations tiny
    b1, b2 = los_user(0.875, 200.0), los_user(-0.875, 200.0)
    eve = los_user(0.0, 10.0, "near")
    sc = Scenario(CFG, (b1, b2), (eve,), SIGMA2, 1.0, BETA)
    res = allocate_two_bob_closed(sc)
    assert res.case == "IIa"
    np.testing.assert_allclose(res.allocation.powers, [0.5, 0.5], atol=1e-12)


def test_case_I_gives_everything_to_secure_bob():
    # Bob 1 on Eve's angle; Bob 2 on an Eve null, so its interference cannot help
    eve = PolarLocation(0.0, 10.0)
    null = 2.0 / CFG.num_antennas * 3
    sc = Scenario(CFG, (los_user(0.0, 200.0), los_user(0.3 + null, 150.0)),
                  (los_user(0.0, 10.0, "near"),), SIGMA2, 1e-9, BETA)
    assert not secure_one_bob(CFG, sc.bobs[0].loc, eve)
    res = allocate_two_bob_closed(sc)
    assert res.case == "I"
    np.testing.assert_allclose(res.allocation.powers, [0.0, 1e-9])


def test_case_undetermined_raised():
    # moderate SNR: Eve correlations neither tiny nor interference-dominated
    sc = two_bob_scenario(0.1, budget=1e-8)
    with pytest.raises(CaseUndetermined):
        allocate_two_bob_closed(sc)


def test_closed_form_preconditions():
    with pytest.raises(ValueError):
        allocate_two_bob_closed(five_bob_scenario())
    with pytest.raises(ValueError):
        allocate_two_bob_closed(two_bob_scenario(0.0))


def test_closed_form_tracks_line_search_on_reference_geometry():
    worst = 0.0
    for t in np.arange(-0.3, 0.3001, 0.01):
        if abs(t) < 0.02:
            continue
        sc = two_bob_scenario(float(t))
        cf = allocate_two_bob_closed(sc).allocation.powers
        worst = max(worst, abs(cf[0] - grid_search_two_bob(sc).powers[0]))
    assert worst <= 0.05


def test_line_search_examples():
    # Bob 2 on Bob 1's and Eve's angle: both links insecure, flat zero objective
    sc = two_bob_scenario(0.0)
    g = grid_search_two_bob(sc, 101)
    assert g.trace[0] == 0.0
    np.testing.assert_allclose(g.powers, [0.0, 1.0])
    # only Bob 1 secure and no cross leakage: all power to Bob 1
    gt_sc = Scenario(CFG, (los_user(0.5, 150.0), los_user(0.0, 200.0)),
                     (los_user(0.0, 150.0, "far"),), SIGMA2, 1.0, BETA)
    np.testing.assert_allclose(grid_search_two_bob(gt_sc, 101).powers, [1.0, 0.0], atol=1e-6)


@pytest.mark.parametrize("theta_b2", [-0.15, 0.07, 0.2])
def test_line_search_against_finer_grid(theta_b2):
    sc = two_bob_scenario(theta_b2)
    gt = gain_table(sc)
    coarse = grid_search_two_bob(sc, 1001)
    p1 = np.linspace(0, 1, 10_001)
    fine = sum_secrecy_rate(gt, np.stack([p1, 1 - p1], -1))
    assert abs(coarse.powers[0] - p1[np.argmax(fine)]) <= 1e-3
    assert coarse.trace[0] >= fine.max() - 1e-9


# --- high-SNR stationary point


def _case_iib_instances(n, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        eve = (rng.uniform(-0.5, 0.5), rng.uniform(3.0, 10.0))
        t1, t2 = eve[0] + rng.uniform(-0.05, 0.05, 2)
        if abs(t1 - t2) < 1e-3:
            continue
        sc = Scenario(CFG, (los_user(t1, rng.uniform(120, 240)), los_user(t2, rng.uniform(120, 240))),
                      (los_user(*eve, "near"),), SIGMA2, 1.0, BETA)
        try:
            res = allocate_two_bob_closed(sc)
        except CaseUndetermined:
            continue
        if res.case == "IIb":
            out.append((sc, res))
    return out


def _derivative_ratio(gt, p1, budget):
    f = lambda x: high_snr_objective(gt, x, budget)
    h = 1e-6 * budget
    d = (f(p1 + h) - f(p1 - h)) / (2 * h)
    grid = np.linspace(0.01, 0.99, 99) * budget
    scale = np.max(np.abs(np.gradient(f(grid), grid)))
    return abs(d) / scale


def test_ratio_rule_is_stationary():
    for sc, res in _case_iib_instances(10):
        assert _derivative_ratio(gain_table(sc), res.allocation.powers[0], 1.0) <= 1e-3


def test_squared_gain_split_is_not_stationary():
    # P1 = P g_E2^2 / (g_E1^2 + g_E2^2) only coincides with the ratio rule when g_E1 = g_E2
    ratios = []
    for sc, _ in _case_iib_instances(10):
        gt = gain_table(sc)
        e1, e2 = gt.v_eve[0]
        ratios.append(_derivative_ratio(gt, e2**2 / (e1**2 + e2**2), 1.0))
    assert max(ratios) > 1e-3


def test_ratio_rule_uses_eve_correlations():
    sc, res = _case_iib_instances(1, seed=3)[0]
    eta = [exact_eta(CFG, sc.eves[0].loc, b.loc.theta) for b in sc.bobs]
    assert res.allocation.powers[0] == pytest.approx(eta[1] / sum(eta))


# --- benchmark schemes


def test_ffb_exact_when_everyone_is_far_field():
    sc = Scenario(CFG, (los_user(0.2, 150.0), los_user(-0.1, 200.0)), (los_user(0.05, 300.0),),
                  SIGMA2, 1.0, BETA)
    r = ffb_allocate(sc)
    assert r.estimated_rate == pytest.approx(r.achieved_rate, abs=1e-12)


def test_ffb_starves_bob1_off_eve_angle():
    for t in (-0.2, -0.08, 0.05, 0.15):
        r = ffb_allocate(two_bob_scenario(t))
        assert r.allocation.powers[0] < 0.02
    assert ffb_allocate(two_bob_scenario(0.0)).allocation.powers[0] > 0.1


def test_ffb_below_mfb_on_five_bob_layout():
    sc = five_bob_scenario()
    ffb = ffb_allocate(sc)
    assert ffb.achieved_rate <= mfb_allocate(sc).achieved_rate
    assert ffb.achieved_rate <= ffb.estimated_rate


def test_hs_identical_to_sca_when_all_secure():
    sc = Scenario(CFG, (los_user(0.6, 150.0), los_user(-0.5, 200.0)), (los_user(0.0, 8.0, "near"),),
                  SIGMA2, 1.0, BETA)
    assert hs_schedule(sc) == [0, 1]
    np.testing.assert_allclose(hs_allocate(sc).allocation.powers, sca_allocate(sc).powers)


def test_hs_empty_schedule():
    # both Bobs individually insecure, yet Bob 2 can shield Bob 1 under MFB
    sc = Scenario(CFG, (los_user(0.0, 229.0), los_user(0.01, 164.0)), (los_user(0.0, 5.0, "near"),),
                  SIGMA2, 1.0, BETA)
    assert hs_schedule(sc) == []
    r = hs_allocate(sc)
    assert r.achieved_rate == 0.0 and r.allocation.status == "empty_schedule"
    np.testing.assert_array_equal(r.allocation.powers, 0.0)
    assert mfb_allocate(sc).achieved_rate > 0.0
    with pytest.raises(EmptySchedule):
        hs_allocate(sc, strict=True)


def test_hs_regression_on_five_bob_layout():
    r = hs_allocate(five_bob_scenario())
    assert r.achieved_rate == pytest.approx(18.580875525178538, abs=1e-4)
