"""Power allocation: two-Bob closed forms, grid oracles and the SCA solver.

The SCA loop maximises sum_k (R_B,k - max_m R_E,m,k) over the scaled simplex
{p >= 0, sum p <= P_tot}.  Each iteration linearises the two concave terms
that enter the objective with a minus sign (the Bob interference log and the
Eve total-power log) at the current point, which yields a concave surrogate
that touches the true objective there and lies below it everywhere else.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import optimize

from .correlation import secure_one_bob, secure_two_bob
from .geometry import User
from .rates import (
    GainTable,
    PowerAllocation,
    Scenario,
    eta_matrix,
    gain_table,
    sum_secrecy_rate,
    unclamped_objective,
    zf_beams,
)

log = logging.getLogger(__name__)

LOG2E = 1 / math.log(2)


class SolverStall(RuntimeError):
    """Inner solver hit its iteration cap; ``allocation`` holds the best point so far."""

    def __init__(self, msg: str, allocation: PowerAllocation | None = None):
        super().__init__(msg)
        self.allocation = allocation


class CaseUndetermined(ValueError):
    """The two-Bob geometry matches none of the closed-form cases."""


class EmptySchedule(ValueError):
    pass


@dataclass(frozen=True)
class ScaConfig:
    convergence_eps: float = 1e-5
    max_iters: int = 100
    init: Literal["uniform", "custom"] = "uniform"
    custom_init: tuple[float, ...] | None = None
    inner: Literal["slsqp", "pga"] = "slsqp"
    solver_tol: float = 1e-9
    extrapolate: bool = True

    def __post_init__(self):
        if self.convergence_eps <= 0:
            raise ValueError("convergence_eps must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.init == "custom" and self.custom_init is None:
            raise ValueError("custom init requires custom_init powers")


# ---------------------------------------------------------------------------
# feasible set


def project_budget(v: np.ndarray, budget: float) -> np.ndarray:
    """Euclidean projection onto {p >= 0, sum p <= budget}."""
    v = np.asarray(v, dtype=float)
    y = np.maximum(v, 0.0)
    if y.sum() <= budget:
        return y
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - budget
    k = np.arange(1, v.size + 1)
    rho = np.flatnonzero(u - css / k > 0)[-1]
    tau = css[rho] / (rho + 1)
    return np.maximum(v - tau, 0.0)


def _uniform(K: int, budget: float) -> np.ndarray:
    return np.full(K, budget / K)


# ---------------------------------------------------------------------------
# surrogate construction


@dataclass(frozen=True)
class TaylorCoeffs:
    """Linearisation coefficients at ``expansion_point``.

    Bob k interference log  <= A[k] + B[k] . (p - p~)
    Eve m total-power log   <= C[m] + D[m] . (p - p~)
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    expansion_point: np.ndarray


def taylor_coeffs(gt: GainTable, p_expand) -> TaylorCoeffs:
    p0 = np.asarray(p_expand, dtype=float)
    vb2 = gt.v_bob**2
    ve2 = gt.v_eve**2
    cross = vb2 * (1 - np.eye(gt.num_bobs))
    interf = cross @ p0
    A = np.log2(interf + 1)
    B = cross * LOG2E / (interf + 1)[:, None]
    tot_e = ve2 @ p0
    C = np.log2(tot_e + 1)
    D = ve2 * LOG2E / (tot_e + 1)[:, None]
    return TaylorCoeffs(A, B, C, D, p0)


def bob_interference_log(gt: GainTable, p) -> np.ndarray:
    """log2(sum_{i != k} p_i v_B,k,i^2 + 1), shape (..., K)."""
    p = np.asarray(p, dtype=float)
    cross = gt.v_bob**2 * (1 - np.eye(gt.num_bobs))
    return np.log2(p @ cross.T + 1)


def eve_total_log(gt: GainTable, p) -> np.ndarray:
    """log2(sum_i p_i v_E,m,i^2 + 1), shape (..., M)."""
    p = np.asarray(p, dtype=float)
    return np.log2(p @ (gt.v_eve**2).T + 1)


def _surrogate_parts(gt: GainTable, co: TaylorCoeffs, p):
    p = np.asarray(p, dtype=float)
    vb2 = gt.v_bob**2
    ve2 = gt.v_eve**2
    dp = p - co.expansion_point
    bob = np.log2(p @ vb2.T + 1) - (co.A + dp @ co.B.T)
    if gt.num_eves == 0:
        return bob, np.zeros_like(bob)
    tot_e = p @ ve2.T  # (..., M)
    e_ub = co.C + dp @ co.D.T  # (..., M)
    # log2(sum_{i != k} p_i v_E,m,i^2 + 1), shape (..., M, K)
    e_check = np.log2(tot_e[..., :, None] - p[..., None, :] * ve2 + 1)
    eve = (e_ub[..., :, None] - e_check).max(axis=-2)
    return bob, eve


def surrogate_objective(gt: GainTable, co: TaylorCoeffs, p):
    """Concave lower bound of the unclamped objective, exact at the expansion point."""
    bob, eve = _surrogate_parts(gt, co, p)
    s = (bob - eve).sum(-1)
    return float(s) if np.ndim(s) == 0 else s


def _surrogate_supergradient(gt: GainTable, co: TaylorCoeffs, p: np.ndarray) -> np.ndarray:
    vb2 = gt.v_bob**2
    ve2 = gt.v_eve**2
    g = (vb2 * LOG2E / (vb2 @ p + 1)[:, None]).sum(0) - co.B.sum(0)
    if gt.num_eves == 0:
        return g
    K = gt.num_bobs
    tot_e = ve2 @ p
    e_ub = co.C + (p - co.expansion_point) @ co.D.T
    interf = tot_e[:, None] - p[None, :] * ve2  # (M, K)
    vals = e_ub[:, None] - np.log2(interf + 1)
    top = vals.max(0)
    for k in range(K):
        active = np.flatnonzero(vals[:, k] >= top[k] - 1e-12)
        # d/dp of e_check[m, k] is ve2[m, i] log2e / (interf + 1) for i != k
        grads = co.D[active] - (ve2[active] * LOG2E / (interf[active, k] + 1)[:, None]) * (
            1 - np.eye(K)[k]
        )
        g = g - grads.mean(0)
    return g


# ---------------------------------------------------------------------------
# (P6) inner solvers


def _solve_slsqp(
    gt: GainTable, co: TaylorCoeffs, budget: float, tol: float
) -> tuple[np.ndarray, bool]:
    K, M = gt.num_bobs, gt.num_eves
    vb2 = gt.v_bob**2
    ve2 = gt.v_eve**2
    offdiag = 1 - np.eye(K)
    p0 = co.expansion_point
    # variables: x = p / budget (K) followed by the epigraph slacks t (K) when M > 0
    _, eve0 = _surrogate_parts(gt, co, p0)

    def bob_part(x):
        p = budget * x[:K]
        return np.log2(vb2 @ p + 1).sum() - (co.B @ (p - p0)).sum()

    def f(x):
        val = bob_part(x)
        if M:
            val -= x[K:].sum()
        return -val

    def grad(x):
        p = budget * x[:K]
        gp = (vb2 * LOG2E / (vb2 @ p + 1)[:, None]).sum(0) - co.B.sum(0)
        out = np.zeros_like(x)
        out[:K] = -budget * gp
        if M:
            out[K:] = 1.0
        return out

    cons = [
        {
            "type": "ineq",
            "fun": lambda x: np.array([1.0 - x[:K].sum()]),
            "jac": lambda x: np.concatenate([-np.ones(K), np.zeros(x.size - K)])[None, :],
        }
    ]
    if M:

        def eve_con(x):
            p = budget * x[:K]
            t = x[K:]
            tot = ve2 @ p
            e_ub = co.C + co.D @ (p - p0)
            e_check = np.log2(tot[:, None] - p[None, :] * ve2 + 1)
            return (t[None, :] - e_ub[:, None] + e_check).ravel()

        def eve_jac(x):
            p = budget * x[:K]
            tot = ve2 @ p
            interf = tot[:, None] - p[None, :] * ve2  # (M, K)
            J = np.zeros((M, K, 2 * K))
            # d e_check[m,k] / d p_i = ve2[m,i] log2e / (interf[m,k]+1), i != k
            de = ve2[:, None, :] * LOG2E / (interf[:, :, None] + 1) * offdiag[None, :, :]
            J[:, :, :K] = budget * (de - co.D[:, None, :])
            J[:, np.arange(K), K + np.arange(K)] = 1.0
            return J.reshape(M * K, 2 * K)

        cons.append({"type": "ineq", "fun": eve_con, "jac": eve_jac})
        x0 = np.concatenate([p0 / budget, eve0])
        bounds = [(0.0, 1.0)] * K + [(None, None)] * K
    else:
        x0 = p0 / budget
        bounds = [(0.0, 1.0)] * K
    res = optimize.minimize(
        f, x0, jac=grad, bounds=bounds, constraints=cons, method="SLSQP",
        options={"ftol": tol, "maxiter": 500},
    )
    if not res.success:
        log.debug("SLSQP: %s", res.message)
    return project_budget(budget * np.asarray(res.x[:K]), budget), bool(res.success)


def _solve_pga(
    gt: GainTable,
    co: TaylorCoeffs,
    budget: float,
    tol: float,
    x0: np.ndarray,
    max_iter: int = 5000,
) -> tuple[np.ndarray, bool]:
    """Projected supergradient ascent with Armijo backtracking, starting at ``x0``."""
    x = np.asarray(x0, dtype=float).copy()
    fx = surrogate_objective(gt, co, x)
    step = budget
    for _ in range(max_iter):
        g = _surrogate_supergradient(gt, co, x)
        gn = np.linalg.norm(g)
        if gn == 0:
            return x, True
        t = step / gn
        while True:
            y = project_budget(x + t * g, budget)
            d = y - x
            fy = surrogate_objective(gt, co, y)
            if fy > fx and fy >= fx + 1e-4 * (g @ d):
                break
            t *= 0.5
            if t * gn < tol * budget:
                # no ascent along the projected supergradient arc
                return x, True
        x, gain, fx = y, fy - fx, fy
        step = min(2 * t * gn, budget)
        if np.linalg.norm(d) <= tol * budget or gain <= tol:
            return x, True
    return x, False


def _solve_conic(gt: GainTable, co: TaylorCoeffs, budget: float) -> np.ndarray | None:
    """Exponential-cone formulation via cvxpy; fallback for badly conditioned instances."""
    import cvxpy as cp

    K, M = gt.num_bobs, gt.num_eves
    vb2, ve2 = gt.v_bob**2, gt.v_eve**2
    p0 = co.expansion_point
    x = cp.Variable(K, nonneg=True)  # p / budget
    p = budget * x
    ln2 = np.log(2)
    obj = 0
    for k in range(K):
        obj += cp.log(1 + vb2[k] @ p) / ln2 - co.B[k] @ (p - p0)
        if M:
            mask = 1.0 - np.eye(K)[k]
            eve_terms = [co.C[m] + co.D[m] @ (p - p0) - cp.log(1 + (ve2[m] * mask) @ p) / ln2
                         for m in range(M)]
            obj -= cp.maximum(*eve_terms) if M > 1 else eve_terms[0]
    prob = cp.Problem(cp.Maximize(obj), [cp.sum(x) <= 1])
    try:
        prob.solve()
    except cp.SolverError as exc:
        log.debug("conic fallback failed: %s", exc)
        return None
    if x.value is None:
        return None
    return project_budget(budget * np.asarray(x.value), budget)


def solve_p6(
    gt: GainTable,
    coeffs: TaylorCoeffs,
    budget: float,
    solver_tol: float = 1e-9,
    method: Literal["slsqp", "pga"] = "slsqp",
) -> PowerAllocation:
    """Maximise the concave surrogate over {p >= 0, sum p <= budget}.

    ``slsqp`` solves the smooth epigraph form (one slack per Bob bounding its
    worst Eve term) and then polishes with supergradient ascent; ``pga`` runs
    the ascent alone.  The result is never worse than the expansion point,
    which keeps the outer SCA trace monotone.  If neither terminates normally
    a conic solve is tried before a stall is reported.
    """
    best = project_budget(coeffs.expansion_point, budget)
    f_best = surrogate_objective(gt, coeffs, best)
    slsqp_ok = False
    if method == "slsqp":
        cand, slsqp_ok = _solve_slsqp(gt, coeffs, budget, solver_tol)
        f_cand = surrogate_objective(gt, coeffs, cand)
        if f_cand > f_best:
            best, f_best = cand, f_cand
    elif method != "pga":
        raise ValueError(f"unknown inner method {method!r}")
    x, pga_ok = _solve_pga(gt, coeffs, budget, solver_tol, best)
    converged = slsqp_ok or pga_ok
    fx = surrogate_objective(gt, coeffs, x)
    if fx > f_best:
        best, f_best = x, fx
    if not converged:
        cand = _solve_conic(gt, coeffs, budget)
        if cand is not None:
            converged = True
            f_cand = surrogate_objective(gt, coeffs, cand)
            if f_cand > f_best:
                best, f_best = cand, f_cand
    alloc = PowerAllocation(best, iterations=1, trace=[f_best], converged=converged)
    if not converged:
        raise SolverStall("(P6) ascent hit its iteration cap", alloc)
    return alloc


# ---------------------------------------------------------------------------
# SCA


def _extrapolate(gt, budget, p_old, p_new, f_new, max_doublings: int = 12):
    """Stretch the MM step while the true objective keeps improving.

    MM steps shrink geometrically when the iterate creeps toward a face of the
    simplex; doubling the step restores progress without losing monotonicity.
    """
    d = p_new - p_old
    best, f_best = p_new, f_new
    alpha = 2.0
    for _ in range(max_doublings):
        cand = project_budget(p_old + alpha * d, budget)
        f = unclamped_objective(gt, cand)
        if not f > f_best:
            break
        best, f_best = cand, f
        alpha *= 2
    return best, f_best


def sca_on_gains(gt: GainTable, budget: float, cfg: ScaConfig = ScaConfig()) -> PowerAllocation:
    """Iterate Taylor expansion and (P6) until the objective change drops below eps."""
    K = gt.num_bobs
    if cfg.init == "custom":
        p = project_budget(np.asarray(cfg.custom_init, dtype=float), budget)
    else:
        p = _uniform(K, budget)
    obj = unclamped_objective(gt, p)
    trace = [obj]
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        co = taylor_coeffs(gt, p)
        try:
            step = solve_p6(gt, co, budget, cfg.solver_tol, cfg.inner)
        except SolverStall as exc:
            exc.allocation = PowerAllocation(p, it, trace, converged=False, status="stall")
            raise
        new_obj = unclamped_objective(gt, step.powers)
        if new_obj >= obj:
            p_new = step.powers
            if cfg.extrapolate:
                p_new, new_obj = _extrapolate(gt, budget, p, p_new, new_obj)
            p = p_new
        else:
            # surrogate ascent guarantees no loss up to rounding; keep the incumbent
            new_obj = obj
        trace.append(new_obj)
        done = abs(new_obj - obj) < cfg.convergence_eps
        obj = new_obj
        if done:
            converged = True
            break
    return PowerAllocation(p, it, trace, converged, "ok" if converged else "max_iters")


def sca_allocate(sc: Scenario, cfg: ScaConfig = ScaConfig()) -> PowerAllocation:
    return sca_on_gains(gain_table(sc), sc.power_budget, cfg)


# ---------------------------------------------------------------------------
# two Bobs, one Eve


def ratio_allocation(eta1: float, eta2: float, budget: float) -> np.ndarray:
    """High-SNR interference-limited split: P_B1 proportional to Bob 2's Eve correlation."""
    s = eta1 + eta2
    if s == 0:
        return np.array([budget / 2, budget / 2])
    return np.array([budget * eta2 / s, budget * eta1 / s])


def waterfill_two(noise_to_gain: tuple[float, float], budget: float) -> np.ndarray:
    """Two-channel waterfilling P_k = 1/gamma - n_k with gamma = 2 / (P + n_1 + n_2)."""
    n = np.asarray(noise_to_gain, dtype=float)
    level = (budget + n.sum()) / 2
    p = level - n
    if p[0] < 0:
        return np.array([0.0, budget])
    if p[1] < 0:
        return np.array([budget, 0.0])
    return p


def high_snr_objective(gt: GainTable, p1, budget: float):
    """Two-Bob sum secrecy rate with Bob interference and Eve noise dropped."""
    p1 = np.asarray(p1, dtype=float)
    p2 = budget - p1
    v11, v22 = gt.v_bob[0, 0] ** 2, gt.v_bob[1, 1] ** 2
    e1, e2 = gt.v_eve[0, 0] ** 2, gt.v_eve[0, 1] ** 2
    return (
        np.log2(p1 * v11)
        + np.log2(p2 * v22)
        - np.log2(1 + p1 * e1 / (p2 * e2))
        - np.log2(1 + p2 * e2 / (p1 * e1))
    )


@dataclass(frozen=True)
class TwoBobClosedForm:
    allocation: PowerAllocation
    case: str


def allocate_two_bob_closed(
    sc: Scenario, small_eta: float = 1e-3, large_snr: float = 10.0
) -> TwoBobClosedForm:
    """Closed-form high-SNR allocation for two LoS Bobs at distinct angles and one Eve.

    Case I   one Bob insecure even with the other at full power -> all power to the other.
    Case IIa both Eve correlations below ``small_eta`` -> two-channel waterfilling.
    Case IIb Eve SNR on both beams above ``large_snr`` -> correlation ratio rule.
    """
    if sc.num_bobs != 2 or sc.num_eves != 1:
        raise ValueError("closed form needs exactly two Bobs and one Eve")
    b1, b2 = (b.loc for b in sc.bobs)
    eve = sc.eves[0].loc
    if b1.theta == b2.theta:
        raise ValueError("closed form needs distinct Bob angles")
    cfg, P, beta, s2 = sc.cfg, sc.power_budget, sc.beta_ref, sc.noise_power
    N = cfg.num_antennas

    sec1 = secure_two_bob(cfg, b1, b2, eve, P, beta, s2)
    sec2 = secure_two_bob(cfg, b2, b1, eve, P, beta, s2)
    sec1_alone = secure_one_bob(cfg, b1, eve)
    sec2_alone = secure_one_bob(cfg, b2, eve)
    if not sec1 and sec2_alone:
        return TwoBobClosedForm(PowerAllocation([0.0, P]), "I")
    if not sec2 and sec1_alone:
        return TwoBobClosedForm(PowerAllocation([P, 0.0]), "I")

    eta1, eta2 = eta_matrix(sc)[0]
    if eta1 < small_eta and eta2 < small_eta:
        n = tuple(s2 * b.range**2 / (N * beta) for b in (b1, b2))
        return TwoBobClosedForm(PowerAllocation(waterfill_two(n, P)), "IIa")
    eve_snr = beta * N * P * np.array([eta1, eta2]) ** 2 / (s2 * eve.range**2)
    if np.all(eve_snr > large_snr):
        return TwoBobClosedForm(PowerAllocation(ratio_allocation(eta1, eta2, P)), "IIb")
    raise CaseUndetermined(
        f"eta=({eta1:.3g}, {eta2:.3g}), Eve SNR=({eve_snr[0]:.3g}, {eve_snr[1]:.3g})"
    )


def _golden_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    res = optimize.minimize_scalar(lambda x: -f(x), bounds=(a, b), method="bounded",
                                   options={"xatol": tol})
    return float(res.x), float(-res.fun)


def grid_search_two_bob(sc: Scenario, grid_points: int = 1001) -> PowerAllocation:
    """Full-budget line search over P_B1 in [0, P_tot] with P_B2 = P_tot - P_B1.

    Ties go to the smallest P_B1; the best grid cell is then refined locally.
    """
    if sc.num_bobs != 2:
        raise ValueError("grid search needs exactly two Bobs")
    gt = gain_table(sc)
    P = sc.power_budget
    p1 = np.linspace(0.0, P, grid_points)
    vals = sum_secrecy_rate(gt, np.stack([p1, P - p1], axis=-1))
    i = int(np.argmax(vals))
    best_p1, best = p1[i], vals[i]
    if grid_points > 1 and best > 0:
        lo, hi = p1[max(i - 1, 0)], p1[min(i + 1, grid_points - 1)]
        x, fx = _golden_max(lambda x: sum_secrecy_rate(gt, np.array([x, P - x])), lo, hi,
                            1e-9 * P)
        if fx > best:
            best_p1, best = x, fx
    return PowerAllocation([best_p1, P - best_p1], iterations=grid_points, trace=[best])


def grid_certificate(gt: GainTable, budget: float, points: int = 401) -> tuple[np.ndarray, float]:
    """Exhaustive 2-D grid maximum of the clamped sum secrecy rate over {p >= 0, p1 + p2 <= P}."""
    if gt.num_bobs != 2:
        raise ValueError("grid certificate needs exactly two Bobs")
    axis = np.linspace(0.0, budget, points)
    P1, P2 = np.meshgrid(axis, axis, indexing="ij")
    mask = P1 + P2 <= budget * (1 + 1e-12)
    pts = np.stack([P1[mask], P2[mask]], axis=-1)
    vals = sum_secrecy_rate(gt, pts)
    j = int(np.argmax(vals))
    return pts[j], float(vals[j])


# ---------------------------------------------------------------------------
# schemes


@dataclass
class SchemeResult:
    scheme: str
    allocation: PowerAllocation
    estimated_rate: float
    achieved_rate: float

    @property
    def iterations(self) -> int:
        return self.allocation.iterations


def mfb_allocate(sc: Scenario, cfg: ScaConfig = ScaConfig()) -> SchemeResult:
    gt = gain_table(sc)
    alloc = sca_on_gains(gt, sc.power_budget, cfg)
    rate = sum_secrecy_rate(gt, alloc.powers)
    return SchemeResult("MFB", alloc, rate, rate)


def far_field_surrogate(sc: Scenario) -> Scenario:
    """Same scenario with every near-field Eve re-modelled by planar wavefronts."""
    eves = tuple(
        User.build(sc.cfg, e.loc, "far", e.multipath, sc.beta_ref) if e.field == "near" else e
        for e in sc.eves
    )
    return Scenario(sc.cfg, sc.bobs, eves, sc.noise_power, sc.power_budget, sc.beta_ref)


def ffb_allocate(sc: Scenario, cfg: ScaConfig = ScaConfig()) -> SchemeResult:
    """Allocate on the far-field surrogate, then score on the true mixed-field gains."""
    gt_model = gain_table(far_field_surrogate(sc))
    alloc = sca_on_gains(gt_model, sc.power_budget, cfg)
    estimated = sum_secrecy_rate(gt_model, alloc.powers)
    achieved = sum_secrecy_rate(gain_table(sc), alloc.powers)
    return SchemeResult("FFB", alloc, estimated, achieved)


def hs_schedule(sc: Scenario) -> list[int]:
    """Bobs whose one-Bob secure-transmission condition holds against every Eve."""
    return [
        k for k, b in enumerate(sc.bobs)
        if all(secure_one_bob(sc.cfg, b.loc, e.loc) for e in sc.eves)
    ]


def hs_allocate(
    sc: Scenario, cfg: ScaConfig = ScaConfig(), strict: bool = False
) -> SchemeResult:
    """SCA restricted to the individually secure Bobs; the rest get zero power."""
    gt = gain_table(sc)
    sched = hs_schedule(sc)
    powers = np.zeros(sc.num_bobs)
    if not sched:
        if strict:
            raise EmptySchedule("no Bob satisfies the secure-transmission condition")
        alloc = PowerAllocation(powers, 0, [0.0], True, "empty_schedule")
        return SchemeResult("MFB+HS", alloc, 0.0, 0.0)
    sub = sca_on_gains(gt.subset(sched), sc.power_budget, cfg)
    powers[sched] = sub.powers
    alloc = PowerAllocation(powers, sub.iterations, sub.trace, sub.converged, sub.status)
    rate = sum_secrecy_rate(gt, powers)
    return SchemeResult("MFB+HS", alloc, rate, rate)


def zf_allocate(sc: Scenario, cfg: ScaConfig = ScaConfig()) -> SchemeResult:
    """SCA power allocation over ZF digital precoding on top of the MRT analog beams."""
    gt = gain_table(sc, zf_beams(sc))
    alloc = sca_on_gains(gt, sc.power_budget, cfg)
    rate = sum_secrecy_rate(gt, alloc.powers)
    return SchemeResult("MFB+ZFDig", alloc, rate, rate)


SCHEMES = {
    "MFB": mfb_allocate,
    "FFB": ffb_allocate,
    "MFB+HS": hs_allocate,
    "MFB+ZFDig": zf_allocate,
}
