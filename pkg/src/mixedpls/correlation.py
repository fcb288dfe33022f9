"""Near-field/far-field beam correlation and insecure-transmission regions.

The correlation between a near-field steering vector b(theta_p, r_p) and a
far-field beam a(theta_q) is approximated in closed form by

    G(beta1, beta2) = |dC + j dS| / (2 beta2)

with dC = C(beta1 + beta2) - C(beta1 - beta2) (Fresnel cosine integral, and
likewise dS), beta1 = (theta_p - theta_q)/s, beta2 = (N/2) s and
s = sqrt(d (1 - theta_p^2) / r_p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .geometry import (
    ArrayConfig,
    PolarLocation,
    correlation,
    effective_rayleigh,
    far_steering,
    near_steering,
)

SCAN_STEP = 0.01
BISECT_TOL = 1e-8


class NoSolution(ValueError):
    """G(beta1, beta2) = delta has no solution (G stays below delta)."""


def fresnel(x):
    """Fresnel integrals (C(x), S(x)) with kernel cos/sin(pi t^2 / 2)."""
    s, c = special.fresnel(x)
    return c, s


@dataclass(frozen=True)
class BetaPair:
    beta1: float
    beta2: float

    def __post_init__(self):
        if not self.beta2 > 0:
            raise ValueError("beta2 must be positive")

    @classmethod
    def from_geometry(
        cls, cfg: ArrayConfig, theta_p: float, r_p: float, theta_q: float
    ) -> "BetaPair":
        s = angular_scale(cfg, theta_p, r_p)
        return cls((theta_p - theta_q) / s, cfg.num_antennas / 2 * s)


def angular_scale(cfg: ArrayConfig, theta_p, r_p):
    """sqrt(d (1 - theta_p^2) / r_p), the spatial-angle width of one beta1 unit."""
    return np.sqrt(cfg.spacing * (1 - np.asarray(theta_p) ** 2) / np.asarray(r_p))


def G(beta1, beta2):
    """Vectorised closed-form correlation, clamped to [0, 1]."""
    beta1 = np.asarray(beta1, dtype=float)
    beta2 = np.asarray(beta2, dtype=float)
    cp, sp = fresnel(beta1 + beta2)
    cm, sm = fresnel(beta1 - beta2)
    g = np.hypot(cp - cm, sp - sm) / (2 * beta2)
    g = np.clip(g, 0.0, 1.0)
    return float(g) if g.ndim == 0 else g


def corr_G(bp: BetaPair) -> float:
    return G(bp.beta1, bp.beta2)


def exact_eta(cfg: ArrayConfig, eve: PolarLocation, theta_q) -> np.ndarray | float:
    """|b^H(theta_E, r_E) a(theta_q)| evaluated from the steering vectors."""
    b = near_steering(cfg, eve)
    eta = correlation(b, far_steering(cfg, theta_q))
    return float(eta) if np.ndim(eta) == 0 else eta


def approx_eta(cfg: ArrayConfig, eve: PolarLocation, theta_q):
    s = angular_scale(cfg, eve.theta, eve.range)
    return G((eve.theta - np.asarray(theta_q)) / s, cfg.num_antennas / 2 * s)


def _scan_limit(beta2: float, delta: float) -> float:
    # |dC + j dS| <= 2 / (pi (|beta1| - beta2)) outside the main interval
    return beta2 + 1.0 / (np.pi * beta2 * delta) + 2 * SCAN_STEP


def _outer_crossing(beta2: float, delta: float, sign: int) -> float | None:
    limit = _scan_limit(beta2, delta)
    grid = np.arange(0.0, limit + SCAN_STEP, SCAN_STEP)
    g = G(sign * grid, beta2)
    above = np.flatnonzero(g >= delta)
    last = int(above[-1]) if above.size else -1
    # a sidelobe tip can rise above delta between grid points; check the
    # near-threshold grid maxima further out with a local maximisation
    lo = grid[last] if last >= 0 else None
    peaks = np.flatnonzero((g[1:-1] >= g[:-2]) & (g[1:-1] >= g[2:]) & (g[1:-1] > 0.95 * delta)) + 1
    for i in peaks[::-1]:
        if i <= last:
            break
        res = optimize.minimize_scalar(lambda x: -G(sign * x, beta2), bounds=(grid[i - 1], grid[i + 1]),
                                       method="bounded", options={"xatol": 1e-12})
        if -res.fun >= delta:
            lo, last = float(res.x), i
            break
    if lo is None:
        return None
    hi = grid[min(last + 1, grid.size - 1)]
    if hi <= lo:
        hi = lo + SCAN_STEP
    # bisection on |beta1| with G(lo) >= delta > G(hi)
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if G(sign * mid, beta2) >= delta:
            lo = mid
        else:
            hi = mid
    return sign * 0.5 * (lo + hi)


def solve_beta1(beta2: float, delta: float) -> tuple[float, float]:
    """Outermost roots (beta1_minus < 0 < beta1_plus) of G(beta1, beta2) = delta.

    G ripples inside its main interval, so the equation can have more than two
    roots and G(0, beta2) need not be the peak; the outermost crossing on each
    side is returned.  NoSolution is raised when G stays below ``delta``.
    """
    if not beta2 > 0:
        raise ValueError("beta2 must be positive")
    if not delta > 0:
        raise ValueError("delta must be positive")
    plus = _outer_crossing(beta2, delta, +1)
    if plus is None or plus == 0.0:
        raise NoSolution(f"G(., {beta2:.6g}) never reaches delta={delta:.6g}")
    # G is even in beta1, so the left root mirrors the right one
    minus = _outer_crossing(beta2, delta, -1)
    return minus, plus


@dataclass(frozen=True)
class AngularInterval:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower must not exceed upper")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, theta) -> bool:
        return self.lower <= theta <= self.upper


@dataclass(frozen=True)
class InsecureRegion:
    """{(theta_B, r_B): theta_B in angular, r_B > min_range}; ``angular`` is None when empty."""

    angular: AngularInterval | None
    min_range: float
    threshold: float

    @property
    def empty(self) -> bool:
        return self.angular is None

    @property
    def width(self) -> float:
        return 0.0 if self.angular is None else self.angular.width

    def contains(self, theta: float, r: float) -> bool:
        return self.angular is not None and theta in self.angular and r > self.min_range


_CLAMP = 1 - 1e-12


def _interval_from_threshold(
    cfg: ArrayConfig, eve: PolarLocation, threshold: float, refine: bool
) -> InsecureRegion:
    z = effective_rayleigh(cfg, eve.theta)
    s = angular_scale(cfg, eve.theta, eve.range)
    beta2 = cfg.num_antennas / 2 * s
    try:
        b_minus, b_plus = solve_beta1(beta2, threshold)
    except NoSolution:
        return InsecureRegion(None, z, threshold)
    # beta1 = (theta_E - theta_B)/s, so beta1_plus bounds theta_B from below
    lower = eve.theta - abs(b_plus) * s
    upper = eve.theta + abs(b_minus) * s
    if refine:
        lower = _refine_endpoint(cfg, eve, threshold, lower, -1)
        upper = _refine_endpoint(cfg, eve, threshold, upper, +1)
    lower = float(np.clip(lower, -_CLAMP, _CLAMP))
    upper = float(np.clip(upper, -_CLAMP, _CLAMP))
    return InsecureRegion(AngularInterval(lower, upper), z, threshold)


def _refine_endpoint(
    cfg: ArrayConfig, eve: PolarLocation, threshold: float, theta0: float, sign: int
) -> float:
    """Move ``theta0`` onto the outermost exact-correlation crossing nearby."""
    s = float(angular_scale(cfg, eve.theta, eve.range))
    grid = np.clip(theta0 + np.linspace(-2 * s, 2 * s, 161), -_CLAMP, _CLAMP)
    inside = exact_eta(cfg, eve, grid) >= threshold
    if not inside.any() or inside.all():
        return theta0
    idx = np.flatnonzero(inside)
    k = idx[-1] if sign > 0 else idx[0]
    j = k + sign
    if j < 0 or j >= grid.size:
        return theta0
    a, b = grid[k], grid[j]  # eta(a) >= threshold > eta(b)
    while abs(b - a) > 1e-12:
        m = 0.5 * (a + b)
        if exact_eta(cfg, eve, m) >= threshold:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def secure_one_bob(cfg: ArrayConfig, bob: PolarLocation, eve: PolarLocation) -> bool:
    """eta^2 < r_E^2 / r_B^2 with the exact correlation."""
    eta = exact_eta(cfg, eve, bob.theta)
    return bool(eta**2 < eve.range**2 / bob.range**2)


def insecure_region_one_bob(
    cfg: ArrayConfig, eve: PolarLocation, r_B: float, refine: bool = False
) -> InsecureRegion:
    """Angular insecure interval for a Bob at range ``r_B`` (threshold r_E / r_B)."""
    return _interval_from_threshold(cfg, eve, eve.range / r_B, refine)


def _interference_term(cfg, eve, bob2, p_b2, beta_ref, sigma2) -> float:
    eta2 = exact_eta(cfg, eve, bob2.theta)
    return beta_ref * cfg.num_antennas * p_b2 / sigma2 * eta2**2


def secure_two_bob(
    cfg: ArrayConfig,
    bob1: PolarLocation,
    bob2: PolarLocation,
    eve: PolarLocation,
    p_b2: float,
    beta_ref: float,
    sigma2: float,
) -> bool:
    """Secure-transmission test for Bob 1 with Bob 2 transmitting at ``p_b2``.

    When both Bobs share an angle the Bob-2 term cancels on both sides and
    the one-Bob condition applies.
    """
    if p_b2 < 0:
        raise ValueError("p_b2 must be non-negative")
    if bob1.theta == bob2.theta:
        return secure_one_bob(cfg, bob1, eve)
    eta1 = exact_eta(cfg, eve, bob1.theta)
    rhs = (eve.range**2 + _interference_term(cfg, eve, bob2, p_b2, beta_ref, sigma2)) / bob1.range**2
    return bool(eta1**2 < rhs)


def two_bob_threshold(cfg, eve, bob2, p_b2, beta_ref, sigma2, r_B1) -> float:
    """Lambda' = sqrt((beta N P_B2 / sigma^2 eta_2^2 + r_E^2) / r_B1^2)."""
    return float(np.sqrt((_interference_term(cfg, eve, bob2, p_b2, beta_ref, sigma2) + eve.range**2) / r_B1**2))


def insecure_region_two_bob(
    cfg: ArrayConfig,
    eve: PolarLocation,
    bob2: PolarLocation,
    p_b2: float,
    beta_ref: float,
    sigma2: float,
    r_B1: float,
    refine: bool = False,
) -> InsecureRegion:
    lam = two_bob_threshold(cfg, eve, bob2, p_b2, beta_ref, sigma2, r_B1)
    return _interval_from_threshold(cfg, eve, lam, refine)
