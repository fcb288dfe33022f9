"""Achievable, eavesdropping and secrecy rates under MRT analog beams.

Every rate function takes powers shaped ``(..., K)`` and broadcasts, so the
same code path evaluates a single allocation or a whole grid of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .correlation import exact_eta
from .geometry import ArrayConfig, PolarLocation, User, correlation, far_steering


class SingularEffectiveChannel(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class Scenario:
    cfg: ArrayConfig
    bobs: tuple[User, ...]
    eves: tuple[User, ...]
    noise_power: float
    power_budget: float
    beta_ref: float

    def __post_init__(self):
        object.__setattr__(self, "bobs", tuple(self.bobs))
        object.__setattr__(self, "eves", tuple(self.eves))
        if not self.bobs:
            raise ValueError("scenario needs at least one Bob")
        if self.noise_power <= 0 or self.power_budget <= 0 or self.beta_ref <= 0:
            raise ValueError("noise_power, power_budget and beta_ref must be positive")
        N = self.cfg.num_antennas
        for u in self.bobs + self.eves:
            if u.channel.shape != (N,):
                raise ValueError(f"channel length {u.channel.shape} != ({N},)")

    @property
    def num_bobs(self) -> int:
        return len(self.bobs)

    @property
    def num_eves(self) -> int:
        return len(self.eves)

    def with_budget(self, power_budget: float) -> "Scenario":
        return Scenario(self.cfg, self.bobs, self.eves, self.noise_power, power_budget, self.beta_ref)


@dataclass
class PowerAllocation:
    """Per-Bob transmit powers plus solver diagnostics."""

    powers: np.ndarray
    iterations: int = 0
    trace: list[float] = field(default_factory=list)
    converged: bool = True
    status: str = "ok"

    def __post_init__(self):
        self.powers = np.asarray(self.powers, dtype=float)
        if np.any(self.powers < -1e-12):
            raise ValueError("powers must be non-negative")
        self.powers = np.maximum(self.powers, 0.0)

    def feasible(self, budget: float, tol: float = 1e-9) -> bool:
        return bool(np.all(self.powers >= 0) and self.powers.sum() <= budget + tol)


@dataclass(frozen=True)
class GainTable:
    """v_bob[k, i] = |h_B,k^H w_i| / sigma and v_eve[m, i] = |h_E,m^H w_i| / sigma."""

    v_bob: np.ndarray
    v_eve: np.ndarray

    @property
    def num_bobs(self) -> int:
        return self.v_bob.shape[0]

    @property
    def num_eves(self) -> int:
        return self.v_eve.shape[0]

    def subset(self, bobs: Sequence[int]) -> "GainTable":
        idx = np.asarray(bobs, dtype=int)
        return GainTable(self.v_bob[np.ix_(idx, idx)], self.v_eve[:, idx])

    def scaled(self, factor: float) -> "GainTable":
        return GainTable(self.v_bob * factor, self.v_eve * factor)


def mrt_beams(sc: Scenario) -> np.ndarray:
    """Columns w_i = a(theta_B,i), shape (N, K)."""
    thetas = np.array([b.loc.theta for b in sc.bobs])
    return np.conj(far_steering(sc.cfg, thetas)).T


def gain_table(sc: Scenario, beams: np.ndarray | None = None) -> GainTable:
    """Normalised beam gains for the given beam matrix (default: MRT beams)."""
    W = mrt_beams(sc) if beams is None else beams
    sigma = np.sqrt(sc.noise_power)
    Hb = np.array([b.channel for b in sc.bobs])
    v_bob = np.abs(Hb @ W) / sigma
    if sc.eves:
        He = np.array([e.channel for e in sc.eves])
        v_eve = np.abs(He @ W) / sigma
    else:
        v_eve = np.zeros((0, W.shape[1]))
    return GainTable(v_bob, v_eve)


def _p(p) -> np.ndarray:
    return np.asarray(p.powers if isinstance(p, PowerAllocation) else p, dtype=float)


def bob_rates(gt: GainTable, p) -> np.ndarray:
    """R_B,k for every Bob, shape (..., K)."""
    p = _p(p)
    rx = p[..., None, :] * gt.v_bob**2
    sig = np.diagonal(rx, axis1=-2, axis2=-1)
    interf = rx.sum(-1) - sig
    return np.log2(1 + sig / (interf + 1))


def eve_rates(gt: GainTable, p) -> np.ndarray:
    """R_E,m,k for every Eve/Bob pair, shape (..., M, K)."""
    p = _p(p)
    rx = p[..., None, :] * gt.v_eve**2
    interf = rx.sum(-1, keepdims=True) - rx
    return np.log2(1 + rx / (interf + 1))


def worst_eve_rates(gt: GainTable, p) -> np.ndarray:
    """max_m R_E,m,k, zero when there are no Eves; shape (..., K)."""
    p = _p(p)
    if gt.num_eves == 0:
        return np.zeros(p.shape)
    return eve_rates(gt, p).max(axis=-2)


def secrecy_rates(gt: GainTable, p) -> np.ndarray:
    return np.maximum(bob_rates(gt, p) - worst_eve_rates(gt, p), 0.0)


def rate_bob(gt: GainTable, p, k: int) -> float:
    return float(bob_rates(gt, p)[k])


def rate_eve(gt: GainTable, p, m: int, k: int) -> float:
    return float(eve_rates(gt, p)[m, k])


def secrecy_rate(gt: GainTable, p, k: int) -> float:
    return float(secrecy_rates(gt, p)[k])


def sum_secrecy_rate(gt: GainTable, p):
    """Sum of clamped per-Bob secrecy rates; broadcasts over leading axes."""
    s = secrecy_rates(gt, p).sum(-1)
    return float(s) if np.ndim(s) == 0 else s


def unclamped_objective(gt: GainTable, p):
    """sum_k (R_B,k - max_m R_E,m,k) without the [.]^+ clamp."""
    s = (bob_rates(gt, p) - worst_eve_rates(gt, p)).sum(-1)
    return float(s) if np.ndim(s) == 0 else s


def one_bob_secrecy_closed(
    cfg: ArrayConfig,
    bob: PolarLocation,
    eve: PolarLocation,
    p_b: float,
    beta_ref: float,
    sigma2: float,
) -> float:
    """Closed-form one-Bob-one-Eve secrecy rate for LoS channels.

    With mu = N P beta / sigma^2 the Bob SNR is mu / r_B^2 and the Eve SNR is
    mu eta^2 / r_E^2, so the rate is
    [log2(1 + mu (1/r_B^2 - eta^2/r_E^2) / (1 + mu eta^2 / r_E^2))]^+.
    """
    mu = cfg.num_antennas * p_b * beta_ref / sigma2
    eta2 = exact_eta(cfg, eve, bob.theta) ** 2
    gain = mu * (1 / bob.range**2 - eta2 / eve.range**2) / (1 + mu * eta2 / eve.range**2)
    return max(0.0, float(np.log2(1 + gain)))


ZF_COND_LIMIT = 1e12


def zf_beams(sc: Scenario) -> np.ndarray:
    """Composite beams F_A F_D with ZF digital precoding, unit-norm columns."""
    FA = mrt_beams(sc)
    Hb = np.array([b.channel for b in sc.bobs])
    H_eff = Hb @ FA
    if np.linalg.cond(H_eff) > ZF_COND_LIMIT:
        raise SingularEffectiveChannel("effective Bob channel is ill-conditioned")
    FD = np.linalg.pinv(H_eff)
    W = FA @ FD
    return W / np.linalg.norm(W, axis=0, keepdims=True)


def zf_digital_rates(sc: Scenario, p) -> np.ndarray:
    """Per-Bob secrecy rates with ZF digital precoding on top of MRT analog beams."""
    return secrecy_rates(gain_table(sc, zf_beams(sc)), p)


def eta_matrix(sc: Scenario) -> np.ndarray:
    """Exact LoS correlations |b^H(eve_m) a(theta_B,k)|, shape (M, K)."""
    thetas = np.array([b.loc.theta for b in sc.bobs])
    return np.array([np.atleast_1d(exact_eta(sc.cfg, e.loc, thetas)) for e in sc.eves]).reshape(
        len(sc.eves), len(sc.bobs)
    )


def mrt_correlation(cfg: ArrayConfig, theta_k: float, theta_i: float) -> float:
    """|a^H(theta_k) a(theta_i)|."""
    return float(correlation(far_steering(cfg, theta_k), far_steering(cfg, theta_i)))
