"""XL-array geometry, steering vectors and channel construction.

All vectors in this module follow the *row* convention used for received
signals: a channel ``c`` of length N produces ``y = c @ x`` for a transmit
vector ``x``.  ``far_steering`` therefore returns a^H(theta) and
``near_steering`` returns b^H(theta, r).  The correlation between two rows
``u`` and ``v`` is ``np.vdot(v, u)`` (= u conj(v)^T).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

SPEED_OF_LIGHT = 2.998e8
RAYLEIGH_COEFF = 0.367

Field = Literal["near", "far"]


@dataclass(frozen=True)
class ArrayConfig:
    """Half-wavelength uniform linear array centred at the origin."""

    num_antennas: int = 256
    carrier_freq: float = 30e9
    rayleigh_coeff: float = RAYLEIGH_COEFF

    def __post_init__(self):
        if self.num_antennas < 1:
            raise ValueError("num_antennas must be >= 1")
        if self.carrier_freq <= 0:
            raise ValueError("carrier_freq must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def spacing(self) -> float:
        return self.wavelength / 2

    @property
    def aperture(self) -> float:
        return (self.num_antennas - 1) * self.spacing

    @property
    def offsets(self) -> np.ndarray:
        """Antenna index offsets (2n - N - 1)/2 for the 1-based index n; symmetric about 0."""
        n = np.arange(self.num_antennas)
        return n - (self.num_antennas - 1) / 2

    @property
    def free_space_gain(self) -> float:
        """Reference channel gain at 1 m, (lambda / 4 pi)^2."""
        return (self.wavelength / (4 * np.pi)) ** 2


@dataclass(frozen=True)
class PolarLocation:
    """User position as spatial angle ``theta = sin(phi)`` and range in meters."""

    theta: float
    range: float

    def __post_init__(self):
        if not abs(self.theta) < 1:
            raise ValueError(f"spatial angle must lie in (-1, 1), got {self.theta}")
        if not self.range > 0:
            raise ValueError(f"range must be positive, got {self.range}")

    @classmethod
    def from_physical(cls, phi: float, range: float) -> "PolarLocation":
        return cls(float(np.sin(phi)), float(range))


@dataclass(frozen=True)
class MultipathSpec:
    """NLoS paths of one user.

    ``nlos_gains`` are unit-variance draws; ``build_channel`` rescales them so
    that the LoS-to-total-NLoS power ratio equals the Rician factor.
    """

    rician_factor_db: float = np.inf
    num_nlos_paths: int = 0
    scatterer_locations: tuple[PolarLocation, ...] = ()
    nlos_gains: tuple[complex, ...] = ()
    rng_seed: int | None = None

    def __post_init__(self):
        if self.num_nlos_paths < 0:
            raise ValueError("num_nlos_paths must be >= 0")
        if self.num_nlos_paths > 0:
            if len(self.scatterer_locations) != self.num_nlos_paths:
                raise ValueError("need one scatterer location per NLoS path")
            if len(self.nlos_gains) != self.num_nlos_paths:
                raise ValueError("need one NLoS gain per NLoS path")

    @classmethod
    def los_only(cls) -> "MultipathSpec":
        return cls()

    @classmethod
    def draw(
        cls,
        user: PolarLocation,
        rician_factor_db: float,
        num_paths: int,
        seed,
        sector: float = np.pi / 3,
        min_range: float = 1.0,
    ) -> "MultipathSpec":
        """Random scatterers around ``user``.

        Scatterer physical angles are uniform within ``sector`` of the user's
        physical angle (clipped to the half plane), ranges uniform in
        [min_range, user.range], gains circularly-symmetric CN(0, 1).
        """
        if num_paths == 0 or np.isinf(rician_factor_db):
            return cls(rician_factor_db=np.inf, rng_seed=None if seed is None else _seed_int(seed))
        rng = np.random.default_rng(seed)
        phi_u = np.arcsin(user.theta)
        lim = np.pi / 2 - 1e-3
        phi = rng.uniform(max(phi_u - sector, -lim), min(phi_u + sector, lim), num_paths)
        hi = max(user.range, min_range * (1 + 1e-9))
        rng_r = rng.uniform(min_range, hi, num_paths)
        gains = (rng.standard_normal(num_paths) + 1j * rng.standard_normal(num_paths)) / np.sqrt(2)
        locs = tuple(PolarLocation(float(np.sin(a)), float(r)) for a, r in zip(phi, rng_r))
        return cls(
            rician_factor_db=float(rician_factor_db),
            num_nlos_paths=num_paths,
            scatterer_locations=locs,
            nlos_gains=tuple(complex(g) for g in gains),
            rng_seed=_seed_int(seed),
        )


def _seed_int(seed) -> int | None:
    if seed is None:
        return None
    if isinstance(seed, np.random.SeedSequence):
        return int(seed.generate_state(1)[0])
    return int(seed)


def _check_theta(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(theta) >= 1):
        raise ValueError("spatial angle must lie in (-1, 1)")
    return theta


def far_steering(cfg: ArrayConfig, theta) -> np.ndarray:
    """a^H(theta): entries exp(j pi n theta)/sqrt(N), n = 0..N-1.

    ``theta`` may be an array; the antenna axis is appended last.
    """
    theta = _check_theta(theta)
    n = np.arange(cfg.num_antennas)
    return np.exp(1j * np.pi * theta[..., None] * n) / np.sqrt(cfg.num_antennas)


def antenna_distances(cfg: ArrayConfig, theta, r) -> np.ndarray:
    """Distance from every antenna to the point (theta, r); antenna axis last."""
    theta = np.asarray(theta, dtype=float)[..., None]
    r = np.asarray(r, dtype=float)[..., None]
    dn = cfg.offsets * cfg.spacing
    return np.sqrt(r**2 + dn**2 - 2 * r * theta * dn)


def near_steering_rows(cfg: ArrayConfig, theta, r) -> np.ndarray:
    """Vectorised b^H(theta, r) for broadcastable ``theta`` and ``r``."""
    theta = _check_theta(theta)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("range must be positive")
    # r_n - r computed as (r_n^2 - r^2)/(r_n + r) to avoid cancellation at large r
    dn = cfg.offsets * cfg.spacing
    rn = antenna_distances(cfg, theta, r)
    diff = (dn**2 - 2 * r[..., None] * theta[..., None] * dn) / (rn + r[..., None])
    return np.exp(-2j * np.pi * diff / cfg.wavelength) / np.sqrt(cfg.num_antennas)


def near_steering(cfg: ArrayConfig, loc: PolarLocation) -> np.ndarray:
    """b^H(theta, r) under the uniform spherical-wave model."""
    if not loc.range > 0:
        raise ValueError("range must be positive")
    return near_steering_rows(cfg, loc.theta, loc.range)


def correlation(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """|u conj(v)^T| along the last axis, e.g. |b^H(theta_p, r_p) a(theta_q)|."""
    return np.abs(np.sum(u * np.conj(v), axis=-1))


def los_gain(beta_ref: float, r: float, wavelength: float) -> complex:
    """sqrt(beta) / r * exp(-j 2 pi r / lambda)."""
    if r <= 0:
        raise ValueError("range must be positive")
    if beta_ref <= 0:
        raise ValueError("beta_ref must be positive")
    return np.sqrt(beta_ref) / r * np.exp(-2j * np.pi * r / wavelength)


def steering(cfg: ArrayConfig, loc: PolarLocation, field: Field) -> np.ndarray:
    if field == "near":
        return near_steering(cfg, loc)
    if field == "far":
        return far_steering(cfg, loc.theta)
    raise ValueError(f"field must be 'near' or 'far', got {field!r}")


def build_channel(
    cfg: ArrayConfig,
    loc: PolarLocation,
    mp: MultipathSpec | None = None,
    field: Field = "far",
    beta_ref: float | None = None,
) -> np.ndarray:
    """Channel row h^H = sqrt(N) h a(loc) + sqrt(N/L) sum_l h_l a(scatterer_l).

    ``a`` is the near- or far-field steering row according to ``field``.
    ``beta_ref`` defaults to the free-space gain (lambda/4pi)^2.
    """
    if beta_ref is None:
        beta_ref = cfg.free_space_gain
    mp = mp or MultipathSpec.los_only()
    N = cfg.num_antennas
    h = los_gain(beta_ref, loc.range, cfg.wavelength)
    row = np.sqrt(N) * h * steering(cfg, loc, field)
    L = mp.num_nlos_paths
    if L == 0:
        return row
    if not mp.scatterer_locations:
        raise ValueError("NLoS paths requested without scatterer locations")
    scale = abs(h) * 10 ** (-mp.rician_factor_db / 20)
    nlos = np.zeros(N, dtype=complex)
    for g, s in zip(mp.nlos_gains, mp.scatterer_locations):
        nlos += scale * g * steering(cfg, s, field)
    return row + np.sqrt(N / L) * nlos


def effective_rayleigh(cfg: ArrayConfig, theta) -> float | np.ndarray:
    """Z(theta) = eps * 2 D^2 (1 - theta^2) / lambda."""
    theta = _check_theta(theta)
    z = cfg.rayleigh_coeff * 2 * cfg.aperture**2 * (1 - theta**2) / cfg.wavelength
    return float(z) if z.ndim == 0 else z


def db_to_linear(db: float) -> float:
    return 10 ** (db / 10)


def linear_to_db(x: float) -> float:
    return 10 * np.log10(x)


def dbm_to_watt(dbm: float) -> float:
    return 10 ** (dbm / 10) / 1e3


def watt_to_dbm(w: float) -> float:
    return 10 * np.log10(w * 1e3)


@dataclass(frozen=True)
class User:
    """A located user together with the channel realisation that serves it."""

    loc: PolarLocation
    channel: np.ndarray = dataclasses.field(repr=False, compare=False)
    field: Field = "far"
    multipath: MultipathSpec = dataclasses.field(default_factory=MultipathSpec.los_only)

    @classmethod
    def build(
        cls,
        cfg: ArrayConfig,
        loc: PolarLocation,
        field: Field,
        mp: MultipathSpec | None = None,
        beta_ref: float | None = None,
    ) -> "User":
        mp = mp or MultipathSpec.los_only()
        ch = build_channel(cfg, loc, mp, field, beta_ref)
        ch.setflags(write=False)
        return cls(loc, ch, field, mp)


def locations(users: Sequence[User]) -> list[PolarLocation]:
    return [u.loc for u in users]
