"""Experiment configuration, random scenario generation and CSV runners.

Configs are strict JSON documents.  Every key carries its unit in the name
(``_dbm``, ``_ghz``, ``_db``, ``_m``, ``_rad``) and unknown keys are rejected.
Angles are physical angles phi in radians and become spatial angles sin(phi)
internally.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .correlation import insecure_region_one_bob
from .geometry import (
    ArrayConfig,
    MultipathSpec,
    PolarLocation,
    User,
    db_to_linear,
    dbm_to_watt,
    effective_rayleigh,
)
from .power import (
    SCHEMES,
    CaseUndetermined,
    ScaConfig,
    allocate_two_bob_closed,
    ffb_allocate,
    grid_search_two_bob,
)
from .rates import (
    Scenario,
    SingularEffectiveChannel,
    gain_table,
    one_bob_secrecy_closed,
    secrecy_rates,
    sum_secrecy_rate,
)

log = logging.getLogger(__name__)

CSV_SCHEMA_VERSION = 1
ROLE_BOB, ROLE_EVE = 0, 1
SWEEP_VARIABLES = ("power_budget_dbm", "num_bobs", "num_eves", "num_antennas")


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


# ---------------------------------------------------------------------------
# strict dataclass parsing


def _from_dict(cls, data: Any, where: str):
    """Build dataclass ``cls`` from ``data``, rejecting unknown or missing keys."""
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object, got {type(data).__name__}")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - set(fields))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {unknown}; allowed {sorted(fields)}")
    kwargs = {}
    for name, f in fields.items():
        if name in data:
            kwargs[name] = data[name]
        elif f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING:
            raise ConfigError(f"{where}: missing required key {name!r}")
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _pair(v, name: str) -> tuple[float, float]:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ValueError(f"{name} must be a [low, high] pair")
    lo, hi = float(v[0]), float(v[1])
    if lo > hi:
        raise ValueError(f"{name}: low > high")
    return lo, hi


def _number(v, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"{name} must be a number")
    return float(v)


# ---------------------------------------------------------------------------
# config types


@dataclass(frozen=True)
class SystemParams:
    """Array, propagation and power parameters shared by every experiment.

    ``ref_gain_db`` of None selects the free-space value 20 log10(lambda / 4 pi).
    """

    num_antennas: int = 256
    carrier_freq_ghz: float = 30.0
    ref_gain_db: float | None = None
    noise_power_dbm: float = -80.0
    power_budget_dbm: float = 30.0
    rician_factor_db: float = 10.0
    num_nlos_paths: int = 3
    rayleigh_coeff: float = 0.367

    def __post_init__(self):
        if not isinstance(self.num_antennas, int) or self.num_antennas < 1:
            raise ValueError("num_antennas must be a positive integer")
        if not isinstance(self.num_nlos_paths, int) or self.num_nlos_paths < 0:
            raise ValueError("num_nlos_paths must be a non-negative integer")
        for name in ("carrier_freq_ghz", "noise_power_dbm", "power_budget_dbm",
                     "rician_factor_db", "rayleigh_coeff"):
            _number(getattr(self, name), name)
        if self.ref_gain_db is not None:
            _number(self.ref_gain_db, "ref_gain_db")
        if self.carrier_freq_ghz <= 0:
            raise ValueError("carrier_freq_ghz must be positive")

    @property
    def array(self) -> ArrayConfig:
        return ArrayConfig(self.num_antennas, self.carrier_freq_ghz * 1e9, self.rayleigh_coeff)

    @property
    def beta_ref(self) -> float:
        if self.ref_gain_db is None:
            return self.array.free_space_gain
        return db_to_linear(self.ref_gain_db)

    @property
    def noise_power(self) -> float:
        return dbm_to_watt(self.noise_power_dbm)

    @property
    def power_budget(self) -> float:
        return dbm_to_watt(self.power_budget_dbm)


@dataclass(frozen=True)
class RandomPlacementSpec:
    """Ring placement; ranges are fractions of Z(0), angles are physical.

    Eves use the spherical-wave model, Bobs the planar one.  Z is taken from
    the experiment's array unless ``reference_num_antennas`` pins it to a fixed
    array size, which keeps the rings still while the antenna count is swept.
    """

    num_bobs: int = 5
    num_eves: int = 3
    eve_range_frac: tuple[float, float] = (0.05, 0.1)
    bob_range_frac: tuple[float, float] = (1.0, 2.0)
    eve_angle_rad: tuple[float, float] = (-math.pi / 3, math.pi / 3)
    bob_angle_rad: tuple[float, float] = (-math.pi / 3, math.pi / 3)
    reference_num_antennas: int | None = None

    def __post_init__(self):
        ref = self.reference_num_antennas
        if ref is not None and (not isinstance(ref, int) or ref < 2):
            raise ValueError("reference_num_antennas must be an integer >= 2")
        for name in ("eve_range_frac", "bob_range_frac", "eve_angle_rad", "bob_angle_rad"):
            object.__setattr__(self, name, _pair(getattr(self, name), name))
        if self.num_bobs < 1 or self.num_eves < 0:
            raise ValueError("need num_bobs >= 1 and num_eves >= 0")
        if self.eve_range_frac[0] <= 0 or self.bob_range_frac[0] <= 0:
            raise ValueError("ranges must be positive")
        for name in ("eve_angle_rad", "bob_angle_rad"):
            lo, hi = getattr(self, name)
            if not (-math.pi / 2 < lo and hi < math.pi / 2):
                raise ValueError(f"{name} must lie inside (-pi/2, pi/2)")


@dataclass(frozen=True)
class UserSpec:
    angle_rad: float
    range_m: float

    def __post_init__(self):
        _number(self.angle_rad, "angle_rad")
        _number(self.range_m, "range_m")
        if not abs(self.angle_rad) < math.pi / 2:
            raise ValueError("angle_rad must lie in (-pi/2, pi/2)")
        if self.range_m <= 0:
            raise ValueError("range_m must be positive")

    @property
    def loc(self) -> PolarLocation:
        return PolarLocation.from_physical(self.angle_rad, self.range_m)


def _as_user(v, where: str) -> UserSpec:
    return v if isinstance(v, UserSpec) else _from_dict(UserSpec, v, where)


@dataclass(frozen=True)
class ExplicitUsers:
    bobs: tuple[UserSpec, ...]
    eves: tuple[UserSpec, ...] = ()

    def __post_init__(self):
        bobs = tuple(_as_user(b, f"bobs[{i}]") for i, b in enumerate(self.bobs))
        eves = tuple(_as_user(e, f"eves[{i}]") for i, e in enumerate(self.eves))
        if not bobs:
            raise ValueError("need at least one Bob")
        object.__setattr__(self, "bobs", bobs)
        object.__setattr__(self, "eves", eves)


@dataclass(frozen=True)
class ScaParams:
    convergence_eps: float = 1e-5
    max_iters: int = 100

    def to_config(self) -> ScaConfig:
        return ScaConfig(convergence_eps=self.convergence_eps, max_iters=self.max_iters)


@dataclass(frozen=True)
class RegionSpec:
    """Secure/insecure map around one Eve.

    r_B spans [range_min_m, range_max_m]; by default (Z, 3Z] with Z the
    effective Rayleigh distance at Eve's angle.
    """

    eve: UserSpec
    theta_min: float = -0.3
    theta_max: float = 0.3
    theta_points: int = 200
    range_min_m: float | None = None
    range_max_m: float | None = None
    range_points: int = 200

    def __post_init__(self):
        object.__setattr__(self, "eve", _as_user(self.eve, "region.eve"))
        if self.theta_points < 1 or self.range_points < 1:
            raise ValueError("grid sizes must be positive")
        if not -1 < self.theta_min <= self.theta_max < 1:
            raise ValueError("need -1 < theta_min <= theta_max < 1")


@dataclass(frozen=True)
class RateAngleSpec:
    """Sweep of one Bob's spatial angle at fixed range."""

    eve: UserSpec
    bob_range_m: float
    theta_min: float = -0.3
    theta_max: float = 0.3
    points: int = 301

    def __post_init__(self):
        object.__setattr__(self, "eve", _as_user(self.eve, "rate_angle.eve"))
        if self.points < 1 or self.bob_range_m <= 0:
            raise ValueError("points and bob_range_m must be positive")
        if not -1 < self.theta_min <= self.theta_max < 1:
            raise ValueError("need -1 < theta_min <= theta_max < 1")


@dataclass(frozen=True)
class PowerAngleSpec:
    """Two-Bob sweep of Bob 2's spatial angle."""

    eve: UserSpec
    bob1: UserSpec
    bob2_range_m: float
    theta_min: float = -0.3
    theta_max: float = 0.3
    points: int = 121
    grid_points: int = 1001

    def __post_init__(self):
        for name in ("eve", "bob1"):
            object.__setattr__(self, name, _as_user(getattr(self, name), f"power_angle.{name}"))
        if self.points < 1 or self.grid_points < 2 or self.bob2_range_m <= 0:
            raise ValueError("points, grid_points and bob2_range_m must be positive")
        if not -1 < self.theta_min <= self.theta_max < 1:
            raise ValueError("need -1 < theta_min <= theta_max < 1")


@dataclass(frozen=True)
class SweepSpec:
    """Scheme comparison sweep; exactly one of ``placement`` or ``users`` is given."""

    variable: str
    values: tuple
    schemes: tuple[str, ...] = ("MFB", "FFB", "MFB+HS", "MFB+ZFDig")
    placement: RandomPlacementSpec | None = None
    users: ExplicitUsers | None = None

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"variable must be one of {SWEEP_VARIABLES}")
        vals = tuple(self.values)
        if not vals:
            raise ValueError("sweep values must be non-empty")
        if any(b < a for a, b in zip(vals, vals[1:])) and any(b > a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be monotone")
        if self.variable != "power_budget_dbm" and not all(isinstance(v, int) for v in vals):
            raise ValueError(f"{self.variable} values must be integers")
        object.__setattr__(self, "values", vals)
        schemes = tuple(self.schemes)
        if not schemes:
            raise ValueError("scheme list must be non-empty")
        bad = [s for s in schemes if s not in SCHEMES]
        if bad:
            raise ValueError(f"unknown scheme(s) {bad}; known {list(SCHEMES)}")
        object.__setattr__(self, "schemes", schemes)
        if isinstance(self.placement, dict):
            object.__setattr__(self, "placement",
                               _from_dict(RandomPlacementSpec, self.placement, "sweep.placement"))
        if isinstance(self.users, dict):
            object.__setattr__(self, "users", _from_dict(ExplicitUsers, self.users, "sweep.users"))
        if (self.placement is None) == (self.users is None):
            raise ValueError("give exactly one of 'placement' or 'users'")
        if self.users is not None and self.variable in ("num_bobs", "num_eves"):
            raise ValueError(f"cannot sweep {self.variable} over an explicit user list")


SECTIONS: dict[str, type] = {
    "region": RegionSpec,
    "rate_angle": RateAngleSpec,
    "power_angle": PowerAngleSpec,
    "sweep": SweepSpec,
}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    spec: Any
    system: SystemParams = field(default_factory=SystemParams)
    sca: ScaParams = field(default_factory=ScaParams)
    seeds: tuple[int, ...] = (0,)
    output: str | None = None
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def digest(self) -> str:
        text = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def parse_config(data: dict, kind: str) -> ExperimentConfig:
    """Validate a decoded JSON document for experiment ``kind``."""
    if kind not in SECTIONS:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    allowed = {"system", "sca", "seeds", "output", kind}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {unknown}; allowed {sorted(allowed)}")
    if kind not in data:
        raise ConfigError(f"missing section {kind!r}")
    system = _from_dict(SystemParams, data.get("system", {}), "system")
    sca = _from_dict(ScaParams, data.get("sca", {}), "sca")
    seeds = data.get("seeds", [0])
    if not (isinstance(seeds, list) and seeds and all(isinstance(s, int) and s >= 0 for s in seeds)):
        raise ConfigError("seeds must be a non-empty list of non-negative integers")
    output = data.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output must be a path string")
    spec = _from_dict(SECTIONS[kind], data[kind], kind)
    return ExperimentConfig(kind, spec, system, sca, tuple(seeds), output, data)


def load_config(path: str | Path, kind: str) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(data, kind)


# ---------------------------------------------------------------------------
# scenario generation


def _user_seed(seed: int, role: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, role, index])


def _draw_user(
    sys: SystemParams, loc: PolarLocation, field_: str, seed: int, role: int, index: int
) -> User:
    cfg = sys.array
    mp_seed = np.random.SeedSequence([seed, role, index, 1])
    mp = MultipathSpec.draw(loc, sys.rician_factor_db, sys.num_nlos_paths, mp_seed)
    return User.build(cfg, loc, field_, mp, sys.beta_ref)


def _ring_location(lo: float, hi: float, ang: tuple[float, float], ss) -> PolarLocation:
    rng = np.random.default_rng(ss)
    phi = rng.uniform(*ang)
    r = rng.uniform(lo, hi)
    return PolarLocation.from_physical(phi, r)


def generate_scenario(spec: RandomPlacementSpec, seed: int, sys: SystemParams = SystemParams()) -> Scenario:
    """Seeded ring placement with Rician channels.

    User k of each role draws from its own stream keyed on (seed, role, k), so
    a scenario with more Bobs or Eves extends a smaller one instead of
    replacing it.
    """
    cfg = sys.array
    ref = cfg if spec.reference_num_antennas is None else dataclasses.replace(
        cfg, num_antennas=spec.reference_num_antennas)
    Z = effective_rayleigh(ref, 0.0)
    bobs = []
    for k in range(spec.num_bobs):
        lo, hi = (f * Z for f in spec.bob_range_frac)
        loc = _ring_location(lo, hi, spec.bob_angle_rad, _user_seed(seed, ROLE_BOB, k))
        bobs.append(_draw_user(sys, loc, "far", seed, ROLE_BOB, k))
    eves = []
    for m in range(spec.num_eves):
        lo, hi = (f * Z for f in spec.eve_range_frac)
        loc = _ring_location(lo, hi, spec.eve_angle_rad, _user_seed(seed, ROLE_EVE, m))
        eves.append(_draw_user(sys, loc, "near", seed, ROLE_EVE, m))
    return Scenario(cfg, bobs, eves, sys.noise_power, sys.power_budget, sys.beta_ref)


def explicit_scenario(users: ExplicitUsers, seed: int, sys: SystemParams = SystemParams()) -> Scenario:
    """Fixed locations; multipath is redrawn from ``seed``."""
    bobs = [_draw_user(sys, u.loc, "far", seed, ROLE_BOB, k) for k, u in enumerate(users.bobs)]
    eves = [_draw_user(sys, u.loc, "near", seed, ROLE_EVE, m) for m, u in enumerate(users.eves)]
    cfg = sys.array
    return Scenario(cfg, bobs, eves, sys.noise_power, sys.power_budget, sys.beta_ref)


# ---------------------------------------------------------------------------
# CSV


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def column(self, name: str) -> list:
        j = self.columns.index(name)
        return [r[j] for r in self.rows]


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(table: Table, out: str | Path | io.TextIOBase, digest: str, kind: str) -> None:
    """CSV with a ``#`` header line carrying schema version and config hash."""
    own = not hasattr(out, "write")
    fh = open(out, "w", newline="") if own else out
    try:
        fh.write(f"# mixedpls-csv v{CSV_SCHEMA_VERSION} kind={kind} config_sha256={digest}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if own:
            fh.close()


def read_csv(path: str | Path) -> tuple[str, Table]:
    with open(path, newline="") as fh:
        header = fh.readline().rstrip("\n")
        reader = csv.reader(fh)
        cols = tuple(next(reader))
        rows = [tuple(r) for r in reader]
    return header, Table(cols, rows)


def _parallel_map(fn: Callable, tasks: Sequence, threads: int) -> list:
    """Order-stable map; results come back in task order whatever the completion order."""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, tasks))


# ---------------------------------------------------------------------------
# runners

REGION_COLUMNS = ("theta_b", "range_b_m", "secure_usw", "secure_upw", "secure_multipath",
                  "insecure_closed_form")
RATE_ANGLE_COLUMNS = ("theta_b", "rate_mixed", "rate_far", "rate_closed_form")
POWER_ANGLE_COLUMNS = ("theta_b2", "case", "p1_closed", "p2_closed", "p1_grid", "p2_grid",
                       "rate_grid", "rate_closed", "p1_ffb", "p2_ffb", "rate_ffb_estimated",
                       "rate_ffb_achieved")
SWEEP_COLUMNS = ("variable", "value", "seed", "scheme", "estimated_rate", "achieved_rate",
                 "iterations", "status")
SUMMARY_COLUMNS = ("variable", "value", "scheme", "num_seeds", "mean_estimated_rate",
                   "mean_achieved_rate")


def _single_rates(cfg: ArrayConfig, sys: SystemParams, bob: User, eve: User) -> float:
    sc = Scenario(cfg, (bob,), (eve,), sys.noise_power, sys.power_budget, sys.beta_ref)
    return float(secrecy_rates(gain_table(sc), [sys.power_budget])[0])


def _region_row(args) -> list[tuple]:
    spec, sys, seed, theta = args
    cfg = sys.array
    eve_loc = spec.eve.loc
    Z = effective_rayleigh(cfg, eve_loc.theta)
    r_lo = spec.range_min_m if spec.range_min_m is not None else Z
    r_hi = spec.range_max_m if spec.range_max_m is not None else 3 * Z
    eve_usw = User.build(cfg, eve_loc, "near", beta_ref=sys.beta_ref)
    eve_upw = User.build(cfg, eve_loc, "far", beta_ref=sys.beta_ref)
    eve_mp = _draw_user(sys, eve_loc, "near", seed, ROLE_EVE, 0)
    if spec.range_min_m is None:
        # the closed-form region is defined for r_B > Z only
        ranges = np.linspace(r_lo, r_hi, spec.range_points + 1)[1:]
    else:
        ranges = np.linspace(r_lo, r_hi, spec.range_points)
    rows = []
    for r in ranges:
        loc = PolarLocation(float(theta), float(r))
        region = insecure_region_one_bob(cfg, eve_loc, float(r))
        bob_usw = User.build(cfg, loc, "near", beta_ref=sys.beta_ref)
        bob_upw = User.build(cfg, loc, "far", beta_ref=sys.beta_ref)
        bob_mp = _draw_user(sys, loc, "near", seed, ROLE_BOB, 0)
        rows.append((
            float(theta), float(r),
            _single_rates(cfg, sys, bob_usw, eve_usw) > 0,
            _single_rates(cfg, sys, bob_upw, eve_upw) > 0,
            _single_rates(cfg, sys, bob_mp, eve_mp) > 0,
            region.contains(float(theta), float(r)),
        ))
    return rows


def run_region_map(ec: ExperimentConfig, seed: int | None = None, threads: int = 1) -> Table:
    """Secure/insecure map of Bob locations around a fixed Eve."""
    spec: RegionSpec = ec.spec
    seed = ec.seeds[0] if seed is None else seed
    thetas = np.linspace(spec.theta_min, spec.theta_max, spec.theta_points)
    chunks = _parallel_map(_region_row, [(spec, ec.system, seed, t) for t in thetas], threads)
    return Table(REGION_COLUMNS, [row for chunk in chunks for row in chunk])


def run_rate_vs_angle(ec: ExperimentConfig, seed: int | None = None, threads: int = 1) -> Table:
    """One-Bob secrecy rate versus Bob angle under the mixed and far-field Eve models."""
    spec: RateAngleSpec = ec.spec
    sys = ec.system
    cfg = sys.array
    eve_loc = spec.eve.loc
    eve_near = User.build(cfg, eve_loc, "near", beta_ref=sys.beta_ref)
    eve_far = User.build(cfg, eve_loc, "far", beta_ref=sys.beta_ref)
    rows = []
    for theta in np.linspace(spec.theta_min, spec.theta_max, spec.points):
        loc = PolarLocation(float(theta), spec.bob_range_m)
        bob = User.build(cfg, loc, "far", beta_ref=sys.beta_ref)
        closed = one_bob_secrecy_closed(cfg, loc, eve_loc, sys.power_budget, sys.beta_ref,
                                        sys.noise_power)
        rows.append((float(theta), _single_rates(cfg, sys, bob, eve_near),
                     _single_rates(cfg, sys, bob, eve_far), closed))
    return Table(RATE_ANGLE_COLUMNS, rows)


def _power_angle_row(args) -> tuple:
    spec, sys, sca_cfg, theta = args
    cfg = sys.array
    eve = User.build(cfg, spec.eve.loc, "near", beta_ref=sys.beta_ref)
    b1 = User.build(cfg, spec.bob1.loc, "far", beta_ref=sys.beta_ref)
    b2 = User.build(cfg, PolarLocation(float(theta), spec.bob2_range_m), "far", beta_ref=sys.beta_ref)
    sc = Scenario(cfg, (b1, b2), (eve,), sys.noise_power, sys.power_budget, sys.beta_ref)
    gt = gain_table(sc)
    grid = grid_search_two_bob(sc, spec.grid_points)
    try:
        cf = allocate_two_bob_closed(sc)
        case, p_cf = cf.case, cf.allocation.powers
    except CaseUndetermined:
        case, p_cf = "undetermined", grid.powers
    except ValueError:
        case, p_cf = "equal_angle", grid.powers
    ffb = ffb_allocate(sc, sca_cfg)
    return (float(theta), case, p_cf[0], p_cf[1], grid.powers[0], grid.powers[1],
            sum_secrecy_rate(gt, grid.powers), sum_secrecy_rate(gt, p_cf),
            ffb.allocation.powers[0], ffb.allocation.powers[1], ffb.estimated_rate,
            ffb.achieved_rate)


def run_power_vs_angle(ec: ExperimentConfig, seed: int | None = None, threads: int = 1) -> Table:
    """Two-Bob allocations versus Bob 2's angle: closed form, grid search and FFB.

    When the closed form does not apply (``case`` is ``undetermined`` or
    ``equal_angle``) its columns repeat the grid-search allocation.
    """
    spec: PowerAngleSpec = ec.spec
    sca_cfg = ec.sca.to_config()
    thetas = np.linspace(spec.theta_min, spec.theta_max, spec.points)
    rows = _parallel_map(_power_angle_row, [(spec, ec.system, sca_cfg, t) for t in thetas], threads)
    return Table(POWER_ANGLE_COLUMNS, rows)


def _apply_sweep(sys: SystemParams, spec: SweepSpec, value):
    placement = spec.placement
    if spec.variable == "power_budget_dbm":
        sys = dataclasses.replace(sys, power_budget_dbm=float(value))
    elif spec.variable == "num_antennas":
        sys = dataclasses.replace(sys, num_antennas=int(value))
    elif spec.variable == "num_bobs":
        placement = dataclasses.replace(placement, num_bobs=int(value))
    elif spec.variable == "num_eves":
        placement = dataclasses.replace(placement, num_eves=int(value))
    return sys, placement


def sweep_point(spec: SweepSpec, sys: SystemParams, sca_cfg: ScaConfig, value, seed: int) -> list[tuple]:
    """Rows for one (sweep value, seed) pair, one per scheme."""
    sys, placement = _apply_sweep(sys, spec, value)
    if placement is not None:
        sc = generate_scenario(placement, seed, sys)
    else:
        sc = explicit_scenario(spec.users, seed, sys)
    rows = []
    for name in spec.schemes:
        try:
            res = SCHEMES[name](sc, sca_cfg)
        except SingularEffectiveChannel:
            log.warning("ZF effective channel singular at %s=%s seed=%d", spec.variable, value, seed)
            rows.append((spec.variable, value, seed, name, 0.0, 0.0, 0, "zf_singular"))
            continue
        rows.append((spec.variable, value, seed, name, float(res.estimated_rate),
                     float(res.achieved_rate), res.iterations, res.allocation.status))
    return rows


def _sweep_task(args):
    return sweep_point(*args)


def run_sweep(ec: ExperimentConfig, seed: int | None = None, threads: int = 1) -> Table:
    """Per-seed, per-scheme estimated and achieved rates across the sweep values."""
    spec: SweepSpec = ec.spec
    seeds = ec.seeds if seed is None else (seed,)
    sca_cfg = ec.sca.to_config()
    tasks = [(spec, ec.system, sca_cfg, v, s) for v in spec.values for s in seeds]
    chunks = _parallel_map(_sweep_task, tasks, threads)
    return Table(SWEEP_COLUMNS, [row for chunk in chunks for row in chunk])


def summarize_sweep(table: Table) -> Table:
    """Seed-averaged rates per (value, scheme), in first-appearance order."""
    groups: dict[tuple, list[tuple[float, float]]] = {}
    for var, value, _seed, scheme, est, ach, _it, _st in table.rows:
        groups.setdefault((var, value, scheme), []).append((float(est), float(ach)))
    rows = []
    for (var, value, scheme), vals in groups.items():
        arr = np.array(vals)
        rows.append((var, value, scheme, len(vals), float(arr[:, 0].mean()), float(arr[:, 1].mean())))
    return Table(SUMMARY_COLUMNS, rows)


RUNNERS: dict[str, Callable[..., Table]] = {
    "region": run_region_map,
    "rate_angle": run_rate_vs_angle,
    "power_angle": run_power_vs_angle,
    "sweep": run_sweep,
}
