import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mixedpls.geometry import ArrayConfig, MultipathSpec, PolarLocation, User, dbm_to_watt, effective_rayleigh
from mixedpls.rates import Scenario

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CFG = ArrayConfig()
BETA = CFG.free_space_gain
SIGMA2 = dbm_to_watt(-80.0)


@pytest.fixture
def cfg():
    return CFG


def los_user(theta, r, field="far", cfg=CFG):
    return User.build(cfg, PolarLocation(theta, r), field, beta_ref=BETA)


def two_bob_scenario(theta_b2, r_b2=164.0, bob1=(0.0, 229.0), eve=(0.0, 5.0), budget=1.0):
    """Two LoS Bobs with one near-field Eve, defaulting to the reference geometry."""
    b1 = los_user(*bob1)
    b2 = los_user(theta_b2, r_b2)
    e = los_user(*eve, field="near")
    return Scenario(CFG, (b1, b2), (e,), SIGMA2, budget, BETA)


def ring_scenario(seed, num_bobs=2, num_eves=1, budget=1.0, cfg=CFG):
    """Random ring placement with Rician 10 dB channels, independent of the harness."""
    rng = np.random.default_rng(seed)
    Z = effective_rayleigh(cfg, 0.0)

    def draw(lo, hi, field, i):
        loc = PolarLocation.from_physical(rng.uniform(-np.pi / 3, np.pi / 3), rng.uniform(lo, hi))
        mp = MultipathSpec.draw(loc, 10.0, 3, seed * 100 + i)
        return User.build(cfg, loc, field, mp, BETA)

    bobs = [draw(Z, 2 * Z, "far", k) for k in range(num_bobs)]
    eves = [draw(0.05 * Z, 0.1 * Z, "near", 50 + m) for m in range(num_eves)]
    return Scenario(cfg, bobs, eves, SIGMA2, budget, BETA)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
