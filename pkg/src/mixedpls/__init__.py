"""Mixed near-field/far-field physical-layer security with XL-arrays."""

from .correlation import (
    AngularInterval,
    BetaPair,
    G,
    InsecureRegion,
    NoSolution,
    approx_eta,
    corr_G,
    exact_eta,
    insecure_region_one_bob,
    insecure_region_two_bob,
    secure_one_bob,
    secure_two_bob,
    solve_beta1,
)
from .geometry import (
    ArrayConfig,
    MultipathSpec,
    PolarLocation,
    User,
    build_channel,
    correlation,
    effective_rayleigh,
    far_steering,
    near_steering,
)
from .power import (
    CaseUndetermined,
    EmptySchedule,
    ScaConfig,
    SchemeResult,
    SolverStall,
    TaylorCoeffs,
    allocate_two_bob_closed,
    ffb_allocate,
    grid_search_two_bob,
    hs_allocate,
    mfb_allocate,
    sca_allocate,
    solve_p6,
    taylor_coeffs,
    zf_allocate,
)
from .rates import (
    GainTable,
    PowerAllocation,
    Scenario,
    gain_table,
    one_bob_secrecy_closed,
    rate_bob,
    rate_eve,
    secrecy_rate,
    sum_secrecy_rate,
)

__version__ = "0.1.0"
