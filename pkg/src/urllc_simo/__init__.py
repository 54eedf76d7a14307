"""Energy-efficient power and rate allocation for interference-limited SIMO links
under an outage constraint."""
from .allocator import (
    REFERENCE_CONSTRAINTS,
    REFERENCE_POWER_MODEL,
    UNCONSTRAINED,
    AllocationResult,
    Constraints,
    PowerModel,
    Regime,
    Scheme,
    allocate,
    energy_efficiency,
    feasibility_check,
    omega,
    rate_on_curve,
    stationarity_residual,
    unconstrained_optimum,
)
from .asymptotics import (
    g_linear_fit,
    gap_mrc_ssc,
    gap_omega_mrc_sc,
    gap_power_mrc_sc,
    gap_rate_mrc_sc,
    gap_ssc_sc,
    ssc_power_crossover,
    ssc_uses_less_power,
)
from .oracle import (
    GridSearchResult,
    GridSpec,
    SimConfig,
    empirical_omega,
    empirical_outage,
    grid_search_optimum,
    sample_sir,
)
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .sir import (
    EffectiveChannel,
    ExplicitTopology,
    MRCConvergenceError,
    mrc_inv_cdf_approx,
    mrc_sum_cdf_approx,
    mrc_sum_cdf_exact,
    mrc_sum_cdf_lower_bound,
    outage_mrc,
    outage_sc_ssc,
    per_antenna_cdf_bound,
    per_antenna_cdf_exact,
)
from .special import factorial_root, lambert_w0, upper_incomplete_gamma

__version__ = "0.1.0"
