# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # SIR distributions of an interference-limited SIMO link
#
# Each receive antenna sees the desired signal plus `kappa` Rayleigh-faded
# interferers.  The exact per-antenna CDF is a product over interferers; its
# Lomax upper bound only needs `kappa` and `delta = lambda0 / sum p_i lambda_i`.
# This notebook compares the two, then looks at the sum of Lomax variables
# that drives maximal-ratio combining.

# %%
import numpy as np

from urllc_simo import ExplicitTopology, MRCConvergenceError
from urllc_simo.sir import (
    mrc_sum_cdf_approx,
    mrc_sum_cdf_exact,
    mrc_sum_cdf_lower_bound,
    per_antenna_cdf_bound,
    per_antenna_cdf_exact,
)

np.set_printoptions(precision=4)
uW = 1e-6

# %% [markdown]
# ## Three interference setups
# Interferer powers halve from 0.5 uW; the signal power and number of
# interferers change between setups.

# %%
setups = {"A": (1 * uW, 18), "B": (10 * uW, 8), "C": (30 * uW, 2)}
gamma = np.geomspace(1e-3, 10, 9)

for name, (p0, kappa) in setups.items():
    topo = ExplicitTopology(1.0, tuple(2.0 ** -i * uW for i in range(1, kappa + 1)))
    exact = per_antenna_cdf_exact(gamma, topo, p0)
    bound = per_antenna_cdf_bound(gamma, topo.effective(), p0)
    print(f"setup {name}: kappa={kappa}, delta*p0={topo.effective().delta * p0:.3f}")
    for g, e, b in zip(gamma, exact, bound):
        print(f"  gamma={g:8.3g}  exact={e:.4e}  bound={b:.4e}  rel.gap={(b - e) / e:+.2e}")

# %% [markdown]
# The bound sits above the exact curve everywhere and the two merge in the
# left tail, which is the only region an outage target of 1e-3 or below ever
# visits.

# %% [markdown]
# ## Sum of Lomax variables (MRC)
# The exact CDF comes from a numerically delicate integral.  When adaptive
# quadrature cannot certify its error we report `NA` instead of a number.

# %%
x = np.geomspace(1e-3, 1.0, 7)
for M, kappa in [(2, 8), (4, 8), (8, 2)]:
    print(f"M={M}, kappa={kappa}")
    approx = mrc_sum_cdf_approx(x, M, kappa)
    lower = mrc_sum_cdf_lower_bound(x, M, kappa)
    for xi, a, lb in zip(x, approx, lower):
        try:
            ex = f"{mrc_sum_cdf_exact(xi, M, kappa):.4e}"
        except MRCConvergenceError:
            ex = "NA"
        print(f"  x={xi:7.3g}  exact={ex:>10}  approx={a:.4e}  lower={lb:.4e}")

# %% [markdown]
# The gamma approximation tracks the exact curve to about a percent for two
# antennas.  With eight antennas and few interferers the error grows to tens
# of percent, so the closed-form MRC results are best read as trends there.
