# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Energy-efficient power and rate allocation
#
# At outage target `epsilon` every feasible operating point lies on the
# reliability curve `r0 = log2(omega p0 + 1)`.  Energy efficiency along that
# curve has a single maximum, available in closed form through the Lambert W
# function.  Here we allocate, look at the regimes, and sweep the target.

# %%
import numpy as np

from urllc_simo import (
    REFERENCE_CONSTRAINTS,
    REFERENCE_POWER_MODEL,
    Constraints,
    EffectiveChannel,
    allocate,
    grid_search_optimum,
)

ch = EffectiveChannel.from_db(kappa=8, delta_db=10.0)
pm = REFERENCE_POWER_MODEL

# %% [markdown]
# ## One allocation per combining scheme

# %%
c = Constraints(1e-5, **REFERENCE_CONSTRAINTS)
for scheme in ("sc", "ssc", "mrc"):
    res = allocate(scheme, ch, 8, pm, c)
    brute = grid_search_optimum(scheme, ch, 8, pm, c)
    print(f"{scheme:>3}: p0*={res.p0_star:.4f} W  r0*={res.r0_star:.4f} b/s/Hz  "
          f"EE*={res.ee_star:.4f}  ({res.regime.value}); grid EE={brute.ee_star:.4f}")

# %% [markdown]
# ## Box constraints
# A tight power cap clamps from above; a demanding minimum rate pushes the
# operating point up the curve.

# %%
for label, cons in [
    ("p_max = 0.1 W", Constraints(1e-5, r_min=0.01, p_min=0.01, p_max=0.1)),
    ("r_min = 3", Constraints(1e-5, r_min=3.0, p_min=0.01, p_max=10.0)),
    ("r_min = 5, M = 1, eps = 1e-9", Constraints(1e-9, r_min=5.0, p_min=0.01, p_max=10.0)),
]:
    M = 1 if "M = 1" in label else 8
    res = allocate("sc", ch, M, pm, cons)
    print(f"{label:>30}: {res.regime.value:>12}  p0*={res.p0_star:.4f}  r0*={res.r0_star:.4f}")

# %% [markdown]
# ## Sweeping the outage target
# Looser targets let the transmitter spend less power at a higher rate.

# %%
print(" epsilon      sc p0*   sc r0*   mrc p0*  mrc r0*   sc EE   mrc EE")
for eps in np.geomspace(1e-9, 1e-1, 9):
    c = Constraints(eps, **REFERENCE_CONSTRAINTS)
    sc = allocate("sc", ch, 8, pm, c)
    mrc = allocate("mrc", ch, 8, pm, c)
    print(f"{eps:8.0e}  {sc.p0_star:8.4f} {sc.r0_star:8.4f}  {mrc.p0_star:8.4f} {mrc.r0_star:8.4f}"
          f"  {sc.ee_star:6.3f}  {mrc.ee_star:6.3f}")
