# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Does the allocation really meet its outage target?
#
# The allocator works with a Lomax upper bound on each antenna's CDF, so the
# true outage at the chosen operating point should land at or a little below
# `epsilon`.  We check by simulating the fading channel.  Draws are counter
# based, so the worker count never changes a result.

# %%
import os
import time

from urllc_simo import (
    REFERENCE_CONSTRAINTS,
    REFERENCE_POWER_MODEL,
    Constraints,
    ExplicitTopology,
    SimConfig,
    allocate,
    empirical_outage,
)

topo = ExplicitTopology(1e-5, tuple(2.0 ** -i * 1e-6 for i in range(1, 9)))
samples = int(os.environ.get("DEMO_SAMPLES", 2_000_000))

# %%
for scheme in ("sc", "mrc"):
    for M in (2, 4):
        for eps in (1e-2, 1e-3):
            res = allocate(scheme, topo, M, REFERENCE_POWER_MODEL, Constraints(eps, **REFERENCE_CONSTRAINTS))
            t = time.perf_counter()
            est, se = empirical_outage(scheme, res.r0_star, res.p0_star, topo,
                                       SimConfig(samples, seed=42, antennas=M, workers=os.cpu_count()))
            print(f"{scheme} M={M} eps={eps:g}: p0*={res.p0_star:.3f} r0*={res.r0_star:.3f}  "
                  f"simulated {est:.3e} +- {se:.1e} ({est / eps:.2f} eps, {time.perf_counter() - t:.1f} s)")

# %% [markdown]
# Every estimate falls a few percent under its target: the bound is tight
# in the tail but never optimistic.
