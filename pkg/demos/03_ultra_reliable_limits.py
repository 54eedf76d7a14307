# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Gaps between combining schemes as epsilon -> 0
#
# Without box constraints the ratio of optimal rates MRC/SC approaches
# `(M!)**(1/(2M))` and the power ratio its inverse.  SSC versus SC depends only
# on the circuit powers.  We check how fast those limits are reached and
# where SSC starts to beat MRC.

# %%
import math

from urllc_simo import (
    REFERENCE_CONSTRAINTS,
    REFERENCE_POWER_MODEL,
    UNCONSTRAINED,
    Constraints,
    EffectiveChannel,
    allocate,
    gap_power_mrc_sc,
    gap_rate_mrc_sc,
    gap_ssc_sc,
    ssc_power_crossover,
)

pm = REFERENCE_POWER_MODEL
ch = EffectiveChannel.from_db(8, 10.0)

# %% [markdown]
# ## Convergence of the MRC/SC gaps

# %%
for M in (2, 4, 8):
    print(f"M={M}: limits rate {gap_rate_mrc_sc(M):.4f}, power {gap_power_mrc_sc(M):.4f}")
    for k in (2, 5, 8, 12, 16):
        c = Constraints(10.0 ** -k, **UNCONSTRAINED)
        sc, mrc = allocate("sc", ch, M, pm, c), allocate("mrc", ch, M, pm, c)
        print(f"   eps=1e-{k:<2d} rate {mrc.r0_star / sc.r0_star:.4f}  power {mrc.p0_star / sc.p0_star:.4f}")

# %% [markdown]
# With eight antennas the ratios are still 10 % away from their limits at
# epsilon = 1e-8.  The limit needs `omega * eta * P_c` to be small, and with a
# 10 dB signal-to-interference ratio it is about 0.2 there.

# %%
for M in (2, 4, 8, 16):
    c = Constraints(1e-8, **UNCONSTRAINED)
    sc, ssc = allocate("sc", ch, M, pm, c), allocate("ssc", ch, M, pm, c)
    print(f"M={M:2d}: ssc/sc rate {ssc.r0_star / sc.r0_star:.4f}  limit {gap_ssc_sc(M, pm):.4f}")

# %% [markdown]
# ## SSC against MRC
# In the limit SSC needs less transmit power than MRC beyond a crossover
# antenna count.  Energy efficiency turns over much later, because MRC's
# array gain keeps paying off against its extra receive chains.

# %%
value, sign = ssc_power_crossover(pm)
print(f"power crossover at M = {value:.3f} (denominator sign {sign:+d})")

c = Constraints(1e-3, **REFERENCE_CONSTRAINTS)
for M in range(2, 19):
    ssc, mrc = allocate("ssc", ch, M, pm, c), allocate("mrc", ch, M, pm, c)
    mark = "  <- SSC more efficient" if ssc.ee_star > mrc.ee_star else ""
    print(f"M={M:2d}: EE ssc {ssc.ee_star:.4f}  mrc {mrc.ee_star:.4f}{mark}")
