import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urllc_simo.allocator import REFERENCE_POWER_MODEL, UNCONSTRAINED, Constraints, PowerModel, allocate, omega
from urllc_simo.asymptotics import (
    g_linear_fit,
    gap_mrc_ssc,
    gap_omega_mrc_sc,
    gap_power_mrc_sc,
    gap_rate_mrc_sc,
    gap_ssc_sc,
    ssc_power_crossover,
    ssc_uses_less_power,
)
from urllc_simo.sir import EffectiveChannel
from urllc_simo.special import factorial_root

PM = REFERENCE_POWER_MODEL
power_models = st.builds(
    PowerModel, st.floats(0.2, 0.5), st.floats(0.0, 0.2), st.floats(0.0, 0.2), st.floats(0.0, 0.05)
).filter(lambda pm: pm.p_t + pm.p_r + pm.p_syn > 0.0)


def test_gap_examples():
    assert gap_omega_mrc_sc(1) == 1.0
    assert gap_omega_mrc_sc(4) == pytest.approx(2.21336, rel=1e-5)
    assert gap_omega_mrc_sc(8) == pytest.approx(3.76435, rel=1e-5)
    assert gap_rate_mrc_sc(4) == pytest.approx(1.4877, rel=1e-4)
    assert gap_rate_mrc_sc(8) == pytest.approx(1.9402, rel=1e-4)
    assert gap_rate_mrc_sc(1) == gap_power_mrc_sc(1) == 1.0
    assert gap_ssc_sc(1, PM) == 1.0
    assert gap_ssc_sc(8, PM) == pytest.approx(math.sqrt(2.0 / 9.0), rel=1e-12)
    assert gap_ssc_sc(5, PowerModel(0.35, 0.05, 0.0, 0.01)) == 1.0
    assert gap_mrc_ssc(1, PM) == (1.0, 1.0)
    assert gap_mrc_ssc(8, PM)[0] == pytest.approx(4.116, rel=1e-3)
    assert gap_mrc_ssc(2, PM)[1] == pytest.approx(1.0299, rel=1e-4)
    with pytest.raises(ValueError):
        gap_ssc_sc(3, PowerModel(0.35, 0.0, 0.0, 0.0))


def test_linear_fit_examples():
    assert g_linear_fit(1) == pytest.approx(1.16)
    assert g_linear_fit(4) == pytest.approx(2.282)
    assert g_linear_fit(64) == pytest.approx(24.722)


def test_linear_fit_accuracy():
    err = {M: abs(g_linear_fit(M) / factorial_root(M) - 1.0) for M in range(1, 65)}
    assert max(err.values()) <= 0.16 + 1e-12
    assert max(err[M] for M in range(4, 65)) <= 0.05


def test_crossover():
    value, sign = ssc_power_crossover(PM)
    assert sign > 0
    assert 2.0 < value < 3.0
    assert value == pytest.approx((0.786 * 0.06 - 0.214 * 0.06) / (0.626 * 0.06 - 0.374 * 0.06))
    assert not ssc_uses_less_power(2, PM)
    assert ssc_uses_less_power(3, PM)
    singular = PowerModel(0.35, 0.626, 0.374, 0.0)
    with pytest.raises(ZeroDivisionError):
        ssc_power_crossover(singular)


@settings(max_examples=1000)
@given(st.integers(1, 200))
def test_gap_product_is_one(M):
    assert gap_rate_mrc_sc(M) * gap_power_mrc_sc(M) == pytest.approx(1.0, rel=1e-14)


@settings(max_examples=1000)
@given(st.integers(1, 64), power_models)
def test_composition_identities(M, pm):
    rate, power = gap_mrc_ssc(M, pm)
    ssc = gap_ssc_sc(M, pm)
    assert rate == pytest.approx(gap_rate_mrc_sc(M) / ssc, rel=1e-13)
    assert power == pytest.approx(gap_power_mrc_sc(M) / ssc, rel=1e-13)
    if M > 1 and pm.p_r > 1e-6:
        assert ssc < 1.0


@settings(max_examples=1000)
@given(st.integers(1, 16), st.integers(1, 20), st.floats(1.0, 100.0))
def test_omega_ratio_limit(M, kappa, delta):
    ch = EffectiveChannel(kappa, delta)
    ratio = omega("mrc", M, ch, 1e-300) / omega("sc", M, ch, 1e-300)
    assert ratio == pytest.approx(factorial_root(M), rel=1e-3 * M)


@pytest.mark.parametrize("M", [2, 4, 8])
def test_gaps_converge_monotonically(M):
    ch = EffectiveChannel.from_db(8, 10.0)
    rate_dev, power_dev = [], []
    for k in range(1, 24, 2):
        c = Constraints(10.0 ** -k, **UNCONSTRAINED)
        sc, mrc = allocate("sc", ch, M, PM, c), allocate("mrc", ch, M, PM, c)
        rate_dev.append(abs(mrc.r0_star / sc.r0_star / gap_rate_mrc_sc(M) - 1.0))
        power_dev.append(abs(mrc.p0_star / sc.p0_star / gap_power_mrc_sc(M) - 1.0))
    # compare until the deviation reaches rounding level
    for dev in (rate_dev, power_dev):
        assert all(b <= a for a, b in zip(dev, dev[1:]) if a > 1e-9)
    assert rate_dev[-1] < 0.025 and power_dev[-1] < 0.025
