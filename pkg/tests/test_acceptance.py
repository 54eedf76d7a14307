"""Acceptance criteria, one test each.

Every test records a one-line verdict; the lines are printed in the pytest
terminal summary, and ``python3 tests/test_acceptance.py`` prints them too.
"""
import math
import os
import sys
import time
import warnings

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import MICRO, halving_topology  # noqa: E402
from urllc_simo.allocator import (  # noqa: E402
    REFERENCE_CONSTRAINTS,
    REFERENCE_POWER_MODEL,
    UNCONSTRAINED,
    Constraints,
    PowerModel,
    Regime,
    Scheme,
    allocate,
    stationarity_residual,
    unconstrained_optimum,
)
from urllc_simo.asymptotics import gap_power_mrc_sc, gap_rate_mrc_sc, ssc_power_crossover  # noqa: E402
from urllc_simo.oracle import GridSpec, SimConfig, empirical_outage, grid_search_optimum  # noqa: E402
from urllc_simo.sir import (  # noqa: E402
    EffectiveChannel,
    ExplicitTopology,
    MRCConvergenceError,
    mrc_sum_cdf_approx,
    mrc_sum_cdf_exact,
    mrc_sum_cdf_lower_bound,
    per_antenna_cdf_bound,
    per_antenna_cdf_exact,
)
from urllc_simo.special import factorial_root, lambert_w0, upper_incomplete_gamma  # noqa: E402

VERDICTS = {}


def record(number, name, ok, detail, seconds):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {name}: {detail} ({seconds:.1f} s)"
    VERDICTS[number] = line
    return line


def _db(ratio):
    return 10.0 * math.log10(ratio)


# ---------------------------------------------------------------------------

def criterion_1():
    setups = {"A": (1.0, 18), "B": (10.0, 8), "C": (30.0, 2)}
    gamma = np.geomspace(1e-4, 1e2, 200)
    ok = True
    worst = {}
    for name, (p0_uw, kappa) in setups.items():
        topo = halving_topology(kappa)
        p0 = p0_uw * MICRO
        exact = per_antenna_cdf_exact(gamma, topo, p0)
        bound = per_antenna_cdf_bound(gamma, topo.effective(), p0)
        tail = exact <= 1e-2
        rel = np.abs(bound[tail] - exact[tail]) / exact[tail]
        worst[name] = float(rel.max())
        ok &= bool(np.all(bound >= exact)) and worst[name] <= 1e-2
    detail = ", ".join(f"{k} worst tail error {v:.2%}" for k, v in worst.items())
    return ok, detail


def criterion_2():
    x = np.geomspace(1e-4, 2.0, 80)
    ok = True
    parts = []
    for M in (2, 4, 8):
        for kappa in (2, 8, 12):
            approx = mrc_sum_cdf_approx(x, M, kappa)
            lower = mrc_sum_cdf_lower_bound(x, M, kappa)
            ok &= bool(np.all(lower <= approx * (1.0 + 1e-12)))
            worst = 0.0
            compared = 0
            for xi, ai in zip(x, approx):
                try:
                    ex = mrc_sum_cdf_exact(xi, M, kappa)
                except MRCConvergenceError:
                    continue
                if 1e-4 <= ex <= 1e-2:
                    compared += 1
                    worst = max(worst, abs(ai - ex) / ex)
            ok &= worst <= 0.05
            parts.append(f"({M},{kappa}) {worst:.1%}/{compared}pts")
    eq = np.max(np.abs(mrc_sum_cdf_approx(x, 1, 8) - mrc_sum_cdf_lower_bound(x, 1, 8)))
    ok &= eq <= 1e-10
    return ok, "worst |approx-exact|/exact: " + " ".join(parts) + f"; M=1 gap {eq:.1e}"


def criterion_3():
    rng = np.random.default_rng(20240601)
    worst_ee = worst_res = 0.0
    found = 0
    while found < 50:
        ch = EffectiveChannel(int(rng.integers(2, 21)), float(rng.uniform(1.0, 100.0)))
        M = int(rng.integers(1, 17))
        pm = PowerModel(float(rng.uniform(0.25, 0.45)), float(rng.uniform(0.03, 0.07)),
                        float(rng.uniform(0.04, 0.08)), float(rng.uniform(0.005, 0.015)))
        scheme = Scheme(rng.choice(["sc", "ssc", "mrc"]))
        c = Constraints(float(10.0 ** rng.uniform(-6.0, -2.0)), **REFERENCE_CONSTRAINTS)
        res = allocate(scheme, ch, M, pm, c)
        if res.regime is not Regime.INTERIOR:
            continue
        found += 1
        brute = grid_search_optimum(scheme, ch, M, pm, c, grid=GridSpec.log_spaced(c.p_min, c.p_max, 2000))
        worst_ee = max(worst_ee, abs(brute.ee_star - res.ee_star) / res.ee_star)
        resid = stationarity_residual(res.p0_star, res.omega, pm.eta, pm.circuit_power(M, scheme))
        worst_res = max(worst_res, abs(resid))
    ok = worst_ee <= 1e-3 and worst_res <= 1e-8
    return ok, f"50 interior scenarios, worst EE gap {worst_ee:.1e}, worst stationarity residual {worst_res:.1e}"


def criterion_4():
    topo = halving_topology(8, 1e-5)
    workers = os.cpu_count() or 1
    ok = True
    parts = []
    for scheme in ("sc", "mrc"):
        for M in (2, 4):
            for eps in (1e-2, 1e-3):
                res = allocate(scheme, topo, M, REFERENCE_POWER_MODEL, Constraints(eps, **REFERENCE_CONSTRAINTS))
                sim = SimConfig(10_000_000, 42, M, workers)
                est, se = empirical_outage(scheme, res.r0_star, res.p0_star, topo, sim)
                good = 0.5 * eps <= est <= 1.1 * eps and est <= eps + 3.0 * se
                ok &= good
                parts.append(f"{scheme}/M{M}/{eps:g}:{est / eps:.3f}")
    return ok, "empirical/epsilon " + " ".join(parts)


def criterion_5():
    ch = EffectiveChannel.from_db(8, 10.0)
    c = Constraints(1e-8, **UNCONSTRAINED)
    ok = True
    parts = []
    for M in (4, 8):
        sc, ssc, mrc = (allocate(s, ch, M, REFERENCE_POWER_MODEL, c) for s in ("sc", "ssc", "mrc"))
        rate = mrc.r0_star / sc.r0_star
        power = mrc.p0_star / sc.p0_star
        ssc_rate = ssc.r0_star / sc.r0_star
        targets = (gap_rate_mrc_sc(M), gap_power_mrc_sc(M), math.sqrt(2.0 / (M + 1)))
        devs = [abs(v / t - 1.0) for v, t in zip((rate, power, ssc_rate), targets)]
        ok &= max(devs) <= 0.05
        parts.append(
            f"M={M}: rate {rate:.4f} vs {targets[0]:.4f} ({devs[0]:.1%}), "
            f"power {power:.4f} vs {targets[1]:.4f} ({devs[1]:.1%}), "
            f"ssc/sc {ssc_rate:.4f} vs {targets[2]:.4f} ({devs[2]:.1%})"
        )
    return ok, "; ".join(parts)


def criterion_6():
    value, sign = ssc_power_crossover(REFERENCE_POWER_MODEL)
    ch = EffectiveChannel.from_db(8, 10.0)
    c = Constraints(1e-3, **REFERENCE_CONSTRAINTS)
    first = None
    for M in range(2, 33):
        ssc = allocate("ssc", ch, M, REFERENCE_POWER_MODEL, c)
        mrc = allocate("mrc", ch, M, REFERENCE_POWER_MODEL, c)
        if ssc.ee_star > mrc.ee_star:
            first = M
            break
    ok = sign > 0 and 2.0 < value < 3.0 and first is not None and abs(first - 15) <= 2
    return ok, f"power crossover {value:.4f}, first M>=2 with EE_ssc > EE_mrc: {first}"


def criterion_7():
    topo = halving_topology(8, 1e-5)
    hi, lo = (allocate("sc", topo, 1, REFERENCE_POWER_MODEL, Constraints(e, **REFERENCE_CONSTRAINTS))
              for e in (1e-1, 1e-4))
    dp = _db(hi.p0_star / lo.p0_star)
    dr = _db(hi.r0_star / lo.r0_star)
    dee = _db(hi.ee_star / lo.ee_star)
    ok = abs(dp + 15.0) <= 1.0 and abs(dr - 14.9) <= 1.0 and abs(dee - 29.0) <= 1.5
    return ok, f"delta p0 {dp:.2f} dB, rate ratio {dr:.2f} dB, delta EE {dee:.2f} dB"


def criterion_8():
    rng = np.random.default_rng(8)
    n = 2000
    checks = {}

    x = -1.0 / math.e + 10.0 ** rng.uniform(-16.0, math.log10(1e6), n)
    checks["W residual"] = max(abs(lambert_w0(v) * math.exp(lambert_w0(v)) - v) / max(1.0, abs(v)) for v in x)
    a = 10.0 ** rng.uniform(-10.0, 10.0, n)
    checks["exp(W)=a/W"] = max(abs(math.exp(lambert_w0(v)) * lambert_w0(v) / v - 1.0) for v in a)
    checks["Gamma(p,0)"] = max(abs(upper_incomplete_gamma(p, 0.0) / math.gamma(p) - 1.0) for p in range(1, 21))
    checks["g(M) increasing"] = 0.0 if all(factorial_root(m + 1) > factorial_root(m) for m in range(1, n)) else 1.0

    bound_ok = True
    for _ in range(n):
        kappa = int(rng.integers(1, 21))
        topo = ExplicitTopology(10.0 ** rng.uniform(-8, 0), tuple(10.0 ** rng.uniform(-9, -3, kappa)))
        p0 = 10.0 ** rng.uniform(-6, 1)
        g = 10.0 ** rng.uniform(-8, 8)
        bound_ok &= per_antenna_cdf_bound(g, topo.effective(), p0) >= per_antenna_cdf_exact(g, topo, p0) * (1 - 1e-12)
    checks["bound >= exact"] = 0.0 if bound_ok else 1.0

    lb_ok = True
    for _ in range(n):
        M, kappa = int(rng.integers(1, 17)), int(rng.integers(1, 21))
        xv = 10.0 ** rng.uniform(-6, 2)
        lb_ok &= mrc_sum_cdf_lower_bound(xv, M, kappa) <= mrc_sum_cdf_approx(xv, M, kappa) * (1 + 1e-12)
    checks["lower <= approx"] = 0.0 if lb_ok else 1.0

    worst = 0.0
    for _ in range(n):
        w, eta, pc = 10.0 ** rng.uniform(-3, 3), rng.uniform(0.2, 1.0), rng.uniform(0.01, 1.0)
        rho, _ = unconstrained_optimum(w, eta, pc)
        worst = max(worst, abs(stationarity_residual(rho, w, eta, pc)))
    checks["stationarity"] = worst

    limits = {"W residual": 1e-12, "exp(W)=a/W": 1e-10, "Gamma(p,0)": 1e-10, "g(M) increasing": 0.0,
              "bound >= exact": 0.0, "lower <= approx": 0.0, "stationarity": 1e-8}
    ok = all(checks[k] <= limits[k] for k in limits)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in checks.items()) + f" over {n} cases each"
    return ok, detail


CRITERIA = [
    (1, "per-antenna bound tightness", criterion_1, 1.0),
    (2, "MRC gamma approximation vs exact integral", criterion_2, 120.0),
    (3, "closed form vs brute-force EE", criterion_3, 30.0),
    (4, "Monte-Carlo reliability attainment", criterion_4, 300.0),
    (5, "asymptotic gaps at epsilon=1e-8", criterion_5, 1.0),
    (6, "SSC/MRC crossover", criterion_6, None),
    (7, "epsilon 1e-1 vs 1e-4 deltas at M=1", criterion_7, 1.0),
    (8, "randomized property suites", criterion_8, None),
]


def evaluate(number):
    _, name, fn, budget = CRITERIA[number - 1]
    start = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ok, detail = fn()
    ok = bool(ok)
    seconds = time.perf_counter() - start
    if budget is not None and seconds > budget:
        ok = False
        detail += f"; over the {budget:g} s budget"
    return ok, record(number, name, ok, detail, seconds)


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_criterion(number):
    ok, line = evaluate(number)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(c[0]) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
