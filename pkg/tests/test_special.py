import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from urllc_simo.special import (
    factorial_root,
    lambert_w0,
    regularized_gamma_p,
    regularized_gamma_q,
    upper_incomplete_gamma,
    upper_incomplete_gamma_int,
)

BRANCH = -1.0 / math.e


def test_lambert_examples():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(math.e) == pytest.approx(1.0, abs=1e-15)
    assert lambert_w0(BRANCH) == pytest.approx(-1.0, abs=1e-7)


def test_lambert_matches_scipy():
    xs = np.concatenate([np.linspace(BRANCH + 1e-12, 1.0, 500), np.geomspace(1.0, 1e300, 300)])
    ref = special.lambertw(xs).real
    got = np.array([lambert_w0(x) for x in xs])
    np.testing.assert_allclose(got, ref, rtol=1e-13, atol=1e-7)


def test_lambert_rejects_below_branch():
    with pytest.raises(ValueError):
        lambert_w0(BRANCH - 1e-6)
    with pytest.raises(ValueError):
        lambert_w0(math.nan)


# log-uniform sampling of x + 1/e over [1e-16, 1e6]
@settings(max_examples=2000)
@given(st.floats(-16.0, 6.0))
def test_lambert_residual(log_shift):
    x = max(BRANCH + 10.0 ** log_shift, BRANCH)
    w = lambert_w0(x)
    assert w >= -1.0
    assert abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, abs(x))


@settings(max_examples=1500)
@given(st.floats(-12.0, 12.0))
def test_lambert_exp_identity(log_a):
    a = 10.0 ** log_a
    w = lambert_w0(a)
    assert math.exp(w) == pytest.approx(a / w, rel=1e-10)


def test_incomplete_gamma_examples():
    assert upper_incomplete_gamma(1, 0) == 1.0
    assert upper_incomplete_gamma(1, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-14)
    quad, _ = integrate.quad(lambda t: t * t * math.exp(-t), 1.5, math.inf, epsabs=1e-13, epsrel=1e-12)
    assert upper_incomplete_gamma(3, 1.5) == pytest.approx(quad, abs=1e-10)


@pytest.mark.parametrize("p", range(1, 21))
def test_incomplete_gamma_at_zero_is_complete(p):
    assert upper_incomplete_gamma(p, 0.0) == pytest.approx(math.gamma(p), rel=1e-14)


@settings(max_examples=1500)
@given(st.integers(1, 40), st.floats(0.0, 80.0))
def test_integer_path_agrees(n, x):
    general = upper_incomplete_gamma(n, x)
    finite = upper_incomplete_gamma_int(n, x)
    assert finite == pytest.approx(general, rel=1e-10, abs=1e-300)


@settings(max_examples=1500)
@given(st.floats(0.05, 60.0), st.floats(0.0, 150.0))
def test_regularized_against_scipy(a, x):
    p = regularized_gamma_p(a, x)
    q = regularized_gamma_q(a, x)
    assert p == pytest.approx(special.gammainc(a, x), rel=1e-11, abs=1e-300)
    assert q == pytest.approx(special.gammaincc(a, x), rel=1e-10, abs=1e-300)
    assert p + q == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=1500)
@given(st.integers(1, 30), st.floats(0.0, 60.0), st.floats(0.0, 10.0))
def test_normalized_upper_gamma_bounded_and_decreasing(M, x, dx):
    norm = math.factorial(M - 1)
    a = upper_incomplete_gamma(M, x) / norm
    b = upper_incomplete_gamma(M, x + dx) / norm
    assert 0.0 <= b <= a <= 1.0 + 1e-15


def test_incomplete_gamma_domain():
    with pytest.raises(ValueError):
        upper_incomplete_gamma(0.0, 1.0)
    with pytest.raises(ValueError):
        upper_incomplete_gamma(1.0, -1.0)


def test_factorial_root_examples():
    assert factorial_root(1) == 1.0
    assert factorial_root(2) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert factorial_root(8) == pytest.approx(40320 ** 0.125, rel=1e-14)
    assert math.isfinite(factorial_root(10_000))
    with pytest.raises(ValueError):
        factorial_root(0)


@settings(max_examples=1000)
@given(st.integers(1, 5000))
def test_factorial_root_increasing(M):
    assert factorial_root(M + 1) > factorial_root(M)
