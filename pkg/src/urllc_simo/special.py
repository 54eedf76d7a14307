"""Scalar special functions used by the closed-form allocation formulas.

Lambert W (principal branch), incomplete gamma functions and the
geometric-mean factorial ``(M!)**(1/M)``.  Everything here is pure and works
on Python floats.
"""
import math

__all__ = [
    "lambert_w0",
    "upper_incomplete_gamma",
    "upper_incomplete_gamma_int",
    "regularized_gamma_p",
    "regularized_gamma_q",
    "factorial_root",
]

_INV_E = math.exp(-1.0)
_BRANCH_SLACK = 1e-12
_EPS = 2.220446049250313e-16
_TINY = 1e-300
_MAX_ITER = 1000


def _w0_initial(x):
    if x < -0.32:
        # series about the branch point, p = sqrt(2(ex + 1))
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    if x < 3.0:
        return math.log1p(x) * (1.0 - math.log1p(math.log1p(x)) / (2.0 + math.log1p(x)))
    l1 = math.log(x)
    l2 = math.log(l1)
    return l1 - l2 + l2 / l1


def lambert_w0(x):
    """Principal branch of the Lambert W function, ``w * exp(w) = x``.

    Halley iteration from a piecewise starting guess.  Arguments within
    ``1e-12`` below ``-1/e`` are treated as the branch point.

    Raises
    ------
    ValueError
        If ``x < -1/e`` beyond the slack, or ``x`` is NaN.
    """
    x = float(x)
    if math.isnan(x):
        raise ValueError("lambert_w0 of NaN")
    if x <= -_INV_E:
        if x < -_INV_E - _BRANCH_SLACK:
            raise ValueError(f"lambert_w0 is real only for x >= -1/e, got {x!r}")
        return -1.0
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    w = _w0_initial(x)
    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        dw = f / denom
        w -= dw
        if abs(dw) <= 4.0 * _EPS * (1.0 + abs(w)):
            break
    return max(w, -1.0)


def _gamma_series(a, x):
    # P(a, x) by its power series; converges fast for x < a + 1
    if x == 0.0:
        return 0.0
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise ArithmeticError(f"gamma series did not converge for a={a}, x={x}")
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf_fraction(a, x):
    # Legendre continued fraction for Gamma(a, x) e**x x**-a (modified Lentz); x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError(f"gamma continued fraction did not converge for a={a}, x={x}")
    return h


def _gamma_cf(a, x):
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * _gamma_cf_fraction(a, x)


def _check_gamma_args(a, x):
    if not a > 0.0:
        raise ValueError(f"incomplete gamma needs p > 0, got {a!r}")
    if not x >= 0.0:
        raise ValueError(f"incomplete gamma needs x >= 0, got {x!r}")


def regularized_gamma_p(a, x):
    """Regularized lower incomplete gamma ``P(a, x) = gamma(a, x) / Gamma(a)``.

    Computed directly (not as ``1 - Q``) when ``x < a + 1`` so that the left
    tail keeps full relative precision.
    """
    a = float(a)
    x = float(x)
    _check_gamma_args(a, x)
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cf(a, x)


def regularized_gamma_q(a, x):
    """Regularized upper incomplete gamma ``Q(a, x) = Gamma(a, x) / Gamma(a)``."""
    a = float(a)
    x = float(x)
    _check_gamma_args(a, x)
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cf(a, x)


def upper_incomplete_gamma(p, x):
    """Upper incomplete gamma ``Gamma(p, x)``, the integral of ``t**(p-1) e**-t`` over ``[x, inf)``.

    Series for ``x < p + 1``, continued fraction otherwise.
    """
    p = float(p)
    x = float(x)
    _check_gamma_args(p, x)
    if math.isinf(x):
        return 0.0
    if x < p + 1.0:
        # P stays below ~0.6 on this side, so 1 - P keeps full precision
        return math.gamma(p) * (1.0 - _gamma_series(p, x))
    return math.exp(-x + p * math.log(x)) * _gamma_cf_fraction(p, x)


def upper_incomplete_gamma_int(n, x):
    """``Gamma(n, x)`` for positive integer ``n`` via the finite exponential sum.

    ``Gamma(n, x) = (n-1)! e**-x sum_{k<n} x**k / k!``.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"incomplete gamma needs x >= 0, got {x!r}")
    if math.isinf(x):
        return 0.0
    term = 1.0
    total = 1.0
    for k in range(1, n):
        term *= x / k
        total += term
    return math.factorial(n - 1) * math.exp(-x) * total


def factorial_root(M):
    """``(M!)**(1/M)`` via log-gamma, finite for very large ``M``."""
    if int(M) != M or M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")
    M = int(M)
    if M == 1:
        return 1.0
    return math.exp(math.lgamma(M + 1.0) / M)
