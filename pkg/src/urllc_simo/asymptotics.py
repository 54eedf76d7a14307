"""Ultra-reliable (epsilon -> 0) gaps between combining schemes.

All ratios assume unconstrained power and rate.  ``g(M) = (M!)**(1/M)`` sets
the MRC/SC gap; the SSC/SC gap depends only on the circuit powers.
"""
import math

from .special import factorial_root

__all__ = [
    "FIT_SLOPE",
    "FIT_INTERCEPT",
    "gap_omega_mrc_sc",
    "gap_rate_mrc_sc",
    "gap_power_mrc_sc",
    "gap_ssc_sc",
    "gap_mrc_ssc",
    "g_linear_fit",
    "ssc_power_crossover",
    "ssc_uses_less_power",
]

# linear fit of (M!)**(1/M) over 1 <= M <= 64
FIT_SLOPE = 0.374
FIT_INTERCEPT = 0.786


def gap_omega_mrc_sc(M):
    """Limit of ``omega_mrc / omega_sc``, i.e. ``(M!)**(1/M)``."""
    return factorial_root(M)


def gap_rate_mrc_sc(M):
    """Limit of ``r*_mrc / r*_sc``, ``(M!)**(1/(2M))``."""
    return math.sqrt(factorial_root(M))


def gap_power_mrc_sc(M):
    """Limit of ``p*_mrc / p*_sc``, ``(M!)**(-1/(2M))``."""
    return 1.0 / math.sqrt(factorial_root(M))


def _circuit_ratio(M, pm):
    single = pm.p_t + pm.p_r + pm.p_syn
    full = pm.p_t + M * pm.p_r + pm.p_syn
    if single == 0.0 and full == 0.0:
        raise ValueError("degenerate power model: all circuit powers are zero")
    return single / full


def gap_ssc_sc(M, pm):
    """Limit of both ``r*_ssc / r*_sc`` and ``p*_ssc / p*_sc``.

    ``sqrt((p_t + p_r + p_syn) / (p_t + M p_r + p_syn))``
    """
    return math.sqrt(_circuit_ratio(M, pm))


def gap_mrc_ssc(M, pm):
    """Limits of ``(r*_mrc / r*_ssc, p*_mrc / p*_ssc)``."""
    inv = 1.0 / _circuit_ratio(M, pm)
    g = factorial_root(M)
    return math.sqrt(g * inv), math.sqrt(inv / g)


def g_linear_fit(M):
    """``0.374 M + 0.786``, the linear stand-in for ``(M!)**(1/M)``."""
    return FIT_SLOPE * M + FIT_INTERCEPT


def ssc_power_crossover(pm):
    """Antenna count where SSC and MRC optimal transmit powers cross as epsilon -> 0.

    Returns ``(value, sign)`` with
    ``value = (0.786 p_r - 0.214 (p_t + p_syn)) / (0.626 p_r - 0.374 (p_t + p_syn))``
    and ``sign`` the sign of the denominator.  For ``sign > 0`` SSC uses less
    transmit power than MRC when ``M > value``; for ``sign < 0`` when
    ``M < value``.

    Raises
    ------
    ZeroDivisionError
        When ``0.626 p_r == 0.374 (p_t + p_syn)`` to rounding, including all-zero powers.
    """
    fixed = pm.p_t + pm.p_syn
    num = FIT_INTERCEPT * pm.p_r - (1.0 - FIT_INTERCEPT) * fixed
    den = (1.0 - FIT_SLOPE) * pm.p_r - FIT_SLOPE * fixed
    if abs(den) <= 1e-12 * (pm.p_r + fixed):
        raise ZeroDivisionError("crossover is singular: 0.626 p_r == 0.374 (p_t + p_syn)")
    return num / den, (1 if den > 0 else -1)


def ssc_uses_less_power(M, pm):
    """Whether ``p*_ssc < p*_mrc`` in the ultra-reliable limit, via the linear fit of g(M)."""
    value, sign = ssc_power_crossover(pm)
    return M > value if sign > 0 else M < value
