"""SIR distributions for a Rayleigh-faded, interference-limited SIMO link.

Per-antenna CDFs (exact product form and the Lomax upper bound), outage of
selection / switch-and-stay combining, and the distribution of the MRC output
through the normalized sum ``v = sum_j phi_j`` of i.i.d. Lomax(kappa, 1)
variables: the exact Laplace-inversion integral, the geometric-mean
approximation, its gamma lower bound and the closed-form inverse.

Distribution functions accept scalars or arrays; scalar input returns a float.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .special import factorial_root, regularized_gamma_p

__all__ = [
    "ExplicitTopology",
    "EffectiveChannel",
    "MRCConvergenceError",
    "EULER_GAMMA",
    "rate_threshold",
    "per_antenna_cdf_exact",
    "per_antenna_cdf_bound",
    "per_antenna_pdf_lomax",
    "outage_sc_ssc",
    "mrc_sum_cdf_exact",
    "mrc_sum_pdf_approx",
    "mrc_sum_cdf_approx",
    "mrc_sum_cdf_lower_bound",
    "mrc_inv_cdf_approx",
    "outage_mrc",
    "pareto_product_pdf",
]

EULER_GAMMA = 0.5772156649015329


class MRCConvergenceError(ArithmeticError):
    """The exact MRC sum-CDF integral missed its error target within budget."""


@dataclass(frozen=True)
class EffectiveChannel:
    """Average statistics the allocator works from.

    Attributes
    ----------
    kappa : int
        Number of interferers.
    delta : float
        Signal path loss over total mean interference power, in 1/W.
        ``delta * p0`` is the mean-signal to mean-interference ratio.
    """

    kappa: int
    delta: float

    def __post_init__(self):
        if int(self.kappa) != self.kappa or self.kappa < 1:
            raise ValueError(f"kappa must be a positive integer, got {self.kappa!r}")
        if not (self.delta > 0.0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be positive and finite, got {self.delta!r}")
        object.__setattr__(self, "kappa", int(self.kappa))
        object.__setattr__(self, "delta", float(self.delta))

    @classmethod
    def from_db(cls, kappa, delta_db):
        return cls(kappa, 10.0 ** (delta_db / 10.0))


@dataclass(frozen=True)
class ExplicitTopology:
    """Signal path loss and per-interferer mean received powers ``p_i * lambda_i`` (W)."""

    signal_path_loss: float
    interferer_rx_powers: tuple

    def __post_init__(self):
        powers = tuple(float(p) for p in self.interferer_rx_powers)
        if not powers:
            raise ValueError("topology needs at least one interferer")
        if not all(p > 0.0 and math.isfinite(p) for p in powers):
            raise ValueError("interferer powers must be positive and finite")
        if not (self.signal_path_loss > 0.0 and math.isfinite(self.signal_path_loss)):
            raise ValueError("signal path loss must be positive and finite")
        object.__setattr__(self, "interferer_rx_powers", powers)
        object.__setattr__(self, "signal_path_loss", float(self.signal_path_loss))

    @property
    def kappa(self):
        return len(self.interferer_rx_powers)

    def effective(self):
        """Collapse to ``(kappa, delta)`` with ``delta = lambda0 / sum(p_i lambda_i)``."""
        return EffectiveChannel(self.kappa, self.signal_path_loss / math.fsum(self.interferer_rx_powers))


def _out(values, scalar):
    return float(values) if scalar else values


def rate_threshold(r0):
    """SIR threshold ``2**r0 - 1`` for a rate in bits/s/Hz."""
    return np.expm1(np.asarray(r0, dtype=float) * math.log(2.0))


def per_antenna_cdf_exact(gamma, topo, p0):
    """Exact per-antenna SIR CDF, ``1 - prod_i 1 / (1 + gamma p_i lambda_i / (p0 lambda0))``."""
    scalar = np.ndim(gamma) == 0
    g = np.maximum(np.asarray(gamma, dtype=float), 0.0)
    ratios = np.asarray(topo.interferer_rx_powers) / (p0 * topo.signal_path_loss)
    with np.errstate(invalid="ignore"):
        log_prod = np.log1p(np.multiply.outer(g, ratios)).sum(axis=-1)
    cdf = -np.expm1(-log_prod)
    cdf = np.where(np.isinf(g), 1.0, cdf)
    return _out(cdf, scalar)


def per_antenna_cdf_bound(gamma, ch, p0):
    """Lomax upper bound on the per-antenna CDF, ``1 - (1 + gamma/(kappa delta p0))**-kappa``."""
    scalar = np.ndim(gamma) == 0
    g = np.maximum(np.asarray(gamma, dtype=float), 0.0)
    scale = ch.kappa * ch.delta * p0
    cdf = -np.expm1(-ch.kappa * np.log1p(g / scale))
    return _out(cdf, scalar)


def per_antenna_pdf_lomax(gamma, ch, p0):
    """Density of the scaled Lomax approximation, ``kappa delta p0 * L(kappa, 1)``."""
    scalar = np.ndim(gamma) == 0
    g = np.asarray(gamma, dtype=float)
    scale = ch.kappa * ch.delta * p0
    with np.errstate(invalid="ignore"):
        pdf = np.exp(-(ch.kappa + 1) * np.log1p(np.maximum(g, 0.0) / scale)) / (ch.delta * p0)
    pdf = np.where(g < 0.0, 0.0, pdf)
    return _out(pdf, scalar)


def outage_sc_ssc(r0, p0, M, source):
    """Outage of SC and SSC, ``F(2**r0 - 1)**M``.

    ``source`` is either an :class:`ExplicitTopology` (exact per-antenna CDF)
    or an :class:`EffectiveChannel` (Lomax bound).
    """
    scalar = np.ndim(r0) == 0
    threshold = rate_threshold(r0)
    if isinstance(source, ExplicitTopology):
        single = per_antenna_cdf_exact(threshold, source, p0)
    else:
        single = per_antenna_cdf_bound(threshold, source, p0)
    return _out(np.asarray(single) ** M, scalar)


# ---------------------------------------------------------------------------
# exact sum-of-Lomax CDF
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _harmonic(k):
    return math.fsum(1.0 / m for m in range(1, k + 1))


def _scaled_xi(kappa, u):
    """``exp(-u) * xi(kappa, u)`` and ``exp(-u) * u**kappa / kappa!``.

    The exponential scaling keeps both finite for large ``u``; the integrand
    only ever needs them multiplied by ``exp(-M u)``.
    """
    log_u = math.log(u)
    b = math.exp(kappa * log_u - u - math.lgamma(kappa + 1.0))
    term = math.exp(-u)  # exp(-u) u**m / m!
    total = 0.0
    m = 0
    stop_after = max(kappa, u) + 2.0
    while True:
        if m != kappa:
            contrib = term / (m - kappa)
            total += contrib
            if m > stop_after and abs(contrib) <= 1e-16 * abs(total):
                break
        m += 1
        term *= u / m
        if m > 100000:
            raise MRCConvergenceError("xi series did not terminate")
    xi = b * (_harmonic(kappa) - EULER_GAMMA - log_u) - total
    return xi, b


def _theta_scaled(M, kappa, u):
    # exp(-M u) * theta(M, kappa, u)
    xi, b = _scaled_xi(kappa, u)
    total = 0.0
    for m in range((M - 1) // 2 + 1):
        total += math.comb(M, 2 * m + 1) * (-math.pi ** 2) ** m * xi ** (M - 2 * m - 1) * b ** (2 * m + 1)
    return kappa ** M * total


def _upper_limit(M, kappa, tail=1e-14):
    # tail of the integrand behaves like kappa**M M u**(kappa - M) e**-u / kappa!
    log_scale = M * math.log(kappa) + math.log(M) - math.lgamma(kappa + 1.0)
    u = float(kappa + 1)
    while log_scale + (kappa - M) * math.log(u) - u > math.log(tail):
        u += 1.0
    return u


def mrc_sum_cdf_exact(x, M, kappa, *, rel_tol=1e-6, limit=200):
    """Exact CDF of ``v = sum_{j<=M} phi_j`` with ``phi_j ~ Lomax(kappa, 1)``.

    Evaluates ``int_0^inf (1 - e**(-x u)) e**(-M u) theta(M, kappa, u) / u du``
    by adaptive Gauss-Kronrod quadrature on ``(0, U]``.

    Raises
    ------
    MRCConvergenceError
        When the quadrature error estimate exceeds ``rel_tol`` relative to
        the result, or the result is not a probability.  Small ``x`` with large ``M`` or ``kappa`` is where this
        happens.
    """
    M = int(M)
    kappa = int(kappa)
    x = float(x)
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0

    def integrand(u):
        if u <= 0.0:
            return 0.0
        return -math.expm1(-x * u) / u * _theta_scaled(M, kappa, u)

    upper = _upper_limit(M, kappa)
    value, abserr, *_ = integrate.quad(
        integrand, 0.0, upper, epsabs=0.0, epsrel=min(rel_tol, 1e-8), limit=limit,
        full_output=1,
    )
    # QUADPACK roundoff warnings alone are not fatal; the error estimate decides
    if not (abserr <= rel_tol * abs(value)) or not (-1e-12 <= value <= 1.0 + 1e-12):
        raise MRCConvergenceError(
            f"no convergence for x={x}, M={M}, kappa={kappa}: value {value:.3e} +- {abserr:.1e}"
        )
    return min(max(value, 0.0), 1.0)


# ---------------------------------------------------------------------------
# geometric-mean approximation
# ---------------------------------------------------------------------------

def mrc_sum_pdf_approx(x, M, kappa):
    """Approximate density of ``v``.

    ``kappa**M M**(M-1) / (M-1)! (1 + x/M)**(-1 - M kappa) ln(1 + x/M)**(M-1)``
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    lg = np.log1p(np.maximum(x, 0.0) / M)
    log_coef = M * math.log(kappa) + (M - 1) * math.log(M) - math.lgamma(M)
    with np.errstate(divide="ignore", invalid="ignore"):
        pdf = np.exp(log_coef - (1.0 + M * kappa) * lg) * lg ** (M - 1)
    pdf = np.where(x < 0.0, 0.0, pdf)
    return _out(pdf, scalar)


_gamma_p = np.vectorize(regularized_gamma_p, otypes=[float])


def mrc_sum_cdf_approx(x, M, kappa):
    """Approximate CDF of ``v``, ``1 - Gamma(M, kappa M ln(1 + x/M)) / (M-1)!``.

    Evaluated as the regularized lower gamma so the left tail keeps its
    relative accuracy.
    """
    scalar = np.ndim(x) == 0
    y = kappa * M * np.log1p(np.maximum(np.asarray(x, dtype=float), 0.0) / M)
    if M == 1:
        # Lomax CDF in closed form, bit-identical to the single-antenna SC outage
        return _out(-np.expm1(-y), scalar)
    return _out(_gamma_p(M, y), scalar)


def mrc_sum_cdf_lower_bound(x, M, kappa):
    """Gamma lower bound ``(1 - exp(-(M!)**(-1/M) kappa M ln(1 + x/M)))**M``."""
    scalar = np.ndim(x) == 0
    y = kappa * M * np.log1p(np.maximum(np.asarray(x, dtype=float), 0.0) / M)
    cdf = (-np.expm1(-y / factorial_root(M))) ** M
    return _out(cdf, scalar)


def mrc_inv_cdf_approx(epsilon, M, kappa):
    """Closed-form left-tail inverse, ``(M!)**(1/M) / kappa * |ln(1 - epsilon**(1/M))|``."""
    scalar = np.ndim(epsilon) == 0
    e = np.asarray(epsilon, dtype=float)
    if np.any((e < 0.0) | (e >= 1.0)):
        raise ValueError("epsilon must lie in [0, 1)")
    inv = factorial_root(M) / kappa * np.abs(np.log1p(-(e ** (1.0 / M))))
    return _out(inv, scalar)


def outage_mrc(r0, p0, ch, M, *, exact=False):
    """MRC outage, ``F_v((2**r0 - 1) / (kappa delta p0))``.

    Uses the gamma approximation unless ``exact=True``, in which case the
    exact integral is evaluated and may raise :class:`MRCConvergenceError`.
    """
    scalar = np.ndim(r0) == 0
    x = rate_threshold(r0) / (ch.kappa * ch.delta * p0)
    if not exact:
        return _out(mrc_sum_cdf_approx(x, M, ch.kappa), scalar)
    vals = np.array([mrc_sum_cdf_exact(xi, M, ch.kappa) for xi in np.atleast_1d(x)])
    return _out(vals[0] if scalar else vals.reshape(np.shape(x)), scalar)


def pareto_product_pdf(x, M, kappa):
    """Density of a product of ``M`` i.i.d. Pareto-I(kappa, 1) variables.

    ``kappa**M / (M-1)! ln(x)**(M-1) x**(-kappa-1)`` on ``x >= 1``.
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    xs = np.maximum(x, 1.0)
    lx = np.log(xs)
    log_coef = M * math.log(kappa) - math.lgamma(M)
    pdf = np.exp(log_coef - (kappa + 1.0) * lx) * lx ** (M - 1)
    pdf = np.where(x < 1.0, 0.0, pdf)
    return _out(pdf, scalar)
