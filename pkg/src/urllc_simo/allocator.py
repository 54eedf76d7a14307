"""Energy-efficient joint power and rate allocation under an outage constraint.

The optimum lies on the reliability curve ``r0 = log2(omega p0 + 1)``; along
it the log energy efficiency is concave in ``ln p0`` and its stationary point
has a Lambert-W closed form.  Box constraints on ``p0`` and ``r0`` clamp that
point to the feasible interval.
"""
import enum
import math
import warnings
from dataclasses import dataclass

from .sir import EffectiveChannel
from .special import factorial_root, lambert_w0

__all__ = [
    "Scheme",
    "Regime",
    "PowerModel",
    "Constraints",
    "AllocationResult",
    "REFERENCE_POWER_MODEL",
    "REFERENCE_CONSTRAINTS",
    "UNCONSTRAINED",
    "omega",
    "rate_on_curve",
    "energy_efficiency",
    "feasibility_check",
    "unconstrained_optimum",
    "stationarity_residual",
    "allocate",
]

_LN2 = math.log(2.0)
_SERIES_BAND = 1e-9
_BRANCH_BAND = 0.1


class Scheme(enum.Enum):
    SC = "sc"
    SSC = "ssc"
    MRC = "mrc"

    @property
    def beta(self):
        """Exponent of ``M`` in the receive circuit power (only one branch is active for SSC)."""
        return 0 if self is Scheme.SSC else 1

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown scheme {value!r}; expected one of sc, ssc, mrc") from None


class Regime(enum.Enum):
    INTERIOR = "interior"
    CLAMPED_LOW = "clamped_low"
    CLAMPED_HIGH = "clamped_high"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class PowerModel:
    """Linear power consumption model.

    ``eta`` is the amplifier drain efficiency; ``p_t``, ``p_r`` and ``p_syn``
    are transmit circuitry, per-branch receive circuitry and frequency
    synthesizer powers in watts.
    """

    eta: float
    p_t: float
    p_r: float
    p_syn: float

    def __post_init__(self):
        if not (0.0 < self.eta <= 1.0):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta!r}")
        for name in ("p_t", "p_r", "p_syn"):
            v = getattr(self, name)
            if not (v >= 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite nonnegative power, got {v!r}")

    def circuit_power(self, M, scheme):
        """``p_t + M**beta p_r + p_syn``."""
        scheme = Scheme.parse(scheme)
        return self.p_t + M ** scheme.beta * self.p_r + self.p_syn


@dataclass(frozen=True)
class Constraints:
    """Outage target and box constraints; ``p_max`` may be ``inf``."""

    epsilon: float
    r_min: float = 0.0
    p_min: float = 0.0
    p_max: float = math.inf

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        if not self.r_min >= 0.0:
            raise ValueError(f"r_min must be nonnegative, got {self.r_min!r}")
        if not self.p_min >= 0.0:
            raise ValueError(f"p_min must be nonnegative, got {self.p_min!r}")
        if not self.p_max > 0.0 or self.p_min > self.p_max:
            raise ValueError(f"need 0 <= p_min <= p_max and p_max > 0, got {self.p_min!r}, {self.p_max!r}")
        if self.epsilon > 0.1:
            warnings.warn(
                f"epsilon={self.epsilon} is not small; the reliability curve approximation degrades",
                stacklevel=3,
            )


REFERENCE_POWER_MODEL = PowerModel(eta=0.35, p_t=0.05, p_r=0.06, p_syn=0.01)
REFERENCE_CONSTRAINTS = dict(r_min=0.01, p_min=0.01, p_max=10.0)
UNCONSTRAINED = dict(r_min=0.0, p_min=0.0, p_max=math.inf)


@dataclass(frozen=True)
class AllocationResult:
    p0_star: float
    r0_star: float
    ee_star: float
    omega: float
    regime: Regime
    scheme: Scheme = Scheme.SC

    @property
    def feasible(self):
        return self.regime is not Regime.INFEASIBLE


def omega(scheme, M, ch, epsilon):
    """Slope of the reliability curve, ``r0 = log2(omega p0 + 1)`` at outage ``epsilon``.

    SC/SSC: ``kappa delta ((1 - eps**(1/M))**(-1/kappa) - 1)``;
    MRC: ``delta (M!)**(1/M) |ln(1 - eps**(1/M))|``.
    """
    scheme = Scheme.parse(scheme)
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    root = epsilon ** (1.0 / M)
    log_survive = math.log1p(-root)
    if scheme is Scheme.MRC:
        return ch.delta * factorial_root(M) * -log_survive
    return ch.kappa * ch.delta * math.expm1(-log_survive / ch.kappa)


def rate_on_curve(p0, omega_):
    """``log2(omega p0 + 1)``."""
    if p0 < 0.0:
        raise ValueError(f"p0 must be nonnegative, got {p0!r}")
    return math.log1p(omega_ * p0) / _LN2


def energy_efficiency(r0, p0, scheme, pm, M, outage):
    """Goodput per consumed watt, ``r0 (1 - outage) / (p0/eta + circuit power)`` in bits/J/Hz."""
    denom = p0 / pm.eta + pm.circuit_power(M, scheme)
    if denom <= 0.0:
        raise ZeroDivisionError("total consumed power is zero")
    return r0 * (1.0 - outage) / denom


def feasibility_check(ch, M, constraints, scheme=Scheme.SC):
    """True iff ``r_min`` is reachable at ``p_max`` on the scheme's reliability curve.

    With the default ``scheme=SC`` this is the conservative cross-scheme
    condition, since MRC's curve lies above SC's.
    """
    if constraints.r_min == 0.0:
        return True
    w = omega(scheme, M, ch, constraints.epsilon)
    need = math.expm1(constraints.r_min * _LN2)
    if math.isinf(constraints.p_max):
        return True
    # compare in the threshold domain; equality at the boundary counts as feasible
    return w * constraints.p_max >= need * (1.0 - 4e-16)


def _tail_log(q):
    # -q - ln(1 - q) = sum_{n>=2} q**n / n, summed directly for small q
    if q > 0.1:
        return -q - math.log1p(-q)
    term = q * q
    total = 0.0
    n = 2
    while True:
        total += term / n
        if term < 1e-17 * total:
            return total
        term *= q
        n += 1


def _one_plus_w_near_branch(c):
    """``q = 1 + W((c - 1)/e)`` for ``0 < c < 1``, solving ``(1 - q) e**q = 1 - c``."""
    target = -math.log1p(-c)
    q = min(math.sqrt(2.0 * c), 0.9)
    for _ in range(100):
        step = (_tail_log(q) - target) * (1.0 - q) / q
        q_new = min(max(q - step, 0.5 * q), 0.5 * (q + 1.0))
        if abs(q_new - q) <= 1e-15 * q:
            return q_new
        q = q_new
    return q


def unconstrained_optimum(omega_, eta, circuit_power):
    """Stationary point of the log energy efficiency along the reliability curve.

    With ``c = omega eta P_c`` and ``a = (c - 1)/e``::

        rho    = ((c - 1) / W(a) - 1) / omega
        varrho = (W(a) + 1) / ln 2

    Near ``c = 1`` the ratio ``(c - 1)/W(a)`` is replaced by its series in
    ``a`` (limit ``e``).  For ``c < 0.1`` the equivalent form
    ``rho = (q - c) / ((1 - q) omega)``, ``varrho = q / ln 2`` with
    ``q = 1 + W(a)`` avoids cancellation near the branch point.

    Returns
    -------
    (rho, varrho)
        Optimal transmit power (W) and rate (bits/s/Hz).

    Raises
    ------
    ValueError
        If ``omega eta P_c == 0``: the optimum degenerates to zero power and
        the caller has to clamp.
    """
    if not omega_ > 0.0 or not eta > 0.0 or not circuit_power >= 0.0:
        raise ValueError("need omega > 0, eta > 0, circuit_power >= 0")
    c = omega_ * eta * circuit_power
    if c == 0.0:
        raise ValueError("degenerate optimum: zero circuit power drives the optimal power to 0")
    a = (c - 1.0) / math.e
    if c < _BRANCH_BAND:
        # forming c - 1 would discard the digits of a small c
        q = _one_plus_w_near_branch(c)
        return (q - c) / ((1.0 - q) * omega_), q / _LN2
    if abs(c - 1.0) < _SERIES_BAND:
        # a / W(a) = 1 + a - a**2/2 + ...  so (c - 1)/W(a) = e (1 + a - a**2/2)
        ratio = math.e * (1.0 + a - 0.5 * a * a)
        w = a * (1.0 - a)
    else:
        w = lambert_w0(a)
        ratio = (c - 1.0) / w
    rho = (ratio - 1.0) / omega_
    varrho = (w + 1.0) / _LN2
    return rho, varrho


def stationarity_residual(p0, omega_, eta, circuit_power):
    """Numerator of d/dx ln EE at ``x = ln p0``, scaled to be dimensionless.

    ``omega (p0 + eta P_c) - (1 + omega p0) ln(1 + omega p0)``, divided by
    ``omega (p0 + eta P_c)``; it vanishes at the interior optimum.
    """
    wp = omega_ * p0
    lhs = omega_ * (p0 + eta * circuit_power)
    return (lhs - (1.0 + wp) * math.log1p(wp)) / lhs


def allocate(scheme, ch, M, pm, constraints):
    """Optimal ``(p0, r0)`` for ``scheme`` with ``M`` receive antennas.

    Returns an :class:`AllocationResult`; infeasible problems are reported
    through ``regime`` rather than raised.
    """
    scheme = Scheme.parse(scheme)
    if not isinstance(ch, EffectiveChannel):
        ch = ch.effective()
    eps = constraints.epsilon
    w = omega(scheme, M, ch, eps)
    if not feasibility_check(ch, M, constraints, scheme):
        return AllocationResult(math.nan, math.nan, 0.0, w, Regime.INFEASIBLE, scheme)

    pc = pm.circuit_power(M, scheme)
    lower = max(constraints.p_min, math.expm1(constraints.r_min * _LN2) / w)
    try:
        rho, varrho = unconstrained_optimum(w, pm.eta, pc)
    except ValueError:
        rho, varrho = 0.0, 0.0

    if rho < lower:
        p0 = lower
        r0 = max(rate_on_curve(constraints.p_min, w), constraints.r_min)
        regime = Regime.CLAMPED_LOW
    elif rho <= constraints.p_max:
        p0, r0 = rho, varrho
        regime = Regime.INTERIOR
    else:
        p0 = constraints.p_max
        r0 = rate_on_curve(p0, w)
        regime = Regime.CLAMPED_HIGH
    ee = energy_efficiency(r0, p0, scheme, pm, M, eps)
    return AllocationResult(p0, r0, ee, w, regime, scheme)
