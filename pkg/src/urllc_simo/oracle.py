"""Independent checks: Monte-Carlo simulation of the fading channel and a
brute-force search for the energy-efficiency optimum.

Random draws are counter based.  Sample ``i`` lives in block ``i // BLOCK``,
and each block is produced by a Philox generator keyed on ``(seed, stream)``
whose counter starts at the block index.  Any split of the sample range across
workers therefore sees the same numbers, and the integer tallies add up
to the same totals.
"""
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .allocator import (
    AllocationResult,
    Regime,
    Scheme,
    omega,
)
from .sir import EffectiveChannel, ExplicitTopology, mrc_sum_cdf_approx, rate_threshold
from .special import factorial_root

__all__ = [
    "BLOCK",
    "SimConfig",
    "GridSpec",
    "GridSearchResult",
    "exponential_block",
    "sir_from_gains",
    "sample_sir",
    "sample_sir_vector",
    "combine",
    "empirical_outage",
    "empirical_per_antenna_cdf",
    "empirical_lomax_sum_cdf",
    "empirical_omega",
    "analytic_outage",
    "grid_search_optimum",
]

BLOCK = 1 << 16

_STREAM_SIR = 1
_STREAM_LOMAX = 2
_U64_TO_UNIT = 2.0 ** -53


@dataclass(frozen=True)
class SimConfig:
    """Monte-Carlo budget.  ``workers`` only changes speed, never results."""

    samples: int
    seed: int
    antennas: int
    workers: int = 1

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValueError(f"samples must be a positive integer, got {self.samples!r}")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if int(self.antennas) != self.antennas or self.antennas < 1:
            raise ValueError(f"antennas must be a positive integer, got {self.antennas!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class GridSpec:
    """Transmit-power grid (and optional rate grid for the 2-D scan)."""

    p0: tuple
    r0: tuple = None

    def __post_init__(self):
        p0 = tuple(float(p) for p in self.p0)
        if len(p0) < 2:
            raise ValueError("the power grid needs at least 2 points")
        if any(b <= a for a, b in zip(p0, p0[1:])):
            raise ValueError("the power grid must be strictly increasing")
        object.__setattr__(self, "p0", p0)
        if self.r0 is not None:
            object.__setattr__(self, "r0", tuple(float(r) for r in self.r0))

    @classmethod
    def log_spaced(cls, p_min, p_max, points=2000, r0=None):
        if not (0.0 < p_min < p_max < math.inf):
            raise ValueError("a log-spaced grid needs 0 < p_min < p_max < inf")
        grid = np.geomspace(p_min, p_max, points)
        grid[0], grid[-1] = p_min, p_max
        return cls(tuple(grid), r0)

    @property
    def resolution(self):
        """Largest ratio between neighbouring power points."""
        p = np.asarray(self.p0)
        return float(np.max(p[1:] / p[:-1]))


@dataclass(frozen=True)
class GridSearchResult(AllocationResult):
    resolution: float = math.nan
    outage: float = math.nan


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _generator(seed, stream, block):
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Philox(key=key, counter=np.array([0, 0, 0, block], dtype=np.uint64))


def _open_uniform(raw):
    # (k + 0.5) / 2**53, strictly inside (0, 1)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _U64_TO_UNIT


def exponential_block(seed, block, count, shape, stream=_STREAM_SIR):
    """First ``count`` draws of ``block``, each an array of Exp(1) variates of ``shape``."""
    width = int(np.prod(shape))
    raw = _generator(seed, stream, block).random_raw(count * width)
    return -np.log(_open_uniform(raw)).reshape((count,) + tuple(shape))


def sir_from_gains(topo, p0, h):
    """SIR per antenna from power gains ``h[..., j, i]``, ``i = 0`` the signal link."""
    rx = np.asarray(topo.interferer_rx_powers)
    signal = p0 * topo.signal_path_loss * h[..., 0]
    interference = h[..., 1:] @ rx
    return signal / interference


def _blocks(start, count):
    # (block, offset, n) triples covering [start, start + count)
    out = []
    i = start
    end = start + count
    while i < end:
        block, offset = divmod(i, BLOCK)
        n = min(BLOCK - offset, end - i)
        out.append((block, offset, n))
        i += n
    return out


def sample_sir(topo, p0, M, start, count, seed):
    """SIR draws ``start .. start+count-1`` as a ``(count, M)`` array."""
    shape = (M, topo.kappa + 1)
    parts = []
    for block, offset, n in _blocks(start, count):
        h = exponential_block(seed, block, offset + n, shape)[offset:]
        parts.append(sir_from_gains(topo, p0, h))
    return np.concatenate(parts, axis=0)


def sample_sir_vector(topo, p0, M, draw_index, seed):
    """The ``M`` per-antenna SIRs of draw ``draw_index``."""
    return sample_sir(topo, p0, M, draw_index, 1, seed)[0]


def combine(scheme, sir):
    """Combiner output: max over branches for SC/SSC, sum for MRC."""
    scheme = Scheme.parse(scheme)
    return sir.sum(axis=-1) if scheme is Scheme.MRC else sir.max(axis=-1)


def _map_blocks(fn, samples, workers):
    jobs = _blocks(0, samples)
    if workers == 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _proportion(hits, n):
    p = hits / n
    if hits < 10:
        warnings.warn(f"only {hits} events in {n} samples; the estimate is unreliable", stacklevel=3)
    return p, math.sqrt(p * (1.0 - p) / n)


def _combined_unit_power(scheme, topo, sim, block, offset, n):
    h = exponential_block(sim.seed, block, offset + n, (sim.antennas, topo.kappa + 1))[offset:]
    return combine(scheme, sir_from_gains(topo, 1.0, h))


def empirical_outage(scheme, r0, p0, topo, sim):
    """Fraction of draws with combiner output below ``2**r0 - 1``, and its binomial standard error."""
    threshold = float(rate_threshold(r0))
    if threshold <= 0.0:
        return 0.0, 0.0
    # SIR scales linearly with p0
    unit_threshold = threshold / p0

    def count(job):
        return int(np.count_nonzero(_combined_unit_power(scheme, topo, sim, *job) < unit_threshold))

    hits = sum(_map_blocks(count, sim.samples, sim.workers))
    return _proportion(hits, sim.samples)


def empirical_per_antenna_cdf(gamma, topo, p0, sim):
    """Monte-Carlo estimate of ``P[SIR_1 < gamma]`` at one antenna."""
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))

    def count(job):
        block, offset, n = job
        h = exponential_block(sim.seed, block, offset + n, (1, topo.kappa + 1))[offset:]
        s = np.sort(sir_from_gains(topo, p0, h)[:, 0])
        return np.searchsorted(s, gamma, side="left")

    hits = np.sum(_map_blocks(count, sim.samples, sim.workers), axis=0)
    p = hits / sim.samples
    return p, np.sqrt(p * (1.0 - p) / sim.samples)


def empirical_lomax_sum_cdf(x, M, kappa, sim):
    """Monte-Carlo estimate of ``P[sum_{j<=M} phi_j < x]`` with ``phi_j ~ Lomax(kappa, 1)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))

    def count(job):
        block, offset, n = job
        raw = _generator(sim.seed, _STREAM_LOMAX, block).random_raw((offset + n) * M)[offset * M:]
        phi = np.expm1(-np.log(_open_uniform(raw)) / kappa).reshape(n, M)
        return np.searchsorted(np.sort(phi.sum(axis=1)), x, side="left")

    hits = np.sum(_map_blocks(count, sim.samples, sim.workers), axis=0)
    p = hits / sim.samples
    return p, np.sqrt(p * (1.0 - p) / sim.samples)


def empirical_omega(scheme, topo, epsilon, sim):
    """Empirical reliability-curve slope.

    Since the combiner output is proportional to ``p0``, the curve at outage
    ``epsilon`` is ``r0 = log2(1 + omega p0)`` with ``omega`` the
    ``epsilon``-quantile of the output at unit power.  The order statistic is
    chosen so the empirical outage never exceeds ``epsilon``.
    """
    parts = _map_blocks(
        lambda job: _combined_unit_power(scheme, topo, sim, *job), sim.samples, sim.workers
    )
    values = np.concatenate(parts)
    k = int(math.floor(epsilon * values.size))
    if k < 10:
        warnings.warn(f"only {k} samples below the {epsilon} quantile; omega is unreliable", stacklevel=2)
    if k == 0:
        return float(values.min())
    return float(np.partition(values, k)[k])


# ---------------------------------------------------------------------------
# brute-force search
# ---------------------------------------------------------------------------

def analytic_outage(scheme, r0, p0, ch, M, model="bound"):
    """Closed-form outage used by the curve search.

    ``model="bound"`` uses the expressions whose exact inverse is the
    allocator's reliability curve: the Lomax bound for SC/SSC and, for MRC,
    the gamma lower bound with ``ln(1 + x/M)`` linearized.  ``model="gamma"``
    uses the regularized-gamma approximation for MRC instead.
    """
    scheme = Scheme.parse(scheme)
    thr = rate_threshold(r0)
    x = thr / (ch.kappa * ch.delta * np.asarray(p0, dtype=float))
    if scheme is Scheme.MRC:
        if model == "gamma":
            return mrc_sum_cdf_approx(x, M, ch.kappa)
        if model != "bound":
            raise ValueError(f"unknown outage model {model!r}")
        return (-np.expm1(-ch.kappa * x / factorial_root(M))) ** M
    return (-np.expm1(-ch.kappa * np.log1p(x))) ** M


def _curve_rates(outage_fn, p0, epsilon, rel_tol=1e-6):
    # vectorized bisection for r0 with outage(r0, p0) = epsilon
    p0 = np.asarray(p0, dtype=float)
    lo = np.zeros_like(p0)
    hi = np.full_like(p0, 1.0)
    while True:
        bad = outage_fn(hi, p0) < epsilon
        if not bad.any():
            break
        hi = np.where(bad, 2.0 * hi, hi)
        if hi.max() > 1e4:
            raise ArithmeticError("could not bracket the reliability curve")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = outage_fn(mid, p0) <= epsilon
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        out = outage_fn(lo, p0)
        if np.all(np.abs(out - epsilon) <= rel_tol * epsilon):
            break
    return lo


def _classify(idx, feasible, n):
    first = int(np.argmax(feasible))
    if idx == n - 1:
        return Regime.CLAMPED_HIGH
    if idx == first:
        return Regime.CLAMPED_LOW
    return Regime.INTERIOR


def grid_search_optimum(scheme, topo, M, pm, constraints, grid=None, sim=None,
                        mode="curve", outage_model="bound"):
    """Brute-force maximization of energy efficiency over a power grid.

    Parameters
    ----------
    topo : ExplicitTopology or EffectiveChannel
        Explicit topology is required for ``outage_model="empirical"``.
    grid : GridSpec, optional
        Defaults to 2000 log-spaced points spanning ``[p_min, p_max]``.
    sim : SimConfig, optional
        Monte-Carlo budget for the empirical model.
    mode : {"curve", "2d"}
        ``"curve"`` puts every grid power on the reliability curve (rate
        chosen so the outage equals ``epsilon``); ``"2d"`` scans the full
        power-rate grid and keeps points with outage ``<= epsilon``.
    outage_model : {"bound", "gamma", "empirical"}

    Returns
    -------
    GridSearchResult
        ``regime`` is ``INFEASIBLE`` when no grid point meets the constraints.
    """
    scheme = Scheme.parse(scheme)
    eps = constraints.epsilon
    if grid is None:
        grid = GridSpec.log_spaced(constraints.p_min, constraints.p_max)
    p0 = np.asarray(grid.p0)
    # finite bounds must be grid endpoints so clamped optima are representable
    low_ok = p0[0] >= constraints.p_min and (
        constraints.p_min == 0.0 or math.isclose(p0[0], constraints.p_min, rel_tol=1e-12))
    high_ok = p0[-1] <= constraints.p_max and (
        math.isinf(constraints.p_max) or math.isclose(p0[-1], constraints.p_max, rel_tol=1e-12))
    if not (low_ok and high_ok):
        raise ValueError("finite power constraints must be the grid endpoints")

    ch = topo if isinstance(topo, EffectiveChannel) else topo.effective()
    if outage_model == "empirical":
        if not isinstance(topo, ExplicitTopology) or sim is None:
            raise ValueError("the empirical model needs an explicit topology and a SimConfig")
        if sim.antennas != M:
            raise ValueError("SimConfig.antennas must match M")
        w_emp = empirical_omega(scheme, topo, eps, sim)
        unit = None
        if mode == "2d":
            parts = _map_blocks(
                lambda job: _combined_unit_power(scheme, topo, sim, *job), sim.samples, sim.workers
            )
            unit = np.sort(np.concatenate(parts))

        def outage_fn(r, p):
            thr = rate_threshold(r) / p
            return np.searchsorted(unit, thr, side="left") / unit.size
    else:
        w_emp = None

        def outage_fn(r, p):
            return analytic_outage(scheme, r, p, ch, M, outage_model)

    w_model = omega(scheme, M, ch, eps)
    pc = pm.circuit_power(M, scheme)

    if mode == "curve":
        if w_emp is not None:
            r0 = np.log1p(w_emp * p0) / math.log(2.0)
            out = np.full_like(p0, eps)
        else:
            r0 = _curve_rates(outage_fn, p0, eps)
            out = outage_fn(r0, p0)
        feasible = r0 >= constraints.r_min * (1.0 - 1e-12)
        ee = np.where(feasible, r0 * (1.0 - out) / (p0 / pm.eta + pc), -np.inf)
        if not feasible.any():
            return GridSearchResult(math.nan, math.nan, 0.0, w_model, Regime.INFEASIBLE, scheme,
                                    grid.resolution)
        idx = int(np.argmax(ee))
        regime = _classify(idx, feasible, p0.size)
        return GridSearchResult(float(p0[idx]), float(r0[idx]), float(ee[idx]),
                                w_model if w_emp is None else w_emp, regime, scheme,
                                grid.resolution, float(out[idx]))

    if mode != "2d":
        raise ValueError(f"unknown mode {mode!r}")
    if grid.r0 is not None:
        rates = np.asarray(grid.r0)
    else:
        top = math.log2(1.0 + (w_emp or w_model) * p0[-1]) * 1.05
        rates = np.linspace(max(constraints.r_min, 0.0), max(top, constraints.r_min), 1000)
    R, P = np.meshgrid(rates, p0, indexing="ij")
    out = outage_fn(R, P)
    ok = (out <= eps) & (R >= constraints.r_min)
    ee = np.where(ok, R * (1.0 - out) / (P / pm.eta + pc), -np.inf)
    if not ok.any():
        return GridSearchResult(math.nan, math.nan, 0.0, w_model, Regime.INFEASIBLE, scheme,
                                grid.resolution)
    ri, pi = np.unravel_index(int(np.argmax(ee)), ee.shape)
    feasible_p = ok.any(axis=0)
    regime = _classify(int(pi), feasible_p, p0.size)
    return GridSearchResult(float(p0[pi]), float(rates[ri]), float(ee[ri, pi]),
                            w_model if w_emp is None else w_emp, regime, scheme,
                            grid.resolution, float(out[ri, pi]))

