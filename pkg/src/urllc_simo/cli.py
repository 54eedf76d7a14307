"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 infeasible, 3 validation failure.
All tables are CSV with a single header line; numbers carry 9 significant
digits and ``NA`` marks values that could not be computed.
"""
import argparse
import contextlib
import json
import math
import sys
import warnings

import numpy as np

from .allocator import Constraints, PowerModel, Scheme, allocate
from .oracle import GridSpec, SimConfig, analytic_outage, empirical_outage, grid_search_optimum
from .scenario import ScenarioError, load_scenario
from .sir import (
    EffectiveChannel,
    MRCConvergenceError,
    mrc_sum_cdf_approx,
    mrc_sum_cdf_exact,
    mrc_sum_cdf_lower_bound,
    per_antenna_cdf_bound,
    per_antenna_cdf_exact,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_VALIDATION = 3

SWEEP_VARS = ("epsilon", "delta_db", "M", "p_r_w", "eta")
SWEEP_HEADER = "var,scheme,p0_star_w,r0_star_bpshz,ee_star,omega,regime"
SCHEME_ORDER = (Scheme.SC, Scheme.SSC, Scheme.MRC)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt(value):
    if value is None:
        return "NA"
    value = float(value)
    if math.isnan(value):
        return "NA"
    return f"{value:.9g}"


def _json_number(value):
    value = float(value)
    return None if math.isnan(value) else float(f"{value:.9g}")


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _grid(start, stop, points, log):
    if points < 2:
        raise InputError("--points must be at least 2")
    if not (math.isfinite(start) and math.isfinite(stop)) or not start < stop:
        raise InputError(f"need finite --from < --to, got {start} and {stop}")
    if log:
        if start <= 0.0:
            raise InputError("--log needs --from > 0")
        values = np.geomspace(start, stop, points)
    else:
        values = np.linspace(start, stop, points)
    values[0], values[-1] = start, stop
    return values


def _schemes(values, default=None):
    if not values:
        return [default] if default is not None else list(SCHEME_ORDER)
    chosen = set()
    for item in values:
        for name in item.split(","):
            try:
                chosen.add(Scheme.parse(name.strip()))
            except ValueError as exc:
                raise InputError(str(exc)) from None
    return [s for s in SCHEME_ORDER if s in chosen]


# ---------------------------------------------------------------------------
# allocate
# ---------------------------------------------------------------------------

def _result_record(res):
    return {
        "scheme": res.scheme.value,
        "regime": res.regime.value,
        "p0_star_w": _json_number(res.p0_star),
        "r0_star_bpshz": _json_number(res.r0_star),
        "ee_star": _json_number(res.ee_star),
        "omega": _json_number(res.omega),
    }


def cmd_allocate(args):
    sc = load_scenario(args.scenario)
    scheme = _schemes(args.scheme, sc.scheme)[0] if args.scheme else sc.scheme
    res = allocate(scheme, sc.effective_channel, sc.antennas, sc.power_model, sc.constraints)
    with _output(args.out) as fh:
        fh.write(json.dumps(_result_record(res)) + "\n")
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _apply(sc, var, value):
    ch = sc.effective_channel
    pm = sc.power_model
    c = sc.constraints
    try:
        if var == "epsilon":
            return sc.with_updates(constraints=Constraints(value, c.r_min, c.p_min, c.p_max))
        if var == "delta_db":
            return sc.with_updates(channel=EffectiveChannel.from_db(ch.kappa, value), _delta_db=value)
        if var == "M":
            return sc.with_updates(antennas=int(value))
        if var == "p_r_w":
            return sc.with_updates(power_model=PowerModel(pm.eta, pm.p_t, value, pm.p_syn))
        if var == "eta":
            return sc.with_updates(power_model=PowerModel(value, pm.p_t, pm.p_r, pm.p_syn))
    except ValueError as exc:
        raise InputError(f"--var {var} = {value}: {exc}") from None
    raise InputError(f"unknown sweep variable {var!r}")


def cmd_sweep(args):
    sc = load_scenario(args.scenario)
    values = _grid(args.start, args.stop, args.points, args.log)
    if args.var == "M":
        rounded = np.rint(values)
        if rounded[0] < 1 or np.unique(rounded).size != rounded.size:
            raise InputError("an M sweep needs distinct integers >= 1; reduce --points")
        values = rounded.astype(int)
    schemes = _schemes(args.scheme)
    rows = [SWEEP_HEADER]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for value in values:
            point = _apply(sc, args.var, value)
            label = str(value) if args.var == "M" else fmt(value)
            for scheme in schemes:
                res = allocate(scheme, point.effective_channel, point.antennas,
                               point.power_model, point.constraints)
                rows.append(",".join([
                    label, scheme.value, fmt(res.p0_star), fmt(res.r0_star),
                    fmt(res.ee_star if res.feasible else math.nan), fmt(res.omega),
                    res.regime.value,
                ]))
    with _output(args.out) as fh:
        fh.write("\n".join(rows) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# dist
# ---------------------------------------------------------------------------

def _exact_or_na(x, M, kappa):
    try:
        return mrc_sum_cdf_exact(x, M, kappa)
    except MRCConvergenceError:
        return math.nan


def cmd_dist(args):
    sc = load_scenario(args.scenario)
    scheme = _schemes(args.scheme, sc.scheme)[0] if args.scheme else sc.scheme
    if args.exact and sc.topology is None and scheme is not Scheme.MRC:
        raise InputError("exact per-antenna curves need an explicit channel topology")
    if args.start < 0.0:
        raise InputError("--from must be nonnegative")
    points = _grid(args.start, args.stop, args.points, args.log)
    ch = sc.effective_channel
    M = sc.antennas
    cols = []
    if scheme is Scheme.MRC:
        header = ["x"] + (["exact"] if args.exact else []) + ["approx", "lower_bound"]
        if args.exact:
            cols.append([_exact_or_na(x, M, ch.kappa) for x in points])
        cols.append(mrc_sum_cdf_approx(points, M, ch.kappa))
        cols.append(mrc_sum_cdf_lower_bound(points, M, ch.kappa))
    else:
        p0 = sc.p0
        if p0 is None:
            res = allocate(scheme, ch, M, sc.power_model, sc.constraints)
            if not res.feasible:
                print("error: scenario is infeasible and gives no transmit power", file=sys.stderr)
                return EXIT_INFEASIBLE
            p0 = res.p0_star
        header = ["gamma"] + (["exact"] if args.exact else []) + ["bound"]
        if args.exact:
            cols.append(per_antenna_cdf_exact(points, sc.topology, p0) ** M)
        cols.append(per_antenna_cdf_bound(points, ch, p0) ** M)
    rows = [",".join(header)]
    for i, x in enumerate(points):
        rows.append(",".join([fmt(x)] + [fmt(col[i]) for col in cols]))
    with _output(args.out) as fh:
        fh.write("\n".join(rows) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

VALIDATE_HEADER = "check,analytic,observed,tolerance,status"
EE_REL_TOL = 1e-3


def cmd_validate(args):
    sc = load_scenario(args.scenario)
    if sc.topology is None:
        raise InputError("validate needs an explicit channel topology")
    if args.samples < 1 or args.grid_points < 2:
        raise InputError("need --samples >= 1 and --grid-points >= 2")
    scheme = _schemes(args.scheme, sc.scheme)[0] if args.scheme else sc.scheme
    ch = sc.effective_channel
    M = sc.antennas
    c = sc.constraints
    res = allocate(scheme, ch, M, sc.power_model, c)
    if not res.feasible:
        print("error: scenario is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE

    try:
        sim = SimConfig(args.samples, args.seed, M, args.workers)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est, se = empirical_outage(scheme, res.r0_star, res.p0_star, sc.topology, sim)
    target = float(analytic_outage(scheme, res.r0_star, res.p0_star, ch, M))
    hits = round(est * args.samples)
    rows = [VALIDATE_HEADER]

    def status(ok):
        if hits < 10:
            return "inconclusive"
        return "pass" if ok else "fail"

    rows.append(",".join([
        "outage_band", fmt(target), fmt(est), "0.5..1.1 x analytic",
        status(0.5 * target <= est <= 1.1 * target),
    ]))
    rows.append(",".join([
        "outage_not_above_bound", fmt(target), fmt(est), "analytic + 3 se",
        status(est <= target + 3.0 * se),
    ]))

    lo = c.p_min if c.p_min > 0.0 else res.p0_star * 1e-3
    hi = c.p_max if math.isfinite(c.p_max) else res.p0_star * 1e3
    grid = GridSpec.log_spaced(lo, hi, args.grid_points)
    brute = grid_search_optimum(scheme, ch, M, sc.power_model, c, grid=grid)
    rel = abs(brute.ee_star - res.ee_star) / res.ee_star
    rows.append(",".join([
        "ee_grid_agreement", fmt(res.ee_star), fmt(brute.ee_star), fmt(EE_REL_TOL) + " rel",
        "pass" if rel <= EE_REL_TOL else "fail",
    ]))
    with _output(args.out) as fh:
        fh.write("\n".join(rows) + "\n")
    passed = all(row.endswith(",pass") for row in rows[1:])
    return EXIT_OK if passed else EXIT_VALIDATION


# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="urllc-simo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, scheme_help="override the scenario's scheme"):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--scheme", action="append", help=scheme_help)
        p.add_argument("--out", help="output file (default standard output)")

    p = sub.add_parser("allocate", help="optimal power and rate for one scenario")
    common(p)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("sweep", help="allocations over a range of one parameter")
    common(p, "schemes to include, repeat or comma-separate (default all)")
    p.add_argument("--var", required=True, choices=SWEEP_VARS)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--log", action="store_true", help="log-spaced points")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dist", help="analytic CDF curves of the combiner output")
    common(p)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--log", action="store_true")
    p.add_argument("--exact", action="store_true", help="add the exact curve")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("validate", help="check the allocation by simulation and brute force")
    common(p)
    p.add_argument("--samples", type=int, default=10_000_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--grid-points", type=int, default=2000)
    p.add_argument("--workers", type=int, default=1, help="sampling threads (results do not depend on it)")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors exit 1, --help exits 0
        return exc.code
    try:
        return args.func(args)
    except (InputError, ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
