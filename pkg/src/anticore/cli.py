"""Command-line interface.

Every command writes CSV (header row, fixed columns, 15 significant digits,
``inf`` for infinite distances) or JSON (``{"config": ..., "data": [...]}``).
Spin indices are 1-based; doubly-infinite offsets are relative to the center
spin and may be negative.

Exit codes: 0 success, 2 usage error, 3 numerical cross-check failure,
4 eigensolver convergence failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import asymptotics, biassweep, geometry, itc
from .chain import ChainSpec, check_spin
from .errors import ChainError, ConvergenceError, CrossCheckError
from .spectral import spectrum

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CROSSCHECK = 3
EXIT_CONVERGENCE = 4

BOUND_ATOL = 1e-10


class Table:
    def __init__(self, columns, rows):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return f"{x:.15g}"


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if x is None or isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(format_value(x))


def render(table: Table, config: dict, fmt: str) -> str:
    if fmt == "json":
        data = [
            {c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows
        ]
        return json.dumps({"config": config, "data": data}, indent=2) + "\n"
    lines = [",".join(table.columns)]
    lines += [",".join(format_value(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _chain(args) -> ChainSpec:
    return ChainSpec(args.n, args.bias)


def _pair_or_rows(args, value_of_row, value_of_pair, full_matrix, prefix, label):
    spec = _chain(args)
    if args.pair:
        i, j = args.pair
        check_spin(spec, i)
        check_spin(spec, j)
        return Table(["i", "j", label], [[i, j, value_of_pair(i, j)]])
    if args.row:
        for r in args.row:
            check_spin(spec, r)
        cols = [value_of_row(r) for r in args.row]
        rows = [[j + 1] + [c[j] for c in cols] for j in range(spec.n_spins)]
        return Table(["j"] + [f"{prefix}{r}" for r in args.row], rows)
    mat = full_matrix()
    n = spec.n_spins
    rows = [[i + 1, j + 1, mat[i, j]] for i in range(n) for j in range(n)]
    return Table(["i", "j", label], rows)


def cmd_pmax(args):
    dec = spectrum(_chain(args))
    return _pair_or_rows(
        args,
        lambda r: np.sqrt(itc.pmax_row(dec, r)),
        lambda i, j: math.sqrt(itc.p_max(dec, i, j)),
        lambda: itc.itc_from_spectrum(dec, _chain(args)).sqrt_pmax,
        "sqrt_pmax_from_",
        "sqrt_pmax",
    )


def cmd_distance(args):
    spec = _chain(args)
    dec = spectrum(spec)

    def row(r):
        d = itc.to_distance(itc.pmax_row(dec, r))
        d[r - 1] = 0.0
        return d

    def pair(i, j):
        return 0.0 if i == j else float(itc.to_distance(itc.p_max(dec, i, j)))

    return _pair_or_rows(
        args, row, pair, lambda: itc.itc_from_spectrum(dec, spec).distance, "d_from_", "distance"
    )


def cmd_anticore(args):
    spec = _chain(args)
    m = itc.itc_matrix(spec)
    res = geometry.find_anticore(m)
    prof = itc.inertia_profile(m, args.alpha)
    print(f"omega={res.index} flag={format_value(res.flag)}", file=sys.stderr)
    viol = ";".join(f"{i}:{j}" for i, j in res.violations)
    ties = ";".join(str(i) for i in res.ties)
    return Table(
        ["n", "bias", "omega", "anticore", "flag", "n_violations", "violations", "ties",
         "inertia_argmax", "inertia_max"],
        [[spec.n_spins, spec.bias, res.omega, res.index, res.flag, len(res.violations), viol,
          ties, int(np.argmax(prof)) + 1, float(np.max(prof))]],
    )


def cmd_asymptotic(args):
    r = asymptotics.asymptotic(args.i, args.j, asymptotics.Frame(args.frame), args.tol)
    p = r.pair
    return Table(
        ["frame", "i", "j", "gcd", "i_red", "j_red", "parity_class", "series", "closed_form",
         "truncation_bound", "special"],
        [[r.frame.value, r.i, r.j,
          p.g if p else None, p.i_red if p else None, p.j_red if p else None,
          p.parity_class.value if p and p.parity_class else None,
          r.series, r.closed_form, r.truncation_bound, r.special]],
    )


def cmd_sweep(args):
    spec = ChainSpec(args.n)
    points = biassweep.sweep(spec, args.zeta)
    bad = biassweep.monotone_violations(points)
    if bad:
        print(f"warning: p_max(1, omega) increased between {bad}", file=sys.stderr)
    return Table(
        ["zeta", "lambda_max_over_zeta", "pmax_1_omega", "pmax_1_N", "d_1_omega",
         "d_1_omega_over_log_zeta"],
        [[p.zeta, p.lambda_max_over_zeta, p.pmax_1_omega, p.pmax_1_N, p.d_1_omega,
          p.d_1_omega_over_log_zeta] for p in points],
    )


def cmd_hyperbolicity(args):
    spec = _chain(args)
    m = itc.itc_matrix(spec)
    rep = geometry.geometry_report(m, budget=args.budget, seed=args.seed)
    fp = rep.four_point
    quad = " ".join(map(str, fp.quadruple)) if fp.quadruple else None
    return Table(
        ["n", "bias", "four_point_delta_diagnostic", "quadruple", "scanned", "skipped",
         "exhaustive", "seed", "diameter", "diameter_pair", "triangle_violations",
         "max_triangle_excess", "infinite_pairs"],
        [[spec.n_spins, spec.bias, fp.delta, quad, fp.scanned, fp.skipped, fp.exhaustive,
          fp.seed, rep.diameter, f"{rep.diameter_pair[0]} {rep.diameter_pair[1]}",
          rep.triangle.count, rep.triangle.max_excess, rep.infinite_pairs]],
    )


def cmd_evolve(args):
    spec = _chain(args)
    dec = spectrum(spec)
    i, j = args.pair
    a, b = check_spin(spec, i), check_spin(spec, j)
    if args.dt <= 0 or args.t_max < 0:
        raise ValueError("need dt > 0 and t_max >= 0")
    steps = int(round(args.t_max / args.dt))
    times = np.arange(steps + 1) * args.dt
    probs = itc.p_t_grid(dec, times)[:, a, b]
    bound = itc.p_max(dec, i, j)
    worst = float(np.max(probs - bound))
    if worst > BOUND_ATOL:
        raise CrossCheckError(f"p_t exceeds p_max by {worst:.3e}")
    return Table(["t", "p_t", "p_max"], [[t, p, bound] for t, p in zip(times, probs)])


def cmd_constants(args):
    c = asymptotics.diameter_constants()
    rows = [
        ["2/pi", c.center_sqrt],
        ["8/pi^2", c.doubly_floor_sqrt],
        ["64/pi^4", c.semi_floor_pmax],
        ["pi^2-8", c.zeta_even_sum],
        ["-2log(2/pi)", c.doubly_diameter],
    ]
    return Table(["name", "value"], rows)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _zeta_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad zeta list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anticore",
        description="Information transfer capacity metrics on XX spin chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, chain=True):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
        if chain:
            p.add_argument("--n", type=int, required=True, help="number of spins")
            p.add_argument("--bias", type=float, default=0.0,
                           help="potential on the center spin (odd chains only)")

    for name, fn, help_ in (
        ("pmax", cmd_pmax, "sqrt of maximum transfer probability"),
        ("distance", cmd_distance, "ITC distance -log p_max"),
    ):
        p = sub.add_parser(name, help=help_)
        common(p)
        sel = p.add_mutually_exclusive_group()
        sel.add_argument("--row", type=int, action="append",
                         help="1-based source spin; repeat for several columns")
        sel.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"))
        p.set_defaults(func=fn)

    p = sub.add_parser("anticore", help="locate the anti-core and inertia maximum")
    common(p)
    p.add_argument("--alpha", type=float, default=itc.DEFAULT_ALPHA)
    p.set_defaults(func=cmd_anticore)

    p = sub.add_parser("asymptotic", help="infinite-chain sqrt(p_max), series and closed form")
    common(p, chain=False)
    p.add_argument("--frame", choices=("semi", "doubly"), required=True,
                   help="semi: positions >= 1 from the left end; "
                        "doubly: offsets from the center, may be negative or 0")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--tol", type=float, default=asymptotics.DEFAULT_TOL)
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("sweep", help="center-bias sweep of an odd chain")
    common(p, chain=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zeta", type=_zeta_list, default=list(biassweep.DEFAULT_GRID),
                   help="comma-separated ascending bias values")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("hyperbolicity", help="four-point delta, diameter, triangle audit")
    common(p)
    p.add_argument("--budget", type=int, default=geometry.DEFAULT_BUDGET,
                   help="exhaustive scan when C(N,4) <= budget, else this many samples")
    p.add_argument("--seed", type=int, default=geometry.DEFAULT_SEED)
    p.set_defaults(func=cmd_hyperbolicity)

    p = sub.add_parser("evolve", help="p_t(i,j) on a time grid next to p_max(i,j)")
    common(p)
    p.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"), required=True)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=0.05)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("constants", help="asymptotic constants table")
    common(p, chain=False)
    p.set_defaults(func=cmd_constants)
    return parser


def _config(args) -> dict:
    skip = {"func", "output", "format"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        table = args.func(args)
    except CrossCheckError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ChainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(table, _config(args), args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
