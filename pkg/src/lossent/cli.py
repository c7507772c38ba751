"""Command-line front end.

    lossent point --eta 0.5 --lambda 0.5 --n 1 --format json
    lossent sweep [--config FILE] [--eta 0.25,0.5] [--lambda ...] [--n-min 1 --n-max 6]
    lossent crossover --eta 0.75 --lambda 0.75
    lossent oracle-check --trunc 30

Exit codes: 0 success, 1 a failed oracle check, 2 invalid input, 3 I/O failure.
"""

import argparse
import configparser
import csv
import io
import json
import sys
from dataclasses import dataclass
from importlib import resources

from . import _kernels
from .compare import N_MAX, crossover_N, emode_probability
from .fock_oracle import oracle_suite

CSV_FIELDS = ["eta", "lambda", "N", "M", "p_b", "q", "p_star", "p_prime", "p_C", "r", "ln_r"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class SweepGrid:
    etas: tuple
    lambdas: tuple
    n_min: int
    n_max: int

    def __post_init__(self):
        if not self.etas or not self.lambdas:
            raise InputError("sweep grid needs at least one eta and one lambda")
        for eta in self.etas:
            _check_eta(eta)
        for lam in self.lambdas:
            _check_lambda(lam)
        _check_n(self.n_min)
        _check_n(self.n_max)
        if self.n_min > self.n_max:
            raise InputError(f"--n-min {self.n_min} exceeds --n-max {self.n_max}")

    def points(self):
        for eta in sorted(self.etas):
            for lam in sorted(self.lambdas):
                for n in range(self.n_min, self.n_max + 1):
                    yield eta, lam, n


def _check_eta(eta):
    if not 0.0 <= eta <= 1.0:
        raise InputError(f"eta={eta} violates 0 <= eta <= 1")


def _check_lambda(lam):
    if not 0.0 <= lam < 1.0:
        raise InputError(f"lambda={lam} violates 0 <= lambda < 1")


def _check_n(n):
    if not 1 <= n <= N_MAX:
        raise InputError(f"N={n} violates 1 <= N <= {N_MAX}")


def fmt(value):
    """12 significant digits; scientific (lowercase) below 1e-4."""
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".12g")


def _row(point):
    return {
        "eta": point.eta, "lambda": point.lambda_mag, "N": point.N, "M": point.M,
        "p_b": point.p_b, "q": point.q, "p_star": point.p_star,
        "p_prime": point.p_prime, "p_C": point.p_C, "r": point.r, "ln_r": point.ln_r,
    }


def render(points, fmt_name):
    """Serialize ComparisonPoints; CSV and JSON carry the same rounded numbers."""
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for p in points:
            row = _row(p)
            w.writerow([fmt(row[k]) for k in CSV_FIELDS])
        return buf.getvalue()
    lines = []
    for p in points:
        row = {k: (v if isinstance(v, int) else float(fmt(v))) for k, v in _row(p).items()}
        row["ebits_win_bound"] = p.ebits_win_bound
        lines.append(json.dumps(row))
    return "[\n" + ",\n".join(lines) + "\n]\n"


def load_grid(config_path=None):
    parser = configparser.ConfigParser()
    if config_path is None:
        text = resources.files("lossent").joinpath("default_sweep.cfg").read_text()
    else:
        with open(config_path, encoding="utf-8") as fh:
            text = fh.read()
    parser.read_string(text)
    sec = parser["sweep"]
    return {
        "etas": _floats(sec["etas"]),
        "lambdas": _floats(sec["lambdas"]),
        "n_min": sec.getint("n_min"),
        "n_max": sec.getint("n_max"),
    }


def _floats(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise InputError(f"bad number list {text!r}") from exc


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_point(args):
    _check_eta(args.eta)
    _check_lambda(args.lam)
    _check_n(args.n)
    _emit(render([emode_probability(args.lam, args.eta, args.n)], args.format), args.out)
    return EXIT_OK


def cmd_sweep(args):
    base = load_grid(args.config)
    grid = SweepGrid(
        etas=_floats(args.eta) if args.eta else base["etas"],
        lambdas=_floats(args.lam) if args.lam else base["lambdas"],
        n_min=base["n_min"] if args.n_min is None else args.n_min,
        n_max=base["n_max"] if args.n_max is None else args.n_max,
    )
    points = [emode_probability(lam, eta, n) for eta, lam, n in grid.points()]
    _emit(render(points, args.format), args.out)
    return EXIT_OK


def cmd_crossover(args):
    _check_eta(args.eta)
    _check_lambda(args.lam)
    if args.eta * args.lam ** 2 == 0.0:
        raise InputError("crossover needs eta * lambda^2 > 0 (r diverges otherwise)")
    n = crossover_N(args.eta, args.lam)
    _emit(f"{n}\n", args.out)
    return EXIT_OK


def cmd_oracle_check(args):
    _check_eta(args.eta)
    _check_lambda(args.lam)
    rows = oracle_suite(args.trunc, eta=args.eta, lambda_mag=args.lam, tol=args.tol)
    lines = [f"# backend={_kernels.backend()} trunc={args.trunc} eta={fmt(args.eta)} "
             f"lambda={fmt(args.lam)} tol={args.tol:g}"]
    for name, residual, passed in rows:
        lines.append(f"{'PASS' if passed else 'FAIL'} {name} residual={residual:.3e}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(p for _, _, p in rows) else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lossent",
        description="Ebits versus LOCC-assisted twin beams under photon loss.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", metavar="PATH", default=None)

    p = sub.add_parser("point", help="evaluate one (eta, lambda, N)")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="evaluate a grid of points")
    p.add_argument("--config", metavar="PATH", default=None)
    p.add_argument("--eta", default=None, help="comma-separated list")
    p.add_argument("--lambda", dest="lam", default=None, help="comma-separated list")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("crossover", help="smallest N with r > 1")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--out", metavar="PATH", default=None)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("oracle-check", help="run the truncated-Fock oracle identities")
    p.add_argument("--trunc", type=int, default=30)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--out", metavar="PATH", default=None)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"lossent: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, configparser.Error) as exc:
        print(f"lossent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
