"""Command-line interface.

Exit status: 0 on success, 2 for unreadable or invalid input, 3 when the
statistic is numerically undefined for the data, 64 for usage errors.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .codispersion import codisp_binned, codisp_map, comovement
from .exceptions import DegenerateError
from .geometry import DEFAULT_NCLASS, PointSample
from .mttest import VARIANCE_ESTIMATORS, modified_ttest
from .simulate import CovSpec, bench, grid_coords, metadata, sample_gaussian_pair
from .tjostheim import tjostheim_coef
from .validation import STURGES

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_data_args(p, classes=True):
    src = p.add_argument_group("data")
    src.add_argument("--coords", metavar="FILE", help="points CSV with header s1,s2,x,y")
    src.add_argument("--image-x", metavar="FILE", help="first variable as PGM or text matrix")
    src.add_argument("--image-y", metavar="FILE", help="second variable as PGM or text matrix")
    if classes:
        _add_class_args(p)


def _add_class_args(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--nclass", type=int, metavar="K", help=f"number of distance classes (default {DEFAULT_NCLASS})")
    g.add_argument("--sturges", action="store_true", help="choose the number of classes by Sturges' rule")


def _add_output_args(p, formats=("json", "csv", "text"), default="json"):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--threads", type=int, default=1, metavar="N",
                   help="worker threads; 1 is the bit-reproducible reference")


def build_parser():
    parser = _Parser(prog="spatialassoc",
                     description="Association between two spatial processes observed at the same locations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ttest", help="modified t-test with effective sample size")
    _add_data_args(p)
    p.add_argument("--variance", choices=VARIANCE_ESTIMATORS, default="dutilleul")
    _add_output_args(p)

    p = sub.add_parser("tjostheim", help="Tjostheim's rank coefficient and its variance")
    _add_data_args(p, classes=False)
    _add_output_args(p)

    p = sub.add_parser("codisp", help="binned codispersion coefficient")
    _add_data_args(p)
    _add_output_args(p)

    p = sub.add_parser("comovement", help="codispersion of two time series by lag")
    p.add_argument("--x", required=True, metavar="FILE", help="first series, one value per line")
    p.add_argument("--y", required=True, metavar="FILE", help="second series")
    p.add_argument("--max-lag", type=int, metavar="H", help="largest lag (default ceil(T/2))")
    _add_class_args(p)
    _add_output_args(p)

    p = sub.add_parser("map", help="codispersion map on a polar lag grid")
    _add_data_args(p, classes=False)
    p.add_argument("--n-angles", type=int, default=36)
    p.add_argument("--n-radii", type=int, default=20)
    p.add_argument("--max-radius", type=float)
    p.add_argument("--tol", type=float, help="radial tolerance (default half the radial spacing)")
    _add_output_args(p, formats=("csv", "json"), default="csv")

    p = sub.add_parser("simulate", help="draw a correlated Gaussian field pair on a grid")
    p.add_argument("--size", type=int, required=True, help="grid side length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("dense", "blocks"), default="dense")
    p.add_argument("--max-n", type=int, default=4096, help="cap on the number of locations")
    for name in ("a", "alpha", "beta", "sigma", "c", "gamma", "u-within", "u-cross"):
        p.add_argument(f"--{name}", type=float, default=getattr(CovSpec(), name.replace("-", "_")))
    p.add_argument("--out", metavar="PATH", help="CSV output; metadata goes to PATH.json (default: stdout, no sidecar)")

    p = sub.add_parser("bench", help="timing of codisp and ttest on simulated grids")
    p.add_argument("--sizes", default="8,16,32,64", help="comma separated grid sides")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--method", choices=("codisp", "ttest", "both"), default="both")
    p.add_argument("--nclass", type=int, default=DEFAULT_NCLASS)
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p, formats=("csv", "json"), default="csv")
    return parser


def _load_sample(args):
    if args.coords and (args.image_x or args.image_y):
        raise UsageError("give either --coords or --image-x/--image-y, not both")
    if args.coords:
        return io.parse_points_csv(args.coords)
    if args.image_x and args.image_y:
        return io.parse_grid(args.image_x, args.image_y)
    raise UsageError("input required: --coords FILE or --image-x FILE --image-y FILE")


def _nclass(args):
    if getattr(args, "sturges", False):
        return STURGES
    return DEFAULT_NCLASS if args.nclass is None else args.nclass


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(args, result, header=None, rows=None):
    if args.format == "json":
        return io.to_json(result.to_dict())
    if args.format == "csv":
        return io.to_csv(header, rows)
    return str(result) + "\n"


def _run_ttest(args):
    res = modified_ttest(_load_sample(args), _nclass(args), args.variance, args.threads)
    if args.format == "text":
        return res.summary() + "\n"
    header = ("fstat", "dof", "ess", "p_value", "corr", "sigma2_r")
    return _render(args, res, header, [tuple(getattr(res, h) for h in header)])


def _run_tjostheim(args):
    res = tjostheim_coef(_load_sample(args))
    return _render(args, res, ("coef", "variance"), [(res.coef, res.variance)])


def _run_codisp(args):
    res = codisp_binned(_load_sample(args), _nclass(args), args.threads)
    return _render(args, res, ("upper_bound", "card", "coef"), res.rows())


def _run_comovement(args):
    x = io.read_series(args.x)
    y = io.read_series(args.y)
    if args.nclass is not None or args.sturges:
        t = np.arange(1, len(x) + 1, dtype=np.float64)
        sample = PointSample(np.column_stack((t, np.ones_like(t))), x, y)
        res = codisp_binned(sample, _nclass(args), args.threads)
        return _render(args, res, ("upper_bound", "card", "coef"), res.rows())
    res = comovement(x, y, args.max_lag)
    if args.format == "text":
        return "".join(f"{h:4d}  {'NA' if c is None else f'{c:.4f}'}\n" for h, c in res.rows())
    return _render(args, res, ("lag", "coef"), res.rows())


def _run_map(args):
    sample = _load_sample(args)
    res = codisp_map(sample, args.n_angles, args.n_radii, args.max_radius, args.tol, args.threads)
    return _render(args, res, ("angle_rad", "radius", "value", "npairs"), res.rows())


def _run_simulate(args):
    spec = CovSpec(a=args.a, alpha=args.alpha, beta=args.beta, sigma=args.sigma, c=args.c,
                   gamma=args.gamma, u_within=args.u_within, u_cross=args.u_cross)
    coords = grid_coords(args.size)
    x, y = sample_gaussian_pair(coords, spec, seed=args.seed, method=args.method,
                                max_n=args.max_n)
    if args.out:
        meta = metadata(spec, args.seed, coords.shape)
        meta["method"] = args.method
        Path(args.out + ".json").write_text(io.to_json(meta))
    rows = [(float(a), float(b), float(u), float(v)) for (a, b), u, v in zip(coords, x, y)]
    return io.to_csv(io.POINT_COLUMNS, rows)


def _run_bench(args):
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--sizes must be comma separated integers, got {args.sizes!r}") from None
    rows = bench(sizes, args.reps, args.method, args.nclass, seed=args.seed, threads=args.threads)
    if args.format == "json":
        return io.to_json(rows)
    header = ("size", "n", "method", "reps", "mean_seconds", "min_seconds", "ops")
    return io.to_csv(header, [tuple(r[h] for h in header) for r in rows])


_COMMANDS = {
    "ttest": _run_ttest,
    "tjostheim": _run_tjostheim,
    "codisp": _run_codisp,
    "comovement": _run_comovement,
    "map": _run_map,
    "simulate": _run_simulate,
    "bench": _run_bench,
}


def _fail(exc):
    print(f"spatialassoc: error: {exc}", file=sys.stderr)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DegenerateError as exc:
        _fail(exc)
        return EXIT_DEGENERATE
    except (ValueError, OSError) as exc:
        _fail(exc)
        return EXIT_INPUT
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
