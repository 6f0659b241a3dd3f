"""Command line front end: verify identity suites, simulate paths, and
sample the stationary matrix Dirichlet law.

Exit codes: 0 success, 1 check or simulation failure, 2 usage error.
All commands are deterministic given their flags and seed.
"""

import argparse
import csv
import json
import sys

import numpy as np

from .errors import MatrixDirichletError, StepRejectedError
from .matrix_simplex import (
    MatrixSimplexPoint, Model1Params, model1, model2, params_from_json,
    point_to_real, simplex_layout)
from .sde import SimConfig, simulate, write_path_csv
from .verify import SUITE_NAMES, format_report, run_suite
from .wishart import sample_matrix_dirichlet_direct


def _cmd_verify(args):
    report = run_suite(args.suite, seed=args.seed, samples=args.samples)
    for line in format_report(report):
        print(line)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return 0 if report["pass"] else 1


def _layout_names(n, d):
    # column names in the realified layout order: per block, diagonal
    # entries first, then (Re, Im) pairs of the upper triangle
    layout = simplex_layout(n, d)
    names = ["c%d" % i for i in range(layout.real_dim)]
    idx = 0
    for k in range(n):
        for i in range(d):
            names[idx] = "Z%d_d%d" % (k + 1, i)
            idx += 1
        for i in range(d):
            for j in range(i + 1, d):
                names[idx] = "Z%d_re%d%d" % (k + 1, i, j)
                names[idx + 1] = "Z%d_im%d%d" % (k + 1, i, j)
                idx += 2
    return names


def _cmd_simulate(args, parser):
    if args.dt <= 0:
        parser.error("dt must be positive")
    try:
        with open(args.model) as fh:
            params, n, d = params_from_json(json.load(fh))
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print("error: cannot read model file: %s" % exc, file=sys.stderr)
        return 2
    model = (model1(params, d) if isinstance(params, Model1Params)
             else model2(params, n))
    if args.x0 == "auto":
        # barycenter of the simplex: every block Id/(n+1)
        point = MatrixSimplexPoint(
            [np.eye(d, dtype=complex) / (n + 1) for _ in range(n)])
        x0 = point_to_real(point)
    else:
        try:
            with open(args.x0) as fh:
                x0 = np.asarray(json.load(fh), dtype=float)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            print("error: cannot read x0 file: %s" % exc, file=sys.stderr)
            return 2
        if x0.shape != (model.dim,):
            print("error: x0 has %d coordinates, model needs %d"
                  % (x0.size, model.dim), file=sys.stderr)
            return 2
    try:
        config = SimConfig(dt=args.dt, n_steps=args.steps, thin=args.thin,
                           seed=args.seed, burn_in=args.burn_in)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    try:
        summary = simulate(model, x0, config, record=True)
    except StepRejectedError as exc:
        print("simulation failed: %s" % exc, file=sys.stderr)
        if exc.position is not None:
            print("  position: %s" % np.array2string(exc.position),
                  file=sys.stderr)
        if exc.proposal is not None:
            print("  proposal: %s" % np.array2string(exc.proposal),
                  file=sys.stderr)
        return 1
    write_path_csv(summary, args.out, names=_layout_names(n, d))
    print("wrote %d states to %s (rejection fraction %.2e)"
          % (summary.count, args.out, summary.rejection_fraction))
    return 0


def _cmd_sample(args, parser):
    dims = [int(s) for s in args.dims.split(",")]
    if len(dims) < 2:
        parser.error("need at least two dims")
    if any(r < args.d for r in dims):
        parser.error("every dim must be >= d (got d=%d, dims=%s)"
                     % (args.d, dims))
    d = args.d
    n = len(dims) - 1
    rng = np.random.Generator(np.random.Philox(args.seed))
    layout = simplex_layout(n, d)
    with open(args.out, "w", newline="") as fh:
        fh.write("# law: matrix-dirichlet d=%d dims=%s seed=%d\n"
                 % (d, ",".join(str(r) for r in dims), args.seed))
        writer = csv.writer(fh)
        writer.writerow(_layout_names(n, d))
        for _ in range(args.n):
            point = sample_matrix_dirichlet_direct(d, dims, rng)
            row = point_to_real(point)
            writer.writerow(["%.12g" % v for v in row])
    print("wrote %d draws to %s" % (args.n, args.out))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="matrix-dirichlet",
        description="Dirichlet diffusions on simplices of Hermitian "
                    "matrices: verification suites, path simulation, and "
                    "direct sampling.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None,
                   help="points/frames per identity (default per suite)")
    p.add_argument("--out", default=None, help="write the JSON report here")

    p = sub.add_parser("simulate", help="integrate a matrix model")
    p.add_argument("--model", required=True,
                   help="JSON parameter file (schema 1)")
    p.add_argument("--x0", default="auto",
                   help='JSON file of realified coordinates, or "auto" '
                        "for the barycenter")
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV path output")

    p = sub.add_parser("sample", help="draw from the stationary law")
    p.add_argument("--law", required=True, choices=["matrix-dirichlet"])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--dims", required=True,
                   help="comma-separated Wishart degrees d1,..,dk")
    p.add_argument("--n", type=int, required=True, help="number of draws")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV output")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "simulate":
            return _cmd_simulate(args, parser)
        if args.command == "sample":
            return _cmd_sample(args, parser)
    except MatrixDirichletError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    parser.error("unknown command")


if __name__ == "__main__":
    sys.exit(main())
