"""Command-line entry point.

Subcommands:
  gen     write a random validated instance file
  verify  run all checks on an instance file, write a JSON report
  golden  reproduce the embedded 4-vertex example bit-exact
  bench   closed-form distance inverse vs dense inversion (CSV)

Exit codes: 0 success, 1 mathematical check failure, 2 usage error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import kernels
from .errors import MwspecError
from .golden import run_golden
from .linalg import Tolerance
from .model import (
    WeightProfile,
    instance_hash,
    parse_instance,
    random_instance,
    serialize_instance,
)
from .operators import build_distance_matrix, distance_inverse_closed_form
from .verifier import verify_instance

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _tolerance_from(args) -> Tolerance:
    return Tolerance(
        rel_residual=args.rel_residual,
        eig_zero=args.eig_zero,
        nonzero_floor=args.nonzero_floor,
    )


def cmd_gen(args) -> int:
    if args.n < 2:
        print("error: n must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    if args.s < 1:
        print("error: s must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        profile = WeightProfile(args.weight_lo, args.weight_hi)
        inst = random_instance(
            args.n, args.s, args.seed, args.extra_edges, profile,
            rational=(args.scalar_kind == "rational"),
        )
    except MwspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = serialize_instance(inst)
    try:
        _atomic_write(args.out, text)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(instance_hash(inst))
    return EXIT_OK


def _parse_corrupt(spec: str):
    try:
        i, j, factor = spec.split(",")
        return int(i), int(j), float(factor)
    except ValueError:
        return None


def cmd_verify(args) -> int:
    try:
        with open(args.input) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        inst = parse_instance(text)
        tol = _tolerance_from(args)
    except (MwspecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    corrupt = None
    if args.corrupt_d:
        corrupt = _parse_corrupt(args.corrupt_d)
        if corrupt is None:
            print("error: --corrupt-d expects 'i,j,factor'", file=sys.stderr)
            return EXIT_USAGE
    mode = args.mode
    if mode is None:
        mode = "both" if inst.tree.is_exact and inst.graph.is_exact else "float"
    betas = args.beta if args.beta else [0.0, 0.5, 1.0, 10.0]
    report = verify_instance(inst, betas, tol, kernel_mode=mode, corrupt=corrupt)
    if args.out:
        try:
            _atomic_write(args.out, json.dumps(report.to_json(), indent=2))
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
    summary = report.summary
    if report.ok:
        print(f"passed: all ({summary['passed']} checks, "
              f"{summary['skipped']} skipped, {summary['warnings']} warnings)")
        return EXIT_OK
    failing = sorted({c.check_id for c in report.checks
                      if not c.passed and not c.skipped and not c.warning})
    print(f"FAILED: {summary['failed']} checks: {', '.join(failing)}")
    return EXIT_CHECK_FAILED


def cmd_golden(args) -> int:
    result = run_golden(args.mode)
    if result.ok:
        print(f"golden: ok (mode={args.mode})")
        return EXIT_OK
    for line in result.mismatches:
        print(f"golden mismatch: {line}")
    return EXIT_CHECK_FAILED


def _parse_sizes(spec: str) -> list[tuple[int, int]]:
    sizes = []
    for item in spec.split(","):
        n_str, _, s_str = item.strip().partition("x")
        sizes.append((int(n_str), int(s_str)))
    return sizes


def cmd_bench(args) -> int:
    from .model import random_tree

    try:
        sizes = _parse_sizes(args.sizes)
        if any(n < 2 or s < 1 for n, s in sizes):
            raise ValueError("sizes must have n >= 2 and s >= 1")
    except ValueError as exc:
        print(f"error: bad --sizes: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = ["n,s,t_closed_form,t_dense,speedup,max_rel_err"]
    for n, s in sizes:
        tree = random_tree(n, s, args.seed)
        d = build_distance_matrix(tree).array
        t0 = time.perf_counter()
        x_cf = distance_inverse_closed_form(tree).array
        t_cf = time.perf_counter() - t0
        t0 = time.perf_counter()
        x_dense = np.linalg.inv(d)
        t_dense = time.perf_counter() - t0
        rel = float(np.abs(x_cf - x_dense).max() / np.abs(x_cf).max())
        status = "" if rel <= 1e-8 else ",INVALID"
        rows.append(f"{n},{s},{t_cf:.6f},{t_dense:.6f},"
                    f"{t_dense / max(t_cf, 1e-12):.3f},{rel:.3e}{status}")
    table = "\n".join(rows) + "\n"
    if args.out:
        try:
            _atomic_write(args.out, table)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(table)
    if args.kernel_compare:
        _kernel_compare(sizes, args.seed)
    return EXIT_OK


def _kernel_compare(sizes, seed):
    """Distance-fill kernel: numba fast path vs pure-numpy fallback."""
    from .model import random_tree
    from .operators import _edge_arrays

    print("\nkernel comparison (distance fill):")
    print("n,s,t_numba,t_numpy,speedup,max_abs_diff")
    for n, s in sizes:
        tree = random_tree(n, s, seed)
        uv, weights = _edge_arrays(tree)
        indptr, nbr, eid = kernels.build_csr(n, uv)
        if kernels.NUMBA_ENABLED:
            kernels._distance_fill_numba(indptr, nbr, eid, weights, n, s)  # warm up
            t0 = time.perf_counter()
            a = kernels._distance_fill_numba(indptr, nbr, eid, weights, n, s)
            t_numba = time.perf_counter() - t0
        else:
            a, t_numba = None, float("nan")
        t0 = time.perf_counter()
        b = kernels._distance_fill_numpy(indptr, nbr, eid, weights, n, s)
        t_numpy = time.perf_counter() - t0
        diff = float(np.abs(a - b).max()) if a is not None else float("nan")
        print(f"{n},{s},{t_numba:.6f},{t_numpy:.6f},"
              f"{t_numpy / max(t_numba, 1e-12):.3f},{diff:.3e}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwspec",
        description="Matrix-weighted tree distance matrices and their "
                    "Laplacian-perturbed inverses",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--s", type=int, default=2)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--extra-edges", type=int, default=0)
    p_gen.add_argument("--weight-lo", type=float, default=0.1)
    p_gen.add_argument("--weight-hi", type=float, default=10.0)
    p_gen.add_argument("--scalar-kind", choices=["float", "rational"],
                       default="float")
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_verify = sub.add_parser("verify", help="verify an instance file")
    p_verify.add_argument("--in", dest="input", required=True)
    p_verify.add_argument("--out")
    p_verify.add_argument("--beta", type=float, action="append", default=None)
    p_verify.add_argument("--mode", choices=["float", "exact", "both"],
                          default=None)
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument("--rel-residual", type=float, default=1e-8)
    p_verify.add_argument("--eig-zero", type=float, default=1e-9)
    p_verify.add_argument("--nonzero-floor", type=float, default=1e-10)
    p_verify.add_argument("--corrupt-d", default=None, metavar="i,j,factor",
                          help="negative-control knob: scale one entry of D")
    p_verify.set_defaults(func=cmd_verify)

    p_golden = sub.add_parser("golden", help="reproduce the embedded example")
    p_golden.add_argument("--mode", choices=["float", "exact", "both"],
                          default="both")
    p_golden.set_defaults(func=cmd_golden)

    p_bench = sub.add_parser(
        "bench", help="closed-form distance inverse vs dense inversion")
    p_bench.add_argument("--sizes", default="50x2,100x2,200x3,150x4")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out")
    p_bench.add_argument("--kernel-compare", action="store_true",
                         help="also time the numba kernel against the "
                              "pure-numpy fallback")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
