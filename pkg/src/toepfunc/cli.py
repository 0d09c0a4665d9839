"""Command-line front end: solve, bench, spectrum, coeffs.

Exit codes: 0 success, 1 validation error, 2 numerical failure
(non-convergence with --strict, or a solver breakdown).
"""

import argparse
import sys
from dataclasses import fields

import numpy as np

from .bttb import builtin_bttb_function, coefficients2d_to_csv
from .experiments import (ConfigError, ExperimentConfig, bench_table,
                          run_solve, run_spectrum)
from .krylov import REPORT_CSV_HEADER, IndefiniteOperatorError, SolveReport
from .spectrum import (plot_spectrum_svg, write_eigenvalues_csv,
                       write_reports_csv)
from .toeplitz import builtin_wiener_function, coefficients_to_csv

__all__ = ["main"]


def _read_config_file(path) -> dict:
    """Plain key=value file; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line (expected key=value): {raw.strip()!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _config_from_args(args) -> ExperimentConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(_read_config_file(args.config))
    field_names = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - field_names
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    # flags override the file
    for name in field_names:
        flag_val = getattr(args, name, None)
        if flag_val is not None:
            values[name] = flag_val
    config = ExperimentConfig()
    for key, val in values.items():
        if key in ("n", "m", "maxit") and val is not None:
            val = int(val)
        elif key == "tol" and val is not None:
            val = float(val)
        setattr(config, key, val)
    if config.m is not None and config.generator == "builtin1d":
        config.generator = "builtin2d"
    return config


def _print_report(report: SolveReport) -> None:
    m = f" m={report.m}" if report.m is not None else ""
    status = "converged" if report.converged else "NOT converged"
    print(f"{report.method}  precond={report.preconditioner}  n={report.n}{m}  "
          f"iterations={report.iterations}  relres={report.final_relres:.3e}  "
          f"{status}  ({report.seconds:.2f}s)")


def _write_solve_csv(reports, path) -> None:
    with open(path, "w") as fh:
        fh.write(REPORT_CSV_HEADER + "\n")
        for rep in reports:
            fh.write(rep.csv_row() + "\n")


def _cmd_solve(args) -> int:
    config = _config_from_args(args)
    report = run_solve(config)
    _print_report(report)
    if args.out:
        _write_solve_csv([report], args.out)
    if args.strict and not report.converged:
        return 2
    return 0


def _cmd_bench(args) -> int:
    reports = bench_table(args.table, tol=args.tol if args.tol else 1e-7)
    print(REPORT_CSV_HEADER)
    for rep in reports:
        print(rep.csv_row())
    if args.out:
        _write_solve_csv(reports, args.out)
    if args.strict and not all(r.converged for r in reports):
        return 2
    return 0


def _cmd_spectrum(args) -> int:
    config = _config_from_args(args)
    report = run_spectrum(config, epsilon=args.eps)
    print(f"{config.func}  precond={config.precond}  n={config.n}"
          f"{'' if config.m is None else f' m={config.m}'}  eps={args.eps}  "
          f"outliers={report.outlier_count}  "
          f"range=[{report.min_eig:.4g}, {report.max_eig:.4g}]")
    if args.out:
        write_reports_csv([report], args.out)
        base = str(args.out).rsplit(".", 1)[0]
        write_eigenvalues_csv(report, base + "_eigs.csv")
        plot_spectrum_svg(report, base + ".svg")
    return 0


def _cmd_coeffs(args) -> int:
    out = args.out or "coeffs.csv"
    if args.m is not None or args.generator == "builtin2d":
        jmax = args.n - 1 if args.n else 16
        kmax = (args.m or args.n or 16) - 1
        coefficients2d_to_csv(builtin_bttb_function(), jmax, kmax, out)
    else:
        kmax = (args.n or 16) - 1
        coefficients_to_csv(builtin_wiener_function(), kmax, out)
    print(f"wrote {out}")
    return 0


def _add_config_flags(parser) -> None:
    parser.add_argument("--func", help="exp | cos | sinh | cubic | identity | taylor:PATH")
    parser.add_argument("--precond", help="none | strang | optimal | superoptimal "
                                          "(+ -abs) | bccb-optimal(-abs)")
    parser.add_argument("--method", help="cg | minres | gmres")
    parser.add_argument("--generator", help="builtin1d | builtin2d | coeff-file")
    parser.add_argument("--n", type=int, help="dimension (block dimension in 2D)")
    parser.add_argument("--m", type=int, help="inner dimension (2D only)")
    parser.add_argument("--tol", type=float, help="relative residual tolerance")
    parser.add_argument("--maxit", type=int, help="iteration cap")
    parser.add_argument("--coeff-file", dest="coeff_file", help="coefficient CSV")
    parser.add_argument("--config", help="key=value config file (flags override)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toepfunc",
        description="Circulant-preconditioned Krylov solvers for functions of "
                    "Hermitian Toeplitz and block-Toeplitz matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one preconditioned solve")
    _add_config_flags(p_solve)
    p_solve.add_argument("--out", help="write the report as CSV")
    p_solve.add_argument("--strict", action="store_true",
                         help="exit 2 on non-convergence")
    p_solve.set_defaults(handler=_cmd_solve)

    p_bench = sub.add_parser("bench", help="reproduce one iteration-count table")
    p_bench.add_argument("--table", type=int, required=True, choices=range(1, 6))
    p_bench.add_argument("--tol", type=float)
    p_bench.add_argument("--out", help="write all rows as CSV")
    p_bench.add_argument("--strict", action="store_true")
    p_bench.set_defaults(handler=_cmd_bench)

    p_spec = sub.add_parser("spectrum", help="eigenvalue clustering report")
    _add_config_flags(p_spec)
    p_spec.add_argument("--eps", type=float, default=0.1,
                        help="cluster radius around +-1")
    p_spec.add_argument("--out", help="report CSV path (also writes _eigs.csv and .svg)")
    p_spec.set_defaults(handler=_cmd_spectrum)

    p_coef = sub.add_parser("coeffs", help="dump generating-function coefficients")
    p_coef.add_argument("--generator", help="builtin1d | builtin2d")
    p_coef.add_argument("--n", type=int, help="coefficient range")
    p_coef.add_argument("--m", type=int)
    p_coef.add_argument("--out")
    p_coef.set_defaults(handler=_cmd_coeffs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse exits 2 on usage errors; those are validation failures here
        return 0 if err.code in (0, None) else 1
    try:
        return args.handler(args)
    except (ConfigError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except IndefiniteOperatorError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
