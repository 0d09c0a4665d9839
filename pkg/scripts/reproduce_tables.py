#!/usr/bin/env python3
"""Reproduce the five iteration-count tables and write one CSV per table.

Usage:
    python3 scripts/reproduce_tables.py [--tables 1 2 5] [--out-dir results]
"""

import argparse
import pathlib

from toepfunc.experiments import bench_table
from toepfunc.krylov import REPORT_CSV_HEADER


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tables", type=int, nargs="+",
                        default=[1, 2, 3, 4, 5], choices=range(1, 6))
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--tol", type=float, default=1e-7)
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for table_id in args.tables:
        reports = bench_table(table_id, tol=args.tol)
        path = out_dir / f"table{table_id}.csv"
        with open(path, "w") as fh:
            fh.write(REPORT_CSV_HEADER + "\n")
            for rep in reports:
                fh.write(rep.csv_row() + "\n")
        print(f"table {table_id}: {len(reports)} rows -> {path}")
        for rep in reports:
            size = f"n={rep.n}" if rep.m is None else f"(n,m)=({rep.n},{rep.m})"
            print(f"  {rep.method:>6}  {rep.preconditioner:<18} {size:<16} "
                  f"{rep.iterations:>5} iterations")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
