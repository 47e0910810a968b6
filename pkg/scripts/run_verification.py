#!/usr/bin/env python3
"""Sweep the dual-route Haar-functional checks and print a summary table.

Each theorem row compares the phase-averaged weighted operator trace
against the closed-form measure for every monomial up to --max-degree.
Exit status is nonzero when any comparison misses its tolerance.
"""
from __future__ import annotations

import argparse
import sys
import time

from qhaar import QContext, VerifyConfig, monomials, verify


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=float, nargs="+", default=[0.3, 0.5, 0.8])
    ap.add_argument("--tau", type=float, default=0.4)
    ap.add_argument("--sigma", type=float, default=1.5)
    ap.add_argument("--trunc-n", type=int, default=160)
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--tol", type=float, default=1e-7)
    ap.add_argument(
        "--theorems",
        nargs="+",
        default=["thm4", "thm5", "thm6", "gamma"],
        choices=["thm4", "thm5", "thm6", "gamma"],
    )
    ap.add_argument("--rows", action="store_true", help="print every polynomial row")
    return ap.parse_args()


def main() -> int:
    args = parse_args()
    failures = 0
    print(
        f"{'q':>5}  {'theorem':7}  {'max_rel_err':>12}  {'status':6}  {'wall_s':>7}"
    )
    for q in args.q:
        cfg = VerifyConfig(
            ctx=QContext(q),
            tau=args.tau,
            sigma=args.sigma,
            N=args.trunc_n,
            poly_set=monomials(args.max_degree),
            tol=args.tol,
        )
        for theorem in args.theorems:
            t0 = time.perf_counter()
            report = verify(theorem, cfg)
            wall = time.perf_counter() - t0
            status = "ok" if report.all_passed else "FAIL"
            print(
                f"{q:>5g}  {theorem:7}  {report.max_rel_err:>12.3e}  {status:6}  {wall:>7.2f}"
            )
            if args.rows or not report.all_passed:
                for row in report.rows:
                    mark = "" if row.passed else "   <-- miss"
                    print(
                        f"        {row.label:10} trace={row.trace_side:+.12e} "
                        f"measure={row.measure_side:+.12e} rel={row.rel_err:.3e}{mark}"
                    )
            if not report.all_passed:
                failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
