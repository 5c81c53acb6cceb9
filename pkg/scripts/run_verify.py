"""Run every invariant suite on the default configuration and print a compact table.

usage: python scripts/run_verify.py [--suite NAME ...] [--grid-n N]
"""
import argparse
import sys
import time

from shearcst.config import build_config
from shearcst.verify import SUITES, run_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suite", action="append", choices=sorted(SUITES))
    ap.add_argument("--grid-n", type=int)
    args = ap.parse_args(argv)
    cfg = build_config({"grid_n": args.grid_n} if args.grid_n else {})
    failed = 0
    for name in args.suite or SUITES:
        t0 = time.perf_counter()
        rows = run_suite(name, cfg)
        dt = time.perf_counter() - t0
        for r in rows:
            failed += not r.passed
            print(f"{'ok ' if r.passed else 'BAD'} {name:<12} {r.name:<55} {r.residual:9.2e} < {r.tolerance:.0e}")
        print(f"    {name} took {dt:.2f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
