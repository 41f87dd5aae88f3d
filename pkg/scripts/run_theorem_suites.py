#!/usr/bin/env python3
"""Run every verification suite and write their reports."""

import argparse
import sys

from addcomb.search import run_suite

SUITES = ["vosper", "dim_bound", "3k4", "prop23_variant"]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="reports")
    ap.add_argument("--suites", default=",".join(SUITES))
    args = ap.parse_args()
    findings = 0
    for name in args.suites.split(","):
        report = run_suite(name)
        path = report.write(args.out)
        print(f"{name}: examined {report.classes_examined}, "
              f"findings {len(report.counterexamples)}, "
              f"{report.wall_time:.1f}s -> {path}")
        for note in report.notes:
            print(f"  {note}")
        findings += len(report.counterexamples)
    return 0 if findings == 0 else 2


if __name__ == "__main__":
    sys.exit(main())
