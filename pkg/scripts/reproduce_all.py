"""Run every registered report and write one CSV per report plus a summary."""

import argparse
import csv
import pathlib
import time

from lpsections.reports import REPORTS, run_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--only", nargs="*", help="subset of report ids")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ids = args.only or sorted(REPORTS)
    summary = []
    for rid in ids:
        t0 = time.perf_counter()
        rows = run_report(rid)
        elapsed = time.perf_counter() - t0
        with open(out / f"{rid}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["quantity", "quoted", "computed", "relation", "tol", "passed"])
            for r in rows:
                w.writerow([r.quantity, r.quoted, "%.17g" % r.computed, r.relation, r.tol, r.passed])
        failed = [r.quantity for r in rows if not r.passed]
        summary.append((rid, len(rows), len(failed), elapsed))
        print(f"{rid:22s} {len(rows):3d} rows  {len(failed)} failed  {elapsed:6.1f}s  {', '.join(failed)}")
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["report", "rows", "failed", "seconds"])
        w.writerows(summary)


if __name__ == "__main__":
    main()
