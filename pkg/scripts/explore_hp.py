"""Empirical look at h_p(u) for small p: where h_p(n) first exceeds h_p(2).

For each p the script evaluates h_p on integer u = 2..u_max and reports the
smallest n with h_p(n) > h_p(2) (the empirical N(p); blank if none up to
u_max) and whether the sampled values are monotone. Nothing here is
asserted; the output is data.
"""

import argparse
import csv
import sys

import numpy as np

from lpsections.ball_inequality import h_p_detail
from lpsections.constants import constants_at


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, nargs="+", default=[3.0, 4.0, 4.5, 5.0, 6.0, 8.0, 10.0])
    ap.add_argument("--u-max", type=int, default=60)
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args()
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(["p", "h2", "h_inf", "N_empirical", "monotone", "direction", "max_h_over_grid", "argmax_u"])
    for p in args.p:
        us = np.arange(2, args.u_max + 1)
        vals = np.array([h_p_detail(p, float(u)).value for u in us])
        cc = constants_at(p)
        above = np.nonzero(vals[1:] > vals[0])[0]
        n_emp = int(us[1:][above[0]]) if above.size else ""
        d = np.diff(vals)
        if np.all(d >= 0):
            direction = "increasing"
        elif np.all(d <= 0):
            direction = "decreasing"
        else:
            direction = "mixed"
        w.writerow(
            [p, "%.12g" % cc.h2, "%.12g" % cc.h_inf, n_emp, direction != "mixed", direction,
             "%.12g" % vals.max(), int(us[vals.argmax()])]
        )
        fh.flush()
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
