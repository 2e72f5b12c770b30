#!/usr/bin/env python3
"""Correlation length and wave-vector against temperature for several anisotropies.

Reproduces the layout of a temperature sweep of xi^-1 and kappa at fixed J,
with the low-temperature closed forms alongside where they apply.

    python3 scripts/correlation_sweep.py --deltas 0.85 1.5 --j 0.1 --out corr.csv
"""
import argparse
import csv
import sys

import numpy as np

from ironface.asymptotics import kappa_from_lowT, xi_inverse_limit
from ironface.errors import IronfaceError
from ironface.nlie import correlation
from ironface.weights import Regime


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--deltas", type=float, nargs="+", default=[0.85, 1.5])
    ap.add_argument("--j", type=float, default=0.1)
    ap.add_argument("--tmin", type=float, default=0.01)
    ap.add_argument("--tmax", type=float, default=2.0)
    ap.add_argument("--points", type=int, default=40)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["delta", "T", "xi_inv", "kappa_over_pi", "beta_over_xi",
                "beta_over_xi_lowT", "kappa_over_pi_lowT", "status"])
    for delta in args.deltas:
        regime = Regime.from_delta(delta)
        crit = regime.is_critical
        pred_xi = xi_inverse_limit(regime.gamma) if crit and args.j == 0 else float("nan")
        pred_k = kappa_from_lowT(regime.gamma, args.j) / np.pi if crit else float("nan")
        for T in np.geomspace(args.tmax, args.tmin, args.points):
            try:
                pt = correlation(1 / T, args.j, regime=regime)
            except IronfaceError as exc:
                print(f"delta={delta} T={T:.4g}: {exc}", file=sys.stderr)
                w.writerow([delta, f"{T:.6g}"] + ["nan"] * 5 + ["failed"])
                continue
            w.writerow([delta, f"{T:.6g}", f"{pt.xi_inv:.10g}", f"{pt.kappa_over_pi:.10g}",
                        f"{pt.beta_over_xi:.10g}", f"{pred_xi:.10g}", f"{pred_k:.10g}", "ok"])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
