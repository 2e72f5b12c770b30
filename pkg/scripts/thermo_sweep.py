#!/usr/bin/env python3
"""Free energy, entropy and specific heat over a temperature range.

At Delta = 0 the table also carries the free-fermion free energy and the
deviation from it.

    python3 scripts/thermo_sweep.py --delta 0 --tmin 0.02 --tmax 20 --points 30 --out thermo.csv
"""
import argparse
import csv
import sys

import numpy as np

from ironface.asymptotics import specific_heat_slope, xx_free_energy
from ironface.nlie import free_energy
from ironface.weights import Regime


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--delta", type=float, default=0.0)
    ap.add_argument("--j", type=float, default=0.0)
    ap.add_argument("--tmin", type=float, default=0.02)
    ap.add_argument("--tmax", type=float, default=20.0)
    ap.add_argument("--points", type=int, default=30)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    regime = Regime.from_delta(args.delta)
    slope = specific_heat_slope(regime.gamma) if regime.is_critical else float("nan")
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["T", "f", "e", "s", "c", "c_over_T_ratio", "f_free_fermion", "f_deviation"])
    sol = None
    # hot to cold, warm-starting each point from the previous one
    for T in np.geomspace(args.tmax, args.tmin, args.points):
        pt, sol = free_energy(1 / T, args.j, args.delta, init=sol)
        ff = xx_free_energy(T) if args.delta == 0 and args.j == 0 else float("nan")
        w.writerow([f"{T:.6g}", f"{pt.f:.12g}", f"{pt.e:.12g}", f"{pt.s:.12g}", f"{pt.c:.12g}",
                    f"{pt.c / T / slope:.6g}", f"{ff:.12g}", f"{pt.f - ff:.3e}"])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
