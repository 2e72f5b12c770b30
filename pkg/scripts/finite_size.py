#!/usr/bin/env python3
"""Central charge and scaling dimension from exact low levels of the three-spin chain.

    python3 scripts/finite_size.py --delta 0 --sizes 8 10 12 14 16
"""
import argparse

import numpy as np

from ironface.asymptotics import exponent_h
from ironface.spectra import finite_size_scan
from ironface.weights import Regime


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--delta", type=float, default=0.0)
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14])
    args = ap.parse_args(argv)

    res = finite_size_scan(args.sizes, args.delta)
    h_pred = exponent_h(0, 0, np.pi / 2, Regime.from_delta(args.delta).gamma)[0]
    print(f"velocity        {res.velocity:.6f}")
    print(f"e_inf           {res.e_inf:.8f}")
    print(f"central charge  {res.c_estimate:.4f}  (expected 1)")
    print(f"{'L':>4} {'E0':>14} {'gap':>12} {'h':>8}  (expected {h_pred:.4f})")
    for L, e, g, h in zip(res.sizes, res.ground_energies, res.gaps, res.h_estimates):
        print(f"{L:>4} {e:>14.8f} {g:>12.8f} {h:>8.4f}")


if __name__ == "__main__":
    main()
