#!/usr/bin/env python3
"""xi^-1 and kappa across Delta at low temperature and strong Ising coupling.

Delta = 1 has no regular parameterisation and is skipped.

    python3 scripts/phase_scan.py --j 6 --t 0.01 --dmin 0.2 --dmax 3 --points 50 --out scan.csv
"""
import argparse
import sys

from ironface import cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--j", type=float, default=6.0)
    ap.add_argument("--t", type=float, default=0.01)
    ap.add_argument("--dmin", type=float, default=0.2)
    ap.add_argument("--dmax", type=float, default=3.0)
    ap.add_argument("--points", type=int, default=50)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    argv = ["scan", "--j", str(args.j), "--t", str(args.t), "--delta-min", str(args.dmin),
            "--delta-max", str(args.dmax), "--points", str(args.points),
            "--workers", str(args.workers)]
    if args.out:
        argv += ["--out", args.out]
    return cli.main(argv)


if __name__ == "__main__":
    sys.exit(main())
