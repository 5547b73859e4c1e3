#!/usr/bin/env python3
"""Finite-N free-energy scan on the sphere, for inspection of the t ~ pi^2 region.

Emits a CSV grid of (1/N^2) log Z over t.  The default grid starts at t=2:
below that the character sum at N=12 needs pair sizes in the hundreds and
the runtime blows up.  Pass --t-min to override.
"""

import argparse
import csv
import math
import sys
import time

from ym2.partition_function import sphere_free_energy


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=12)
    ap.add_argument("--t-min", type=float, default=2.0)
    ap.add_argument("--t-max", type=float, default=20.0)
    ap.add_argument("--coarse", type=int, default=18, help="points on the coarse grid")
    ap.add_argument("--fine", type=int, default=12, help="extra points near t = pi^2")
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--output", default=None)
    args = ap.parse_args()

    ts = [args.t_min + (args.t_max - args.t_min) * i / args.coarse for i in range(args.coarse + 1)]
    pi2 = math.pi**2
    if args.t_min < pi2 < args.t_max:
        ts += [pi2 + (j - args.fine / 2) * 0.15 for j in range(args.fine + 1)]
    ts = sorted(set(round(t, 6) for t in ts))

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["t", "free_energy", "seconds"])
    for t in ts:
        t0 = time.perf_counter()
        f = sphere_free_energy(args.N, t, args.tol)
        writer.writerow([t, repr(f), f"{time.perf_counter() - t0:.2f}"])
        out.flush()
    if args.output:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
