#!/usr/bin/env python3
"""Walk through the band structure of a piecewise-constant cell.

Builds a barrier cell, scans the discriminant for allowed/forbidden
zones, and prints the zone table next to the quasimomentum staircase.
The printed p(E) column is what every counting bound in this package is
measured against: floor(n*a*p/pi) brackets the n-cell eigenvalue counts.

Run:  python3 demos/band_structure.py [--barrier 20] [--emax 150]
"""

import argparse
import math

import numpy as np

from blochcount import Quasimomentum, build_cell, discriminant, scan_zones


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--barrier", type=float, default=20.0,
                    help="barrier height on the right 40%% of the cell")
    ap.add_argument("--emax", type=float, default=150.0)
    args = ap.parse_args()

    cell = build_cell(1.0, [(0.0, 0.6, 0.0), (0.6, 1.0, args.barrier)])
    zt = scan_zones(cell, args.emax)
    q = Quasimomentum(zt)

    print(f"cell: a = 1, v = 0 on [0, 0.6), v = {args.barrier} on [0.6, 1]")
    print(f"spectrum bottom lambda0 = {zt.lambda0:.6f}\n")

    print("zone table")
    print(f"{'kind':<10} {'E_lo':>12} {'E_hi':>12}  note")
    for z in zt.zones:
        note = ""
        if z.kind == "forbidden":
            note = f"gap l = {z.gap_index}" + ("  (closed: touch)"
                                               if z.is_touch else "")
        lo = "-inf" if math.isinf(z.E_lo) else f"{z.E_lo:.4f}"
        print(f"{z.kind:<10} {lo:>12} {z.E_hi:>12.4f}  {note}")

    print("\ndiscriminant and quasimomentum on a coarse grid")
    print(f"{'E':>9} {'Tr M':>9} {'a*p/pi':>9}  zone")
    for E in np.linspace(zt.lambda0, args.emax - 1.0, 24):
        z = zt.locate(float(E))
        print(f"{E:9.3f} {discriminant(cell, float(E)):9.4f} "
              f"{q.phase(float(E)) / math.pi:9.5f}  {z.kind}")

    # the staircase plateaus at integers on gaps: show the first one
    gaps = [g for g in zt.open_gaps() if g.gap_index > 0]
    if gaps:
        g = gaps[0]
        print(f"\nacross gap l = {g.gap_index} "
              f"[{g.E_lo:.4f}, {g.E_hi:.4f}] the phase is pinned:")
        for E in np.linspace(g.E_lo, g.E_hi, 5):
            print(f"  a*p({E:9.4f}) = {q.phase(float(E)):.12f}"
                  f"  (= {g.gap_index}*pi)")


if __name__ == "__main__":
    main()
