#!/usr/bin/env python3
"""Perfect transmission through a finite barrier train.

A single barrier cell transmits badly for most energies.  Repeat it
n times and the picture changes: inside every allowed band n-1 sharp
comb resonances appear where sin(n*phi) = 0 and the stack becomes
exactly transparent.  Each such energy is a doubly degenerate periodic
or antiperiodic eigenvalue of the n-cell ring -- this script prints the
resonance energies with their ring flavor, then re-checks |R| directly.

Run:  python3 demos/transmission_resonances.py [--n 6] [--emax 120]
"""

import argparse
import math

import numpy as np

from blochcount import (
    assemble_n_cell,
    build_cell,
    find_resonances,
    n_cell_scattering,
    resonance_vs_periodic,
    scan_zones,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=6, help="number of cells")
    ap.add_argument("--emax", type=float, default=120.0)
    args = ap.parse_args()

    cell = build_cell(1.0, [(0.0, 0.5, 0.0), (0.5, 1.0, 14.0)])
    stack = assemble_n_cell(cell, args.n)
    zt = scan_zones(cell, args.emax + 5.0)

    print(f"barrier cell (v = 14 on half the cell), n = {args.n}\n")

    # coarse |T|^2 sweep to see the combs against the single-cell floor
    print(f"{'E':>8} {'|T1|^2':>9} {'|Tn|^2':>9}")
    for E in np.linspace(2.0, args.emax, 18):
        k = math.sqrt(E)
        one = n_cell_scattering(cell, k)
        many = n_cell_scattering(stack, k)
        print(f"{E:8.2f} {abs(one.T)**2:9.5f} {abs(many.T)**2:9.5f}")

    res = find_resonances(cell, args.n, 0.5, args.emax)
    print(f"\n{len(res.resonances)} resonances below E = {args.emax}"
          f"  (comb mechanism gives n-1 = {args.n - 1} per full band;"
          f" unit-cell transparencies ride along for every n)")
    print(f"{'E':>12} {'origin':>10} {'ring flavor':>12} {'|R_n|':>10}")
    for r in res.resonances:
        flavor = resonance_vs_periodic(cell, args.n, r.energy)
        data = n_cell_scattering(stack, math.sqrt(r.energy))
        print(f"{r.energy:12.6f} {r.origin:>10} {flavor:>12} "
              f"{abs(data.R):10.2e}")

    # sanity: in an open gap nothing transmits perfectly
    gaps = [g for g in zt.open_gaps() if g.gap_index > 0 and g.E_lo > 0]
    if gaps:
        g = gaps[0]
        worst = 0.0
        for E in np.linspace(g.E_lo + 0.05 * (g.E_hi - g.E_lo),
                             g.E_hi - 0.05 * (g.E_hi - g.E_lo), 40):
            data = n_cell_scattering(stack, math.sqrt(E))
            worst = max(worst, abs(data.T) ** 2)
        print(f"\ngap l = {g.gap_index}: max |T|^2 over 40 samples = "
              f"{worst:.3e}  (no resonances inside gaps)")


if __name__ == "__main__":
    main()
