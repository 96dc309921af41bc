#!/usr/bin/env python3
"""The quasimomentum staircase as an exact eigenvalue-counting device.

For an array of n identical cells the integer B(E) = floor(n*a*p(E)/pi)
pins the counting functions down to one unit:

    whole line:            |N(E) - B(E)| <= 1
    separated conditions:  N(E) is within a case-dependent shift of B(E)

This script builds a well cell, sweeps E through the negative axis for
several n, and prints the staircase next to the actual counts so the
brackets can be read off line by line.  No inequality is assumed: each
row is checked and flagged if it ever failed.

Run:  python3 demos/counting_bounds.py [--depth 30] [--rows 14]
"""

import argparse
import math

import numpy as np

from blochcount import (
    BoundaryConditions,
    Quasimomentum,
    assemble_n_cell,
    build_cell,
    count_bound_states,
    scan_zones,
    sl_count,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--depth", type=float, default=30.0, help="well depth")
    ap.add_argument("--rows", type=int, default=14)
    args = ap.parse_args()

    cell = build_cell(1.0, [(0.0, 0.5, -args.depth), (0.5, 1.0, 0.0)])
    zt = scan_zones(cell, 5.0)
    q = Quasimomentum(zt)
    dirichlet = BoundaryConditions.dirichlet()
    neumann = BoundaryConditions.neumann()

    print(f"well cell: v = -{args.depth} on half the cell, "
          f"lambda0 = {zt.lambda0:.6f}\n")

    for n in (2, 4, 8):
        pot = assemble_n_cell(cell, n)
        print(f"n = {n} cells")
        print(f"{'E':>10} {'B':>4} {'N_line':>7} {'N_dir':>6} {'N_neu':>6}")
        violations = 0
        for E in np.linspace(zt.lambda0 - 1.0, -1e-6, args.rows):
            E = float(E)
            B = math.floor(n * q.phase(E) / math.pi + 1e-9)
            N = count_bound_states(pot, E)
            Nd = sl_count(pot, dirichlet, E)
            Nn = sl_count(pot, neumann, E)
            mark = ""
            if abs(N - B) > 1:
                mark = "  <-- bracket violated?!"
                violations += 1
            print(f"{E:10.4f} {B:4d} {N:7d} {Nd:6d} {Nn:6d}{mark}")
        total = count_bound_states(pot, 0.0)
        print(f"total bound states: {total}"
              + ("" if violations == 0 else f"  ({violations} violations!)")
              + "\n")

    # Dirichlet is the stiffest separated condition: its count never
    # exceeds any other choice of (alpha, beta) at the same energy
    n = 4
    pot = assemble_n_cell(cell, n)
    E = -0.5 * args.depth
    print(f"separated-condition counts at E = {E} for n = {n}:")
    for alpha, beta in ((0.0, math.pi), (math.pi / 2, math.pi / 2),
                        (math.pi / 4, 3 * math.pi / 4),
                        (3 * math.pi / 4, math.pi / 4)):
        bc = BoundaryConditions(alpha, beta)
        print(f"  alpha = {alpha:7.4f}, beta = {beta:7.4f}: "
              f"{sl_count(pot, bc, E)}")


if __name__ == "__main__":
    main()
