"""Acceptance gate: one test per shipped guarantee, each printing a single
PASS/FAIL line with the measured margin and wall time.  Scales and
tolerances are pinned here on purpose; loosening them is an API break.
"""

import math
import time

import numpy as np
import pytest

from blochcount import (Quasimomentum, assemble_n_cell, build_cell,
                        cell_scattering, cell_transfer, classify_periodic,
                        compose_n, discriminant, find_resonances,
                        n_cell_scattering, resonance_vs_periodic, scan_zones,
                        sl_eigenvalues, BoundaryConditions)
from blochcount.scatter import _extract
from blochcount.verify import (Campaign, check_periodic, check_theorem1,
                               check_theorem2, check_theorem3)


def _line(name: str, ok: bool, detail: str, dt: float) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail} ({dt:.1f}s)",
          flush=True)


def _finish(name, ok, detail, dt, budget):
    _line(name, ok and dt < budget, detail, dt)
    assert ok, detail
    assert dt < budget, f"{name} exceeded {budget}s budget: {dt:.1f}s"


def test_criterion_1_unitarity_and_structure():
    t0 = time.monotonic()
    camp = Campaign(0)
    rng = camp.rng(9001)
    worst_u = worst_d = 0.0
    eye = np.eye(2)
    for _ in range(100):
        cell = camp.random_cell(rng, -25.0, 25.0)
        for k in 0.15 + 7.85 * rng.random(50):
            s = n_cell_scattering(cell, float(k)).s_matrix
            worst_u = max(worst_u, np.abs(s @ s.conj().T - eye).max())
            worst_d = max(worst_d, abs(s[0, 0] - s[1, 1]))
    dt = time.monotonic() - t0
    ok = worst_u < 1e-8 and worst_d < 1e-10
    _finish("criterion 1: unitarity over 100 cells x 50 k", ok,
            f"max |SS*-I| = {worst_u:.2e}, max |s11-s22| = {worst_d:.2e}",
            dt, 5.0)


def test_criterion_2_composition_identity():
    t0 = time.monotonic()
    camp = Campaign(0)
    rng = camp.rng(9002)
    worst = 0.0
    accepted = 0
    while accepted < 200:
        cell = camp.random_cell(rng, -20.0, 20.0)
        k = float(0.3 + 8.0 * rng.random())
        E = k * k
        D = discriminant(cell, E)
        if abs(D) >= 2.0:
            continue
        phi = math.acos(D / 2.0)
        if abs(math.sin(phi)) <= 1e-3:
            continue
        n = int(rng.integers(2, 65))
        T1, R1 = cell_scattering(cell, k)
        Tn, Rn = compose_n(T1, R1, phi, n)
        lam = cell_transfer(cell, E)
        m = np.array([[lam.m11, lam.m12], [lam.m21, lam.m22]])
        mp = np.linalg.matrix_power(m, n)
        inv_T, R_over_T = _extract(mp[0, 0], mp[0, 1], mp[1, 0], mp[1, 1], k)
        Td, Rd = 1.0 / inv_T, R_over_T / inv_T
        # (T, R) has unit 2-norm, so absolute error is relative error
        worst = max(worst, abs(Tn - Td), abs(Rn - Rd))
        accepted += 1
    dt = time.monotonic() - t0
    _finish("criterion 2: composition vs matrix power, 200 draws, n <= 64",
            worst < 1e-9, f"max error = {worst:.2e}", dt, 10.0)


def test_criterion_3_whole_line_counting():
    t0 = time.monotonic()
    rep = check_theorem1(Campaign(0), cells=20, n_list=(1, 2, 4, 8, 16),
                         grid_points=200, oracle_fraction=0.1)
    dt = time.monotonic() - t0
    s = rep.summary()
    _finish("criterion 3: whole-line count brackets + oracle, 20 cells",
            rep.ok, f"{s['pass']} checks passed, {s['fail']} failed", dt,
            180.0)


def test_criterion_4_separated_conditions():
    t0 = time.monotonic()
    alphas = tuple(i * math.pi / 5 for i in range(5))
    betas = tuple(j * math.pi / 5 for j in range(1, 6))
    rep = check_theorem2(Campaign(0), cells=20, n_list=(1, 2, 4),
                         grid_points=60, oracle_instances=3,
                         alphas=alphas, betas=betas)
    dt = time.monotonic() - t0
    s = rep.summary()
    _finish("criterion 4: separated-condition brackets, 5x5 angle grid",
            rep.ok, f"{s['pass']} checks passed, {s['fail']} failed", dt,
            180.0)


def test_criterion_5_periodic_skew():
    t0 = time.monotonic()
    rep = check_periodic(Campaign(0), instances=5)
    dt = time.monotonic() - t0
    s = rep.summary()
    _finish("criterion 5: periodic/skew brackets + FD clustering, 5 instances",
            rep.ok, f"{s['pass']} checks passed, {s['fail']} failed", dt,
            120.0)


def test_criterion_6_comb_resonances_n4():
    t0 = time.monotonic()
    camp = Campaign(0)
    rng = camp.rng(9006)
    cells = [build_cell(1.0, [(0.0, 0.6, 0.0), (0.6, 1.0, 20.0)])]
    cells += [camp.random_cell(rng, 0.0, 18.0, max_segments=3)
              for _ in range(2)]
    n = 4
    checked_bands = checked_gaps = 0
    for cell in cells:
        E_hi = 170.0
        zt = scan_zones(cell, max(E_hi + 30.0,
                                  max(v for _, v in cell.pieces()) + 1.0))
        rs = find_resonances(cell, n, 0.0, E_hi)
        combs = [r for r in rs.resonances if r.origin == "comb"]
        pot = assemble_n_cell(cell, n)
        for r in combs:
            mult, flavor = classify_periodic(pot, r.energy)
            assert mult == "double", r
            assert flavor in ("periodic", "skew")
            assert resonance_vs_periodic(cell, n, r.energy) == flavor
        for lo, hi, m in zt.band_segments():
            if lo <= 0.0 or hi >= E_hi:
                continue
            inside = [r for r in combs if lo < r.energy < hi]
            assert len(inside) == n - 1, (lo, hi, len(inside))
            checked_bands += 1
        for g in zt.open_gaps():
            if g.gap_index == 0 or g.E_hi > E_hi or g.E_hi - g.E_lo < 1e-3:
                continue
            pad = 1e-3 * (g.E_hi - g.E_lo)
            for E in np.linspace(g.E_lo + pad, g.E_hi - pad, 50):
                sd = n_cell_scattering(pot, math.sqrt(E))
                assert abs(sd.R) > 1e-6, (E, abs(sd.R))
            checked_gaps += 1
    dt = time.monotonic() - t0
    ok = checked_bands >= 3 and checked_gaps >= 2
    _finish("criterion 6: n=4 comb structure (3 per interior band)", ok,
            f"{checked_bands} interior bands, {checked_gaps} opaque gaps",
            dt, 60.0)


def test_criterion_7_resonance_density_rate():
    t0 = time.monotonic()
    cell = build_cell(1.0, [(0.0, 0.35, 0.0), (0.35, 0.75, 12.0),
                            (0.75, 1.0, 0.0)])
    E_max = 140.0
    zt = scan_zones(cell, E_max + 25.0)
    q = Quasimomentum(zt)
    p0 = q(0.0)
    grid = np.linspace(0.25, E_max, 400)
    rates = []
    for n in (4, 8, 16, 32):
        rs = find_resonances(cell, n, 0.0, E_max)
        err = max(abs(rs.count_upto(float(E)) / (n * cell.a)
                      - (q(float(E)) - p0) / math.pi) for E in grid)
        rates.append(n * err)
    ok = all(b <= 1.1 * a for a, b in zip(rates, rates[1:]))
    dt = time.monotonic() - t0
    _finish("criterion 7: resonance density rate, n in {4,8,16,32}", ok,
            "n*sup-error = " + ", ".join(f"{r:.3f}" for r in rates), dt,
            120.0)


def test_criterion_8_heterogeneous_splitting():
    t0 = time.monotonic()
    rep = check_theorem3(Campaign(0), instances=20, oracle_instances=5,
                         grid_points=50)
    dt = time.monotonic() - t0
    s = rep.summary()
    _finish("criterion 8: hetero stack count splitting, 20 instances",
            rep.ok, f"{s['pass']} checks passed, {s['fail']} failed", dt,
            120.0)


def test_criterion_9_free_closed_forms():
    t0 = time.monotonic()
    a, n = 1.0, 3
    free = build_cell(a, [(0.0, a, 0.0)])
    zt = scan_zones(free, 160.0)
    q = Quasimomentum(zt)
    worst_p = max(abs(q(E) - math.sqrt(E))
                  for E in (0.7, 4.0, math.pi ** 2, 55.5, 120.0))
    pot = assemble_n_cell(free, n)
    sp = sl_eigenvalues(pot, BoundaryConditions.dirichlet(), 30.0)
    worst_l = max(abs(E - (j * math.pi / (n * a)) ** 2)
                  for j, E in enumerate(sp.energies, start=1))
    worst_s = 0.0
    for E in (0.9, 7.3, 31.0):
        k = math.sqrt(E)
        sd = n_cell_scattering(pot, k)
        worst_s = max(worst_s, abs(sd.T - np.exp(1j * k * n * a)), abs(sd.R))
    ok = worst_p < 1e-9 and worst_l < 1e-9 and worst_s < 1e-9
    dt = time.monotonic() - t0
    _finish("criterion 9: free closed forms", ok,
            f"|p-sqrt(E)| = {worst_p:.1e}, levels = {worst_l:.1e}, "
            f"scatter = {worst_s:.1e}", dt, 1.0)
