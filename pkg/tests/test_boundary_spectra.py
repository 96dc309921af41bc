import math

import numpy as np
import pytest

from blochcount import (BoundaryConditions, assemble_n_cell, build_cell,
                        classify_periodic, periodic_count,
                        periodic_eigenvalues, scan_zones, sl_count,
                        sl_eigenvalues)

PI2 = math.pi ** 2


def free(a=1.0):
    return build_cell(a, [(0.0, a, 0.0)])


def kp_cell():
    return build_cell(1.0, [(0.0, 0.6, 0.0), (0.6, 1.0, 20.0)])


def test_bc_validation_and_presets():
    d = BoundaryConditions.dirichlet()
    assert (d.alpha, d.beta) == (0.0, math.pi)
    n = BoundaryConditions.neumann()
    assert n.alpha == n.beta == math.pi / 2
    with pytest.raises(ValueError):
        BoundaryConditions(-0.1, math.pi / 2)
    with pytest.raises(ValueError):
        BoundaryConditions(math.pi, math.pi / 2)  # alpha = pi excluded
    with pytest.raises(ValueError):
        BoundaryConditions(0.0, 0.0)  # beta = 0 excluded


def test_free_dirichlet_counts_and_levels():
    bc = BoundaryConditions.dirichlet()
    # eigenvalues (j*pi/L)^2, j = 1, 2, ...
    assert sl_count(free(), bc, (3.5 * math.pi) ** 2) == 3
    assert sl_count(free(), bc, 0.5 * PI2) == 0
    assert sl_count(free(), bc, PI2 + 1e-9) == 1  # closed count at the level

    sp = sl_eigenvalues(free(), bc, 50.0)
    assert len(sp.energies) == 2
    assert sp.energies[0] == pytest.approx(PI2, abs=1e-8)
    assert sp.energies[1] == pytest.approx(4 * PI2, abs=1e-8)
    assert max(abs(r) for r in sp.residuals) < 1e-7


def test_free_neumann_counts():
    bc = BoundaryConditions.neumann()
    # eigenvalues (j*pi/L)^2, j = 0, 1, ...
    assert sl_count(free(), bc, -1e-9) == 0
    assert sl_count(free(), bc, 1e-9) == 1
    assert sl_count(free(), bc, (2.5 * math.pi) ** 2) == 3


def test_robin_bound_state_below_zero():
    # alpha in ]pi/2, pi[ attracts at the left end: the free interval
    # operator gains an eigenvalue near -cot(alpha)^2 when long enough
    bc = BoundaryConditions(3 * math.pi / 4, math.pi)  # cot = -1
    pot = free(30.0)
    assert sl_count(pot, bc, -1e-6) == 1
    sp = sl_eigenvalues(pot, bc, -1e-6)
    assert sp.energies[0] == pytest.approx(-1.0, abs=1e-6)


def test_count_is_monotone_in_energy_and_bc():
    pot = assemble_n_cell(kp_cell(), 3)
    bcd = BoundaryConditions.dirichlet()
    grid = np.linspace(-5.0, 80.0, 60)
    counts = [sl_count(pot, bcd, E) for E in grid]
    assert all(b >= a for a, b in zip(counts, counts[1:]))
    # Dirichlet is the stiffest condition: any other (alpha, beta) counts
    # at least as many states at the same energy
    bcn = BoundaryConditions.neumann()
    bcr = BoundaryConditions(0.3, 2.0)
    for E in (0.0, 20.0, 55.0):
        cd = sl_count(pot, bcd, E)
        assert sl_count(pot, bcn, E) >= cd
        assert sl_count(pot, bcr, E) >= cd


def test_free_ring_counts():
    # circle of length 1: periodic levels (2 pi j)^2 (j >= 1 double),
    # antiperiodic levels ((2j+1) pi)^2, all double
    lam = 4.1 * PI2
    assert periodic_count(free(), "periodic", lam) == 3
    assert periodic_count(free(), "skew", lam) == 2

    sp = periodic_eigenvalues(free(), "periodic", 50.0)
    assert sp.entries[0][0] == pytest.approx(0.0, abs=1e-8)
    assert sp.entries[0][1] == 1
    assert sp.entries[1][0] == pytest.approx(4 * PI2, rel=1e-6)
    assert sp.entries[1][1] == 2
    assert sp.total == 3

    sk = periodic_eigenvalues(free(), "skew", 50.0)
    assert sk.entries[0][0] == pytest.approx(PI2, rel=1e-6)
    assert sk.entries[0][1] == 2
    assert sk.total == 2


def test_periodic_counts_on_n_cells():
    cell = kp_cell()
    for n in (1, 2, 4):
        pot = assemble_n_cell(cell, n)
        for lam in (10.0, 40.0, 95.0):
            c = periodic_count(pot, "periodic", lam)
            s = periodic_count(pot, "skew", lam)
            total = periodic_eigenvalues(pot, "periodic", lam).total
            assert c == total
            assert abs(c - s) <= 2  # closures interlace band by band
            assert c + s >= 0


def test_classify_periodic_cases():
    cell = kp_cell()
    zt = scan_zones(cell, 160.0)
    lam0 = zt.lambda0
    # below the spectrum
    assert classify_periodic(cell, lam0 - 1.0) == ("none", None)
    # bottom of the spectrum: simple periodic eigenvalue
    assert classify_periodic(cell, lam0) == ("simple", "periodic")
    # an open gap edge: simple, flavor set by the gap ordinal (n = 1)
    g = [z for z in zt.open_gaps() if z.gap_index > 0][0]
    mult, flavor = classify_periodic(cell, g.E_lo)
    assert mult == "simple"
    assert flavor == ("skew" if g.gap_index % 2 == 1 else "periodic")
    # strictly inside that gap: nothing
    assert classify_periodic(cell, 0.5 * (g.E_lo + g.E_hi)) == ("none", None)
    # a band-interior comb point of the 2-cell stack: double eigenvalue
    pot = assemble_n_cell(cell, 2)
    sp = periodic_eigenvalues(pot, "skew", 60.0)
    doubles = [E for E, m in sp.entries if m == 2]
    assert doubles
    mult, flavor = classify_periodic(pot, doubles[0])
    assert (mult, flavor) == ("double", "skew")


def test_dirichlet_eigenvalues_have_small_residuals():
    pot = assemble_n_cell(kp_cell(), 2)
    sp = sl_eigenvalues(pot, BoundaryConditions(0.8, 1.9), 70.0)
    assert len(sp.energies) >= 3
    assert max(abs(r) for r in sp.residuals) < 1e-6
    assert all(b > a for a, b in zip(sp.energies, sp.energies[1:]))
