import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochcount import (BandEdge, assemble_hetero, assemble_n_cell,
                        build_cell, cell_scattering, compose_n,
                        count_bound_states, discriminant, find_resonances,
                        locate_bound_states, n_cell_scattering,
                        resonance_vs_periodic, scan_zones)


def barrier(v=10.0, w=0.7):
    return build_cell(w, [(0.0, w, v)])


def test_free_cell_is_transparent():
    free = build_cell(1.0, [(0.0, 1.0, 0.0)])
    for E in (0.5, 4.0, 30.0):
        k = math.sqrt(E)
        sd = n_cell_scattering(free, k)
        assert abs(sd.T - cmath.exp(1j * k * 1.0)) < 1e-12
        assert abs(sd.R) < 1e-12
        assert abs(sd.t - 1.0) < 1e-12  # physical transmission: plane wave


def test_square_barrier_closed_form():
    # |T|^2 = [1 + v^2 sinh^2(kap w) / (4E(v-E))]^-1 below the top,
    # sin/(E-v) above; frozen values from that formula
    sd = n_cell_scattering(barrier(), 2.0)  # E = 4
    assert abs(sd.T) ** 2 == pytest.approx(0.117334297963557, rel=1e-12)
    sd = n_cell_scattering(barrier(), 4.0)  # E = 16
    assert abs(sd.T) ** 2 == pytest.approx(0.796771331461296, rel=1e-12)


def test_unitarity_single_and_multi():
    cell = build_cell(1.0, [(0.0, 0.3, -6.0), (0.3, 0.8, 14.0),
                            (0.8, 1.0, 1.5)])
    for n in (1, 3, 17):
        pot = assemble_n_cell(cell, n)
        for E in np.linspace(0.2, 60.0, 40):
            sd = n_cell_scattering(pot, math.sqrt(E))
            assert sd.unitarity_defect() < 1e-10, (n, E)


def test_s_matrix_is_unitary():
    cell = build_cell(1.0, [(0.0, 0.5, 7.0), (0.5, 1.0, -2.0)])
    pot = assemble_n_cell(cell, 5)
    for E in (1.7, 9.4, 33.0):
        s = n_cell_scattering(pot, math.sqrt(E)).s_matrix
        assert np.linalg.norm(s @ s.conj().T - np.eye(2)) < 1e-9


def test_compose_matches_direct_product():
    cell = build_cell(1.0, [(0.0, 0.4, 3.0), (0.4, 1.0, -5.0)])
    E = 23.6  # interior of the second band for this cell
    k = math.sqrt(E)
    T1, R1 = cell_scattering(cell, k)
    D = discriminant(cell, E)
    assert abs(D) < 2.0  # inside a band for this window
    phi = math.acos(D / 2.0)
    for n in (2, 5, 16, 64):
        Tn, Rn = compose_n(T1, R1, phi, n)
        sd = n_cell_scattering(assemble_n_cell(cell, n), k)
        assert abs(Tn - sd.T) < 1e-9 * max(1.0, abs(Tn))
        assert abs(Rn - sd.R) < 1e-9


def test_compose_raises_at_band_edge():
    with pytest.raises(BandEdge):
        compose_n(0.5 + 0.1j, 0.1, 1e-9, 4)
    with pytest.raises(ValueError):
        compose_n(0.5, 0.1, 0.3, 0)


def test_hetero_scattering_unitary():
    pot = assemble_hetero([
        (0.0, 1.0, [(0.0, 0.5, 11.0), (0.5, 1.0, 0.0)]),
        (1.0, 2.5, [(1.0, 2.5, -4.0)]),
        (2.5, 3.0, [(2.5, 3.0, 25.0)]),
    ])
    for E in (0.9, 6.0, 31.5):
        sd = n_cell_scattering(pot, math.sqrt(E))
        assert sd.unitarity_defect() < 1e-10
        assert sd.L == 3.0


def test_bound_state_location_against_transcendental():
    well = build_cell(1.0, [(0.0, 1.0, -25.0)])
    bs = locate_bound_states(well)
    frozen = [-20.0670656857441, -6.93163126978465]
    assert len(bs.energies) == 2
    for got, exp in zip(bs.energies, frozen):
        assert got == pytest.approx(exp, abs=5e-10)
    assert count_bound_states(well) == 2
    assert count_bound_states(well, -10.0) == 1
    with pytest.raises(ValueError):
        count_bound_states(well, 1.0)


def test_comb_resonance_count_and_parity():
    cell = build_cell(1.0, [(0.0, 0.6, 0.0), (0.6, 1.0, 20.0)])
    n = 4
    zt = scan_zones(cell, 200.0)
    rs = find_resonances(cell, n, 0.0, 180.0)
    assert not rs.all_pass
    # every resonance really is transparent
    for r in rs.resonances:
        k = math.sqrt(r.energy)
        sd = n_cell_scattering(assemble_n_cell(cell, n), k)
        assert abs(sd.R) < 1e-6
    # comb members alternate between the two closure flavors
    combs = [r for r in rs.resonances if r.origin == "comb"]
    for j, r in enumerate(combs[:6]):
        flavor = resonance_vs_periodic(cell, n, r.energy)
        assert flavor in ("periodic", "skew")
    # interior of each full band holds exactly n-1 comb members
    full_bands = [(lo, hi) for lo, hi, m in zt.band_segments() if hi < 180.0]
    for lo, hi in full_bands:
        inside = [r for r in combs if lo < r.energy < hi]
        assert len(inside) == n - 1, (lo, hi)


def test_free_cell_resonances_all_pass():
    free = build_cell(2.0, [(0.0, 2.0, 0.0)])
    rs = find_resonances(free, 3, 0.0, 50.0)
    assert rs.all_pass
    assert rs.resonances == ()
    with pytest.raises(ValueError):
        rs.count_upto(10.0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-30, 30, allow_nan=False), min_size=1, max_size=3),
       st.floats(0.3, 8.0), st.integers(1, 6))
def test_unitarity_property(values, k, n):
    m = len(values)
    segs = [(i / m, (i + 1) / m, values[i]) for i in range(m)]
    pot = assemble_n_cell(build_cell(1.0, segs), n)
    sd = n_cell_scattering(pot, k)
    assert sd.unitarity_defect() < 1e-8
