import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochcount import (CellPotential, HeteroPotential, NCellPotential,
                        PotentialError, assemble_hetero, assemble_n_cell,
                        build_cell, load_potential, refine, save_potential,
                        support)
from blochcount.potential import iter_pieces


def kp_cell():
    return build_cell(1.0, [(0.0, 0.5, 0.0), (0.5, 1.0, 8.0)])


def test_build_cell_basic():
    c = kp_cell()
    assert c.a == 1.0
    assert c.evaluate(0.25) == 0.0
    assert c.evaluate(0.75) == 8.0
    # half-open pieces: the value at an interior breakpoint belongs to the
    # piece on the right, and the last piece is closed at a
    assert c.evaluate(0.5) == 8.0
    assert c.evaluate(1.0) == 8.0
    # outside the cell the potential is zero
    assert c.evaluate(-0.1) == 0.0
    assert c.evaluate(1.0001) == 0.0


def test_build_cell_rejects_bad_segments():
    with pytest.raises(PotentialError):
        build_cell(1.0, [(0.0, 0.4, 1.0), (0.5, 1.0, 2.0)])  # gap
    with pytest.raises(PotentialError):
        build_cell(1.0, [(0.0, 0.6, 1.0), (0.5, 1.0, 2.0)])  # overlap
    with pytest.raises(PotentialError):
        build_cell(1.0, [(0.0, 1.0, math.nan)])
    with pytest.raises(PotentialError):
        build_cell(1.0, [(0.0, 1.0, math.inf)])
    with pytest.raises(PotentialError):
        build_cell(-1.0, [(0.0, 1.0, 1.0)])


def test_n_cell_repeats_values():
    pot = assemble_n_cell(kp_cell(), 3)
    assert isinstance(pot, NCellPotential)
    for j in range(3):
        assert pot.evaluate(j + 0.25) == 0.0
        assert pot.evaluate(j + 0.75) == 8.0
    assert pot.length == 3.0
    assert pot.evaluate(3.2) == 0.0


def test_hetero_from_placed_cells():
    h = assemble_hetero([
        (0.0, 1.0, [(0.0, 0.5, 0.0), (0.5, 1.0, 8.0)]),
        (1.0, 3.0, [(1.0, 3.0, -3.0)]),
    ])
    assert isinstance(h, HeteroPotential)
    lo, hi = support(h)
    assert (lo, hi) == (0.0, 3.0)
    assert h.evaluate(0.75) == 8.0
    assert h.evaluate(2.5) == -3.0
    # zero-width cells and out-of-order input are rejected / sorted
    with pytest.raises(PotentialError):
        assemble_hetero([(0.0, 0.0, [(0.0, 0.0, 1.0)])])


def test_refine_preserves_profile():
    c = kp_cell()
    r = refine(c, 4)
    assert len(r.segments) == 8
    for x in [0.01, 0.3, 0.5, 0.77, 0.99]:
        assert r.evaluate(x) == c.evaluate(x)


def test_iter_pieces_defaults_to_support():
    c = kp_cell()
    got = list(iter_pieces(c))
    assert got == [(0.5, 0.0), (0.5, 8.0)]
    # extending the window pads with zero stretches
    got = list(iter_pieces(c, -1.0, 2.0))
    assert got[0] == (1.0, 0.0)
    assert got[-1] == (1.0, 0.0)


def test_save_load_roundtrip_is_bit_exact(tmp_path):
    c = build_cell(math.pi / 3, [(0.0, 0.1, -7.123456789012345),
                                 (0.1, math.pi / 3, 2.5e-13)])
    path = tmp_path / "cell.json"
    save_potential(c, path)
    c2 = load_potential(path)
    assert type(c2) is CellPotential
    assert c2.a == c.a
    assert c2.segments == c.segments

    pot = assemble_hetero([
        (0.0, 1.0, [(0.0, 0.5, 0.0), (0.5, 1.0, 8.0)]),
        (1.0, 2.5, [(1.0, 2.5, -4.25)]),
    ])
    path2 = tmp_path / "h.json"
    save_potential(pot, path2)
    p2 = load_potential(path2)
    assert support(p2) == support(pot)
    assert list(iter_pieces(p2)) == list(iter_pieces(pot))


def test_load_rejects_nan_and_garbage(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "cell", "a": 1.0, "segments": [[0.0, 1.0, NaN]]}')
    with pytest.raises(PotentialError):
        load_potential(bad)
    bad.write_text("not json at all")
    with pytest.raises(PotentialError):
        load_potential(bad)
    bad.write_text(json.dumps({"kind": "wat"}))
    with pytest.raises(PotentialError):
        load_potential(bad)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=5),
       st.floats(0.2, 5.0))
def test_roundtrip_property(values, a):
    n = len(values)
    edges = [a * i / n for i in range(n + 1)]
    edges[-1] = a
    c = build_cell(a, [(edges[i], edges[i + 1], values[i]) for i in range(n)])
    doc = json.loads(save_potential(c))
    c2 = load_potential(json.dumps(doc))
    assert c2.segments == c.segments
    for i in range(n):
        x = (edges[i] + edges[i + 1]) / 2
        assert c2.evaluate(x) == values[i]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.floats(0.25, 2.0))
def test_ncell_length_and_periodicity(n, a):
    c = build_cell(a, [(0.0, a / 2, 3.0), (a / 2, a, -1.0)])
    pot = assemble_n_cell(c, n)
    assert pot.length == pytest.approx(n * a, rel=0, abs=1e-15)
    for j in range(n):
        assert pot.evaluate(j * a + a / 4) == 3.0
        assert pot.evaluate(j * a + 3 * a / 4) == -1.0
