"""Monodromy matrix, Bloch discriminant, zone decomposition, and the
global quasimomentum of the periodic extension of a cell.

The discriminant D(E) = Tr M(E) classifies energies: |D| <= 2 on allowed
zones, |D| > 2 on (open) gaps.  Between consecutive gap events D sweeps
monotonically from +-2 to -+2, so each band segment advances a*p(E) by
exactly pi; a gap where the two band edges collide (D touching +-2
tangentially) keeps its plateau value and is recorded as a zero-width
forbidden zone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .config import DEFAULT, Tolerances
from .potential import CellPotential
from .propagate import TransferMatrix, cell_transfer


@dataclass(frozen=True)
class Monodromy:
    """Period-translation matrix of the periodic extension at energy E."""
    matrix: TransferMatrix
    E: float

    @property
    def trace(self) -> float:
        return self.matrix.trace


def monodromy(cell: CellPotential, E: float) -> Monodromy:
    return Monodromy(cell_transfer(cell, E), E)


def discriminant(cell: CellPotential, E: float) -> float:
    """Tr M(E) of the one-period transfer matrix."""
    return cell_transfer(cell, E).trace


def discriminant_many(cell: CellPotential, Es: np.ndarray) -> np.ndarray:
    """Vectorized Tr M(E) over an energy grid."""
    Es = np.asarray(Es, dtype=float)
    m00 = np.ones_like(Es)
    m01 = np.zeros_like(Es)
    m10 = np.zeros_like(Es)
    m11 = np.ones_like(Es)
    for w, v in cell.pieces():
        d = Es - v
        p00 = np.empty_like(Es)
        p01 = np.empty_like(Es)
        p10 = np.empty_like(Es)
        pos = d > 0
        neg = d < 0
        zer = ~(pos | neg)
        if pos.any():
            k = np.sqrt(d[pos])
            c, s = np.cos(k * w), np.sin(k * w)
            p00[pos] = c
            p01[pos] = s / k
            p10[pos] = -k * s
        if neg.any():
            kap = np.sqrt(-d[neg])
            ch, sh = np.cosh(kap * w), np.sinh(kap * w)
            p00[neg] = ch
            p01[neg] = sh / kap
            p10[neg] = kap * sh
        if zer.any():
            p00[zer] = 1.0
            p01[zer] = w
            p10[zer] = 0.0
        p11 = p00
        m00, m01, m10, m11 = (p00 * m00 + p01 * m10,
                              p00 * m01 + p01 * m11,
                              p10 * m00 + p11 * m10,
                              p10 * m01 + p11 * m11)
    return m00 + m11


@dataclass(frozen=True)
class Zone:
    kind: str  # 'allowed' | 'forbidden'
    E_lo: float  # -inf for the bottom forbidden zone
    E_hi: float  # == E_lo for a closed gap (tangential touch)
    gap_index: Optional[int] = None  # plateau index l for forbidden zones

    @property
    def is_touch(self) -> bool:
        return self.kind == "forbidden" and self.E_lo == self.E_hi


class ScanError(ValueError):
    """Zone detection failed to stabilize; carries the suspect intervals."""

    def __init__(self, message, suspects=()):
        super().__init__(message)
        self.suspects = tuple(suspects)


@dataclass(frozen=True)
class ZoneTable:
    """Alternating forbidden/allowed zones tiling ]-inf, E_max].

    Closed gaps appear as zero-width forbidden zones so that plateau
    indices increment through them; allowed_union() merges the bands
    across those touches when the coarse picture is wanted.
    """
    zones: tuple[Zone, ...]
    E_max: float
    cell: CellPotential

    def forbidden(self) -> tuple[Zone, ...]:
        return tuple(z for z in self.zones if z.kind == "forbidden")

    def open_gaps(self) -> tuple[Zone, ...]:
        """Forbidden zones with nonempty interior (the bottom zone included)."""
        return tuple(z for z in self.forbidden() if not z.is_touch)

    def touches(self) -> tuple[Zone, ...]:
        return tuple(z for z in self.forbidden() if z.is_touch)

    def allowed(self) -> tuple[Zone, ...]:
        return tuple(z for z in self.zones if z.kind == "allowed")

    def allowed_union(self) -> tuple[tuple[float, float], ...]:
        """Maximal allowed intervals, merged across zero-width touches."""
        out: list[list[float]] = []
        for z in self.allowed():
            if out and out[-1][1] == z.E_lo:
                out[-1][1] = z.E_hi
            else:
                out.append([z.E_lo, z.E_hi])
        return tuple((lo, hi) for lo, hi in out)

    @property
    def lambda0(self) -> float:
        """Bottom of the periodic spectrum (upper edge of the bottom gap)."""
        return self.zones[0].E_hi

    def band_segments(self) -> tuple[tuple[float, float, int], ...]:
        """(E_lo, E_hi, m): the m-th band segment carries a*p from
        (m-1)*pi to m*pi."""
        segs = []
        m = 0
        for z in self.zones:
            if z.kind == "allowed":
                m += 1
                segs.append((z.E_lo, z.E_hi, m))
        return tuple(segs)

    def locate(self, E: float) -> Zone:
        """Zone containing E (edges resolve to the forbidden zone)."""
        if E > self.E_max:
            raise ValueError(f"E={E} above the scan ceiling {self.E_max}")
        for z in self.zones:
            if z.kind == "forbidden" and z.E_lo <= E <= z.E_hi:
                return z
            if z.kind == "allowed" and z.E_lo < E < z.E_hi:
                return z
        return self.zones[-1]

    def in_open_gap_interior(self, E: float) -> bool:
        for z in self.open_gaps():
            if z.E_lo < E < z.E_hi:
                return True
        return False


def _scan_once(cell: CellPotential, E_lo: float, E_max: float, grid_n: int,
               tol: Tolerances) -> tuple[list[float], list[float]]:
    """One detection pass: refined crossing edges of |D| = 2 and touch points."""
    Es = np.linspace(E_lo, E_max, grid_n)
    D = discriminant_many(cell, Es)

    edges: list[float] = []
    for offset in (-2.0, 2.0):
        g = D - offset
        sign_change = np.nonzero(g[:-1] * g[1:] < 0.0)[0]
        for i in sign_change:
            edges.append(brentq(lambda E: discriminant(cell, E) - offset,
                                Es[i], Es[i + 1], xtol=tol.edge_tol * 0.01, rtol=8.9e-16))
        for i in np.nonzero(g == 0.0)[0]:
            edges.append(float(Es[i]))

    touches: list[float] = []
    # refine interior extrema of D: recover narrow gaps the grid stepped over
    # and detect tangential touches |D*| = 2
    interior = np.arange(1, grid_n - 1)
    is_max = (D[interior] >= D[interior - 1]) & (D[interior] >= D[interior + 1])
    is_min = (D[interior] <= D[interior - 1]) & (D[interior] <= D[interior + 1])
    for i in interior[is_max | is_min]:
        maximum = bool(is_max[i - 1])
        sign = -1.0 if maximum else 1.0  # minimize sign*D
        res = minimize_scalar(lambda E: sign * discriminant(cell, E),
                              bracket=None, bounds=(Es[i - 1], Es[i + 1]), method="bounded",
                              options={"xatol": tol.edge_tol * 0.01})
        E_star, D_star = float(res.x), float(sign * res.fun)
        offset = 2.0 if maximum else -2.0
        if abs(D_star - offset) <= tol.touch_tol:
            touches.append(E_star)
        elif (D_star - offset) * sign < 0.0:
            # extremum overshoots the band boundary: grid missed two crossings
            f = lambda E: discriminant(cell, E) - offset
            for a, b in ((Es[i - 1], E_star), (E_star, Es[i + 1])):
                if f(a) * f(b) < 0.0:
                    edges.append(brentq(f, a, b, xtol=tol.edge_tol * 0.01, rtol=8.9e-16))

    edges = sorted(set(edges))
    dedup = []
    for e in edges:
        if not dedup or e - dedup[-1] > tol.edge_tol:
            dedup.append(e)
    touches = [t for t in sorted(set(touches))
               if all(abs(t - e) > 1e-7 * (1.0 + abs(t)) for e in dedup)]
    return dedup, touches


def _signature(edges: list[float], touches: list[float]) -> tuple:
    return (len(edges), len(touches),
            tuple(round(e, 6) for e in edges), tuple(round(t, 6) for t in touches))


def scan_zones(cell: CellPotential, E_max: float, initial_grid: int = 2000,
               tol: Tolerances = DEFAULT, max_doublings: int = 8) -> ZoneTable:
    """Detect all zone edges below E_max and assemble the zone table.

    Crossings of |Tr M| = 2 are bisected to edge_tol; discriminant extrema
    are refined to find closed gaps (tangential touches) and to recover
    narrow gaps between grid points.  The grid is doubled until two passes
    agree on the full edge/touch signature.
    """
    if initial_grid < 100:
        raise ValueError("initial_grid must be >= 100")
    if E_max <= cell.min_value():
        raise ValueError("E_max must exceed the minimum of the potential")

    E_lo = min(cell.min_value(), 0.0) - 1.0
    for _ in range(80):
        if discriminant(cell, E_lo) > 2.0:
            break
        E_lo = E_max - 2.0 * (E_max - E_lo)
    else:
        raise ScanError("could not find the bottom of the spectrum")

    grid_n = initial_grid
    prev = _scan_once(cell, E_lo, E_max, grid_n, tol)
    for _ in range(max_doublings):
        grid_n *= 2
        cur = _scan_once(cell, E_lo, E_max, grid_n, tol)
        if _signature(*prev) == _signature(*cur):
            return _assemble(cell, E_max, cur[0], cur[1], tol)
        prev = cur
    suspects = sorted(set(round(e, 4) for e in prev[0] + prev[1]))
    raise ScanError(
        f"zone scan did not stabilize after {max_doublings} doublings "
        f"(possible tangential band edge); suspect energies: {suspects}",
        suspects)


def _assemble(cell: CellPotential, E_max: float, edges: list[float],
              touches: list[float], tol: Tolerances) -> ZoneTable:
    if not edges:
        raise ScanError("no band found below the scan ceiling; raise E_max")
    events: list[tuple[float, float]] = [(e, e) for e in touches]
    # crossing edges pair up into open gaps: [lambda0], [g1_lo, g1_hi], ...
    lam0 = edges[0]
    rest = edges[1:]
    if len(rest) % 2 == 1:
        rest = rest + [E_max]  # scan ceiling lies inside a gap
        open_top = True
    else:
        open_top = False
    for lo, hi in zip(rest[0::2], rest[1::2]):
        events.append((lo, hi))
    events.sort()

    zones: list[Zone] = [Zone("forbidden", -math.inf, lam0, 0)]
    l = 0
    cursor = lam0
    for lo, hi in events:
        l += 1
        zones.append(Zone("allowed", cursor, lo))
        zones.append(Zone("forbidden", lo, hi, l))
        cursor = hi
    if not open_top or not events:
        zones.append(Zone("allowed", cursor, E_max))
    # drop a trailing zero-width allowed zone (ceiling exactly on an edge)
    zones = [z for z in zones if not (z.kind == "allowed" and z.E_hi <= z.E_lo)]

    # sanity: midpoints of allowed/forbidden zones must classify correctly
    for z in zones:
        if z.E_lo == -math.inf or z.is_touch:
            continue
        mid = 0.5 * (z.E_lo + z.E_hi)
        d = abs(discriminant(cell, mid))
        if z.kind == "allowed" and d > 2.0 + 1e-9:
            raise ScanError(f"allowed zone [{z.E_lo}, {z.E_hi}] fails |D|<=2 at midpoint")
        if z.kind == "forbidden" and d < 2.0 - 1e-9:
            raise ScanError(f"forbidden zone [{z.E_lo}, {z.E_hi}] fails |D|>2 at midpoint")
    return ZoneTable(tuple(zones), E_max, cell)


@dataclass(frozen=True)
class Quasimomentum:
    """Evaluator of the global quasimomentum p(E) from a zone table.

    p is continuous, nondecreasing, 0 on the bottom gap, constant l*pi/a
    on (the closure of) gap l, and satisfies 2 cos(a p(E)) = Tr M(E) on
    every band segment.
    """
    zone_table: ZoneTable

    @property
    def cell(self) -> CellPotential:
        return self.zone_table.cell

    def phase(self, E: float) -> float:
        """a * p(E)."""
        zt = self.zone_table
        if E > zt.E_max + 1e-12:
            raise ValueError(f"E={E} above the scan ceiling {zt.E_max}")
        if E <= zt.lambda0:
            return 0.0
        m = 0  # band-segment ordinal
        for z in zt.zones:
            if z.kind == "allowed":
                m += 1
                if z.E_lo < E < z.E_hi:
                    half = np.clip(discriminant(self.cell, E) / 2.0, -1.0, 1.0)
                    sign = 1.0 if (m - 1) % 2 == 0 else -1.0
                    return (m - 1) * math.pi + math.acos(sign * half)
            else:
                if z.E_lo <= E <= z.E_hi:
                    return z.gap_index * math.pi
        return m * math.pi  # E == E_max exactly at the top edge

    def __call__(self, E: float) -> float:
        return self.phase(E) / self.cell.a


def quasimomentum_at(q: Quasimomentum | ZoneTable, E: float) -> float:
    """p(E) in radians per unit length."""
    if isinstance(q, ZoneTable):
        q = Quasimomentum(q)
    return q(E)


def bloch_phase(q: Quasimomentum | ZoneTable, E: float) -> float:
    """phi(E) = a*p(E), defined on the closure of the allowed set.

    Raises for E strictly inside an open gap (the phase is not real there).
    """
    if isinstance(q, ZoneTable):
        q = Quasimomentum(q)
    zt = q.zone_table
    if E < zt.lambda0 or zt.in_open_gap_interior(E):
        raise ValueError(f"E={E} lies strictly inside a forbidden zone")
    return q.phase(E)
