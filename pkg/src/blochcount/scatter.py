"""Scattering amplitudes, bound-state counts, and transmission resonances
for compactly supported piecewise-constant potentials.

Conventions.  Amplitudes are extracted from the real transfer matrix L
over the support [0, W] at energy E = k^2:

    1/T   = (L00 + L11)/2 + (i/2) (L10/k - k L01)
    R/T   = -[(L00 - L11)/2 + (i/2) (k L01 + L10/k)]

Here T carries the free propagation phase over the support (a free
stretch of width W has T = e^{ikW}, R = 0); the physical transmission
amplitude is t = T e^{-ikW}.  det L = 1 forces |T|^2 + |R|^2 = 1.

Because the extraction is linear in L, the Cayley-Hamilton power formula
L^n = U_{n-1}(D/2) L - U_{n-2}(D/2) I (Chebyshev U, D = Tr L) turns into
closed composition laws for n identical cells:

    1/T_n = U_{n-1} / T_1 - U_{n-2},    R_n / T_n = U_{n-1} R_1 / T_1,

with U_{m-1} = sin(m phi)/sin(phi) and cos(phi) = D/2 inside a band.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .config import DEFAULT, Tolerances
from .potential import (CellPotential, HeteroPotential, NCellPotential,
                        iter_pieces)
from .propagate import cell_transfer, jost_node_count
from .bands import Quasimomentum, ZoneTable, discriminant, scan_zones

Compact = Union[CellPotential, NCellPotential, HeteroPotential]


class BandEdge(ArithmeticError):
    """Chebyshev composition is ill-conditioned: |sin phi| below the guard."""


def _extract(m00: float, m01: float, m10: float, m11: float,
             k: float) -> tuple[complex, complex]:
    """(1/T, R/T) from a transfer matrix over the support, at wavenumber k."""
    inv_T = 0.5 * (m00 + m11) + 0.5j * (m10 / k - k * m01)
    R_over_T = -(0.5 * (m00 - m11) + 0.5j * (k * m01 + m10 / k))
    return inv_T, R_over_T


def _mul(a: tuple, b: tuple) -> tuple:
    """2x2 product a @ b on entry 4-tuples."""
    a00, a01, a10, a11 = a
    b00, b01, b10, b11 = b
    return (a00 * b00 + a01 * b10, a00 * b01 + a01 * b11,
            a10 * b00 + a11 * b10, a10 * b01 + a11 * b11)


def _normalized(m: tuple) -> tuple[tuple, float]:
    big = max(abs(x) for x in m)
    if big > 1e8:
        return tuple(x / big for x in m), math.log(big)
    return m, 0.0


def _scaled_power(m: tuple, n: int) -> tuple[tuple, float]:
    """(B, s) with m^n = e^s B, entries of B kept O(1)."""
    result, log_r = (1.0, 0.0, 0.0, 1.0), 0.0
    base, log_b = _normalized(m)
    while n:
        if n & 1:
            result, ds = _normalized(_mul(result, base))
            log_r += log_b + ds
        n >>= 1
        if n:
            base, ds = _normalized(_mul(base, base))
            log_b = 2.0 * log_b + ds
    return result, log_r


@dataclass(frozen=True)
class ScatteringData:
    """Amplitudes at one energy.  T carries the free phase over the
    support width L; R is the reflection for incidence from the left.
    arg_T tracks the phase of T even when |T| underflows in a deep gap."""
    k: float
    E: float
    L: float
    T: complex
    R: complex
    arg_T: float

    @property
    def t(self) -> complex:
        """Physical transmission amplitude (free phase removed)."""
        return self.T * cmath.exp(-1j * self.k * self.L)

    @property
    def r_left(self) -> complex:
        return self.R

    @property
    def r_right(self) -> complex:
        return -self.R.conjugate() * cmath.exp(2j * (self.arg_T - self.k * self.L))

    @property
    def s_matrix(self) -> np.ndarray:
        """[[t, r_right], [r_left, t]]: column j is incidence from side j
        (0 = left), transmission on the diagonal."""
        return np.array([[self.t, self.r_right], [self.r_left, self.t]])

    def unitarity_defect(self) -> float:
        return abs(abs(self.T) ** 2 + abs(self.R) ** 2 - 1.0)


def _data(k: float, L: float, inv_T: complex, R_over_T: complex,
          log_scale: float = 0.0) -> ScatteringData:
    # true 1/T = e^{log_scale} * inv_T; the ratio R/T is scale-free
    R = R_over_T / inv_T
    arg_T = -cmath.phase(inv_T)
    mag = math.exp(-log_scale) / abs(inv_T) if log_scale < 709 else 0.0
    T = mag * cmath.exp(1j * arg_T)
    return ScatteringData(k=k, E=k * k, L=L, T=T, R=R, arg_T=arg_T)


def cell_scattering(cell: CellPotential, k: float) -> tuple[complex, complex]:
    """(T_1, R_1) of the single cell at wavenumber k > 0."""
    if k <= 0.0:
        raise ValueError(f"wavenumber must be positive, got k={k}")
    lam = cell_transfer(cell, k * k)
    inv_T, R_over_T = _extract(lam.m11, lam.m12, lam.m21, lam.m22, k)
    T = 1.0 / inv_T
    return T, R_over_T * T


def compose_n(T1: complex, R1: complex, phi: float, n: int,
              tol: Tolerances = DEFAULT) -> tuple[complex, complex]:
    """(T_n, R_n) for n identical cells from the single-cell amplitudes.

    phi is the cell phase, cos(phi) = Re(1/T_1) = Tr L / 2.  Raises
    BandEdge when |sin phi| < edge_guard: there the Chebyshev ratios
    blow up and the caller must fall back to direct matrix powers.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    s = math.sin(phi)
    if abs(s) < tol.edge_guard:
        raise BandEdge(f"|sin phi| = {abs(s):.2e} below guard {tol.edge_guard}")
    U_top = math.sin(n * phi) / s
    U_sub = math.sin((n - 1) * phi) / s
    inv_Tn = U_top / T1 - U_sub
    Tn = 1.0 / inv_Tn
    Rn = U_top * (R1 / T1) * Tn
    return Tn, Rn


def _ncell_data(cell: CellPotential, n: int, k: float,
                tol: Tolerances) -> ScatteringData:
    lam = cell_transfer(cell, k * k)
    entries = (lam.m11, lam.m12, lam.m21, lam.m22)
    D = lam.m11 + lam.m22
    L = n * cell.a
    if abs(D) < 2.0:
        phi = math.acos(D / 2.0)
        if math.sin(phi) >= tol.edge_guard:
            inv_T1, RoT1 = _extract(*entries, k)
            U_top = math.sin(n * phi) / math.sin(phi)
            U_sub = math.sin((n - 1) * phi) / math.sin(phi)
            return _data(k, L, U_top * inv_T1 - U_sub, U_top * RoT1)
    m, log_s = _scaled_power(entries, n)
    inv_Tn, RoTn = _extract(*m, k)
    return _data(k, L, inv_Tn, RoTn, log_s)


def n_cell_scattering(pot: Compact, k: float,
                      tol: Tolerances = DEFAULT) -> ScatteringData:
    """Full scattering data of a compactly supported potential at k > 0.

    n-cell potentials use the Chebyshev composition inside bands and
    scaled matrix powers in gaps and near band edges; heterogeneous
    stacks take the ordered product of cell transfer matrices with
    running renormalization.  Amplitudes are reported relative to the
    support (as if it started at x = 0).
    """
    if k <= 0.0:
        raise ValueError(f"wavenumber must be positive, got k={k}")
    E = k * k
    if isinstance(pot, NCellPotential):
        return _ncell_data(pot.cell, pot.n, k, tol)
    if isinstance(pot, CellPotential):
        return _ncell_data(pot, 1, k, tol)
    if isinstance(pot, HeteroPotential):
        acc, log_s = (1.0, 0.0, 0.0, 1.0), 0.0
        for j in range(len(pot.cells)):
            lam = cell_transfer(pot.cells[j], E)
            acc, ds = _normalized(_mul((lam.m11, lam.m12, lam.m21, lam.m22), acc))
            log_s += ds
        inv_T, RoT = _extract(*acc, k)
        return _data(k, pot.length, inv_T, RoT, log_s)
    raise TypeError(f"cannot scatter off {type(pot).__name__}")


@dataclass(frozen=True)
class BoundSpectrum:
    """Negative eigenvalues, each isolated to a bracket of width <= xtol."""
    energies: tuple[float, ...]
    brackets: tuple[tuple[float, float], ...]
    E_floor: float

    @property
    def count(self) -> int:
        return len(self.energies)


def count_bound_states(pot: Compact, E: float = 0.0) -> int:
    """Number of eigenvalues strictly below E, for E <= 0."""
    if E > 0.0:
        raise ValueError(f"bound-state counting needs E <= 0, got {E}")
    return jost_node_count(pot, E)


def locate_bound_states(pot: Compact, E_floor: Optional[float] = None,
                        xtol: float = 1e-10) -> BoundSpectrum:
    """All negative eigenvalues, isolated by bisection on the count.

    The count function E -> F(]-inf, E[) is a nondecreasing step
    function; each unit jump is narrowed to a bracket of width xtol.
    """
    vmin = min(v for _, v in iter_pieces(pot))
    if E_floor is None:
        E_floor = min(0.0, vmin)
    total = count_bound_states(pot, 0.0)
    found: list[tuple[float, float]] = []

    def split(lo: float, hi: float, c_lo: int, c_hi: int) -> None:
        if c_hi == c_lo:
            return
        if hi - lo <= xtol:
            # a cluster of c_hi - c_lo eigenvalues inside one bracket
            found.extend([(lo, hi)] * (c_hi - c_lo))
            return
        mid = 0.5 * (lo + hi)
        c_mid = jost_node_count(pot, mid)
        split(lo, mid, c_lo, c_mid)
        split(mid, hi, c_mid, c_hi)

    if total > 0:
        split(E_floor, 0.0, 0, total)
    energies = tuple(0.5 * (lo + hi) for lo, hi in found)
    return BoundSpectrum(energies=energies, brackets=tuple(found),
                         E_floor=E_floor)


@dataclass(frozen=True)
class Resonance:
    energy: float
    origin: str  # 'comb' | 'unit_cell'
    abs_R: float


@dataclass(frozen=True)
class ResonanceSet:
    """Perfect-transmission energies of n cells in a window ]E_lo, E_hi].

    all_pass marks a free cell (every positive energy transmits, so no
    discrete list is meaningful).  count_upto supports resonance-density
    work: the number of resonances in ]0, E].
    """
    E_lo: float
    E_hi: float
    n: int
    resonances: tuple[Resonance, ...]
    all_pass: bool = False
    warnings: tuple[str, ...] = ()

    @property
    def energies(self) -> tuple[float, ...]:
        return tuple(r.energy for r in self.resonances)

    def count_upto(self, E: float) -> int:
        if self.all_pass:
            raise ValueError("free cell: resonances form a continuum")
        return sum(1 for r in self.resonances if 0.0 < r.energy <= E)


def _comb_roots(cell: CellPotential, n: int, zt: ZoneTable,
                E_lo: float, E_hi: float) -> list[float]:
    """Solutions of sin(n phi) = 0, sin(phi) != 0 in the window: within
    band m the discriminant is monotone, so each target D = 2 cos(mu pi/n)
    with n(m-1) < mu < nm has exactly one root there."""
    roots = []
    for seg_lo, seg_hi, m in zt.band_segments():
        for mu in range(n * (m - 1) + 1, n * m):
            target = 2.0 * math.cos(mu * math.pi / n)
            f = lambda En: discriminant(cell, En) - target
            fa, fb = f(seg_lo), f(seg_hi)
            if fa == 0.0 or fb == 0.0 or fa * fb > 0.0:
                continue  # truncated segment: target beyond the ceiling
            lam = brentq(f, seg_lo, seg_hi, xtol=1e-13, rtol=8.9e-16)
            if lam > 0.0 and E_lo <= lam <= E_hi:
                roots.append(lam)
    return roots


def _unit_cell_roots(cell: CellPotential, E_lo: float, E_hi: float,
                     tol: Tolerances, grid_n: int = 4000) -> list[float]:
    """Zeros of |R_1| in the window: energies where a single cell is
    already transparent (then R_n = 0 for every n)."""
    lo = max(E_lo, 1e-9)
    if lo >= E_hi:
        return []
    Es = np.linspace(lo, E_hi, grid_n)

    def r2(En: float) -> float:
        _, R1 = cell_scattering(cell, math.sqrt(En))
        return abs(R1) ** 2

    vals = np.array([r2(En) for En in Es])
    roots = []
    for i in range(1, grid_n - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1] and vals[i] < 1e-4:
            res = minimize_scalar(r2, bounds=(Es[i - 1], Es[i + 1]),
                                  method="bounded", options={"xatol": 1e-12})
            if res.fun < tol.res_tol ** 2:
                roots.append(float(res.x))
    return roots


def find_resonances(cell: CellPotential, n: int, E_lo: float, E_hi: float,
                    q: Optional[Union[Quasimomentum, ZoneTable]] = None,
                    tol: Tolerances = DEFAULT) -> ResonanceSet:
    """Transmission resonances of n identical cells in ]E_lo, E_hi].

    Two mechanisms: comb resonances (sin(n phi) = 0 with sin(phi) != 0,
    absent for n = 1) and unit-cell transparencies (R_1 = 0).  Every
    candidate is re-verified against the full n-cell reflection; a
    candidate with |R_n| >= res_tol is dropped with a warning.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if E_hi <= E_lo:
        raise ValueError("empty energy window")
    if cell.is_free():
        return ResonanceSet(E_lo=E_lo, E_hi=E_hi, n=n, resonances=(),
                            all_pass=True)
    if q is None:
        vmax = max(v for _, v in cell.pieces())
        ceiling = max(E_hi + 1e-6 * (1.0 + abs(E_hi)), vmax + 1.0)
        zt = scan_zones(cell, ceiling)
    else:
        zt = q.zone_table if isinstance(q, Quasimomentum) else q

    comb = _comb_roots(cell, n, zt, E_lo, E_hi) if n >= 2 else []
    unit = _unit_cell_roots(cell, E_lo, E_hi, tol)
    unit = [u for u in unit
            if all(abs(u - c) > 1e-8 * (1.0 + abs(u)) for c in comb)]

    pot = NCellPotential(cell, n) if n > 1 else cell
    entries: list[Resonance] = []
    warnings: list[str] = []
    for lam, origin in sorted([(c, "comb") for c in comb]
                              + [(u, "unit_cell") for u in unit]):
        absR = abs(n_cell_scattering(pot, math.sqrt(lam), tol).R)
        if absR < tol.res_tol:
            entries.append(Resonance(energy=lam, origin=origin, abs_R=absR))
        else:
            warnings.append(f"candidate {origin} resonance at E={lam!r} "
                            f"failed verification: |R_n|={absR:.3e}")
    return ResonanceSet(E_lo=E_lo, E_hi=E_hi, n=n,
                        resonances=tuple(entries), warnings=tuple(warnings))


def resonance_vs_periodic(cell: CellPotential, n: int, lam: float,
                          q: Optional[Union[Quasimomentum, ZoneTable]] = None,
                          comb_tol: float = 1e-6) -> str:
    """'periodic' | 'skew' | 'neither': which n-cell closed spectrum the
    energy lam doubles into.

    A comb resonance has n*a*p(lam) = mu*pi with lam strictly inside a
    band; even mu lands on the periodic comb (n*a*p in 2*pi*Z), odd mu
    on the skew comb."""
    if q is None:
        vmax = max(v for _, v in cell.pieces())
        q = Quasimomentum(scan_zones(cell, max(lam + 1.0 + abs(lam) * 1e-6,
                                               vmax + 1.0)))
    elif isinstance(q, ZoneTable):
        q = Quasimomentum(q)
    zone = q.zone_table.locate(lam)
    if zone.kind != "allowed":
        return "neither"
    r = n * q.phase(lam) / math.pi
    mu = round(r)
    if abs(r - mu) > comb_tol:
        return "neither"
    return "periodic" if mu % 2 == 0 else "skew"
