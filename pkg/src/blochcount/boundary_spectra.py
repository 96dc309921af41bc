"""Self-adjoint interval spectra: separated (Robin) boundary conditions
on the support, and periodic / antiperiodic closures of n-cell arrays.

Separated conditions are parametrized as

    cos(alpha) psi(x_lo) = sin(alpha) psi'(x_lo),   0 <= alpha < pi,
    cos(beta)  psi(x_hi) = sin(beta)  psi'(x_hi),   0 <  beta <= pi,

so alpha = 0 / beta = pi is Dirichlet and alpha = beta = pi/2 is Neumann.
The closed counting function F(]-inf, E]) comes from the continuous
Pruefer angle Theta(x) = arg(psi + i psi') of the left-condition
solution: Theta(x_hi; E) is strictly decreasing in E and the j-th
eigenvalue is its crossing of pi/2 - beta - (j-1) pi, whence

    F(]-inf, E]) = max(0, floor((pi/2 - beta - Theta(x_hi; E)) / pi) + 1).

Periodic / antiperiodic spectra of n abutting copies of a cell reduce to
the comb condition n*a*p(E) in pi*Z on the cell quasimomentum p: even
multiples land on the periodic spectrum, odd ones on the antiperiodic
(skew) spectrum.  Eigenvalue multiplicities follow the zone geometry -
simple at the spectral bottom and at open-gap edges, double at closed
gaps and strictly inside bands, none in gap interiors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .bands import Quasimomentum, Zone, ZoneTable, scan_zones
from .config import DEFAULT, Tolerances
from .potential import (CellPotential, HeteroPotential, NCellPotential,
                        iter_pieces, support)
from .propagate import _walk

Interval = Union[CellPotential, NCellPotential, HeteroPotential]
FLAVORS = ("periodic", "skew")


@dataclass(frozen=True)
class BoundaryConditions:
    """Separated boundary parameters (alpha at the left end, beta at the
    right end); see the module docstring for the sign convention."""
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 <= self.alpha < math.pi):
            raise ValueError(f"alpha must lie in [0, pi), got {self.alpha}")
        if not (0.0 < self.beta <= math.pi):
            raise ValueError(f"beta must lie in (0, pi], got {self.beta}")

    @classmethod
    def dirichlet(cls) -> "BoundaryConditions":
        return cls(alpha=0.0, beta=math.pi)

    @classmethod
    def neumann(cls) -> "BoundaryConditions":
        return cls(alpha=0.5 * math.pi, beta=0.5 * math.pi)


@dataclass(frozen=True)
class SLSpectrum:
    energies: tuple[float, ...]
    brackets: tuple[tuple[float, float], ...]
    residuals: tuple[float, ...]
    bc: BoundaryConditions
    E_max: float

    @property
    def count(self) -> int:
        return len(self.energies)


@dataclass(frozen=True)
class PeriodicSpectrum:
    """Closed-spectrum eigenvalues (energy, multiplicity) up to E_max."""
    flavor: str
    n: int
    E_max: float
    entries: tuple[tuple[float, int], ...]

    @property
    def energies(self) -> tuple[float, ...]:
        return tuple(e for e, _ in self.entries)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)


def _end_state(pot: Interval, bc: BoundaryConditions,
               E: float) -> tuple[float, float, float]:
    """(psi, psi', theta) at the right end of the support for the
    left-condition solution; (psi, psi') are renormalized, not rescaled,
    so ratios and angles stay finite in deep tunneling regimes."""
    x_lo, x_hi = support(pot)
    psi, dpsi, _, _, theta, _ = _walk(pot, E, math.sin(bc.alpha),
                                      math.cos(bc.alpha), x_lo, x_hi)
    return psi, dpsi, theta


def sl_count(pot: Interval, bc: BoundaryConditions, E: float) -> int:
    """F(]-inf, E]): closed eigenvalue count of the separated problem on
    the support of pot."""
    _, _, theta = _end_state(pot, bc, E)
    return max(0, math.floor((0.5 * math.pi - bc.beta - theta) / math.pi) + 1)


def _bc_floor(pot: Interval, bc: BoundaryConditions) -> float:
    """A level strictly below the whole spectrum.  Robin parameters with
    an attractive sign admit boundary states near -cot(angle)^2, below
    the potential minimum."""
    vmin = min(v for _, v in iter_pieces(pot))
    extra = 0.0
    if 0.5 * math.pi < bc.alpha < math.pi:
        extra += (math.cos(bc.alpha) / math.sin(bc.alpha)) ** 2
    if 0.0 < bc.beta < 0.5 * math.pi:
        extra += (math.cos(bc.beta) / math.sin(bc.beta)) ** 2
    return min(0.0, vmin) - extra - 1.0


def sl_eigenvalues(pot: Interval, bc: BoundaryConditions, E_max: float,
                   xtol: float = 1e-10) -> SLSpectrum:
    """All eigenvalues <= E_max, isolated by bisection on sl_count.

    Each energy carries the normalized right-condition residual
    |cos(beta) psi - sin(beta) psi'| / |(psi, psi')| at the midpoint of
    its bracket (0 at an exact eigenvalue)."""
    E_floor = _bc_floor(pot, bc)
    c_top = sl_count(pot, bc, E_max)
    found: list[tuple[float, float]] = []

    def split(lo: float, hi: float, c_lo: int, c_hi: int) -> None:
        if c_hi == c_lo:
            return
        if hi - lo <= xtol:
            found.extend([(lo, hi)] * (c_hi - c_lo))
            return
        mid = 0.5 * (lo + hi)
        c_mid = sl_count(pot, bc, mid)
        split(lo, mid, c_lo, c_mid)
        split(mid, hi, c_mid, c_hi)

    if c_top > 0:
        split(E_floor, E_max, 0, c_top)

    energies, residuals = [], []
    for lo, hi in found:
        E = 0.5 * (lo + hi)
        psi, dpsi, _ = _end_state(pot, bc, E)
        norm = math.hypot(psi, dpsi)
        res = abs(math.cos(bc.beta) * psi - math.sin(bc.beta) * dpsi) / norm
        energies.append(E)
        residuals.append(res)
    return SLSpectrum(energies=tuple(energies), brackets=tuple(found),
                      residuals=tuple(residuals), bc=bc, E_max=E_max)


def _as_cell_n(pot: Interval) -> tuple[CellPotential, int]:
    if isinstance(pot, NCellPotential):
        return pot.cell, pot.n
    if isinstance(pot, CellPotential):
        return pot, 1
    raise TypeError("periodic closures need a cell or an n-cell array, "
                    f"not {type(pot).__name__}")


def _cell_quasimomentum(cell: CellPotential, E_need: float,
                        q: Optional[Union[Quasimomentum, ZoneTable]],
                        tol: Tolerances) -> Quasimomentum:
    if isinstance(q, Quasimomentum):
        return q
    if isinstance(q, ZoneTable):
        return Quasimomentum(q)
    vmax = max(v for _, v in cell.pieces())
    ceiling = max(E_need + 1e-6 * (1.0 + abs(E_need)), vmax + 1.0)
    return Quasimomentum(scan_zones(cell, ceiling, tol=tol))


def _gap_zone(zt: ZoneTable, l: int) -> Zone:
    for z in zt.forbidden():
        if z.gap_index == l:
            return z
    raise ValueError(f"gap event {l} lies above the scanned ceiling")


def periodic_count(pot: Interval, flavor: str, E: float,
                   q: Optional[Union[Quasimomentum, ZoneTable]] = None,
                   tol: Tolerances = DEFAULT) -> int:
    """Closed count, with multiplicity, of the periodic (flavor
    'periodic') or antiperiodic (flavor 'skew') spectrum of the n-cell
    array up to E."""
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    cell, n = _as_cell_n(pot)
    qm = _cell_quasimomentum(cell, E, q, tol)
    zt = qm.zone_table
    phase = qm.phase(E)  # a * p(E)
    r = n * phase / math.pi
    count = 0
    mu = 0 if flavor == "periodic" else 1
    while mu <= r + 1e-7 * max(1.0, r):
        if mu == 0:
            if E >= zt.lambda0:
                count += 1
        elif mu % n == 0:
            z = _gap_zone(zt, mu // n)
            if z.is_touch:
                if z.E_lo <= E:
                    count += 2
            else:
                if z.E_lo <= E:
                    count += 1
                if z.E_hi <= E and z.E_hi < zt.E_max:
                    count += 1
        else:
            count += 2  # band-interior comb point at phase mu*pi/n
        mu += 2
    return count


def periodic_eigenvalues(pot: Interval, flavor: str, E_max: float,
                         q: Optional[Union[Quasimomentum, ZoneTable]] = None,
                         tol: Tolerances = DEFAULT) -> PeriodicSpectrum:
    """All (energy, multiplicity) pairs of the chosen closure up to E_max."""
    from scipy.optimize import brentq

    from .bands import discriminant

    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    cell, n = _as_cell_n(pot)
    qm = _cell_quasimomentum(cell, E_max, q, tol)
    zt = qm.zone_table
    r = n * qm.phase(E_max) / math.pi
    entries: list[tuple[float, int]] = []
    mu = 0 if flavor == "periodic" else 1
    while mu <= r + 1e-7 * max(1.0, r):
        if mu == 0:
            if E_max >= zt.lambda0:
                entries.append((zt.lambda0, 1))
        elif mu % n == 0:
            z = _gap_zone(zt, mu // n)
            if z.is_touch:
                if z.E_lo <= E_max:
                    entries.append((z.E_lo, 2))
            else:
                if z.E_lo <= E_max:
                    entries.append((z.E_lo, 1))
                if z.E_hi <= E_max and z.E_hi < zt.E_max:
                    entries.append((z.E_hi, 1))
        else:
            target = 2.0 * math.cos(mu * math.pi / n)
            seg = next((s for s in zt.band_segments()
                        if s[2] - 1 < mu / n < s[2]), None)
            if seg is not None:
                f = lambda En: discriminant(cell, En) - target
                fa, fb = f(seg[0]), f(seg[1])
                if fa * fb < 0.0:
                    E_mu = brentq(f, seg[0], seg[1], xtol=1e-13, rtol=8.9e-16)
                    if E_mu <= E_max:
                        entries.append((float(E_mu), 2))
        mu += 2
    entries.sort()
    return PeriodicSpectrum(flavor=flavor, n=n, E_max=E_max,
                            entries=tuple(entries))


def classify_periodic(pot: Interval, E: float,
                      q: Optional[Union[Quasimomentum, ZoneTable]] = None,
                      comb_tol: float = 1e-6,
                      tol: Tolerances = DEFAULT) -> tuple[str, Optional[str]]:
    """('simple'|'double'|'none', flavor) of the energy E for the n-cell
    periodic closures.

    E is an eigenvalue iff n*a*p(E) = mu*pi up to comb_tol AND E does not
    lie strictly inside an open gap; it is simple exactly at the spectral
    bottom and at open-gap edges, double at closed gaps and strictly
    inside bands."""
    cell, n = _as_cell_n(pot)
    qm = _cell_quasimomentum(cell, E, q, tol)
    zt = qm.zone_table
    atol = 1e-9 * (1.0 + abs(E))
    if E < zt.lambda0 - atol:
        return "none", None

    def flavor_of(mu: int) -> str:
        return "periodic" if mu % 2 == 0 else "skew"

    if abs(E - zt.lambda0) <= atol:
        return "simple", "periodic"
    for z in zt.open_gaps():
        if z.gap_index == 0:
            continue
        for edge in (z.E_lo, z.E_hi):
            if abs(E - edge) <= atol and edge < zt.E_max:
                mu = n * z.gap_index
                return "simple", flavor_of(mu)
        if z.E_lo + atol < E < z.E_hi - atol:
            return "none", None
    for z in zt.touches():
        if abs(E - z.E_lo) <= atol:
            return "double", flavor_of(n * z.gap_index)
    r = n * qm.phase(E) / math.pi
    mu = round(r)
    if mu > 0 and abs(r - mu) <= comb_tol:
        return "double", flavor_of(mu)
    return "none", None
