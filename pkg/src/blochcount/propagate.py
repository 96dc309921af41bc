"""Exact propagation of Cauchy data across piecewise-constant potentials,
continuous phase tracking, node counting, and the left-matching solution
used to count bound states on the line.

Conventions
-----------
For a real solution u of -u'' + v u = E u, the tracked angle is a
continuous branch of theta(x) = arg(u(x) + i u'(x)).  Zeros of u sit
exactly at theta = pi/2 (mod pi), and every crossing of such a level is
strictly downward: at a zero, theta' = -u'^2/(u^2 + u'^2) = -1.  Nodes
per constant piece are therefore the number of levels pi/2 + m*pi inside
the half-open angle window ]theta_end, theta_start], which attributes a
zero at a piece boundary to the piece on its left; the returned
PhaseTrace.node_count is for the *open* interval, i.e. a zero exactly at
the final endpoint is not counted.

Inside one constant piece no sampling is used:

* oscillatory (E > v, k = sqrt(E-v)): the scaled angle
  arg(k*u + i*u') decreases exactly linearly with slope -k;
* evanescent (E < v, kap = sqrt(v-E)): the scaled angle
  arg(kap*u + i*u') obeys d/dx = kap*cos(2*angle), is trapped between
  fixed points a quarter-turn apart, so its increment is < pi/2 in
  magnitude and the principal wrap of the endpoint difference is exact;
* E = v: theta itself is monotone nonincreasing with increment > -pi.

The scaled and plain angles agree at every multiple of pi/2 and differ
by less than pi/2 in between, so switching between them never loses the
branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .potential import Potential, iter_pieces, support

_HALF_PI = 0.5 * math.pi
_BIG = 1e150  # renormalize Cauchy data beyond this to dodge overflow


@dataclass(frozen=True)
class CauchyData:
    """Solution value and derivative at a point."""
    psi: float
    dpsi: float
    x: float

    def __post_init__(self):
        if self.psi == 0.0 and self.dpsi == 0.0:
            raise ValueError("Cauchy data of a non-zero solution cannot vanish")


@dataclass(frozen=True)
class TransferMatrix:
    """Real 2x2 matrix sending (psi, psi') at x_lo to (psi, psi') at x_hi."""
    m11: float
    m12: float
    m21: float
    m22: float
    E: float
    x_lo: float
    x_hi: float

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    def apply(self, psi: float, dpsi: float) -> tuple[float, float]:
        return (self.m11 * psi + self.m12 * dpsi,
                self.m21 * psi + self.m22 * dpsi)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        """self @ other = apply other first (matrix product)."""
        if not math.isclose(self.x_lo, other.x_hi, rel_tol=0.0, abs_tol=1e-9):
            raise ValueError(f"transfer matrices do not abut: {other.x_hi} vs {self.x_lo}")
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
            self.E, other.x_lo, self.x_hi)


@dataclass(frozen=True)
class PhaseTrace:
    """Continuous-angle increment and node count over an interval.

    node_count is the number of zeros of the solution in the *open*
    interval ]x_lo, x_hi[; see the module docstring for the crossing
    convention.
    """
    theta_start: float
    theta_end: float
    node_count: int
    x_lo: float
    x_hi: float

    @property
    def delta(self) -> float:
        return self.theta_end - self.theta_start


@dataclass(frozen=True)
class TailClass:
    """Zero budget of the exponential/linear tail right of the support."""
    kappa: float
    extra_nodes: int


def segment_propagator(v: float, E: float, width: float, x_lo: float = 0.0) -> TransferMatrix:
    """Closed-form propagator across one constant piece.

    E > v: [[cos kw, sin kw / k], [-k sin kw, cos kw]], k = sqrt(E-v);
    E < v: [[cosh, sinh/kap], [kap sinh, cosh]], kap = sqrt(v-E);
    E = v: [[1, w], [0, 1]].  det = 1 identically.
    """
    if width < 0:
        raise ValueError("segment width must be >= 0")
    d = E - v
    if d > 0.0:
        k = math.sqrt(d)
        c, s = math.cos(k * width), math.sin(k * width)
        return TransferMatrix(c, s / k, -k * s, c, E, x_lo, x_lo + width)
    if d < 0.0:
        kap = math.sqrt(-d)
        ch, sh = math.cosh(kap * width), math.sinh(kap * width)
        return TransferMatrix(ch, sh / kap, kap * sh, ch, E, x_lo, x_lo + width)
    return TransferMatrix(1.0, width, 0.0, 1.0, E, x_lo, x_lo + width)


def cell_transfer(cell, E: float) -> TransferMatrix:
    """Transfer matrix of one cell over [0, a]: right-to-left ordered product
    of segment propagators."""
    return transfer_over(cell, E, 0.0, cell.a)


def transfer_over(pot: Potential, E: float, x_from: float, x_to: float) -> TransferMatrix:
    """Transfer matrix across [x_from, x_to] of any supported potential."""
    m = TransferMatrix(1.0, 0.0, 0.0, 1.0, E, x_from, x_from)
    for width, v in iter_pieces(pot, x_from, x_to):
        m = segment_propagator(v, E, width, m.x_hi) @ m
    if m.x_hi != x_to:
        m = TransferMatrix(m.m11, m.m12, m.m21, m.m22, E, x_from, x_to)
    return m


# -- continuous-angle bookkeeping ---------------------------------------------

def _wrap(x: float) -> float:
    """Reduce to [-pi, pi] (IEEE remainder by 2*pi)."""
    return math.remainder(x, 2.0 * math.pi)


def _levels_crossed(ts_start: float, ts_end: float) -> int:
    """#{m : ts_end <= pi/2 + m*pi < ts_start}; all crossings are downward."""
    return math.ceil((ts_start - _HALF_PI) / math.pi) - math.ceil((ts_end - _HALF_PI) / math.pi)


def _on_level(ts: float) -> bool:
    r = (ts - _HALF_PI) / math.pi
    return r == round(r)


def _advance_piece(E, v, w, psi, dpsi, theta):
    """Propagate one constant piece.

    Returns (psi, dpsi, theta, nodes_in_half_open_piece, end_on_level)
    where nodes are counted in ]0, w] of the piece and end_on_level tells
    whether the final angle sits exactly on a zero level (used for the
    open-interval correction at the very end of a walk).
    """
    d = E - v
    tp = math.atan2(dpsi, psi)
    if d > 0.0:
        k = math.sqrt(d)
        ts = theta + _wrap(math.atan2(dpsi, k * psi) - tp)
        ts_end = ts - k * w
        nodes = _levels_crossed(ts, ts_end)
        c, s = math.cos(k * w), math.sin(k * w)
        psi, dpsi = c * psi + (s / k) * dpsi, -k * s * psi + c * dpsi
        theta = ts_end + _wrap(math.atan2(dpsi, psi) - math.atan2(dpsi, k * psi))
        return psi, dpsi, theta, nodes, _on_level(ts_end)
    if d < 0.0:
        kap = math.sqrt(-d)
        tsp = math.atan2(dpsi, kap * psi)
        ts = theta + _wrap(tsp - tp)
        ch, sh = math.cosh(kap * w), math.sinh(kap * w)
        psi, dpsi = ch * psi + (sh / kap) * dpsi, kap * sh * psi + ch * dpsi
        ts_end = ts + _wrap(math.atan2(dpsi, kap * psi) - tsp)  # |increment| < pi/2
        nodes = _levels_crossed(ts, ts_end)
        theta = ts_end + _wrap(math.atan2(dpsi, psi) - math.atan2(dpsi, kap * psi))
        return psi, dpsi, theta, nodes, _on_level(ts_end)
    # E == v: linear solution, theta monotone nonincreasing, increment > -pi
    psi2 = psi + w * dpsi
    dd = _wrap(math.atan2(dpsi, psi2) - tp)
    if dd > 1e-9:  # the true increment is <= 0: a positive wrap is the -pi flip
        dd -= 2.0 * math.pi
    theta_end = theta + dd
    nodes = _levels_crossed(theta, theta_end)
    return psi2, dpsi, theta_end, nodes, _on_level(theta_end)


def _walk(pot: Potential, E: float, psi: float, dpsi: float, x_from: float, x_to: float):
    """Piece-by-piece walk; Cauchy data is renormalized when it grows beyond
    _BIG (the true values are psi * exp(log_scale), d:o).  Returns
    (psi, dpsi, log_scale, theta_start, theta_end, open_interval_nodes).
    """
    if psi < 0.0 or (psi == 0.0 and dpsi < 0.0):
        psi, dpsi = -psi, -dpsi
    theta0 = math.atan2(dpsi, psi)
    theta = theta0
    nodes = 0
    log_scale = 0.0
    end_on_level = False
    for w, v in iter_pieces(pot, x_from, x_to):
        # split stretches where cosh(kap*w) would overflow; each chunk grows
        # the data by at most e^300, which renormalization absorbs
        steps = 1
        if E < v and math.sqrt(v - E) * w > 300.0:
            steps = math.ceil(math.sqrt(v - E) * w / 300.0)
        for _ in range(steps):
            psi, dpsi, theta, piece_nodes, end_on_level = _advance_piece(E, v, w / steps, psi, dpsi, theta)
            nodes += piece_nodes
            big = max(abs(psi), abs(dpsi))
            if big > _BIG:
                psi, dpsi = psi / big, dpsi / big
                log_scale += math.log(big)
    if end_on_level:
        nodes -= 1  # zero exactly at x_to is outside the open interval
    return psi, dpsi, log_scale, theta0, theta, nodes


def propagate_phase(pot: Potential, E: float, init: CauchyData, x_to: float) -> tuple[CauchyData, PhaseTrace]:
    """Propagate Cauchy data from init.x to x_to tracking the continuous angle.

    Initial data with psi < 0, or psi = 0 and dpsi < 0, is sign-flipped
    (the overall sign of a real solution carries no spectral content), so
    the starting branch always lies in ]-pi/2, pi/2].
    """
    if x_to < init.x:
        raise ValueError("x_to must be >= init.x")
    psi, dpsi, log_scale, theta0, theta, nodes = _walk(pot, E, init.psi, init.dpsi, init.x, x_to)
    trace = PhaseTrace(theta0, theta, nodes, init.x, x_to)
    return CauchyData(_rescaled(psi, log_scale), _rescaled(dpsi, log_scale), x_to), trace


def _rescaled(value: float, log_scale: float) -> float:
    if log_scale == 0.0 or value == 0.0:
        return value
    if log_scale > 709.0:
        return math.copysign(math.inf, value)
    return value * math.exp(log_scale)


# -- tails and whole-line node counting ---------------------------------------

def tail_nodes(end: CauchyData, E: float) -> TailClass:
    """Zeros of the solution on [y, +inf[ when the potential vanishes there.

    For E < 0 the tail is a*exp(kap*x) + b*exp(-kap*x) and has exactly one
    zero iff the solution at y points against its growing component:
    (psi >= 0 and kap*psi + psi' < 0) or (psi <= 0 and kap*psi + psi' > 0).
    For E = 0 the tail is linear and the same split applies with psi' alone.
    """
    if E > 0.0:
        raise ValueError("tail classification is defined for E <= 0 only")
    kappa = math.sqrt(-E)
    f = kappa * end.psi + end.dpsi if E < 0.0 else end.dpsi
    extra = 1 if ((end.psi >= 0.0 and f < 0.0) or (end.psi <= 0.0 and f > 0.0)) else 0
    return TailClass(kappa, extra)


def jost_node_count(pot: Potential, E: float) -> int:
    """Total zero count on the line of the solution matching exp(kap*x)
    left of the support, for E <= 0.

    The left tail exp(kap*x) (kap = sqrt(-E) >= 0) never vanishes, so the
    count is the open-interval count across the support plus the tail
    budget at the right edge.  This equals the number of bound states
    below E (strictly below; at E = 0, all of them).
    """
    if E > 0.0:
        raise ValueError("bound-state counting is defined for E <= 0 only")
    x_lo, x_hi = support(pot)
    kappa = math.sqrt(-E)
    psi, dpsi, _, _, _, nodes = _walk(pot, E, 1.0, kappa, x_lo, x_hi)
    # the tail split is scale-invariant: classify on the renormalized data
    return nodes + tail_nodes(CauchyData(psi, dpsi, x_hi), E).extra_nodes
