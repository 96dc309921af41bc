"""Independent finite-difference oracles.

Everything here avoids the transfer-matrix/Prüfer machinery on purpose:
spectra are recomputed from symmetric tridiagonal (or sparse cyclic)
discretizations so that integer counts and eigenvalue positions can be
cross-checked against an implementation that shares no code with the
library proper.

Discretization notes
--------------------
* Potentials are sampled by exact cell averages over each node's
  interval (the cumulative integral of a piecewise-constant function is
  piecewise linear, so np.interp evaluates it exactly).  This keeps the
  O(h^2) convergence order in the presence of jumps.
* The whole-line problem is boxed with Dirichlet walls well outside the
  support; bound states decay like exp(-sqrt(-E) |x|), so a pad of 20
  perturbs eigenvalues below any practical comparison margin.
* Counting comparisons must be margin-filtered: an FD eigenvalue within
  its own discretization error of the query energy makes the integer
  count of the discrete and continuum problems legitimately differ.
* Eigenvalues can be sharpened by Richardson extrapolation over grids h
  and h/2 (error model c h^2 + O(h^4)).
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import eigsh

from .boundary_spectra import BoundaryConditions
from .potential import CellPotential, Potential, iter_pieces, support

BOX_PAD = 20.0
BOX_POINTS = 20000


def _cumulative(pot: Potential) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints and cumulative integral of the potential over its support."""
    x_lo, _ = support(pot)
    xs, Vs = [x_lo], [0.0]
    for w, v in iter_pieces(pot):
        xs.append(xs[-1] + w)
        Vs.append(Vs[-1] + w * v)
    return np.asarray(xs), np.asarray(Vs)


def averaged_samples(pot: Potential, x: np.ndarray, h: float) -> np.ndarray:
    """Exact averages of the potential over [x_i - h/2, x_i + h/2]."""
    bx, bV = _cumulative(pot)
    hi = np.interp(x + 0.5 * h, bx, bV)  # clamping = zero potential outside
    lo = np.interp(x - 0.5 * h, bx, bV)
    return (hi - lo) / h


def _box_grid(pot: Potential, pad: float, n_points: int):
    x_lo, x_hi = support(pot)
    lo, hi = x_lo - pad, x_hi + pad
    h = (hi - lo) / (n_points + 1)
    x = lo + h * np.arange(1, n_points + 1)
    return x, h


def box_eigenvalues(pot: Potential, E_max: float, pad: float = BOX_PAD,
                    n_points: int = BOX_POINTS) -> np.ndarray:
    """FD eigenvalues <= E_max of the whole-line problem in a Dirichlet box."""
    x, h = _box_grid(pot, pad, n_points)
    v = averaged_samples(pot, x, h)
    d = 2.0 / h**2 + v
    e = np.full(n_points - 1, -1.0 / h**2)
    lower = float(v.min()) - 1.0
    if E_max <= lower:
        return np.empty(0)
    return eigh_tridiagonal(d, e, select="v", select_range=(lower, E_max),
                            eigvals_only=True)


def box_count(pot: Potential, E: float, pad: float = BOX_PAD,
              n_points: int = BOX_POINTS) -> int:
    """FD count of whole-line eigenvalues up to E (box walls at +-pad)."""
    return len(box_eigenvalues(pot, E, pad, n_points))


def richardson_box_eigenvalues(pot: Potential, E_max: float,
                               pad: float = BOX_PAD,
                               n_points: int = BOX_POINTS) -> np.ndarray:
    """h^2-extrapolated whole-line eigenvalues (grids n and 2n)."""
    e1 = box_eigenvalues(pot, E_max, pad, n_points)
    e2 = box_eigenvalues(pot, E_max, pad, 2 * n_points)
    m = min(len(e1), len(e2))
    return (4.0 * e2[:m] - e1[:m]) / 3.0


def outside_margin(E: float, eigenvalues: np.ndarray, margin: float) -> bool:
    """True when E is farther than margin from every oracle eigenvalue, so
    integer-count comparisons at E are trustworthy."""
    return bool(np.all(np.abs(np.asarray(eigenvalues) - E) > margin))


# -- separated (Robin) interval problem ----------------------------------------

def _robin_tridiag(pot: Potential, bc: BoundaryConditions, n_points: int):
    """Symmetrized lumped-mass P1 discretization of the separated problem.

    Non-Dirichlet ends keep their node with a half mass h/2 and the form
    term cot(angle) |psi(end)|^2; a Dirichlet end drops its node."""
    x_lo, x_hi = support(pot)
    h = (x_hi - x_lo) / (n_points - 1)
    x = x_lo + h * np.arange(n_points)
    v = averaged_samples(pot, x, h)
    # end nodes: average over the half-window inside the interval, else the
    # zero potential outside the support leaks in at O(1) and the Robin
    # eigenvalue error degrades from h^2 to h
    bx, bV = _cumulative(pot)
    v[0] = (np.interp(x_lo + 0.5 * h, bx, bV) - np.interp(x_lo, bx, bV)) / (0.5 * h)
    v[-1] = (np.interp(x_hi, bx, bV) - np.interp(x_hi - 0.5 * h, bx, bV)) / (0.5 * h)

    stiff_diag = np.full(n_points, 2.0 / h)
    stiff_diag[0] = stiff_diag[-1] = 1.0 / h
    mass = np.full(n_points, h)
    mass[0] = mass[-1] = 0.5 * h
    A = stiff_diag + mass * v
    off = np.full(n_points - 1, -1.0 / h)

    keep_lo = bc.alpha != 0.0
    keep_hi = bc.beta != math.pi
    if keep_lo:
        A[0] += math.cos(bc.alpha) / math.sin(bc.alpha)
    if keep_hi:
        A[-1] += -math.cos(bc.beta) / math.sin(bc.beta)
    s = slice(None if keep_lo else 1, None if keep_hi else -1)
    A, mass = A[s], mass[s]
    off = off[slice(None if keep_lo else 1, None if keep_hi else -1)][: len(A) - 1]

    d = A / mass
    e = off / np.sqrt(mass[:-1] * mass[1:])
    return d, e


def robin_eigenvalues(pot: Potential, bc: BoundaryConditions, E_max: float,
                      n_points: int = 6000) -> np.ndarray:
    """FD eigenvalues <= E_max of the separated problem on the support."""
    d, e = _robin_tridiag(pot, bc, n_points)
    lower = float(np.min(d) - 2.0 * np.max(np.abs(e))) - 1.0
    if E_max <= lower:
        return np.empty(0)
    return eigh_tridiagonal(d, e, select="v", select_range=(lower, E_max),
                            eigvals_only=True)


def robin_count(pot: Potential, bc: BoundaryConditions, E: float,
                n_points: int = 6000) -> int:
    return len(robin_eigenvalues(pot, bc, E, n_points))


def richardson_robin_eigenvalues(pot: Potential, bc: BoundaryConditions,
                                 E_max: float,
                                 n_points: int = 6000) -> np.ndarray:
    e1 = robin_eigenvalues(pot, bc, E_max, n_points)
    e2 = robin_eigenvalues(pot, bc, E_max, 2 * n_points)
    m = min(len(e1), len(e2))
    return (4.0 * e2[:m] - e1[:m]) / 3.0


# -- periodic / antiperiodic closures ------------------------------------------

def _ring_matrix(cell: CellPotential, n: int, flavor: str,
                 per_cell: int) -> csc_matrix:
    """Cyclic FD matrix for n cells with (anti)periodic identification.

    The grid is cell-commensurate (per_cell nodes in every cell), so the
    discrete problem inherits the exact translation symmetry and double
    eigenvalues stay numerically double."""
    a = cell.a
    m = per_cell
    h = a / m
    xj = h * np.arange(m)
    # cell averages with periodic wrap-around at the cell boundary
    bx, bV = _cumulative(cell)
    total = bV[-1]
    def V(t):
        wrap = np.floor(t / a)
        return np.interp(t - wrap * a, bx, bV) + wrap * total
    v_cell = (V(xj + 0.5 * h) - V(xj - 0.5 * h)) / h
    v = np.tile(v_cell, n)

    N = n * m
    sigma = 1.0 if flavor == "periodic" else -1.0
    diag = 2.0 / h**2 + v
    rows = list(range(N)) + list(range(N - 1)) + list(range(1, N)) + [0, N - 1]
    cols = list(range(N)) + list(range(1, N)) + list(range(N - 1)) + [N - 1, 0]
    vals = (list(diag) + [-1.0 / h**2] * (2 * (N - 1))
            + [-sigma / h**2, -sigma / h**2])
    return csc_matrix((vals, (rows, cols)), shape=(N, N))


def ring_eigenvalues(cell: CellPotential, n: int, flavor: str, E_max: float,
                     per_cell: int = 600) -> np.ndarray:
    """FD eigenvalues <= E_max of the (anti)periodic n-cell closure,
    with multiplicity, via shift-invert Lanczos from below the spectrum."""
    if flavor not in ("periodic", "skew"):
        raise ValueError(f"unknown flavor {flavor!r}")
    H = _ring_matrix(cell, n, flavor, per_cell)
    N = H.shape[0]
    sigma = float(H.diagonal().min()) - 2.0 / (cell.a / per_cell) ** 2 - 1.0
    k = 16
    while True:
        k = min(k, N - 2)
        vals = np.sort(eigsh(H, k=k, sigma=sigma, which="LM",
                             return_eigenvectors=False))
        if vals[-1] > E_max or k == N - 2:
            return vals[vals <= E_max]
        k *= 2


def richardson_ring_eigenvalues(cell: CellPotential, n: int, flavor: str,
                                E_max: float,
                                per_cell: int = 600) -> np.ndarray:
    e1 = ring_eigenvalues(cell, n, flavor, E_max, per_cell)
    e2 = ring_eigenvalues(cell, n, flavor, E_max, 2 * per_cell)
    m = min(len(e1), len(e2))
    return (4.0 * e2[:m] - e1[:m]) / 3.0


def cluster_eigenvalues(vals: np.ndarray,
                        tol: float = 1e-6) -> list[tuple[float, int]]:
    """Group a sorted eigenvalue array into (mean energy, multiplicity)
    clusters; consecutive values closer than tol (absolute, scaled by
    1 + |E|) are one cluster."""
    out: list[tuple[float, int]] = []
    run: list[float] = []
    for v in np.sort(np.asarray(vals, dtype=float)):
        if run and abs(v - run[-1]) > tol * (1.0 + abs(v)):
            out.append((float(np.mean(run)), len(run)))
            run = []
        run.append(float(v))
    if run:
        out.append((float(np.mean(run)), len(run)))
    return out
