"""Randomized verification campaigns for the integer counting bounds.

Each check_* function draws deterministic random instances from a seed,
evaluates one family of counting inequalities on energy grids (nudged
off zone edges and touch points, where strict and closed counts may
legitimately differ by the edge eigenvalue itself), cross-checks a
subsample against the finite-difference oracles with margin filtering,
and returns a CountReport.  Reports serialize to stable JSON: same seed
and parameters, byte-identical output.

Conventions used throughout:

    B(E)  = floor(n * a * p(E) / pi)        (quasimomentum staircase)
    F     = the relevant eigenvalue count at E

and a record is emitted per (instance, sub-check) with grid-level
results folded into the detail string.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bands import Quasimomentum, ZoneTable, scan_zones
from .boundary_spectra import (BoundaryConditions, classify_periodic,
                               periodic_count, periodic_eigenvalues, sl_count)
from .config import DEFAULT, Tolerances
from .potential import (CellPotential, HeteroPotential, assemble_hetero,
                        assemble_n_cell, save_potential)
from .scatter import count_bound_states, find_resonances, n_cell_scattering, \
    resonance_vs_periodic
from . import oracles

NUDGE = 10.0  # in units of edge_tol, applied relative to 1 + |E|


@dataclass(frozen=True)
class CountRecord:
    check: str
    instance: int
    params: dict
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"check": self.check, "instance": self.instance,
                "params": self.params, "passed": self.passed,
                "detail": self.detail}


@dataclass
class CountReport:
    suite: str
    seed: int
    instances: list[str] = field(default_factory=list)
    records: list[CountRecord] = field(default_factory=list)

    def add(self, check: str, instance: int, params: dict, passed: bool,
            detail: str) -> None:
        self.records.append(CountRecord(check, instance, dict(params),
                                        bool(passed), detail))

    def register(self, pot) -> int:
        self.instances.append(save_potential(pot))
        return len(self.instances) - 1

    def summary(self) -> dict:
        ok = sum(1 for r in self.records if r.passed)
        return {"pass": ok, "fail": len(self.records) - ok}

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed,
                "instances": list(self.instances),
                "records": [r.to_dict() for r in self.records],
                "summary": self.summary()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def extend(self, other: "CountReport") -> None:
        base = len(self.instances)
        self.instances.extend(other.instances)
        for r in other.records:
            self.records.append(CountRecord(r.check, r.instance + base,
                                            r.params, r.passed, r.detail))


@dataclass(frozen=True)
class Campaign:
    """Deterministic random-instance factory; each consumer derives its
    own stream so checks stay reproducible independently of each other."""
    seed: int = 0

    def rng(self, tag: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, tag])

    def random_cell(self, rng: np.random.Generator, v_lo: float, v_hi: float,
                    max_segments: int = 4, a: float = 1.0) -> CellPotential:
        nseg = int(rng.integers(1, max_segments + 1))
        widths = 0.08 + rng.random(nseg)
        widths = widths / widths.sum() * a
        vals = rng.uniform(v_lo, v_hi, nseg)
        segs, x = [], 0.0
        for j in range(nseg):
            x_next = a if j == nseg - 1 else x + widths[j]
            segs.append((x, x_next, float(vals[j])))
            x = x_next
        return CellPotential(a=a, segments=tuple(segs))

    def random_hetero(self, rng: np.random.Generator, n_cells: int,
                      v_lo: float, v_hi: float,
                      max_segments: int = 3) -> HeteroPotential:
        cells = [self.random_cell(rng, v_lo, v_hi, max_segments)
                 for _ in range(n_cells)]
        pieces = []
        x = 0.0
        for c in cells:
            pieces.append((x, x + c.a,
                           [(x + s[0], x + s[1], s[2]) for s in c.segments]))
            x += c.a
        return assemble_hetero(pieces)


def _events(zt: ZoneTable) -> np.ndarray:
    ev = []
    for z in zt.forbidden():
        if math.isfinite(z.E_lo):
            ev.append(z.E_lo)
        ev.append(z.E_hi)
    return np.unique(np.asarray(ev))


def _nudged_grid(zt: ZoneTable, lo: float, hi: float, count: int,
                 tol: Tolerances = DEFAULT) -> np.ndarray:
    """Uniform grid with points shifted just above any zone event they
    land on, so strict/closed counting at the event itself is never
    exercised by bracket checks."""
    ev = _events(zt)
    Es = np.linspace(lo, hi, count)
    if len(ev) == 0:
        return Es
    out = []
    for E in Es:
        eps = NUDGE * tol.edge_tol * (1.0 + abs(E))
        d = np.abs(ev - E)
        j = int(np.argmin(d))
        out.append(ev[j] + eps if d[j] < eps else float(E))
    return np.asarray(out)


def _off_closure_mask(zt: ZoneTable, Es: np.ndarray,
                      tol: Tolerances = DEFAULT) -> np.ndarray:
    """True where E lies in a band interior, clear of every forbidden-zone
    closure point (open-gap endpoints and touch energies)."""
    ev = _events(zt)
    mask = np.empty(len(Es), dtype=bool)
    for i, E in enumerate(Es):
        eps = NUDGE * tol.edge_tol * (1.0 + abs(E))
        near = len(ev) and np.min(np.abs(ev - E)) <= eps
        mask[i] = (not near) and zt.locate(float(E)).kind == "allowed"
    return mask


def _staircase(q: Quasimomentum, n: int, E: float) -> int:
    return math.floor(n * q.phase(E) / math.pi + 1e-9)


def _fold(name: str, report: CountReport, idx: int, params: dict,
          failures: list[str], total: int) -> None:
    passed = not failures
    detail = (f"{total}/{total} points ok" if passed else
              f"{total - len(failures)}/{total} ok; first failures: "
              + "; ".join(failures[:4]))
    report.add(name, idx, params, passed, detail)


# -- whole-line counts vs quasimomentum ----------------------------------------

def check_theorem1(campaign: Campaign, cells: int = 20,
                   n_list: Sequence[int] = (1, 2, 4, 8, 16),
                   grid_points: int = 200,
                   oracle_fraction: float = 0.1,
                   tol: Tolerances = DEFAULT) -> CountReport:
    """Strict bound-state counts of n-cell arrays against the staircase:
    |F - B| <= 1 for E <= 0, the sharper B <= F <= B + 1 off gap
    closures, and at most 2 eigenvalues per negative gap closure (1 for
    the bottom gap).  A margin-filtered subsample is matched exactly
    against the Dirichlet-box oracle."""
    report = CountReport("theorem1", campaign.seed)
    rng = campaign.rng(101)
    for c in range(cells):
        cell = campaign.random_cell(rng, -30.0, 10.0)
        idx = report.register(cell)
        vmin = min(v for _, v in cell.pieces())
        vmax = max(v for _, v in cell.pieces())
        zt = scan_zones(cell, max(vmax, 0.0) + 5.0, tol=tol)
        q = Quasimomentum(zt)
        E_lo = min(vmin, 0.0) - 2.0
        Es = _nudged_grid(zt, E_lo, 0.0, grid_points, tol)
        Es = Es[Es <= 0.0]
        off = _off_closure_mask(zt, Es, tol)
        n_oracle = n_list[c % len(n_list)]
        for n in n_list:
            pot = assemble_n_cell(cell, n) if n > 1 else cell
            F = np.array([count_bound_states(pot, float(E)) for E in Es])
            B = np.array([_staircase(q, n, float(E)) for E in Es])

            bad = [f"E={Es[i]!r} F={F[i]} B={B[i]}"
                   for i in np.nonzero(np.abs(F - B) > 1)[0]]
            _fold("theorem1.two_sided", report, idx, {"n": n}, bad, len(Es))

            sel = np.nonzero(off)[0]
            bad = [f"E={Es[i]!r} F={F[i]} B={B[i]}"
                   for i in sel if not (B[i] <= F[i] <= B[i] + 1)]
            _fold("theorem1.off_closure", report, idx, {"n": n}, bad, len(sel))

            # eigenvalues per gap closure intersected with ]-inf, 0[
            bad = []
            gaps = 0
            for z in zt.open_gaps():
                lo_z = z.E_lo if math.isfinite(z.E_lo) else min(vmin, 0.0) - 3.0
                if lo_z >= 0.0:
                    continue
                gaps += 1
                d_lo = tol.edge_tol * NUDGE * (1.0 + abs(lo_z))
                d_hi = tol.edge_tol * NUDGE * (1.0 + abs(z.E_hi))
                a_ = max(lo_z - d_lo, min(vmin, 0.0) - 3.0)
                b_ = min(z.E_hi + d_hi, 0.0)
                cnt = (count_bound_states(pot, b_)
                       - count_bound_states(pot, a_))
                cap = 1 if z.gap_index == 0 else 2
                if cnt > cap:
                    bad.append(f"gap {z.gap_index}: {cnt} > {cap}")
            _fold("theorem1.per_gap", report, idx, {"n": n}, bad, gaps)

            if n == n_oracle:
                eigs = oracles.box_eigenvalues(pot, 0.0)
                step = max(1, int(round(1.0 / oracle_fraction)))
                sub = Es[::step]
                bad, used = [], 0
                for E in sub:
                    E = float(E)
                    if not oracles.outside_margin(E, eigs, 5e-3):
                        continue
                    used += 1
                    fd = int(np.searchsorted(eigs, E, side="left"))
                    lib = count_bound_states(pot, E)
                    if lib != fd:
                        bad.append(f"E={E!r} lib={lib} fd={fd}")
                _fold("theorem1.oracle", report, idx, {"n": n}, bad, used)
    return report


# -- separated boundary conditions ---------------------------------------------

_ALPHAS = (0.0, 0.25 * math.pi, 0.5 * math.pi, 0.75 * math.pi)
_BETAS = (0.25 * math.pi, 0.5 * math.pi, 0.75 * math.pi, math.pi)


def _bracket_for(alpha: float, beta: float):
    """(lo_shift, hi_shift, off_lo, off_hi): B + lo_shift <= F <= B + hi_shift
    everywhere, and the sharper off-closure window."""
    if alpha == 0.0 and beta == math.pi:
        return -1, 0, 0, 0
    if alpha < beta:
        return -1, 1, 0, 1
    if beta < alpha:
        return 0, 2, 1, 2
    return 0, 1, 1, 1


def _gap_cap_for(alpha: float, beta: float, bottom: bool):
    """(min_count, max_count) of eigenvalues on a full gap closure."""
    if alpha == 0.0 and beta == math.pi:
        return (0, 0) if bottom else (1, 1)
    if alpha == beta:
        return 1, 1
    if alpha < beta:
        return (0, 1) if bottom else (0, 2)
    return 0, 2


def check_theorem2(campaign: Campaign, cells: int = 3,
                   n_list: Sequence[int] = (1, 2, 4),
                   grid_points: int = 60,
                   oracle_instances: int = 2,
                   alphas: Sequence[float] = _ALPHAS,
                   betas: Sequence[float] = _BETAS,
                   tol: Tolerances = DEFAULT) -> CountReport:
    """Separated-condition counts against the staircase over a grid of
    (alpha, beta) pairs covering all four case classes, plus exact
    per-gap-closure counts and a Robin FD oracle subsample."""
    report = CountReport("theorem2", campaign.seed)
    rng = campaign.rng(202)
    for c in range(cells):
        cell = campaign.random_cell(rng, -20.0, 20.0)
        idx = report.register(cell)
        vmin = min(v for _, v in cell.pieces())
        vmax = max(v for _, v in cell.pieces())
        ceiling = max(vmax, 0.0) + 50.0
        zt = scan_zones(cell, ceiling, tol=tol)
        q = Quasimomentum(zt)
        Es = _nudged_grid(zt, min(vmin, 0.0) - 2.0, ceiling - 1.0,
                          grid_points, tol)
        off = _off_closure_mask(zt, Es, tol)
        for n in n_list:
            pot = assemble_n_cell(cell, n) if n > 1 else cell
            B = np.array([_staircase(q, n, float(E)) for E in Es])
            for alpha in alphas:
                for beta in betas:
                    bc = BoundaryConditions(alpha, beta)
                    params = {"n": n, "alpha": round(alpha, 12),
                              "beta": round(beta, 12)}
                    F = np.array([sl_count(pot, bc, float(E)) for E in Es])
                    lo_s, hi_s, off_lo, off_hi = _bracket_for(alpha, beta)

                    bad = [f"E={Es[i]!r} F={F[i]} B={B[i]}"
                           for i in range(len(Es))
                           if not (B[i] + lo_s <= F[i] <= B[i] + hi_s)]
                    _fold("theorem2.two_sided", report, idx, params, bad, len(Es))

                    sel = np.nonzero(off)[0]
                    bad = [f"E={Es[i]!r} F={F[i]} B={B[i]}"
                           for i in sel
                           if not (B[i] + off_lo <= F[i] <= B[i] + off_hi)]
                    _fold("theorem2.off_closure", report, idx, params, bad,
                          len(sel))

                    # full gap closures strictly below the ceiling
                    bad, gaps = [], 0
                    for z in zt.open_gaps():
                        bottom = not math.isfinite(z.E_lo)
                        if z.E_hi >= ceiling - 1.0:
                            continue
                        gaps += 1
                        d = tol.edge_tol * NUDGE
                        hi_E = z.E_hi + d * (1.0 + abs(z.E_hi))
                        cnt = sl_count(pot, bc, hi_E)
                        if not bottom:
                            lo_E = z.E_lo - d * (1.0 + abs(z.E_lo))
                            cnt -= sl_count(pot, bc, lo_E)
                        cmin, cmax = _gap_cap_for(alpha, beta, bottom)
                        if not (cmin <= cnt <= cmax):
                            bad.append(f"gap {z.gap_index}: count {cnt} "
                                       f"outside [{cmin}, {cmax}]")
                    _fold("theorem2.per_gap", report, idx, params, bad, gaps)

        if c < oracle_instances:
            pot = assemble_n_cell(cell, 2)
            for alpha, beta in ((0.0, math.pi), (0.5 * math.pi, 0.5 * math.pi),
                                (0.25 * math.pi, 0.75 * math.pi),
                                (0.75 * math.pi, 0.25 * math.pi)):
                bc = BoundaryConditions(alpha, beta)
                eigs = oracles.robin_eigenvalues(pot, bc, ceiling - 1.0)
                bad, used = [], 0
                for E in Es[::6]:
                    E = float(E)
                    if not oracles.outside_margin(E, eigs, 5e-3):
                        continue
                    used += 1
                    fd = int(np.searchsorted(eigs, E, side="right"))
                    lib = sl_count(pot, bc, E)
                    if lib != fd:
                        bad.append(f"E={E!r} lib={lib} fd={fd}")
                _fold("theorem2.oracle", report, idx,
                      {"n": 2, "alpha": round(alpha, 12),
                       "beta": round(beta, 12)}, bad, used)
    return report


# -- periodic / antiperiodic closures and resonances ---------------------------

def check_periodic(campaign: Campaign, instances: int = 5,
                   n_choices: Sequence[int] = (2, 3, 4, 6, 8),
                   tol: Tolerances = DEFAULT) -> CountReport:
    """Closed periodic/skew counts against B <= F <= B + 1, zero spectral
    mass strictly inside open gaps, eigenvalue positions and
    multiplicities against the cyclic FD oracle, and the resonance <->
    double-eigenvalue correspondence."""
    report = CountReport("periodic", campaign.seed)
    rng = campaign.rng(303)
    for c in range(instances):
        cell = campaign.random_cell(rng, -15.0, 15.0, max_segments=3)
        n = n_choices[c % len(n_choices)]
        pot = assemble_n_cell(cell, n)
        idx = report.register(pot)
        vmin = min(v for _, v in cell.pieces())
        vmax = max(v for _, v in cell.pieces())
        ceiling = max(vmax, 0.0) + 40.0
        zt = scan_zones(cell, ceiling, tol=tol)
        q = Quasimomentum(zt)
        Es = _nudged_grid(zt, min(vmin, 0.0) - 2.0, ceiling - 1.0, 80, tol)
        E_top = float(ceiling - 1.0)

        for flavor in ("periodic", "skew"):
            F = np.array([periodic_count(pot, flavor, float(E), q=q)
                          for E in Es])
            B = np.array([_staircase(q, n, float(E)) for E in Es])
            bad = [f"E={Es[i]!r} F={F[i]} B={B[i]}"
                   for i in range(len(Es)) if not (B[i] <= F[i] <= B[i] + 1)]
            _fold("periodic.bracket", report, idx, {"n": n, "flavor": flavor},
                  bad, len(Es))

            bad, gaps = [], 0
            for z in zt.open_gaps():
                if not math.isfinite(z.E_lo) or z.E_hi >= E_top:
                    continue
                if z.E_hi - z.E_lo < 1e-4:
                    continue
                gaps += 1
                samples = np.linspace(z.E_lo, z.E_hi, 52)[1:-1]
                lo_c = periodic_count(pot, flavor, float(samples[0]), q=q)
                drift = [f"E={float(E)!r}" for E in samples[1:]
                         if periodic_count(pot, flavor, float(E), q=q) != lo_c]
                if drift:
                    bad.append(f"gap {z.gap_index}: count changes inside "
                               f"the open gap ({drift[0]})")
            _fold("periodic.gap_mass", report, idx,
                  {"n": n, "flavor": flavor}, bad, gaps)

            lib = periodic_eigenvalues(pot, flavor, E_top, q=q)
            fd_raw = oracles.ring_eigenvalues(cell, n, flavor, E_top)
            fd_clusters = oracles.cluster_eigenvalues(fd_raw, 1e-6)
            fd_sharp = oracles.richardson_ring_eigenvalues(cell, n, flavor,
                                                           E_top)
            bad = []
            if len(lib.entries) != len(fd_clusters):
                bad.append(f"{len(lib.entries)} clusters vs FD "
                           f"{len(fd_clusters)}")
            else:
                for (e_lib, m_lib), (e_fd, m_fd) in zip(lib.entries,
                                                        fd_clusters):
                    if m_lib != m_fd:
                        bad.append(f"mult at E={e_lib!r}: {m_lib} vs {m_fd}")
                    elif abs(e_lib - e_fd) > 2e-3 * (1.0 + abs(e_lib)):
                        bad.append(f"E={e_lib!r} vs FD {e_fd!r}")
                # multiplicity-expanded list matches the raw FD ordering
                flat = [e for e, m in lib.entries for _ in range(m)]
                k = min(len(flat), len(fd_sharp))
                for e_lib, e_fd in zip(flat[:k], fd_sharp[:k]):
                    if abs(e_lib - e_fd) > 1e-4 * (1.0 + abs(e_lib)):
                        bad.append(f"sharp E={e_lib!r} vs {float(e_fd)!r}")
            _fold("periodic.oracle", report, idx, {"n": n, "flavor": flavor},
                  bad, max(len(lib.entries), len(fd_clusters), 1))

        # resonances: every comb resonance is a double eigenvalue of the
        # matching flavor; no resonance inside open gaps
        rs = find_resonances(cell, n, 0.0, E_top, q=zt, tol=tol)
        bad = []
        for r in rs.resonances:
            if zt.locate(r.energy).kind != "allowed":
                bad.append(f"resonance at E={r.energy!r} not in a band")
            if r.origin != "comb":
                continue
            flavor = resonance_vs_periodic(cell, n, r.energy, q=q)
            mult, fl2 = classify_periodic(pot, r.energy, q=q)
            if flavor not in ("periodic", "skew") or mult != "double" \
                    or fl2 != flavor:
                bad.append(f"E={r.energy!r}: vs_periodic={flavor} "
                           f"classify=({mult}, {fl2})")
            if flavor in ("periodic", "skew"):
                sp = periodic_eigenvalues(pot, flavor, E_top, q=q)
                hits = [e for e, m in sp.entries
                        if abs(e - r.energy) <= 1e-6 * (1.0 + abs(e))
                        and m == 2]
                if not hits:
                    bad.append(f"E={r.energy!r}: no double within 1e-6")
        _fold("periodic.resonance_map", report, idx, {"n": n}, bad,
              max(len(rs.resonances), 1))

        bad, gaps = [], 0
        for z in zt.open_gaps():
            if not math.isfinite(z.E_lo) or z.E_hi >= E_top:
                continue
            if z.E_lo <= 0.0 or z.E_hi - z.E_lo < 1e-4:
                continue
            gaps += 1
            for E in np.linspace(z.E_lo, z.E_hi, 52)[1:-1]:
                sd = n_cell_scattering(pot, math.sqrt(float(E)), tol)
                if abs(sd.R) < tol.res_tol:
                    bad.append(f"|R|={abs(sd.R):.2e} at gap E={float(E)!r}")
                    break
        _fold("periodic.gap_opacity", report, idx, {"n": n}, bad, gaps)
    return report


# -- density of states / resonances --------------------------------------------

def check_density(campaign: Campaign, instances: int = 3,
                  n_list: Sequence[int] = (4, 8, 16, 32),
                  tol: Tolerances = DEFAULT) -> CountReport:
    """Integrated-density comparisons: the scattering count and both
    boundary-condition families track p/pi at rate 1/(n a), and the
    resonance-count deviation decays like 1/n (checked as n * sup-error
    non-increasing with 10% slack)."""
    report = CountReport("density", campaign.seed)
    rng = campaign.rng(404)
    for c in range(instances):
        cell = campaign.random_cell(rng, -18.0, 12.0, max_segments=3)
        # the 1/n resonance-rate claim needs the counting window ]0, E]
        # to start on the comb, i.e. p(0) = 0; a nonnegative cell keeps
        # the whole first band above zero
        cell_pos = campaign.random_cell(rng, 0.0, 15.0, max_segments=3)
        idx = report.register(cell)
        idx_pos = report.register(cell_pos)
        a = cell.a
        vmin = min(v for _, v in cell.pieces())
        vmax = max(v for _, v in cell.pieces())
        ceiling = max(vmax, 0.0) + 30.0
        zt = scan_zones(cell, ceiling, tol=tol)
        q = Quasimomentum(zt)
        E_top = ceiling - 1.0

        ceiling_pos = max(v for _, v in cell_pos.pieces()) + 30.0
        zt_pos = scan_zones(cell_pos, ceiling_pos, tol=tol)
        q_pos = Quasimomentum(zt_pos)
        E_top_pos = ceiling_pos - 1.0

        neg = _nudged_grid(zt, min(vmin, 0.0) - 2.0, 0.0, 60, tol)
        neg = neg[neg <= 0.0]
        full = _nudged_grid(zt, min(vmin, 0.0) - 2.0, E_top, 60, tol)

        sup_errors = []
        for n in n_list:
            pot = assemble_n_cell(cell, n)
            na = n * a

            bad = []
            for E in neg:
                E = float(E)
                F = count_bound_states(pot, E)
                p = q(E)
                if not (F / na - 1.0 / na - 1e-12 <= p / math.pi
                        <= F / na + 2.0 / na + 1e-12):
                    bad.append(f"E={E!r} F={F} p={p!r}")
            _fold("density.scattering", report, idx, {"n": n}, bad, len(neg))

            rs = find_resonances(cell_pos, n, 0.0, E_top_pos, q=zt_pos,
                                 tol=tol)
            errs = [abs(rs.count_upto(float(E)) / (n * cell_pos.a)
                        - q_pos(float(E)) / math.pi)
                    for E in np.linspace(1e-6, E_top_pos, 200)]
            sup_errors.append((n, max(errs)))

            for alpha, beta, which in ((0.3, 2.0, "le"),
                                       (0.5 * math.pi, 0.5 * math.pi, "le"),
                                       (2.5, 0.9, "gt")):
                bc = BoundaryConditions(alpha, beta)
                bad = []
                for E in full:
                    E = float(E)
                    F = sl_count(pot, bc, E)
                    r = q(E) / math.pi
                    if which == "le":
                        ok = (F - 1.0) / na - 1e-12 <= r <= (F + 2.0) / na + 1e-12
                    else:
                        ok = (F - 3.0) / na - 1e-12 <= r <= F / na + 1e-12
                    if not ok:
                        bad.append(f"E={E!r} F={F} p/pi={r!r}")
                _fold("density.boundary", report, idx,
                      {"n": n, "alpha": alpha, "beta": beta}, bad, len(full))

            for flavor in ("periodic", "skew"):
                bad = []
                for E in full:
                    E = float(E)
                    F = periodic_count(pot, flavor, E, q=q)
                    r = q(E) / math.pi
                    if not ((F - 1.0) / na - 1e-12 <= r
                            <= (F + 1.0) / na + 1e-12):
                        bad.append(f"E={E!r} F={F} p/pi={r!r}")
                _fold("density.closed", report, idx,
                      {"n": n, "flavor": flavor}, bad, len(full))

        bad = []
        for (n1, e1), (n2, e2) in zip(sup_errors, sup_errors[1:]):
            if n2 * e2 > 1.1 * n1 * e1:
                bad.append(f"n*err grew: {n1}*{e1!r} -> {n2}*{e2!r}")
        detail_rates = ", ".join(f"n={n}: {n * e:.4f}" for n, e in sup_errors)
        report.add("density.resonance_rate", idx_pos,
                   {"n_list": list(n_list)}, not bad,
                   detail_rates if not bad else "; ".join(bad))
    return report


# -- heterogeneous decoupling ---------------------------------------------------

def check_theorem3(campaign: Campaign, instances: int = 20,
                   oracle_instances: int = 5, grid_points: int = 50,
                   tol: Tolerances = DEFAULT) -> CountReport:
    """Counts of heterogeneous stacks against the sum of their cells'
    individual whole-line counts: |F - sum_j F_j| <= n - 1 for E < 0 and
    sum_j F_j - (n-1) <= F <= sum_j F_j at E = 0."""
    report = CountReport("theorem3", campaign.seed)
    rng = campaign.rng(505)
    for c in range(instances):
        n_cells = int(rng.integers(2, 5))
        het = campaign.random_hetero(rng, n_cells, -25.0, 8.0)
        idx = report.register(het)
        parts = [het.sub_potential(j) for j in range(n_cells)]
        vmin = min(v for _, v in het.cells[0].pieces())
        for cell_ in het.cells:
            vmin = min(vmin, min(v for _, v in cell_.pieces()))
        Es = np.linspace(min(vmin, 0.0) - 2.0, 0.0, grid_points)

        bad = []
        for E in Es[:-1]:
            E = float(E)
            F = count_bound_states(het, E)
            S = sum(count_bound_states(p, E) for p in parts)
            if abs(F - S) > n_cells - 1:
                bad.append(f"E={E!r} F={F} sum={S}")
        _fold("theorem3.split", report, idx, {"cells": n_cells}, bad, len(Es) - 1)

        F0 = count_bound_states(het, 0.0)
        S0 = sum(count_bound_states(p, 0.0) for p in parts)
        ok = S0 - (n_cells - 1) <= F0 <= S0
        report.add("theorem3.at_zero", idx, {"cells": n_cells}, ok,
                   f"F={F0} sum={S0}")

        if c < oracle_instances:
            eigs = oracles.box_eigenvalues(het, 0.0)
            bad, used = [], 0
            for E in Es[::5]:
                E = float(E)
                if not oracles.outside_margin(E, eigs, 5e-3):
                    continue
                used += 1
                fd = int(np.searchsorted(eigs, E, side="left"))
                lib = count_bound_states(het, E)
                if lib != fd:
                    bad.append(f"E={E!r} lib={lib} fd={fd}")
            _fold("theorem3.oracle", report, idx, {"cells": n_cells}, bad, used)
    return report


_SUITES = {
    "theorem1": check_theorem1,
    "theorem2": check_theorem2,
    "periodic": check_periodic,
    "density": check_density,
    "theorem3": check_theorem3,
}


def run_suite(suite: str, seed: int = 0) -> CountReport:
    """Run one named suite, or 'all' for every one of them."""
    campaign = Campaign(seed)
    if suite == "all":
        merged = CountReport("all", seed)
        for name in ("theorem1", "theorem2", "periodic", "density", "theorem3"):
            merged.extend(_SUITES[name](campaign))
        return merged
    if suite not in _SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from "
                         f"{sorted(_SUITES)} or 'all'")
    return _SUITES[suite](campaign)
