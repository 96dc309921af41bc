"""Command-line interface.

Subcommands map one-to-one onto the library layers: band structure and
quasimomentum tables, scattering amplitudes over an energy grid,
transmission resonances, separated-condition and periodic spectra,
integer counts, and the randomized verification suites.  Output is CSV
(default) or JSON; given the same arguments and seed the bytes written
are identical run to run.

Exit status: 0 on success, 1 when a verification suite reports failures,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

from .bands import Quasimomentum, discriminant, scan_zones
from .boundary_spectra import (BoundaryConditions, periodic_eigenvalues,
                               sl_count, sl_eigenvalues, periodic_count)
from .potential import (CellPotential, NCellPotential, PotentialError,
                        load_potential)
from .scatter import count_bound_states, find_resonances, n_cell_scattering
from .verify import run_suite


def _angle(token: str, side: str) -> float:
    t = token.strip().lower()
    if t == "dirichlet":
        return 0.0 if side == "alpha" else math.pi
    if t == "neumann":
        return 0.5 * math.pi
    try:
        return float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--{side} takes radians or 'dirichlet'/'neumann', got {token!r}")


def _n_arg(token: str) -> list[int]:
    """--n accepts INT or INT,INT,... ; most commands use a single value."""
    try:
        vals = [int(t) for t in token.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n takes integers, got {token!r}")
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("--n values must be >= 1")
    return vals


def _one_n(args) -> Optional[int]:
    ns = getattr(args, "n", None)
    if ns is None:
        return None
    if len(ns) > 1:
        raise PotentialError("this command's output has no n column; "
                             "give a single --n value")
    return ns[0]


def _load(args) -> object:
    if getattr(args, "cell", None) and getattr(args, "pot", None):
        raise PotentialError("give either --cell or --pot, not both")
    path = getattr(args, "cell", None) or getattr(args, "pot", None)
    if path is None:
        raise PotentialError("a potential file is required (--cell/--pot)")
    return load_potential(path)


def _need_cell(pot) -> CellPotential:
    if isinstance(pot, CellPotential):
        return pot
    if isinstance(pot, NCellPotential):
        return pot.cell
    raise PotentialError("this command needs a single-cell potential "
                         "(kind 'cell', or 'ncell' for its cell)")


def _with_n(pot, n: Optional[int]):
    """Apply --n on top of a loaded potential."""
    if n is None or n == 1:
        return pot
    return NCellPotential(_need_cell(pot), n)


def _table(columns: list[str], rows: list[list], fmt: str,
           extra: Optional[dict] = None) -> str:
    if fmt == "json":
        payload = {"columns": columns, "rows": rows}
        if extra:
            payload.update(extra)
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _cmd_bands(args) -> tuple[str, int]:
    cell = _need_cell(_load(args))
    vmax = max(v for _, v in cell.pieces())
    ceiling = max(args.emax + 1e-9 * (1.0 + abs(args.emax)), vmax + 1.0)
    zt = scan_zones(cell, ceiling)
    q = Quasimomentum(zt)
    rows = []
    for i in range(args.grid):
        E = args.emin + (args.emax - args.emin) * i / max(args.grid - 1, 1)
        z = zt.locate(E)
        rows.append([E, discriminant(cell, E), q(E), z.kind,
                     "" if z.gap_index is None else z.gap_index])
    return _table(["E", "TrM", "p", "zone_kind", "gap_index"],
                  rows, args.format), 0


def _cmd_scatter(args) -> tuple[str, int]:
    pot = _with_n(_load(args), _one_n(args))
    if args.emin <= 0.0:
        raise PotentialError("scattering needs --emin > 0")
    rows = []
    for i in range(args.grid):
        E = args.emin + (args.emax - args.emin) * i / max(args.grid - 1, 1)
        sd = n_cell_scattering(pot, math.sqrt(E))
        rows.append([E, sd.T.real, sd.T.imag, abs(sd.T) ** 2,
                     sd.R.real, sd.R.imag])
    return _table(["E", "Re T", "Im T", "|T|^2", "Re R", "Im R"],
                  rows, args.format), 0


def _cmd_resonances(args) -> tuple[str, int]:
    cell = _need_cell(_load(args))
    rs = find_resonances(cell, _one_n(args) or 1, args.emin, args.emax)
    rows = [[r.energy, r.origin, r.abs_R] for r in rs.resonances]
    extra = {"all_pass": rs.all_pass, "warnings": list(rs.warnings)}
    return _table(["lambda", "origin_tag", "abs_R"], rows, args.format,
                  extra), 0


def _cmd_sl(args) -> tuple[str, int]:
    pot = _with_n(_load(args), _one_n(args))
    bc = BoundaryConditions(args.alpha, args.beta)
    sp = sl_eigenvalues(pot, bc, args.emax)
    rows = [[E, j + 1] for j, E in enumerate(sp.energies)]
    return _table(["E_j", "index"], rows, args.format), 0


def _cmd_periodic(args) -> tuple[str, int]:
    pot = _with_n(_load(args), _one_n(args))
    sp = periodic_eigenvalues(pot, args.flavor, args.emax)
    rows = [[E, m] for E, m in sp.entries]
    return _table(["E_j", "multiplicity"], rows, args.format), 0


def _cmd_count(args) -> tuple[str, int]:
    pot = _with_n(_load(args), _one_n(args))
    if args.alpha is not None or args.beta is not None:
        if args.alpha is None or args.beta is None:
            raise PotentialError("separated counting needs both --alpha "
                                 "and --beta")
        c = sl_count(pot, BoundaryConditions(args.alpha, args.beta),
                     args.emax)
    elif args.flavor is not None:
        c = periodic_count(pot, args.flavor, args.emax)
    else:
        c = count_bound_states(pot, args.emax)
    return f"{c}\n", 0


def _cmd_verify(args) -> tuple[str, int]:
    report = run_suite(args.suite, args.seed)
    return report.to_json() + "\n", 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="blochcount",
        description="Band structure, scattering, resonances, and "
                    "eigenvalue-counting checks for piecewise-constant "
                    "1-D potentials.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, pot=True, window=False, n=False):
        if pot:
            sp.add_argument("--cell", help="cell potential JSON file")
            sp.add_argument("--pot", help="potential JSON file (any kind)")
        if n:
            sp.add_argument("--n", type=_n_arg, default=None,
                            help="number of identical cells (INT[,INT...])")
        if window:
            sp.add_argument("--emin", type=float, required=True)
            sp.add_argument("--emax", type=float, required=True)
            sp.add_argument("--grid", type=int, default=200)
        sp.add_argument("--out", help="write output to this file")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("bands", help="discriminant / quasimomentum table")
    add_common(sp, window=True)
    sp.set_defaults(func=_cmd_bands)

    sp = sub.add_parser("scatter", help="transmission/reflection over a grid")
    add_common(sp, window=True, n=True)
    sp.set_defaults(func=_cmd_scatter)

    sp = sub.add_parser("resonances", help="perfect-transmission energies")
    add_common(sp, n=True)
    sp.add_argument("--emin", type=float, default=0.0)
    sp.add_argument("--emax", type=float, required=True)
    sp.set_defaults(func=_cmd_resonances)

    sp = sub.add_parser("sl", help="separated-condition eigenvalues")
    add_common(sp, n=True)
    sp.add_argument("--alpha", type=lambda s: _angle(s, "alpha"),
                    required=True, help="radians or dirichlet|neumann")
    sp.add_argument("--beta", type=lambda s: _angle(s, "beta"),
                    required=True, help="radians or dirichlet|neumann")
    sp.add_argument("--emax", type=float, required=True)
    sp.set_defaults(func=_cmd_sl)

    sp = sub.add_parser("periodic", help="periodic/antiperiodic eigenvalues")
    add_common(sp, n=True)
    sp.add_argument("--flavor", choices=("periodic", "skew"),
                    default="periodic")
    sp.add_argument("--emax", type=float, required=True)
    sp.set_defaults(func=_cmd_periodic)

    sp = sub.add_parser("count", help="integer eigenvalue count up to --emax")
    add_common(sp, n=True)
    sp.add_argument("--alpha", type=lambda s: _angle(s, "alpha"),
                    default=None, help="radians or dirichlet|neumann")
    sp.add_argument("--beta", type=lambda s: _angle(s, "beta"),
                    default=None, help="radians or dirichlet|neumann")
    sp.add_argument("--flavor", choices=("periodic", "skew"), default=None)
    sp.add_argument("--emax", "--E", dest="emax", type=float, required=True)
    sp.set_defaults(func=_cmd_count)

    sp = sub.add_parser("verify", help="run a counting-bound campaign")
    sp.add_argument("--suite", default="all",
                    choices=("theorem1", "theorem2", "periodic", "density",
                             "theorem3", "all"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="write the JSON report to this file")
    sp.add_argument("--format", choices=("json",), default="json")
    sp.set_defaults(func=_cmd_verify)
    return p


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except (PotentialError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
