"""Piecewise-constant potentials: single cells, n-cell repetitions,
heterogeneous stacks, and periodic extensions.

A *cell* is a compactly supported potential given by constant segments
tiling [0, a] exactly.  Everything downstream (transfer matrices, node
counts, band edges) is computed in closed form from the segment list,
so the potential representation is kept exact: segment endpoints are
stored as the parsed floats and are never re-derived by accumulation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union


class PotentialError(ValueError):
    """Invalid potential definition (overlap, gap, bad value...)."""


def _check_segments(a: float, segments: Sequence[Sequence[float]]) -> tuple[tuple[float, float, float], ...]:
    if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0):
        raise PotentialError(f"cell length must be a positive finite number, got {a!r}")
    if not segments:
        raise PotentialError("cell needs at least one segment")
    segs = []
    for seg in segments:
        if len(seg) != 3:
            raise PotentialError(f"segment must be (x_lo, x_hi, v), got {seg!r}")
        x_lo, x_hi, v = (float(s) for s in seg)
        if not (math.isfinite(x_lo) and math.isfinite(x_hi) and math.isfinite(v)):
            raise PotentialError(f"non-finite entry in segment {seg!r}")
        if x_hi <= x_lo:
            raise PotentialError(f"segment {seg!r} has non-positive width")
        segs.append((x_lo, x_hi, v))
    segs.sort(key=lambda s: s[0])
    if segs[0][0] != 0.0:
        raise PotentialError(f"first segment starts at {segs[0][0]}, expected 0")
    for left, right in zip(segs, segs[1:]):
        if right[0] < left[1]:
            raise PotentialError(f"segments overlap at [{right[0]}, {left[1]}]")
        if right[0] > left[1]:
            raise PotentialError(f"gap between x={left[1]} and x={right[0]}")
    if segs[-1][1] != a:
        raise PotentialError(f"last segment ends at {segs[-1][1]}, expected a={a}")
    return tuple(segs)


@dataclass(frozen=True)
class CellPotential:
    """One compactly supported cell: constant segments tiling [0, a]."""

    a: float
    segments: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", _check_segments(self.a, self.segments))
        object.__setattr__(self, "a", float(self.a))

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, x: float) -> float:
        """Value at x; segments are [x_lo, x_hi), the last one closed at a."""
        if x < 0.0 or x > self.a:
            return 0.0
        if x == self.a:
            return self.segments[-1][2]
        for x_lo, x_hi, v in self.segments:
            if x_lo <= x < x_hi:
                return v
        return 0.0  # unreachable for a valid tiling

    def min_value(self) -> float:
        return min(v for _, _, v in self.segments)

    def is_free(self) -> bool:
        return all(v == 0.0 for _, _, v in self.segments)

    @property
    def width(self) -> float:
        return self.a

    def pieces(self) -> Iterator[tuple[float, float]]:
        """Yield (width, v) in increasing x."""
        for x_lo, x_hi, v in self.segments:
            yield x_hi - x_lo, v

    def shifted(self, delta: float) -> "CellPotential":
        """Cell with its profile translated by delta, clipped to [0, a] and
        zero-padded; nonzero content must stay inside the cell."""
        moved = []
        for x_lo, x_hi, v in self.segments:
            lo, hi = x_lo + delta, x_hi + delta
            if v != 0.0 and (lo < 0.0 or hi > self.a):
                raise PotentialError("shift pushes nonzero content outside the cell")
            lo, hi = max(lo, 0.0), min(hi, self.a)
            if hi > lo:
                moved.append((lo, hi, v))
        segs: list[tuple[float, float, float]] = []
        cursor = 0.0
        for lo, hi, v in sorted(moved):
            if lo > cursor:
                segs.append((cursor, lo, 0.0))
            segs.append((lo, hi, v))
            cursor = hi
        if cursor < self.a:
            segs.append((cursor, self.a, 0.0))
        return CellPotential(self.a, tuple(segs))


@dataclass(frozen=True)
class NCellPotential:
    """n translated copies of one cell, supported on [0, n*a]."""

    cell: CellPotential
    n: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise PotentialError(f"cell count must be a positive integer, got {self.n!r}")

    @property
    def length(self) -> float:
        return self.n * self.cell.a

    def evaluate(self, x: float) -> float:
        a = self.cell.a
        if x < 0.0 or x > self.length:
            return 0.0
        # subtract an integer multiple of a rather than using fmod: exact for
        # the j values that occur and free of sign surprises at the edges
        j = min(int(math.floor(x / a)), self.n - 1)
        return self.cell.evaluate(x - j * a)

    def min_value(self) -> float:
        return self.cell.min_value()

    def is_free(self) -> bool:
        return self.cell.is_free()


@dataclass(frozen=True)
class HeteroPotential:
    """Consecutive, non-overlapping cells that need not be identical.

    ``cells[j]`` is a CellPotential giving the j-th cell in local
    coordinates; ``offsets[j]`` places its left edge on the line.  The cut
    points are the shared edges offsets[1..]; supports must abut exactly.
    """

    cells: tuple[CellPotential, ...]
    offsets: tuple[float, ...]

    def __post_init__(self):
        if not self.cells:
            raise PotentialError("hetero potential needs at least one cell")
        if len(self.cells) != len(self.offsets):
            raise PotentialError("cells and offsets length mismatch")
        for j in range(len(self.cells) - 1):
            right_edge = self.offsets[j] + self.cells[j].a
            if not math.isclose(right_edge, self.offsets[j + 1], rel_tol=0.0, abs_tol=1e-12):
                if self.offsets[j + 1] < right_edge:
                    raise PotentialError(
                        f"cell supports overlap at x={self.offsets[j + 1]} (cell {j} ends at {right_edge})")
                raise PotentialError(
                    f"gap between cell {j} (ends {right_edge}) and cell {j + 1} (starts {self.offsets[j + 1]})")

    @property
    def x_lo(self) -> float:
        return self.offsets[0]

    @property
    def x_hi(self) -> float:
        return self.offsets[-1] + self.cells[-1].a

    @property
    def length(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def cut_points(self) -> tuple[float, ...]:
        return self.offsets[1:]

    def placed_value(self, j: int, x: float) -> float:
        """Contribution of cell j at global x.

        Placed cells own [off, off + a) half-open, except the last one which
        is closed at x_hi, so the per-cell contributions sum to evaluate(x)
        exactly, cut points included.
        """
        cell, off = self.cells[j], self.offsets[j]
        last = j == len(self.cells) - 1
        inside = off <= x < off + cell.a or (last and x == off + cell.a)
        return cell.evaluate(x - off) if inside else 0.0

    def evaluate(self, x: float) -> float:
        for j in range(len(self.cells)):
            v = self.placed_value(j, x)
            if v != 0.0:
                return v
        return 0.0

    def sub_potential(self, j: int) -> CellPotential:
        """The j-th cell as a standalone potential translated to [0, width]."""
        return self.cells[j]

    def min_value(self) -> float:
        return min(c.min_value() for c in self.cells)

    def is_free(self) -> bool:
        return all(c.is_free() for c in self.cells)


@dataclass(frozen=True)
class PeriodicExtension:
    """q(x) = cell(x mod a) on the whole line."""

    cell: CellPotential

    def evaluate(self, x: float) -> float:
        a = self.cell.a
        j = math.floor(x / a)
        return self.cell.evaluate(x - j * a)


Potential = Union[CellPotential, NCellPotential, HeteroPotential]


# -- constructors ------------------------------------------------------------

def build_cell(a: float, segments: Iterable[Sequence[float]]) -> CellPotential:
    """Validated cell from a length and an (unordered) segment list."""
    return CellPotential(float(a), tuple(tuple(s) for s in segments))


def assemble_n_cell(cell: CellPotential, n: int) -> NCellPotential:
    if not isinstance(n, int) or n < 1:
        raise PotentialError(f"cell count must be a positive integer, got {n!r}")
    return NCellPotential(cell, n)


def assemble_hetero(cells: Iterable[Sequence[float] | dict]) -> HeteroPotential:
    """Hetero potential from placed cells.

    Each entry is (x_lo, x_hi, segments) or {"x_lo":..,"x_hi":..,"segments":..}
    with the segments given in *global* coordinates tiling [x_lo, x_hi].
    """
    placed = []
    for entry in cells:
        if isinstance(entry, dict):
            x_lo, x_hi, segs = entry["x_lo"], entry["x_hi"], entry["segments"]
        else:
            x_lo, x_hi, segs = entry
        x_lo, x_hi = float(x_lo), float(x_hi)
        if x_hi <= x_lo:
            raise PotentialError(f"cell support [{x_lo}, {x_hi}] has non-positive width")
        local = [(s[0] - x_lo, s[1] - x_lo, s[2]) for s in segs]
        placed.append((x_lo, CellPotential(x_hi - x_lo, tuple(local))))
    placed.sort(key=lambda p: p[0])
    return HeteroPotential(tuple(c for _, c in placed), tuple(o for o, _ in placed))


def refine(cell: CellPotential, m: int) -> CellPotential:
    """Split every segment into m equal constant pieces (same values).

    The potential is unchanged as a function; this exists so that callers
    approximating a smooth profile by samples can control resolution, and so
    tests can assert that re-segmentation leaves every computed quantity
    fixed.  Approximation error of a smooth profile is the caller's business.
    """
    if m < 1:
        raise PotentialError("refinement factor must be >= 1")
    segs = []
    for x_lo, x_hi, v in cell.segments:
        w = (x_hi - x_lo) / m
        for i in range(m):
            lo = x_lo + i * w
            hi = x_hi if i == m - 1 else x_lo + (i + 1) * w
            segs.append((lo, hi, v))
    return CellPotential(cell.a, tuple(segs))


# -- support helpers used by the propagators ---------------------------------

def support(pot: Potential) -> tuple[float, float]:
    """[x_lo, x_hi] outside which the potential vanishes identically."""
    if isinstance(pot, CellPotential):
        return 0.0, pot.a
    if isinstance(pot, NCellPotential):
        return 0.0, pot.length
    if isinstance(pot, HeteroPotential):
        return pot.x_lo, pot.x_hi
    raise TypeError(f"no compact support for {type(pot).__name__}")


def iter_pieces(pot, x_from: Optional[float] = None,
                x_to: Optional[float] = None) -> Iterator[tuple[float, float]]:
    """Constant pieces (width, v) covering [x_from, x_to] in order.

    The window defaults to the support.  Stretches outside the support
    come out as v = 0 pieces, so the caller can propagate across any
    window of the line.
    """
    if x_from is None or x_to is None:
        lo, hi = support(pot)
        x_from = lo if x_from is None else x_from
        x_to = hi if x_to is None else x_to
    if x_to < x_from:
        raise ValueError("x_to must be >= x_from")
    if x_to == x_from:
        return
    cuts = [x_from]
    if isinstance(pot, CellPotential):
        edges = [s[0] for s in pot.segments] + [pot.a]
        cuts.extend(e for e in edges if x_from < e < x_to)
    elif isinstance(pot, NCellPotential):
        a = pot.cell.a
        j_lo = max(0, int(math.floor(x_from / a)))
        j_hi = min(pot.n - 1, int(math.floor(x_to / a)))
        for j in range(j_lo, j_hi + 1):
            base = j * a
            for s in pot.cell.segments:
                e = base + s[0]
                if x_from < e < x_to:
                    cuts.append(e)
            e = base + a
            if x_from < e < x_to:
                cuts.append(e)
    elif isinstance(pot, HeteroPotential):
        for cell, off in zip(pot.cells, pot.offsets):
            for s in cell.segments:
                e = off + s[0]
                if x_from < e < x_to:
                    cuts.append(e)
            e = off + cell.a
            if x_from < e < x_to:
                cuts.append(e)
    elif isinstance(pot, PeriodicExtension):
        a = pot.cell.a
        j = math.floor(x_from / a)
        while j * a < x_to:
            base = j * a
            for s in pot.cell.segments:
                e = base + s[0]
                if x_from < e < x_to:
                    cuts.append(e)
            j += 1
    else:
        raise TypeError(f"cannot iterate pieces of {type(pot).__name__}")
    cuts = sorted(set(cuts))
    cuts.append(x_to)
    for lo, hi in zip(cuts, cuts[1:]):
        mid = 0.5 * (lo + hi)
        yield hi - lo, pot.evaluate(mid)


# -- serialization ------------------------------------------------------------

def _reject_constant(token: str):
    raise PotentialError(f"non-finite number {token!r} not allowed in potential documents")


def _cell_to_obj(cell: CellPotential) -> dict:
    return {"kind": "cell", "a": cell.a, "segments": [list(s) for s in cell.segments]}


def save_potential(pot: Potential, path: str | Path | None = None) -> str:
    """Serialize to the JSON document format; write to path if given."""
    if isinstance(pot, CellPotential):
        obj = _cell_to_obj(pot)
    elif isinstance(pot, NCellPotential):
        obj = {"kind": "ncell", "n": pot.n, "cell": _cell_to_obj(pot.cell)}
    elif isinstance(pot, HeteroPotential):
        obj = {"kind": "hetero", "cells": [
            {"x_lo": off, "x_hi": off + cell.a,
             "segments": [[s[0] + off, s[1] + off, s[2]] for s in cell.segments]}
            for cell, off in zip(pot.cells, pot.offsets)]}
    else:
        raise TypeError(f"cannot serialize {type(pot).__name__}")
    text = json.dumps(obj)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def load_potential(source: str | Path) -> Potential:
    """Parse a potential document (JSON text, or a path to one).

    NaN/Infinity tokens are rejected; numbers round-trip bit-exactly
    through save_potential.
    """
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        text = str(source)
        stripped = text.lstrip()
        if not stripped.startswith("{"):
            p = Path(text)
            if not p.exists():
                raise PotentialError(f"no such potential file: {text}")
            text = p.read_text(encoding="utf-8")
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise PotentialError(f"malformed potential document: {exc}") from exc
    return _from_obj(obj)


def _from_obj(obj) -> Potential:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise PotentialError("potential document must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "cell":
        try:
            return build_cell(obj["a"], obj["segments"])
        except KeyError as exc:
            raise PotentialError(f"cell document missing field {exc}") from exc
    if kind == "ncell":
        try:
            n, cell_obj = obj["n"], obj["cell"]
        except KeyError as exc:
            raise PotentialError(f"ncell document missing field {exc}") from exc
        if not isinstance(n, int):
            raise PotentialError(f"n must be an integer, got {n!r}")
        cell = _from_obj(cell_obj)
        if not isinstance(cell, CellPotential):
            raise PotentialError("'cell' field must hold a cell document")
        return assemble_n_cell(cell, n)
    if kind == "hetero":
        try:
            return assemble_hetero(obj["cells"])
        except KeyError as exc:
            raise PotentialError(f"hetero document missing field {exc}") from exc
    raise PotentialError(f"unknown potential kind {kind!r}")
