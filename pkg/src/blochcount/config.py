"""Numerical tolerances shared across the package.

All pass/fail verdicts in the counting checks are exact integer
comparisons; the tolerances below only control where floating-point
localization stops (band edges, eigenvalue brackets) and when algebraic
identities are considered satisfied.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    #: relative tolerance on det = 1 of every transfer matrix
    det_tol: float = 1e-12
    #: agreement required between closed forms and finite-difference oracles
    oracle_tol: float = 1e-8
    #: absolute tolerance (in energy) for band-edge bisection
    edge_tol: float = 1e-10
    #: tolerance on Bloch-phase identities (2cos(ap) = Tr M, plateaus)
    phase_tol: float = 1e-9
    #: |R_n| below this counts as perfect transmission
    res_tol: float = 1e-6
    #: |sin(ap)| below this switches composition to direct matrix powers
    edge_guard: float = 1e-6
    #: |TrM| within this of 2 at a discriminant extremum marks a closed gap
    touch_tol: float = 1e-9


DEFAULT = Tolerances()
