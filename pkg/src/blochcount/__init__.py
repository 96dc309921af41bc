"""Spectra, scattering, and transmission resonances of 1-D Schrödinger
operators with finite-periodic and heterogeneous piecewise-constant
potentials, plus exact integer eigenvalue-counting checks against
independent finite-difference oracles.
"""

from .config import DEFAULT, Tolerances
from .potential import (
    CellPotential,
    HeteroPotential,
    NCellPotential,
    PeriodicExtension,
    PotentialError,
    assemble_hetero,
    assemble_n_cell,
    build_cell,
    iter_pieces,
    load_potential,
    refine,
    save_potential,
    support,
)
from .propagate import (
    CauchyData,
    PhaseTrace,
    TailClass,
    TransferMatrix,
    cell_transfer,
    jost_node_count,
    propagate_phase,
    segment_propagator,
    tail_nodes,
    transfer_over,
)
from .bands import (
    Monodromy,
    Quasimomentum,
    ScanError,
    Zone,
    ZoneTable,
    bloch_phase,
    discriminant,
    monodromy,
    quasimomentum_at,
    scan_zones,
)
from .scatter import (
    BandEdge,
    BoundSpectrum,
    ResonanceSet,
    ScatteringData,
    cell_scattering,
    compose_n,
    count_bound_states,
    find_resonances,
    locate_bound_states,
    n_cell_scattering,
    resonance_vs_periodic,
)
from .boundary_spectra import (
    BoundaryConditions,
    PeriodicSpectrum,
    SLSpectrum,
    classify_periodic,
    periodic_count,
    periodic_eigenvalues,
    sl_count,
    sl_eigenvalues,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT", "Tolerances",
    "CellPotential", "NCellPotential", "HeteroPotential", "PeriodicExtension",
    "PotentialError", "build_cell", "assemble_n_cell", "assemble_hetero",
    "load_potential", "save_potential", "refine", "support", "iter_pieces",
    "CauchyData", "TransferMatrix", "PhaseTrace", "TailClass",
    "segment_propagator", "cell_transfer", "transfer_over",
    "propagate_phase", "tail_nodes", "jost_node_count",
    "Monodromy", "Zone", "ZoneTable", "Quasimomentum", "ScanError",
    "monodromy", "discriminant", "scan_zones", "quasimomentum_at", "bloch_phase",
    "ScatteringData", "BoundSpectrum", "ResonanceSet", "BandEdge",
    "cell_scattering", "compose_n", "n_cell_scattering",
    "count_bound_states", "locate_bound_states", "find_resonances",
    "resonance_vs_periodic",
    "BoundaryConditions", "SLSpectrum", "PeriodicSpectrum",
    "sl_count", "sl_eigenvalues", "periodic_count", "periodic_eigenvalues",
    "classify_periodic",
]
