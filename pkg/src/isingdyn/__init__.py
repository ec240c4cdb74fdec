"""Pairwise entanglement dynamics of a driven 7-site Ising wheel.

The package simulates a transverse-field Ising cluster on the wheel
lattice W6 (hub plus hexagon) under time-dependent magnetic fields and
tracks two-site concurrence and entanglement of formation.  Units:
hbar = 1, energies in the coupling J, times in 1/J.
"""

__version__ = "0.1.0"

from .lattice import (SpinLattice, SitePermutation, UnsupportedSymmetryError,
                      build_wheel7, load_lattice, neighbors, rotation_permutation)
from .operators import (BasisConvention, SparseHermitianOperator, apply_operator,
                        basis_permutation, build_hamiltonian, parity_operator,
                        rotation_operator, total_sz)
from .numkernel import (DecompositionCache, EigensolverError,
                        NotPositiveSemidefiniteError, SpectralDecomposition,
                        UnitaryPropagator, eig_hermitian, expm_unitary, psd_sqrt)
from .schedules import (FieldSchedule, PiecewiseConstantField, UnsupportedScheduleError,
                        discretize, field_at, parse_angle, parse_schedule,
                        schedule_normal_form, spectral_density)
from .evolution import (PureState, StateTrajectory, DensityTrajectory, ThermalEnsemble,
                        HamiltonianFamily, evolve_matrix_stepper,
                        evolve_projection_stepper, evolve_thermal, ground_state,
                        thermal_initial_state)
from .observables import (ConcurrenceSeries, SweepResult, TwoQubitDensity, concurrence,
                          concurrence_trajectory, entanglement_of_formation,
                          ground_state_sweep, reduce_two_site, spin_flipped,
                          time_average)
from .symmetry import (SectorBasis, SectorLeakageError, SymmetrySector, all_sectors,
                       build_sector_bases, evolve_projection_in_sector, find_sector,
                       sector_reduced_hamiltonian, sector_weights)
from .analysis import (BenchmarkResult, ErgodicityReport, GoldenRuleReport, ThermalScan,
                       benchmark_engines, critical_temperature_scan, dominant_frequency,
                       equilibrium_concurrence, ergodicity_gap, golden_rule_report,
                       off_drive_power_fraction, power_spectrum,
                       thermal_equilibrium_concurrence)

__all__ = [
    "__version__",
    "SpinLattice", "SitePermutation", "UnsupportedSymmetryError", "build_wheel7",
    "load_lattice", "neighbors", "rotation_permutation",
    "BasisConvention", "SparseHermitianOperator", "apply_operator", "basis_permutation",
    "build_hamiltonian", "parity_operator", "rotation_operator", "total_sz",
    "DecompositionCache", "EigensolverError", "NotPositiveSemidefiniteError",
    "SpectralDecomposition", "UnitaryPropagator", "eig_hermitian", "expm_unitary",
    "psd_sqrt",
    "FieldSchedule", "PiecewiseConstantField", "UnsupportedScheduleError", "discretize",
    "field_at", "parse_angle", "parse_schedule", "schedule_normal_form",
    "spectral_density",
    "PureState", "StateTrajectory", "DensityTrajectory", "ThermalEnsemble",
    "HamiltonianFamily", "evolve_matrix_stepper", "evolve_projection_stepper",
    "evolve_thermal", "ground_state", "thermal_initial_state",
    "ConcurrenceSeries", "SweepResult", "TwoQubitDensity", "concurrence",
    "concurrence_trajectory", "entanglement_of_formation", "ground_state_sweep",
    "reduce_two_site", "spin_flipped", "time_average",
    "SectorBasis", "SectorLeakageError", "SymmetrySector", "all_sectors",
    "build_sector_bases", "evolve_projection_in_sector", "find_sector",
    "sector_reduced_hamiltonian", "sector_weights",
    "BenchmarkResult", "ErgodicityReport", "GoldenRuleReport", "ThermalScan",
    "benchmark_engines", "critical_temperature_scan", "dominant_frequency",
    "equilibrium_concurrence", "ergodicity_gap", "golden_rule_report",
    "off_drive_power_fraction", "power_spectrum", "thermal_equilibrium_concurrence",
]
