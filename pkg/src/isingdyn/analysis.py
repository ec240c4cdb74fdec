"""Physics diagnostics: golden-rule adiabaticity, ergodicity, thermal scans,
and the engine benchmark.

The golden-rule report combines S^z matrix elements out of the ground
state with the drive's spectral density at each excitation energy,
P_0n = |<n|S^z|0>|^2 |h(E_n - E_0)|^2, and judges adiabaticity by
comparing the drive rate omega against the excitation gap within the
ground state's symmetry sector (cross-sector states cannot be excited
by S^z at all, so the raw spectral gap is not the relevant scale).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .lattice import SpinLattice, UnsupportedSymmetryError
from .numkernel import DecompositionCache, eig_hermitian
from .observables import concurrence, reduce_state_block, time_average, concurrence_trajectory
from .schedules import FieldSchedule, UnsupportedScheduleError, discretize, spectral_density
from .evolution import (HamiltonianFamily, ground_state, evolve_matrix_stepper,
                        evolve_projection_stepper, evolve_thermal, thermal_initial_state)
from .symmetry import build_sector_bases, find_sector, sector_reduced_hamiltonian

ADIABATIC_MARGIN = 0.1
SECTOR_WEIGHT_TOL = 1e-10


@dataclass(eq=False)
class GoldenRuleReport:
    """First-order transition probabilities out of the ground state."""

    field: float
    omega: float
    energies: np.ndarray
    excitations: np.ndarray
    matrix_elements: np.ndarray
    spectral_densities: np.ndarray
    probabilities: np.ndarray
    first_gap: float
    connected_gap: float
    ground_sector: str | None
    ratio: float
    verdict: str

    @property
    def adiabatic(self) -> bool:
        return self.verdict == "adiabatic"


def golden_rule_report(lat: SpinLattice, J: float, schedule: FieldSchedule,
                       a: float | None = None) -> GoldenRuleReport:
    """Perturbative response of the ground state of H(a) to the drive.

    P_0n is pinned to exactly zero for eigenstates outside the ground
    state's symmetry sector (S^z commutes with the symmetries, so those
    transitions are forbidden); the verdict is adiabatic when
    omega <= 0.1 x (first excitation gap inside that sector).
    """
    if schedule.kind in ("step", "const"):
        raise UnsupportedScheduleError(
            "golden rule needs a schedule with a finite spectral density, not %r" % schedule.kind)
    if a is None:
        a = schedule.a
    fam = HamiltonianFamily(lat, J)
    dec = eig_hermitian(fam.dense(a))
    energies = dec.eigenvalues
    v = dec.eigenvectors
    g = ground_state(lat, J, a).amplitudes
    elements = v.conj().T @ (fam.sz * g)
    excitations = energies[1:] - energies[0]
    densities = np.array([spectral_density(schedule, float(e)) for e in excitations])
    probabilities = np.abs(elements[1:]) ** 2 * densities
    ground_sector = None
    connected_gap = float(excitations[0]) if len(excitations) else math.inf
    try:
        bases = build_sector_bases(lat)
    except UnsupportedSymmetryError:
        bases = None
    if bases is not None:
        gb = find_sector(g, bases)
        ground_sector = gb.sector.label
        biso = gb.isometry
        weights = np.linalg.norm(biso.conj().T @ v[:, 1:], axis=0) ** 2
        probabilities = np.where(weights < SECTOR_WEIGHT_TOL, 0.0, probabilities)
        sector_energies = eig_hermitian(sector_reduced_hamiltonian(fam.dense(a), gb)).eigenvalues
        if len(sector_energies) > 1:
            connected_gap = float(sector_energies[1] - sector_energies[0])
        else:
            connected_gap = math.inf
    ratio = schedule.omega / connected_gap if math.isfinite(connected_gap) else 0.0
    verdict = "adiabatic" if schedule.omega <= ADIABATIC_MARGIN * connected_gap else "non-adiabatic"
    return GoldenRuleReport(
        field=float(a),
        omega=float(schedule.omega),
        energies=energies,
        excitations=excitations,
        matrix_elements=elements[1:],
        spectral_densities=densities,
        probabilities=probabilities,
        first_gap=float(excitations[0]) if len(excitations) else math.inf,
        connected_gap=connected_gap,
        ground_sector=ground_sector,
        ratio=ratio,
        verdict=verdict,
    )


def equilibrium_concurrence(lat: SpinLattice, J: float, h: float, pair) -> float:
    """Ground-state concurrence of a pair at a constant field."""
    psi = ground_state(lat, J, h)
    return concurrence(reduce_state_block(psi.amplitudes, lat.n_sites, *pair))


def thermal_equilibrium_concurrence(lat: SpinLattice, J: float, a: float, beta: float,
                                    pair, cutoff: float = 1.0 - 1e-10) -> float:
    """Concurrence of a pair in the unevolved Gibbs state of H(a)."""
    ens = thermal_initial_state(lat, J, a, beta, cutoff)
    rho = reduce_state_block(ens.states, lat.n_sites, pair[0], pair[1], ens.weights)
    return concurrence(rho)


@dataclass(eq=False)
class ErgodicityReport:
    """Late-window concurrence average against the final-field equilibrium."""

    late_average: float
    equilibrium: float
    absolute_gap: float
    relative_gap: float
    window: tuple[float, float]
    pair: tuple[int, int]
    final_field: float


def ergodicity_gap(times, concurrences, lat: SpinLattice, J: float, final_field: float,
                   pair=(1, 4), window_fraction: float = 0.3) -> ErgodicityReport:
    """Compare the late-time average of C(t) with its equilibrium value at field b."""
    times = np.asarray(times, dtype=float)
    if not 0 < window_fraction <= 1:
        raise ValueError("window_fraction must be in (0, 1]")
    t_hi = float(times[-1])
    t_lo = t_hi - window_fraction * (t_hi - float(times[0]))
    late = time_average(times, concurrences, t_lo, t_hi)
    eq = equilibrium_concurrence(lat, J, final_field, pair)
    gap = abs(late - eq)
    rel = gap / eq if eq > 0 else math.inf
    return ErgodicityReport(late, eq, gap, rel, (t_lo, t_hi), tuple(pair), float(final_field))


@dataclass(eq=False)
class ThermalScan:
    """Concurrence against temperature with first-crossing critical points."""

    kt_grid: np.ndarray
    pairs: tuple
    values: dict
    critical: dict
    threshold: float
    mode: str


def _beta_of_kt(kt: float) -> float:
    return math.inf if kt == 0 else 1.0 / kt


def critical_temperature_scan(lat: SpinLattice, J: float, schedule, pairs, kt_grid,
                              threshold: float = 1e-3, dt: float = 0.01,
                              t_end: float = 40.0, sample_every: int = 10,
                              window_fraction: float = 0.3,
                              cutoff: float = 1.0 - 1e-10) -> ThermalScan:
    """Thermal concurrence over a kT grid; T* is the first point below threshold.

    With a constant field (a bare number or a const schedule) the Gibbs
    state itself is scored; with a driven schedule each ensemble is
    evolved and the late-window average of C(t) is scored.
    """
    kt_grid = np.asarray(kt_grid, dtype=float)
    if np.any(kt_grid < 0) or np.any(np.diff(kt_grid) <= 0):
        raise ValueError("kT grid must be non-negative and ascending")
    pairs = tuple((int(i), int(j)) for i, j in pairs)
    if isinstance(schedule, (int, float)):
        schedule = FieldSchedule.constant(schedule)
    values = {pair: np.empty(len(kt_grid)) for pair in pairs}
    if schedule.kind == "const":
        mode = "equilibrium"
        for k, kt in enumerate(kt_grid):
            ens = thermal_initial_state(lat, J, schedule.a, _beta_of_kt(kt), cutoff)
            for pair in pairs:
                rho = reduce_state_block(ens.states, lat.n_sites, *pair, weights=ens.weights)
                values[pair][k] = concurrence(rho)
    else:
        mode = "evolved"
        pcf = discretize(schedule, 0.0, t_end, dt)
        cache = DecompositionCache()
        t_lo = t_end * (1.0 - window_fraction)
        for k, kt in enumerate(kt_grid):
            ens = thermal_initial_state(lat, J, schedule.a, _beta_of_kt(kt), cutoff)
            traj = evolve_thermal(ens, lat, J, pcf, pairs, sample_every, cache=cache)
            series = concurrence_trajectory(traj, pairs)
            for pair in pairs:
                values[pair][k] = series.time_average(pair, t_lo, t_end)
    critical = {}
    for pair in pairs:
        below = np.nonzero(values[pair] < threshold)[0]
        critical[pair] = float(kt_grid[below[0]]) if len(below) else None
    return ThermalScan(kt_grid, pairs, values, critical, float(threshold), mode)


@dataclass(eq=False)
class BenchmarkRow:
    schedule: FieldSchedule
    n_segments: int
    matrix_seconds: float
    projection_seconds: float
    speedup: float
    residual: float


@dataclass(eq=False)
class BenchmarkResult:
    rows: list

    def row_for(self, kind: str) -> BenchmarkRow:
        for r in self.rows:
            if r.schedule.kind == kind:
                return r
        raise KeyError(kind)


def benchmark_engines(lat: SpinLattice, J: float, schedules, dt: float = 0.01,
                      t_end: float = 50.0, repetitions: int = 5,
                      sample_every: int = 100) -> BenchmarkResult:
    """Median wall time of both engines on identical discretizations.

    Output equivalence (max-over-samples state norm difference <= 1e-8)
    is asserted before any timing; a disagreement aborts the benchmark.
    Timing is sequential, one engine at a time, fresh cache per run.
    """
    rows = []
    for s in schedules:
        pcf = discretize(s, 0.0, t_end, dt)
        psi0 = ground_state(lat, J, s.a)
        ref = evolve_matrix_stepper(lat, J, pcf, psi0, sample_every)
        out = evolve_projection_stepper(lat, J, pcf, psi0, sample_every,
                                        cache=DecompositionCache())
        residual = float(np.linalg.norm(ref.states - out.states, axis=1).max())
        if residual > 1e-8:
            raise RuntimeError(
                "engine outputs disagree (residual %.3e) on %r schedule; benchmark aborted"
                % (residual, s.kind))
        mats, projs = [], []
        for _ in range(repetitions):
            tic = time.perf_counter()
            evolve_matrix_stepper(lat, J, pcf, psi0, sample_every)
            mats.append(time.perf_counter() - tic)
            tic = time.perf_counter()
            evolve_projection_stepper(lat, J, pcf, psi0, sample_every,
                                      cache=DecompositionCache())
            projs.append(time.perf_counter() - tic)
        m = float(np.median(mats))
        p = float(np.median(projs))
        rows.append(BenchmarkRow(s, pcf.n_segments, m, p, m / p, residual))
    return BenchmarkResult(rows)


def _uniform_spacing(times: np.ndarray) -> float:
    d = np.diff(times)
    if len(d) == 0 or not np.allclose(d, d[0], rtol=1e-9, atol=1e-12):
        raise ValueError("spectral helpers need uniformly sampled series")
    return float(d[0])


def power_spectrum(times, values, pad_factor: int = 8):
    """One-sided power spectrum of a mean-removed, Hann-windowed series.

    Returns (angular frequencies, power); zero-padding by pad_factor
    refines the frequency grid for peak location.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    dt = _uniform_spacing(times)
    x = (values - values.mean()) * np.hanning(len(values))
    nfft = pad_factor * len(values)
    spec = np.abs(np.fft.rfft(x, n=nfft)) ** 2
    omegas = 2.0 * np.pi * np.fft.rfftfreq(nfft, dt)
    return omegas, spec


def dominant_frequency(times, values) -> float:
    """Angular frequency of the strongest non-DC spectral component."""
    omegas, spec = power_spectrum(times, values)
    return float(omegas[np.argmax(spec)])


def off_drive_power_fraction(times, values, drive_omega: float,
                             band_width: float = 0.1) -> float:
    """Fraction of spectral power outside |omega - drive| <= band_width * drive."""
    if drive_omega <= 0:
        raise ValueError("drive_omega must be positive")
    omegas, spec = power_spectrum(times, values)
    total = spec.sum()
    if total == 0:
        return 0.0
    band = np.abs(omegas - drive_omega) <= band_width * drive_omega
    return float(1.0 - spec[band].sum() / total)
