"""Propagation engines for piecewise-constant fields, plus thermal ensembles.

Both engines advance the state segment by segment with the exact
propagator of each constant-field Hamiltonian; they differ only in how
the propagator is applied.  The matrix stepper forms the dense unitary
exp(-i H(h_k) dt) from a fresh eigendecomposition every segment and
chain-multiplies.  The projection stepper expands the state in the
segment eigenbasis and advances scalar phases e^{-i E_i dt}; its
decompositions are cached by field value (quantized to 1e-12), so
schedules that revisit field values (constant, step) decompose only
once.  Between samples the projection stepper stays in the eigenbasis
while consecutive segments share a decomposition, which is exact.

Thermal ensembles are Boltzmann mixtures of initial-Hamiltonian
eigenstates; thermal equilibrium enters only at t = 0 and the members
evolve unitarily afterwards (no re-thermalization).  Their reduced
two-site matrices are assembled directly from the member states, so the
full density matrix is never materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import SpinLattice
from .numkernel import DecompositionCache, eig_hermitian, expm_unitary
from .operators import build_hamiltonian, parity_operator, total_sz
from .schedules import PiecewiseConstantField

# decimals kept when quantizing a field value into a cache key
FIELD_KEY_DECIMALS = 12

# eigenvalue splitting below which the ground doublet is treated as degenerate
DOUBLET_GAP = 1e-10


@dataclass(frozen=True)
class PureState:
    """Normalized state vector over the documented product basis."""

    amplitudes: np.ndarray
    n_sites: int

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amp.shape != (2 ** self.n_sites,):
            raise ValueError("amplitude vector has wrong length for %d sites" % self.n_sites)
        nrm = np.linalg.norm(amp)
        if abs(nrm - 1.0) > 1e-8:
            raise ValueError("state norm %.12f is not 1" % nrm)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return 2 ** self.n_sites


@dataclass(eq=False)
class StateTrajectory:
    """Sampled pure-state evolution: times, full state vectors, applied fields."""

    times: np.ndarray
    states: np.ndarray
    fields: np.ndarray
    n_sites: int

    def __len__(self):
        return len(self.times)

    def state(self, k: int) -> PureState:
        return PureState(self.states[k], self.n_sites)

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


@dataclass(eq=False)
class DensityTrajectory:
    """Sampled mixed-state evolution at the reduced two-site level.

    reduced[pair] is an (n_samples, 4, 4) array of two-site density
    matrices for that pair.
    """

    times: np.ndarray
    fields: np.ndarray
    pairs: tuple
    reduced: dict
    n_sites: int

    def __len__(self):
        return len(self.times)


@dataclass(eq=False)
class ThermalEnsemble:
    """Truncated Boltzmann mixture of initial-Hamiltonian eigenstates.

    partition_function is computed with energies shifted by the ground
    energy (sum of e^{-beta (E_i - E_0)}), which is finite for any beta.
    """

    beta: float
    weights: np.ndarray
    states: np.ndarray
    energies: np.ndarray
    partition_function: float
    cutoff: float
    field: float

    @property
    def n_members(self) -> int:
        return len(self.weights)


class HamiltonianFamily:
    """Dense H(h) = Hxx - h diag(sz) assembled once per (lattice, J)."""

    def __init__(self, lat: SpinLattice, J: float):
        self.lat = lat
        self.J = float(J)
        self.dim = lat.dim
        self.hxx = build_hamiltonian(lat, J, 0.0).to_dense()
        self.sz = total_sz(lat.n_sites).diagonal()
        self._diag_idx = np.diag_indices(self.dim)

    def dense(self, h: float) -> np.ndarray:
        m = self.hxx.copy()
        m[self._diag_idx] -= h * self.sz
        return m

    def cache_key(self, h: float):
        # include the family parameters so one cache can serve many runs
        return (self.J, self.lat.edges, round(float(h), FIELD_KEY_DECIMALS))


def ground_state(lat: SpinLattice, J: float, h: float) -> PureState:
    """Lowest eigenvector of H(h); deterministic on the near-degenerate doublet.

    At small fields the lowest pair is split only by finite-size effects.
    When the gap is below 1e-10 the returned state is the even-parity
    combination (it is also rotation symmetric, both doublet members
    being rotation invariant), signed to have positive overlap with the
    uniform-sign vector.
    """
    fam = HamiltonianFamily(lat, J)
    dec = eig_hermitian(fam.dense(h))
    w, v = dec.eigenvalues, dec.eigenvectors
    if len(w) > 1 and w[1] - w[0] < DOUBLET_GAP:
        par = parity_operator(lat.n_sites).diagonal()
        pair = v[:, :2]
        block = pair.conj().T @ (par[:, None] * pair)
        bw, bv = np.linalg.eigh((block + block.conj().T) / 2)
        vec = pair @ bv[:, np.argmax(bw)]
        s = vec.real.sum()
        if abs(s) < 1e-12:
            lead = vec[np.argmax(np.abs(vec))]
            s = lead.real
        if s < 0:
            vec = -vec
    else:
        vec = v[:, 0]
    return PureState(vec / np.linalg.norm(vec), lat.n_sites)


def _initial_field(pcf: PiecewiseConstantField) -> float:
    if pcf.initial_field is not None:
        return float(pcf.initial_field)
    return float(pcf.values[0])


def _run_projection(fam, pcf, psi_mat, sample_every, cache, on_sample):
    """Shared projection-stepping core over a (dim, m) block of states.

    on_sample(sample_index, t, h, block) is called with the assembled
    full-space block at the window start and after every sample_every
    segments.  Consecutive segments with the same quantized field reuse
    one decomposition and stay in its eigenbasis between samples.
    """
    durations = pcf.durations
    on_sample(0, pcf.t_start, _initial_field(pcf), psi_mat)
    idx = 1
    decomp = None
    cur_key = None
    coeff = None
    for k in range(pcf.n_segments):
        h = float(pcf.values[k])
        key = fam.cache_key(h)
        if key != cur_key:
            if coeff is not None:
                psi_mat = decomp.eigenvectors @ coeff
            decomp = cache.get_or_compute(key, lambda: eig_hermitian(fam.dense(h)))
            coeff = decomp.eigenvectors.conj().T @ psi_mat
            cur_key = key
        coeff = coeff * np.exp(-1j * decomp.eigenvalues * durations[k])[:, None]
        if (k + 1) % sample_every == 0:
            on_sample(idx, float(pcf.times[k] + durations[k]), h, decomp.eigenvectors @ coeff)
            idx += 1
    return idx


def n_samples(pcf: PiecewiseConstantField, sample_every: int) -> int:
    return 1 + pcf.n_segments // sample_every


def _check_sample_every(sample_every):
    if int(sample_every) != sample_every or sample_every < 1:
        raise ValueError("sample_every must be a positive integer")
    return int(sample_every)


def _state_block(psi0: PureState | np.ndarray, dim: int) -> np.ndarray:
    amp = psi0.amplitudes if hasattr(psi0, "amplitudes") else np.asarray(psi0)
    if amp.shape != (dim,):
        raise ValueError("initial state has dimension %r, expected %d" % (amp.shape, dim))
    return np.ascontiguousarray(amp, dtype=complex).reshape(dim, 1)


def evolve_matrix_stepper(lat: SpinLattice, J: float, pcf: PiecewiseConstantField,
                          psi0: PureState, sample_every: int = 1) -> StateTrajectory:
    """Chain-multiplied dense propagators, one fresh exp(-i H dt) per segment."""
    sample_every = _check_sample_every(sample_every)
    fam = HamiltonianFamily(lat, J)
    psi = _state_block(psi0, fam.dim)[:, 0]
    total = n_samples(pcf, sample_every)
    times = np.empty(total)
    fields = np.empty(total)
    states = np.empty((total, fam.dim), dtype=complex)
    times[0], fields[0], states[0] = pcf.t_start, _initial_field(pcf), psi
    idx = 1
    durations = pcf.durations
    for k in range(pcf.n_segments):
        h = float(pcf.values[k])
        u = expm_unitary(fam.dense(h), float(durations[k]))
        psi = u.matrix @ psi
        if (k + 1) % sample_every == 0:
            times[idx] = pcf.times[k] + durations[k]
            fields[idx] = h
            states[idx] = psi
            idx += 1
    return StateTrajectory(times, states, fields, lat.n_sites)


def evolve_projection_stepper(lat: SpinLattice, J: float, pcf: PiecewiseConstantField,
                              psi0: PureState, sample_every: int = 1,
                              cache: DecompositionCache | None = None) -> StateTrajectory:
    """Eigenbasis projection and phase advance; output contract matches the matrix stepper."""
    sample_every = _check_sample_every(sample_every)
    fam = HamiltonianFamily(lat, J)
    if cache is None:
        cache = DecompositionCache()
    total = n_samples(pcf, sample_every)
    times = np.empty(total)
    fields = np.empty(total)
    states = np.empty((total, fam.dim), dtype=complex)

    def record(i, t, h, block):
        times[i], fields[i], states[i] = t, h, block[:, 0]

    _run_projection(fam, pcf, _state_block(psi0, fam.dim), sample_every, cache, record)
    return StateTrajectory(times, states, fields, lat.n_sites)


def thermal_initial_state(lat: SpinLattice, J: float, a: float, beta: float,
                          cutoff: float = 1.0 - 1e-10) -> ThermalEnsemble:
    """Boltzmann ensemble of H(a) eigenstates, truncated at cumulative weight cutoff.

    beta = math.inf selects the ground multiplet (energies within 1e-12
    of the minimum) with uniform weights.
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if not 0 < cutoff <= 1:
        raise ValueError("cutoff must be in (0, 1]")
    fam = HamiltonianFamily(lat, J)
    dec = eig_hermitian(fam.dense(a))
    energies = dec.eigenvalues
    shifted = energies - energies[0]
    if math.isinf(beta):
        raw = (shifted <= 1e-12).astype(float)
    else:
        raw = np.exp(-beta * shifted)
    z = float(raw.sum())
    p = raw / z
    cum = np.cumsum(p)
    m = int(np.searchsorted(cum, cutoff - 1e-15)) + 1
    m = min(m, len(p))
    weights = p[:m] / p[:m].sum()
    return ThermalEnsemble(
        beta=float(beta),
        weights=weights,
        states=np.ascontiguousarray(dec.eigenvectors[:, :m]),
        energies=energies[:m].copy(),
        partition_function=z,
        cutoff=float(cutoff),
        field=float(a),
    )


def evolve_thermal(ens: ThermalEnsemble, lat: SpinLattice, J: float,
                   pcf: PiecewiseConstantField, pairs, sample_every: int = 1,
                   cache: DecompositionCache | None = None) -> DensityTrajectory:
    """Unitary evolution of every ensemble member, reduced to two-site matrices.

    The members evolve as one (dim, m) block through the projection core;
    at each sample the weighted reduced density matrix of every requested
    pair is accumulated without forming the full density matrix.
    """
    from .observables import reduce_state_block

    sample_every = _check_sample_every(sample_every)
    fam = HamiltonianFamily(lat, J)
    if ens.states.shape[0] != fam.dim:
        raise ValueError("ensemble dimension does not match lattice")
    start = _initial_field(pcf)
    if abs(ens.field - start) > 1e-9:
        raise ValueError(
            "ensemble was built at field %g but the schedule starts at %g"
            % (ens.field, start))
    pairs = tuple((int(i), int(j)) for i, j in pairs)
    if cache is None:
        cache = DecompositionCache()
    total = n_samples(pcf, sample_every)
    times = np.empty(total)
    fields = np.empty(total)
    reduced = {pair: np.empty((total, 4, 4), dtype=complex) for pair in pairs}

    def record(i, t, h, block):
        times[i], fields[i] = t, h
        for (pi, pj) in pairs:
            reduced[(pi, pj)][i] = reduce_state_block(block, lat.n_sites, pi, pj, ens.weights)

    _run_projection(fam, pcf, np.ascontiguousarray(ens.states, dtype=complex),
                    sample_every, cache, record)
    return DensityTrajectory(times, fields, pairs, reduced, lat.n_sites)
