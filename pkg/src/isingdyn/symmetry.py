"""C6 x Z2 symmetry sectors of the wheel Hamiltonian.

The sixfold spatial rotation and the global spin flip commute with the
Hamiltonian at every field, and with each other, so the Hilbert space
splits into 12 joint eigenspaces labeled by parity (-1)^m (m = 1, 2) and
rotation eigenvalue e^{i n pi / 3} (n = 1..6).  Bases are built by
applying the character projector

    Pi_{m,n} = (1/12) sum_{k=0..5} sum_{p=0,1} chi*_{m,n}(k, p) R^k P^p

to every computational basis vector and orthonormalizing the resulting
spanning set.  A state prepared in one sector stays there under any
field schedule, so the dynamics can be run in the reduced block alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import SpinLattice, rotation_permutation
from .numkernel import DecompositionCache, eig_hermitian
from .operators import SparseHermitianOperator, basis_permutation, parity_operator, rotation_operator
from .evolution import HamiltonianFamily, StateTrajectory, _initial_field, _check_sample_every, n_samples

MGS_DROP_TOL = 1e-8
LEAKAGE_TOL = 1e-9


class SectorLeakageError(ValueError):
    """State or operator does not stay inside the claimed sector."""


@dataclass(frozen=True)
class SymmetrySector:
    """Joint (spin-flip, rotation) representation label.

    parity_index m in {1, 2} gives spin-flip eigenvalue (-1)^m;
    rotation_index n in {1..6} gives rotation eigenvalue e^{i n pi/3}.
    """

    parity_index: int
    rotation_index: int

    def __post_init__(self):
        if self.parity_index not in (1, 2):
            raise ValueError("parity_index must be 1 or 2")
        if self.rotation_index not in (1, 2, 3, 4, 5, 6):
            raise ValueError("rotation_index must be in 1..6")

    @property
    def parity_eigenvalue(self) -> float:
        return float((-1) ** self.parity_index)

    @property
    def rotation_eigenvalue(self) -> complex:
        return np.exp(1j * np.pi * self.rotation_index / 3.0)

    def character(self, k: int, p: int) -> complex:
        return self.rotation_eigenvalue ** k * self.parity_eigenvalue ** p

    @property
    def label(self) -> str:
        return "m%d_n%d" % (self.parity_index, self.rotation_index)


def all_sectors() -> list[SymmetrySector]:
    return [SymmetrySector(m, n) for m in (1, 2) for n in range(1, 7)]


@dataclass(eq=False)
class SectorBasis:
    """Column-orthonormal isometry spanning one symmetry sector."""

    sector: SymmetrySector
    isometry: np.ndarray
    lattice: SpinLattice

    @property
    def dim(self) -> int:
        return self.isometry.shape[1]


def _rotation_powers(lat: SpinLattice) -> list[np.ndarray]:
    """Basis index maps of R^0 .. R^5."""
    base = basis_permutation(lat.n_sites, rotation_permutation(lat))
    maps = [np.arange(lat.dim, dtype=np.int64)]
    for _ in range(5):
        maps.append(base[maps[-1]])
    return maps


def build_sector_bases(lat: SpinLattice) -> list[SectorBasis]:
    """Orthonormal bases of all 12 sectors; dimensions sum to 2^n."""
    perm = rotation_permutation(lat)
    if perm.order() != 6:
        raise ValueError("sector construction expects an order-6 rotation")
    rot = rotation_operator(lat, perm)
    par = parity_operator(lat.n_sites).diagonal()
    comm = rot * par[None, :] - par[:, None] * rot
    if np.abs(comm).max() > 1e-12:
        raise ValueError("rotation and parity operators do not commute")
    maps = _rotation_powers(lat)
    dim = lat.dim
    bases = []
    for sector in all_sectors():
        peig = sector.parity_eigenvalue
        coeff = np.conj(sector.rotation_eigenvalue) ** np.arange(6) / 6.0
        kept: list[np.ndarray] = []
        for b in range(dim):
            if par[b] != peig:
                continue
            col = np.zeros(dim, dtype=complex)
            np.add.at(col, [m[b] for m in maps], coeff)
            # modified Gram-Schmidt, two passes for orthogonality to roundoff
            for _ in range(2):
                for q in kept:
                    col -= q * (q.conj() @ col)
            nrm = np.linalg.norm(col)
            if nrm >= MGS_DROP_TOL:
                kept.append(col / nrm)
        iso = np.column_stack(kept) if kept else np.zeros((dim, 0), dtype=complex)
        bases.append(SectorBasis(sector, iso, lat))
    total = sum(b.dim for b in bases)
    if total != dim:
        raise RuntimeError("sector dimensions sum to %d, expected %d" % (total, dim))
    return bases


def _to_dense(h) -> np.ndarray:
    if isinstance(h, SparseHermitianOperator):
        return h.to_dense()
    return np.asarray(h)


def sector_reduced_hamiltonian(h, basis: SectorBasis) -> np.ndarray:
    """B^dagger H B with a leakage check that H preserves the sector."""
    hd = _to_dense(h)
    b = basis.isometry
    if hd.shape != (b.shape[0], b.shape[0]):
        raise ValueError("operator dimension does not match sector basis")
    m = hd @ b
    hs = b.conj().T @ m
    if b.shape[1]:
        leak = np.abs(m - b @ hs).max()
        if leak > LEAKAGE_TOL:
            raise SectorLeakageError("operator leaks out of sector (%.3e)" % leak)
    return (hs + hs.conj().T) / 2


def sector_weights(state, bases: list[SectorBasis]) -> np.ndarray:
    """Squared projection norms of a state on every sector basis."""
    amp = state.amplitudes if hasattr(state, "amplitudes") else np.asarray(state, dtype=complex)
    return np.array([
        float(np.linalg.norm(b.isometry.conj().T @ amp) ** 2) for b in bases
    ])


def find_sector(state, bases: list[SectorBasis], tol: float = 1e-10) -> SectorBasis:
    """The unique sector holding (almost) all of the state's weight."""
    w = sector_weights(state, bases)
    k = int(np.argmax(w))
    if w[k] < 1.0 - tol:
        raise SectorLeakageError(
            "state is not confined to one sector (best weight %.12f in %s)"
            % (w[k], bases[k].sector.label))
    return bases[k]


def evolve_projection_in_sector(basis: SectorBasis, J: float, pcf, psi0,
                                sample_every: int = 1,
                                cache: DecompositionCache | None = None) -> StateTrajectory:
    """Projection stepping inside one sector block, lifted back for sampling.

    The initial state must lie in the sector (weight >= 1 - 1e-10).
    Decompositions are of the d x d reduced Hamiltonian, so every step
    costs O(d^2) instead of O(dim^2).
    """
    sample_every = _check_sample_every(sample_every)
    lat = basis.lattice
    fam = HamiltonianFamily(lat, J)
    b = basis.isometry
    amp = psi0.amplitudes if hasattr(psi0, "amplitudes") else np.asarray(psi0, dtype=complex)
    coeff0 = b.conj().T @ amp
    weight = float(np.linalg.norm(coeff0) ** 2)
    if weight < 1.0 - 1e-10:
        raise SectorLeakageError(
            "initial state has weight %.12f in sector %s" % (weight, basis.sector.label))
    hxx_s = b.conj().T @ (fam.hxx @ b)
    sz_s = b.conj().T @ (fam.sz[:, None] * b)
    if cache is None:
        cache = DecompositionCache()
    total = n_samples(pcf, sample_every)
    times = np.empty(total)
    fields = np.empty(total)
    states = np.empty((total, fam.dim), dtype=complex)
    times[0], fields[0] = pcf.t_start, _initial_field(pcf)
    states[0] = b @ coeff0
    idx = 1
    durations = pcf.durations
    decomp = None
    cur_key = None
    coeff = coeff0
    for k in range(pcf.n_segments):
        h = float(pcf.values[k])
        key = (J, lat.edges, basis.sector.label, round(h, 12))
        if key != cur_key:
            if decomp is not None:
                coeff = decomp.eigenvectors @ coeff
            decomp = cache.get_or_compute(
                key, lambda: eig_hermitian(hxx_s - h * sz_s))
            coeff = decomp.eigenvectors.conj().T @ coeff
            cur_key = key
        coeff = coeff * np.exp(-1j * decomp.eigenvalues * durations[k])
        if (k + 1) % sample_every == 0:
            times[idx] = pcf.times[k] + durations[k]
            fields[idx] = h
            states[idx] = b @ (decomp.eigenvectors @ coeff)
            idx += 1
    return StateTrajectory(times, states, fields, lat.n_sites)
