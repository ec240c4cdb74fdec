import numpy as np
import pytest

from conftest import random_state
from isingdyn.evolution import evolve_projection_stepper, ground_state
from isingdyn.lattice import rotation_permutation
from isingdyn.operators import build_hamiltonian, parity_operator, rotation_operator
from isingdyn.numkernel import eig_hermitian
from isingdyn.schedules import FieldSchedule, discretize
from isingdyn.symmetry import (SectorLeakageError, all_sectors, build_sector_bases,
                               evolve_projection_in_sector, find_sector,
                               sector_reduced_hamiltonian, sector_weights)


@pytest.fixture(scope="module")
def bases(wheel):
    return build_sector_bases(wheel)


def test_twelve_sectors():
    sectors = all_sectors()
    assert len(sectors) == 12
    labels = {s.label for s in sectors}
    assert len(labels) == 12
    for s in sectors:
        assert s.parity_eigenvalue in (-1.0, 1.0)
        assert abs(abs(s.rotation_eigenvalue) - 1.0) < 1e-15
        assert s.rotation_eigenvalue ** 6 == pytest.approx(1.0)


def test_characters_factorize():
    for s in all_sectors():
        for k in range(6):
            for p in range(2):
                expect = (s.rotation_eigenvalue ** k) * (s.parity_eigenvalue ** p)
                assert s.character(k, p) == pytest.approx(expect)


def test_sector_dimensions_complete(bases, wheel):
    dims = [b.dim for b in bases]
    assert sum(dims) == wheel.dim == 128
    assert all(d >= 1 for d in dims)


def test_isometries_orthonormal(bases):
    for b in bases:
        g = b.isometry.conj().T @ b.isometry
        assert np.abs(g - np.eye(b.dim)).max() < 1e-12


def test_sectors_mutually_orthogonal(bases):
    for x in range(len(bases)):
        for y in range(x + 1, len(bases)):
            cross = bases[x].isometry.conj().T @ bases[y].isometry
            assert np.abs(cross).max() < 1e-12


def test_projectors_resolve_identity(bases, wheel):
    total = np.zeros((wheel.dim, wheel.dim), dtype=complex)
    for b in bases:
        total += b.isometry @ b.isometry.conj().T
    assert np.abs(total - np.eye(wheel.dim)).max() < 1e-10


def test_basis_vectors_carry_the_right_eigenvalues(bases, wheel):
    rot = rotation_operator(wheel, rotation_permutation(wheel))
    par = parity_operator(7).diagonal()
    for b in bases:
        lhs = rot @ b.isometry
        assert np.abs(lhs - b.sector.rotation_eigenvalue * b.isometry).max() < 1e-10
        lhs = par[:, None] * b.isometry
        assert np.abs(lhs - b.sector.parity_eigenvalue * b.isometry).max() < 1e-10


def test_projection_idempotent_on_random_states(bases, rng, wheel):
    # explicit character projector agrees with B B^dagger and is idempotent
    for b in bases[:3]:
        proj = b.isometry @ b.isometry.conj().T
        assert np.abs(proj @ proj - proj).max() < 1e-10
        v = random_state(rng, wheel.dim)
        w = proj @ v
        assert np.abs(proj @ w - w).max() < 1e-10


def test_block_hamiltonian_cross_elements(bases, wheel):
    ham = build_hamiltonian(wheel, 1.0, 1.0).to_dense()
    for x in range(len(bases)):
        hx = bases[x].isometry.conj().T @ ham @ bases[x].isometry
        for y in range(x + 1, len(bases)):
            cross = bases[x].isometry.conj().T @ ham @ bases[y].isometry
            assert np.abs(cross).max() < 1e-10
        assert np.abs(hx - hx.conj().T).max() < 1e-10


def test_sector_spectra_union_is_full_spectrum(bases, wheel):
    for h in (0.3, 1.0, 2.6):
        ham = build_hamiltonian(wheel, 1.0, h).to_dense()
        full = eig_hermitian(ham).eigenvalues
        pieces = []
        for b in bases:
            red = sector_reduced_hamiltonian(ham, b)
            pieces.append(eig_hermitian(red).eigenvalues)
        union = np.sort(np.concatenate(pieces))
        assert np.abs(union - full).max() < 1e-9


def test_sector_reduction_rejects_asymmetric_operators(bases, wheel, rng):
    g = rng.standard_normal((128, 128))
    with pytest.raises(SectorLeakageError):
        sector_reduced_hamiltonian((g + g.T) / 2, bases[0])


def test_sector_weights_sum_to_one(bases, rng, wheel):
    v = random_state(rng, wheel.dim)
    w = sector_weights(v, bases)
    assert len(w) == 12
    assert w.sum() == pytest.approx(1.0, abs=1e-10)


def test_ground_state_sector(bases, wheel):
    g = ground_state(wheel, 1.0, 1.0)
    basis = find_sector(g.amplitudes, bases)
    # fully symmetric sector: both eigenvalues +1
    assert basis.sector.parity_eigenvalue == 1.0
    assert basis.sector.rotation_eigenvalue == pytest.approx(1.0)
    w = sector_weights(g.amplitudes, bases)
    assert w[bases.index(basis)] == pytest.approx(1.0, abs=1e-12)


def test_find_sector_rejects_superpositions(bases, rng, wheel):
    v = random_state(rng, wheel.dim)  # generic: spread over many sectors
    with pytest.raises(SectorLeakageError):
        find_sector(v, bases)


def test_sector_evolution_matches_full(bases, wheel):
    g = ground_state(wheel, 1.0, 1.0)
    basis = find_sector(g.amplitudes, bases)
    s = FieldSchedule.step(1.0, 2.0)
    pcf = discretize(s, 0.0, 3.0, 0.01)
    full = evolve_projection_stepper(wheel, 1.0, pcf, g, sample_every=30)
    red = evolve_projection_in_sector(basis, 1.0, pcf, g, sample_every=30)
    assert np.abs(full.states - red.states).max() < 1e-8
    assert np.abs(full.times - red.times).max() == 0


def test_sector_evolution_rejects_leaky_initial_state(bases, wheel, rng):
    v = random_state(rng, wheel.dim)
    s = FieldSchedule.step(1.0, 2.0)
    pcf = discretize(s, 0.0, 1.0, 0.1)
    with pytest.raises(SectorLeakageError):
        evolve_projection_in_sector(bases[0], 1.0, pcf, v)
