import numpy as np
import pytest

from conftest import random_density
from isingdyn.numkernel import (DecompositionCache, NotPositiveSemidefiniteError,
                                dense_fingerprint, eig_hermitian, expm_unitary,
                                psd_sqrt)
from isingdyn.operators import build_hamiltonian


def random_hermitian(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2


def power_iteration_extreme(a, n_iter=20000, seed=7):
    """Largest-|eigenvalue| estimate without any eig call, used as an oracle."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(a.shape[0]) + 1j * rng.standard_normal(a.shape[0])
    v /= np.linalg.norm(v)
    for _ in range(n_iter):
        w = a @ v
        v = w / np.linalg.norm(w)
    return float((v.conj() @ (a @ v)).real)


def test_eigendecomposition_reconstructs(rng):
    for dim in (4, 16, 64):
        a = random_hermitian(rng, dim)
        dec = eig_hermitian(a)
        assert np.abs(dec.reconstruct() - a).max() < 1e-10
        assert (np.diff(dec.eigenvalues) >= 0).all()
        overlap = dec.eigenvectors.conj().T @ dec.eigenvectors
        assert np.abs(overlap - np.eye(dim)).max() < 1e-10


def test_real_input_gives_real_vectors(wheel):
    ham = build_hamiltonian(wheel, 1.0, 1.0).to_dense()
    dec = eig_hermitian(ham)
    assert np.abs(dec.eigenvectors.imag).max() == 0


def test_ground_energy_matches_power_iteration(wheel):
    # gapped paramagnetic point; shift so the ground state dominates |A|
    ham = build_hamiltonian(wheel, 1.0, 3.0).to_dense()
    shift = 25.0
    ext = power_iteration_extreme(ham - shift * np.eye(128), n_iter=4000)
    e0 = eig_hermitian(ham).eigenvalues[0]
    assert e0 == pytest.approx(ext + shift, abs=1e-8)


def test_eigh_handles_near_degenerate_wheel(wheel):
    # deep ordered phase: the two lowest levels collide numerically
    ham = build_hamiltonian(wheel, 1.0, 0.05).to_dense()
    dec = eig_hermitian(ham)
    assert dec.eigenvalues[1] - dec.eigenvalues[0] < 1e-10
    assert np.abs(dec.reconstruct() - ham).max() < 1e-10


def test_phase_fix_is_deterministic(rng):
    a = random_hermitian(rng, 12)
    v1 = eig_hermitian(a).eigenvectors
    v2 = eig_hermitian(a.copy()).eigenvectors
    assert np.abs(v1 - v2).max() == 0
    # each column's largest entry is real and positive
    for k in range(12):
        col = v1[:, k]
        top = col[np.argmax(np.abs(col))]
        assert abs(top.imag) < 1e-12 and top.real > 0


def test_hermiticity_check(rng):
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    with pytest.raises(ValueError):
        eig_hermitian(a)


def test_expm_unitary_properties(rng, wheel):
    ham = build_hamiltonian(wheel, 1.0, 1.3).to_dense()
    for dt in (0.01, 0.5, 2.0):
        prop = expm_unitary(ham, dt)
        u = prop.matrix
        assert np.abs(u @ u.conj().T - np.eye(128)).max() < 1e-10
        # group property: U(2 dt) = U(dt)^2
        u2 = expm_unitary(ham, 2 * dt).matrix
        assert np.abs(u2 - u @ u).max() < 1e-9


def test_expm_matches_series_small_dt(rng):
    a = random_hermitian(rng, 10)
    dt = 1e-4
    u = expm_unitary(a, dt).matrix
    series = np.eye(10) - 1j * dt * a - dt ** 2 * (a @ a) / 2
    assert np.abs(u - series).max() < 1e-10


def test_expm_reuses_decomposition(rng):
    a = random_hermitian(rng, 8)
    dec = eig_hermitian(a)
    u1 = expm_unitary(a, 0.3).matrix
    u2 = expm_unitary(a, 0.3, decomposition=dec).matrix
    assert np.abs(u1 - u2).max() < 1e-12


def test_psd_sqrt_roundtrip(rng):
    for rank in (8, 3, 1):
        rho = random_density(rng, 8, rank)
        root = psd_sqrt(rho)
        assert np.abs(root @ root - rho).max() < 1e-10
        assert np.abs(root - root.conj().T).max() < 1e-12


def test_psd_sqrt_clips_tiny_negatives(rng):
    rho = random_density(rng, 6, 2)
    rho = rho - 1e-11 * np.eye(6)  # below clip threshold
    root = psd_sqrt(rho)
    assert np.isfinite(root).all()


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveSemidefiniteError):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_decomposition_cache_lru(rng):
    cache = DecompositionCache(maxsize=3)
    mats = [random_hermitian(rng, 4) for _ in range(5)]
    for k, m in enumerate(mats):
        cache.get_or_compute(("key", k), lambda m=m: eig_hermitian(m))
    assert len(cache) == 3
    assert cache.misses == 5
    # oldest keys were evicted
    calls = []
    cache.get_or_compute(("key", 0), lambda: calls.append(1) or eig_hermitian(mats[0]))
    assert calls == [1]
    # most recent key is still cached
    cache.get_or_compute(("key", 4), lambda: calls.append(2) or eig_hermitian(mats[4]))
    assert calls == [1]
    assert cache.hits == 1


def test_fingerprint_stability(rng):
    a = random_hermitian(rng, 5)
    assert dense_fingerprint(a) == dense_fingerprint(a.copy())
    b = a.copy()
    b[0, 0] += 1e-12
    assert dense_fingerprint(a) != dense_fingerprint(b)
