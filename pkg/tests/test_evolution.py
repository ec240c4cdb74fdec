import math

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import random_state
from isingdyn.evolution import (PureState, evolve_matrix_stepper,
                                evolve_projection_stepper, evolve_thermal,
                                ground_state, n_samples, thermal_initial_state)
from isingdyn.numkernel import DecompositionCache, eig_hermitian
from isingdyn.observables import reduce_two_site
from isingdyn.operators import (build_hamiltonian, parity_operator, rotation_operator,
                                total_sz)
from isingdyn.lattice import rotation_permutation
from isingdyn.schedules import FieldSchedule, discretize


def dense_h(wheel, J, h):
    return build_hamiltonian(wheel, J, h).to_dense()


def test_pure_state_validation(rng):
    v = random_state(rng, 128)
    PureState(v, 7)
    with pytest.raises(ValueError):
        PureState(2 * v, 7)
    with pytest.raises(ValueError):
        PureState(v[:64], 7)


def test_ground_state_energy(wheel):
    for h in (0.5, 1.0, 2.6, 5.0):
        g = ground_state(wheel, 1.0, h)
        ham = dense_h(wheel, 1.0, h)
        e = (g.amplitudes.conj() @ ham @ g.amplitudes).real
        assert e == pytest.approx(eig_hermitian(ham).eigenvalues[0], abs=1e-10)


def test_ground_state_doublet_symmetrized(wheel):
    # deep ordered phase: numerically exact doublet
    g = ground_state(wheel, 1.0, 0.01)
    par = parity_operator(7).diagonal()
    amp = g.amplitudes
    assert (amp.conj() @ (par * amp)).real == pytest.approx(1.0, abs=1e-8)
    rot = rotation_operator(wheel, rotation_permutation(wheel))
    assert (amp.conj() @ rot @ amp).real == pytest.approx(1.0, abs=1e-8)
    # deterministic across repeated calls
    g2 = ground_state(wheel, 1.0, 0.01)
    assert np.abs(g.amplitudes - g2.amplitudes).max() == 0


def test_constant_schedule_matches_expm(wheel):
    s = FieldSchedule.constant(1.3)
    pcf = discretize(s, 0.0, 2.0, 0.1)
    psi0 = ground_state(wheel, 1.0, 0.7)  # not an eigenstate of H(1.3)
    traj = evolve_projection_stepper(wheel, 1.0, pcf, psi0, sample_every=20)
    ham = dense_h(wheel, 1.0, 1.3)
    exact = expm(-1j * ham * 2.0) @ psi0.amplitudes
    assert np.abs(traj.states[-1] - exact).max() < 1e-10


def test_step_schedule_is_dt_exact(wheel):
    # piecewise-constant drive: segment size cannot matter
    s = FieldSchedule.step(1.0, 2.0)
    psi0 = ground_state(wheel, 1.0, 1.0)
    coarse = evolve_matrix_stepper(wheel, 1.0, discretize(s, 0.0, 4.0, 0.5), psi0, 2)
    fine = evolve_matrix_stepper(wheel, 1.0, discretize(s, 0.0, 4.0, 0.01), psi0, 100)
    assert coarse.times.tolist() == pytest.approx(fine.times.tolist())
    assert np.abs(coarse.states - fine.states).max() < 1e-10


def test_engines_agree_on_random_schedules(wheel, rng):
    psi0 = ground_state(wheel, 1.0, 1.0)
    kinds = ["step", "exp", "tanh", "sin"]
    for trial in range(4):
        kind = kinds[trial]
        a = float(rng.uniform(0.5, 3.0))
        b = float(rng.uniform(0.5, 3.0))
        omega = float(rng.uniform(0.1, 1.5))
        if kind == "step":
            s = FieldSchedule.step(a, b)
        elif kind == "exp":
            s = FieldSchedule.exponential(a, b, omega)
        elif kind == "tanh":
            s = FieldSchedule.hyperbolic(a, b, omega)
        else:
            s = FieldSchedule.sinusoidal(a, omega, float(rng.uniform(0, math.pi)))
        pcf = discretize(s, 0.0, 3.0, 0.05)
        tm = evolve_matrix_stepper(wheel, 1.0, pcf, psi0, 12)
        tp = evolve_projection_stepper(wheel, 1.0, pcf, psi0, 12)
        assert np.abs(tm.states - tp.states).max() < 1e-8
        assert np.abs(tm.times - tp.times).max() == 0
        assert np.abs(tm.fields - tp.fields).max() == 0


def test_norms_preserved(wheel):
    s = FieldSchedule.sinusoidal(2.0, omega=0.7)
    pcf = discretize(s, 0.0, 5.0, 0.02)
    psi0 = ground_state(wheel, 1.0, 2.0)
    for traj in (evolve_matrix_stepper(wheel, 1.0, pcf, psi0, 25),
                 evolve_projection_stepper(wheel, 1.0, pcf, psi0, 25)):
        assert np.abs(traj.norms() - 1.0).max() < 1e-10


def test_energy_constant_within_segments(wheel):
    # constant field: <H> is a motion integral
    s = FieldSchedule.constant(0.9)
    pcf = discretize(s, 0.0, 3.0, 0.05)
    psi0 = ground_state(wheel, 1.0, 2.0)
    traj = evolve_projection_stepper(wheel, 1.0, pcf, psi0, 5)
    ham = dense_h(wheel, 1.0, 0.9)
    energies = np.einsum("ki,ij,kj->k", traj.states.conj(), ham, traj.states).real
    assert np.ptp(energies) < 1e-10


def test_sampling_bookkeeping(wheel):
    s = FieldSchedule.step(1.0, 2.0)
    pcf = discretize(s, 0.0, 1.0, 0.01)
    psi0 = ground_state(wheel, 1.0, 1.0)
    traj = evolve_projection_stepper(wheel, 1.0, pcf, psi0, sample_every=10)
    assert len(traj) == n_samples(pcf, 10) == 11
    assert traj.times.tolist() == pytest.approx(np.linspace(0, 1, 11).tolist())
    assert traj.fields[0] == 1.0  # value before the switch
    assert (traj.fields[1:] == 2.0).all()


def test_projection_cache_reuse(wheel):
    s = FieldSchedule.step(1.0, 2.0)
    pcf = discretize(s, 0.0, 5.0, 0.01)
    psi0 = ground_state(wheel, 1.0, 1.0)
    cache = DecompositionCache()
    evolve_projection_stepper(wheel, 1.0, pcf, psi0, 100, cache=cache)
    assert cache.misses == 1  # single post-switch field value
    assert len(cache) == 1


def test_thermal_ensemble_weights(wheel):
    ens = thermal_initial_state(wheel, 1.0, 1.0, beta=1.0)
    assert ens.weights.sum() == pytest.approx(1.0)
    assert (np.diff(ens.weights) <= 1e-15).all()  # descending with energy
    assert ens.n_members <= 128
    # tighter cutoff keeps fewer members
    loose = thermal_initial_state(wheel, 1.0, 1.0, beta=1.0, cutoff=0.9)
    assert loose.n_members < ens.n_members


def test_thermal_beta_limits(wheel):
    # beta = inf at a near-degenerate point: uniform ground multiplet
    cold = thermal_initial_state(wheel, 1.0, 0.01, beta=math.inf)
    assert cold.n_members == 2
    assert cold.weights.tolist() == pytest.approx([0.5, 0.5])
    # beta = 0: every eigenstate equally weighted
    hot = thermal_initial_state(wheel, 1.0, 1.0, beta=0.0)
    assert hot.n_members == 128
    assert hot.weights.tolist() == pytest.approx([1.0 / 128] * 128)
    assert hot.partition_function == pytest.approx(128.0)


def test_infinite_temperature_state_is_invariant(wheel):
    # I/128 commutes with everything: every reduced matrix stays I/4
    ens = thermal_initial_state(wheel, 1.0, 1.0, beta=0.0)
    s = FieldSchedule.step(1.0, 2.0)
    pcf = discretize(s, 0.0, 1.0, 0.05)
    traj = evolve_thermal(ens, wheel, 1.0, pcf, [(1, 4), (2, 6)], sample_every=5)
    for pair in traj.pairs:
        assert np.abs(traj.reduced[pair] - np.eye(4) / 4).max() < 1e-10


def test_zero_temperature_matches_pure_evolution(wheel):
    # gapped initial point: the cold ensemble is the pure ground state
    ens = thermal_initial_state(wheel, 1.0, 2.0, beta=math.inf)
    assert ens.n_members == 1
    s = FieldSchedule.step(2.0, 1.0)
    pcf = discretize(s, 0.0, 2.0, 0.02)
    traj_mixed = evolve_thermal(ens, wheel, 1.0, pcf, [(1, 4)], sample_every=10)
    psi0 = ground_state(wheel, 1.0, 2.0)
    traj_pure = evolve_projection_stepper(wheel, 1.0, pcf, psi0, sample_every=10)
    for k in range(len(traj_pure)):
        rho = reduce_two_site(traj_pure.state(k), 1, 4).matrix
        assert np.abs(rho - traj_mixed.reduced[(1, 4)][k]).max() < 1e-10


def test_thermal_field_mismatch_rejected(wheel):
    ens = thermal_initial_state(wheel, 1.0, 1.0, beta=1.0)
    s = FieldSchedule.step(2.0, 1.0)  # starts at 2, ensemble built at 1
    pcf = discretize(s, 0.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        evolve_thermal(ens, wheel, 1.0, pcf, [(1, 4)])


def test_sample_every_validation(wheel):
    s = FieldSchedule.constant(1.0)
    pcf = discretize(s, 0.0, 1.0, 0.1)
    psi0 = ground_state(wheel, 1.0, 1.0)
    with pytest.raises(ValueError):
        evolve_projection_stepper(wheel, 1.0, pcf, psi0, sample_every=0)
