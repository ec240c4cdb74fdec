import numpy as np
import pytest

from isingdyn import build_wheel7


@pytest.fixture(scope="session")
def wheel():
    return build_wheel7()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_state(rng, dim):
    """Haar-ish random pure state as a complex vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(rng, dim, rank=None):
    """Random density matrix with the given rank (full by default)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
