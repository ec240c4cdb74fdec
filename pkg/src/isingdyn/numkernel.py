"""Dense Hermitian numerical kernels.

Eigendecomposition, the unitary exponential exp(-i H dt) built from it,
and the positive-semidefinite square root used by the concurrence.  The
propagator goes through the spectral decomposition rather than
scaling-and-squaring: H is Hermitian, the decomposition is reused by the
projection engine, and unitarity holds to orthonormality error.

Degenerate eigenvalues need no special handling for propagation: any
orthonormal basis of a degenerate subspace gives the same propagator.
"""

from __future__ import annotations

import hashlib
import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

HERMITICITY_TOL = 1e-12

# LAPACK divide-and-conquer is the fast path; on rare near-degenerate
# inputs it can fail to converge, so fall back to RRR and then to the
# classic QR iteration before giving up.
_EIGH_DRIVERS = ("evd", "evr", "ev")


class EigensolverError(np.linalg.LinAlgError):
    """All eigensolver drivers failed to converge."""


class NotPositiveSemidefiniteError(np.linalg.LinAlgError):
    """Matrix eigenvalue below the PSD tolerance."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and column-orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True)
class UnitaryPropagator:
    """exp(-i H dt) together with the step and a hash of its generator."""

    matrix: np.ndarray
    dt: float
    generator_fingerprint: str


def dense_fingerprint(a: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(a).tobytes()).hexdigest()


def _fix_phases(v: np.ndarray) -> np.ndarray:
    """Deterministic gauge: largest-magnitude entry of each column real positive."""
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    if np.iscomplexobj(v):
        scale = np.abs(lead)
        scale[scale == 0] = 1.0
        v = v * (lead.conj() / scale)
    else:
        v = v * np.where(lead < 0, -1.0, 1.0)
    return v


def eig_hermitian(a: np.ndarray, check: bool = True) -> SpectralDecomposition:
    """Full spectral decomposition of a dense Hermitian matrix.

    The input must be Hermitian within an absolute elementwise tolerance
    of 1e-12 (scaled by the matrix magnitude); it is symmetrized before
    the solver so the result is exactly the decomposition of
    (A + A^dagger)/2.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (a.shape,))
    scale = max(1.0, float(np.abs(a).max()) if a.size else 0.0)
    if check:
        herm_err = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
        if herm_err > HERMITICITY_TOL * scale:
            raise ValueError("matrix is not Hermitian (max |A - A^H| = %.3e)" % herm_err)
    a = (a + a.conj().T) / 2
    if np.iscomplexobj(a) and not a.imag.any():
        a = a.real
    failures = []
    for driver in _EIGH_DRIVERS:
        try:
            w, v = sla.eigh(a, driver=driver, check_finite=False)
            break
        except np.linalg.LinAlgError as exc:
            failures.append("%s: %s" % (driver, exc))
    else:
        raise EigensolverError(
            "eigendecomposition failed for all drivers (dim %d, |A|_max %.3e): %s"
            % (a.shape[0], scale, "; ".join(failures))
        )
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], _fix_phases(v[:, order]))


def expm_unitary(h, dt: float, decomposition: SpectralDecomposition | None = None) -> UnitaryPropagator:
    """U = V diag(e^{-i E dt}) V^dagger for Hermitian h."""
    h = np.asarray(h)
    if decomposition is None:
        decomposition = eig_hermitian(h)
    v = decomposition.eigenvectors
    phases = np.exp(-1j * decomposition.eigenvalues * dt)
    u = (v * phases) @ v.conj().T
    return UnitaryPropagator(u, float(dt), dense_fingerprint(h))


def psd_sqrt(rho: np.ndarray, neg_tol: float = 1e-8, clip_tol: float = 1e-10) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite matrix.

    Eigenvalues below -neg_tol raise.  Eigenvalues within clip_tol of
    zero relative to the largest are zeroed before the square root;
    without the floor, taking sqrt of O(eps) rank-deficiency noise
    injects O(sqrt(eps)) errors into downstream eigenvalue sums.
    """
    dec = eig_hermitian(rho)
    w = dec.eigenvalues
    if len(w) and w[0] < -neg_tol:
        raise NotPositiveSemidefiniteError("eigenvalue %.3e below -%g" % (w[0], neg_tol))
    floor = clip_tol * max(float(w[-1]), 0.0) if len(w) else 0.0
    w = np.where(w > floor, w, 0.0)
    v = dec.eigenvectors
    s = (v * np.sqrt(w)) @ v.conj().T
    return (s + s.conj().T) / 2


class DecompositionCache:
    """Bounded LRU map from a hashable key to a SpectralDecomposition.

    Step-like schedules revisit a handful of field values, so their
    decompositions are computed once; smooth schedules produce a fresh
    value per segment and must not accumulate, hence the bound.  Safe
    under concurrent use.
    """

    def __init__(self, maxsize: int = 64):
        if maxsize < 1:
            raise ValueError("maxsize must be >= 1")
        self.maxsize = maxsize
        self.hits = 0
        self.misses = 0
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._data)

    def get_or_compute(self, key, compute) -> SpectralDecomposition:
        with self._lock:
            if key in self._data:
                self.hits += 1
                self._data.move_to_end(key)
                return self._data[key]
        value = compute()
        with self._lock:
            self.misses += 1
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)
        return value

    def clear(self):
        with self._lock:
            self._data.clear()
            self.hits = self.misses = 0
