"""Many-body operators on the 2^N-dimensional spin-1/2 Hilbert space.

Basis convention (fixed here once, everything downstream relies on it):
the computational basis is the product sigma^z basis indexed by integers
b in [0, 2^N).  Site k (1-based) occupies bit (k-1) of b, and the spin
at site k points up exactly when that bit is 0.  Index 0 is the all-up
state.  With this encoding sigma^z_k is diagonal with entry
(-1)^bit(k-1), and sigma^x_i sigma^x_j couples b to b XOR mask(i,j).

Operators are stored as real symmetric coordinate triples; the
transverse Ising Hamiltonian is real in this basis.  Densify only when
feeding a numerical kernel.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .lattice import SpinLattice, SitePermutation


@dataclass(frozen=True)
class BasisConvention:
    """Encoding of spin configurations as basis indices for n_sites spins."""

    n_sites: int

    def bit_of_site(self, k: int) -> int:
        if not (1 <= k <= self.n_sites):
            raise ValueError("site %r out of range" % (k,))
        return k - 1

    def spin_at(self, b: int, k: int) -> int:
        """+1 for up, -1 for down at site k of basis state b."""
        return 1 - 2 * ((b >> (k - 1)) & 1)

    def configuration(self, b: int) -> tuple[int, ...]:
        """Spins (+1/-1) at sites 1..n for basis index b."""
        return tuple(self.spin_at(b, k) for k in range(1, self.n_sites + 1))

    def index_of(self, spins) -> int:
        if len(spins) != self.n_sites:
            raise ValueError("expected %d spins" % self.n_sites)
        b = 0
        for k, s in enumerate(spins):
            if s == -1:
                b |= 1 << k
            elif s != 1:
                raise ValueError("spins must be +1 or -1")
        return b


def popcounts(n_bits: int) -> np.ndarray:
    """Number of set bits for every integer in [0, 2^n_bits)."""
    b = np.arange(2 ** n_bits, dtype=np.int64)
    out = np.zeros_like(b)
    for k in range(n_bits):
        out += (b >> k) & 1
    return out


@dataclass(frozen=True)
class SparseHermitianOperator:
    """Real symmetric operator in coordinate (row, col, value) storage.

    The entry list contains both (i, j) and (j, i) for off-diagonal
    elements and stores no explicit zeros.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim))
        np.add.at(m, (self.rows, self.cols), self.vals)
        return m

    def diagonal(self) -> np.ndarray:
        d = np.zeros(self.dim)
        on = self.rows == self.cols
        np.add.at(d, self.rows[on], self.vals[on])
        return d

    def fingerprint(self) -> str:
        h = hashlib.sha1()
        h.update(np.int64(self.dim).tobytes())
        h.update(np.ascontiguousarray(self.rows, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.cols, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.vals, dtype=np.float64).tobytes())
        return h.hexdigest()


def _make_sparse(dim, rows, cols, vals) -> SparseHermitianOperator:
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    keep = vals != 0.0
    op = SparseHermitianOperator(dim, rows[keep], cols[keep], vals[keep])
    for a in ("rows", "cols", "vals"):
        getattr(op, a).setflags(write=False)
    return op


def build_hamiltonian(lat: SpinLattice, J: float, h: float) -> SparseHermitianOperator:
    """Transverse Ising Hamiltonian H = -J sum_edges sx_i sx_j - h sum_i sz_i.

    Diagonal entry at basis b is -h (n_up - n_down); each edge (i, j)
    contributes -J between b and b XOR (bit i-1 | bit j-1).
    """
    if not (np.isfinite(J) and np.isfinite(h)):
        raise ValueError("J and h must be finite")
    n = lat.n_sites
    dim = lat.dim
    b = np.arange(dim, dtype=np.int64)
    rows, cols, vals = [], [], []
    if h != 0.0:
        diag = -h * (n - 2 * popcounts(n))
        rows.append(b)
        cols.append(b)
        vals.append(diag.astype(np.float64))
    if J != 0.0:
        for i, j in lat.edges:
            mask = (1 << (i - 1)) | (1 << (j - 1))
            rows.append(b)
            cols.append(b ^ mask)
            vals.append(np.full(dim, -J))
    if not rows:
        return _make_sparse(dim, [], [], [])
    return _make_sparse(dim, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))


def total_sz(n_sites: int) -> SparseHermitianOperator:
    """Collective S^z = sum_i sigma^z_i, diagonal entry (#up - #down)."""
    dim = 2 ** n_sites
    b = np.arange(dim, dtype=np.int64)
    return _make_sparse(dim, b, b, (n_sites - 2 * popcounts(n_sites)).astype(np.float64))


def parity_operator(n_sites: int) -> SparseHermitianOperator:
    """Global spin flip Prod_i sigma^z_i, diagonal entry (-1)^(#down)."""
    dim = 2 ** n_sites
    b = np.arange(dim, dtype=np.int64)
    signs = 1.0 - 2.0 * (popcounts(n_sites) % 2)
    return _make_sparse(dim, b, b, signs)


def basis_permutation(n_sites: int, perm: SitePermutation) -> np.ndarray:
    """Index map of the site permutation on basis states.

    Returns p with p[b] = b' where bit (perm(k)-1) of b' equals bit
    (k-1) of b, i.e. the state with site contents moved by perm.
    """
    if len(perm) != n_sites:
        raise ValueError("permutation acts on %d sites, lattice has %d" % (len(perm), n_sites))
    b = np.arange(2 ** n_sites, dtype=np.int64)
    out = np.zeros_like(b)
    for k in range(1, n_sites + 1):
        out |= ((b >> (k - 1)) & 1) << (perm(k) - 1)
    return out


def rotation_operator(lat: SpinLattice, perm: SitePermutation) -> np.ndarray:
    """Dense unitary permutation matrix of perm on the full Hilbert space."""
    pmap = basis_permutation(lat.n_sites, perm)
    dim = lat.dim
    m = np.zeros((dim, dim))
    m[pmap, np.arange(dim)] = 1.0
    return m


def apply_operator(op: SparseHermitianOperator, v: np.ndarray) -> np.ndarray:
    """op @ v without densifying; cost proportional to stored entries."""
    v = np.asarray(v)
    if v.shape != (op.dim,):
        raise ValueError("vector shape %r does not match dim %d" % (v.shape, op.dim))
    out = np.zeros(op.dim, dtype=np.result_type(op.vals, v))
    np.add.at(out, op.rows, op.vals * v[op.cols])
    return out
