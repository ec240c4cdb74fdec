"""Two-site reduced density matrices, concurrence, entanglement of formation.

The pair basis is |s_i s_j> with site i's bit more significant, spin-up
first: index 2*s_i + s_j with s = 0 for up.  Under the global basis
convention (site k on bit k-1) a state vector reshaped to (2,)*n puts
site k on axis n-k, which is where the partial traces below pick their
axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numkernel import eig_hermitian, psd_sqrt

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

# sigma_y (x) sigma_y, the two-qubit spin-flip conjugator
YY = np.array([
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
])


@dataclass(frozen=True)
class TwoQubitDensity:
    """Validated 4x4 density matrix of a site pair."""

    matrix: np.ndarray
    pair: tuple[int, int] | None = None

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("two-qubit density matrix must be 4x4")
        if np.abs(m - m.conj().T).max() > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        tr = m.trace().real
        if abs(tr - 1.0) > 1e-9:
            raise ValueError("density matrix trace %.12f is not 1" % tr)
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -1e-9:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)


def _pair_axes(n_sites: int, i: int, j: int):
    if i == j:
        raise ValueError("pair sites must differ")
    for s in (i, j):
        if not (1 <= s <= n_sites):
            raise ValueError("site %r out of range 1..%d" % (s, n_sites))
    return n_sites - i, n_sites - j


def reduce_state_block(block: np.ndarray, n_sites: int, i: int, j: int,
                       weights=None) -> np.ndarray:
    """Weighted two-site reduction of a (dim, m) block of pure states.

    Returns sum_m w_m Tr_rest |psi_m><psi_m| as a 4x4 matrix; with
    weights None a single column (or (dim,) vector) of unit weight.
    """
    block = np.asarray(block)
    if block.ndim == 1:
        block = block[:, None]
    dim, m = block.shape
    if dim != 2 ** n_sites:
        raise ValueError("block dimension %d does not match %d sites" % (dim, n_sites))
    ax_i, ax_j = _pair_axes(n_sites, i, j)
    rest = tuple(a for a in range(n_sites) if a not in (ax_i, ax_j))
    t = block.reshape((2,) * n_sites + (m,))
    t = np.transpose(t, (ax_i, ax_j) + rest + (n_sites,)).reshape(4, -1, m)
    if weights is None:
        return np.einsum("arm,brm->ab", t, t.conj())
    return np.einsum("arm,brm,m->ab", t, t.conj(), np.asarray(weights))


def _reduce_full_density(rho: np.ndarray, n_sites: int, i: int, j: int) -> np.ndarray:
    ax_i, ax_j = _pair_axes(n_sites, i, j)
    rest = tuple(a for a in range(n_sites) if a not in (ax_i, ax_j))
    t = rho.reshape((2,) * (2 * n_sites))
    order = (ax_i, ax_j) + rest + (n_sites + ax_i, n_sites + ax_j) + tuple(n_sites + a for a in rest)
    r = 2 ** (n_sites - 2)
    t = np.transpose(t, order).reshape(4, r, 4, r)
    return np.einsum("arbr->ab", t)


def reduce_two_site(state, i: int, j: int, n_sites: int | None = None) -> TwoQubitDensity:
    """Partial trace onto sites (i, j) of a pure state or a full density matrix."""
    if hasattr(state, "amplitudes"):
        n_sites = state.n_sites
        mat = reduce_state_block(state.amplitudes, n_sites, i, j)
        return TwoQubitDensity(mat, (i, j))
    arr = np.asarray(state)
    if arr.ndim == 1:
        n = int(np.log2(len(arr)) + 0.5) if n_sites is None else n_sites
        if 2 ** n != len(arr):
            raise ValueError("state length %d is not a power of two" % len(arr))
        return TwoQubitDensity(reduce_state_block(arr, n, i, j), (i, j))
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        n = int(np.log2(arr.shape[0]) + 0.5) if n_sites is None else n_sites
        if 2 ** n != arr.shape[0]:
            raise ValueError("density dimension %d is not a power of two" % arr.shape[0])
        return TwoQubitDensity(_reduce_full_density(arr, n, i, j), (i, j))
    raise ValueError("expected a state vector or a square density matrix")


def spin_flipped(rho: np.ndarray) -> np.ndarray:
    """rho-tilde = (sy (x) sy) conj(rho) (sy (x) sy)."""
    return YY @ rho.conj() @ YY


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    Builds R = sqrt( sqrt(rho) rho~ sqrt(rho) ) through two PSD square
    roots and returns max{0, e1 - e2 - e3 - e4} over R's eigenvalues in
    decreasing order, clipped to [0, 1].
    """
    m = rho.matrix if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError("concurrence needs a 4x4 density matrix")
    sq = psd_sqrt(m)
    inner = sq @ spin_flipped(m) @ sq
    r = psd_sqrt((inner + inner.conj().T) / 2)
    eps = np.sort(eig_hermitian(r).eigenvalues)[::-1]
    c = eps[0] - eps[1] - eps[2] - eps[3]
    return float(min(1.0, max(0.0, c)))


def concurrence_via_product_eigenvalues(rho) -> float:
    """Concurrence from the eigenvalues of rho rho~ (independent route).

    The eps_i are the square roots of the (real, non-negative)
    eigenvalues of the non-Hermitian product rho rho~; kept alongside
    the Hermitian-R route as a cross-check.
    """
    m = rho.matrix if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=complex)
    lam = np.linalg.eigvals(m @ spin_flipped(m))
    eps = np.sort(np.sqrt(np.clip(lam.real, 0.0, None)))[::-1]
    c = eps[0] - eps[1] - eps[2] - eps[3]
    return float(min(1.0, max(0.0, c)))


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def entanglement_of_formation(c: float) -> float:
    """eps(C) = h((1 - sqrt(1 - C^2))/2) with h the binary entropy."""
    if c < -1e-12 or c > 1.0 + 1e-12:
        raise ValueError("concurrence %r out of [0, 1]" % (c,))
    c = min(1.0, max(0.0, float(c)))
    x = (1.0 - np.sqrt(1.0 - c * c)) / 2.0
    return _binary_entropy(x)


@dataclass(eq=False)
class ConcurrenceSeries:
    """Per-pair concurrence and entanglement-of-formation time series."""

    times: np.ndarray
    fields: np.ndarray
    pairs: tuple
    concurrence: dict
    formation: dict

    def time_average(self, pair, t_lo=None, t_hi=None) -> float:
        return time_average(self.times, self.concurrence[tuple(pair)], t_lo, t_hi)


def time_average(times, values, t_lo=None, t_hi=None) -> float:
    """Trapezoidal mean of a sampled series over [t_lo, t_hi]."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if t_lo is None:
        t_lo = times[0]
    if t_hi is None:
        t_hi = times[-1]
    if t_hi <= t_lo:
        raise ValueError("empty averaging window [%g, %g]" % (t_lo, t_hi))
    mask = (times >= t_lo - 1e-12) & (times <= t_hi + 1e-12)
    if mask.sum() < 2:
        raise ValueError("averaging window [%g, %g] contains fewer than 2 samples" % (t_lo, t_hi))
    t = times[mask]
    v = values[mask]
    return float(_trapezoid(v, t) / (t[-1] - t[0]))


def concurrence_trajectory(traj, pairs) -> ConcurrenceSeries:
    """Reduce, then score every sample of a state or density trajectory."""
    pairs = tuple((int(i), int(j)) for i, j in pairs)
    c = {}
    if hasattr(traj, "reduced"):
        for pair in pairs:
            if pair not in traj.reduced:
                raise ValueError("trajectory carries no reduced matrices for pair %r" % (pair,))
            c[pair] = np.array([concurrence(m) for m in traj.reduced[pair]])
    elif hasattr(traj, "states"):
        for pair in pairs:
            c[pair] = np.array([
                concurrence(reduce_state_block(s, traj.n_sites, *pair))
                for s in traj.states
            ])
    else:
        raise TypeError("expected a StateTrajectory or DensityTrajectory")
    e = {pair: np.array([entanglement_of_formation(x) for x in c[pair]]) for pair in pairs}
    return ConcurrenceSeries(np.array(traj.times, dtype=float),
                             np.array(traj.fields, dtype=float), pairs, c, e)


@dataclass(eq=False)
class SweepResult:
    """Ground-state concurrence against lambda = h/J on a field grid."""

    lambdas: np.ndarray
    pairs: tuple
    concurrence: dict
    formation: dict
    argmax: dict
    steepest: dict
    J: float


def ground_state_sweep(lat, J, h_grid, pairs=((1, 4), (1, 2))) -> SweepResult:
    """Equilibrium concurrence curve with its maximum and max-slope points.

    The steepest-ascent point (max dC/d lambda) is the finite-size
    stand-in for a critical point; argmax is the maximum-entanglement
    field.  Both depend on h and J only through lambda = h/J.
    """
    from .evolution import ground_state

    h_grid = np.asarray(h_grid, dtype=float)
    if h_grid.ndim != 1 or len(h_grid) == 0:
        raise ValueError("h_grid must be a non-empty 1-D array")
    if np.any(np.diff(h_grid) <= 0) and len(h_grid) > 1:
        raise ValueError("h_grid must be strictly ascending")
    pairs = tuple((int(i), int(j)) for i, j in pairs)
    lambdas = h_grid / float(J)
    c = {pair: np.empty(len(h_grid)) for pair in pairs}
    for k, h in enumerate(h_grid):
        psi = ground_state(lat, J, h)
        for pair in pairs:
            c[pair][k] = concurrence(reduce_state_block(psi.amplitudes, lat.n_sites, *pair))
    e = {pair: np.array([entanglement_of_formation(x) for x in c[pair]]) for pair in pairs}
    argmax = {pair: float(lambdas[np.argmax(c[pair])]) for pair in pairs}
    if len(lambdas) >= 2:
        steepest = {pair: float(lambdas[np.argmax(np.gradient(c[pair], lambdas))]) for pair in pairs}
    else:
        steepest = {pair: None for pair in pairs}
    return SweepResult(lambdas, pairs, c, e, argmax, steepest, float(J))
