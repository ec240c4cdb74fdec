"""Lattice geometry: sites, nearest-neighbor edges, spatial symmetry permutations.

The canonical cluster is the 7-site wheel W6: a center site surrounded by a
hexagonal ring, drawn as three rows of 2-3-2 sites with unit nearest-neighbor
distance.  Sites are numbered 1..7 with the center at 4::

        1---2
       / \ / \
      3---4---5
       \ / \ /
        6---7

Custom lattices can be built from an explicit edge list; only the wheel
ships with rotation-symmetry support.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SQ3_2 = np.sqrt(3.0) / 2.0

WHEEL7_EDGES = (
    (1, 2), (1, 3), (1, 4), (2, 4), (2, 5), (3, 4),
    (3, 6), (4, 5), (4, 6), (4, 7), (5, 7), (6, 7),
)

# hexagonal ring in rotation order; 4 stays put
WHEEL7_RING_CYCLE = (1, 2, 5, 7, 6, 3)

WHEEL7_POSITIONS = (
    (-0.5, SQ3_2), (0.5, SQ3_2),
    (-1.0, 0.0), (0.0, 0.0), (1.0, 0.0),
    (-0.5, -SQ3_2), (0.5, -SQ3_2),
)


class UnsupportedSymmetryError(ValueError):
    """Raised when a symmetry operation is requested for a lattice without one."""


@dataclass(frozen=True)
class SitePermutation:
    """Bijection on 1-based site labels; mapping[k-1] is the image of site k."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(1, n + 1)):
            raise ValueError("mapping is not a bijection on 1..%d" % n)

    def __call__(self, site: int) -> int:
        return self.mapping[site - 1]

    def __len__(self):
        return len(self.mapping)

    def compose(self, other: "SitePermutation") -> "SitePermutation":
        """self after other: (self.compose(other))(k) = self(other(k))."""
        return SitePermutation(tuple(self(other(k)) for k in range(1, len(self.mapping) + 1)))

    def inverse(self) -> "SitePermutation":
        inv = [0] * len(self.mapping)
        for k, img in enumerate(self.mapping, start=1):
            inv[img - 1] = k
        return SitePermutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(self(k) == k for k in range(1, len(self.mapping) + 1))

    def order(self) -> int:
        p = self
        for m in range(1, len(self.mapping) + 2):
            if p.is_identity():
                return m
            p = self.compose(p)
        raise RuntimeError("permutation order exceeds group bound")  # unreachable


@dataclass(frozen=True)
class SpinLattice:
    """A cluster of spin-1/2 sites with an explicit nearest-neighbor edge list.

    Sites are labeled 1..n_sites.  Edges are stored as sorted unordered
    pairs.  ``positions`` (2D, nearest-neighbor distance 1) and
    ``center_site`` are optional geometry metadata; ``rotation`` is the
    lattice's spatial rotation permutation when it has one.
    """

    n_sites: int
    edges: tuple[tuple[int, int], ...]
    positions: tuple[tuple[float, float], ...] | None = None
    center_site: int | None = None
    rotation: SitePermutation | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError("self-edge (%d,%d)" % (i, j))
            if not (1 <= i <= self.n_sites and 1 <= j <= self.n_sites):
                raise ValueError("edge (%d,%d) out of range" % (i, j))
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError("duplicate edge (%d,%d)" % key)
            seen.add(key)

    @property
    def dim(self) -> int:
        """Hilbert-space dimension 2**n_sites."""
        return 2 ** self.n_sites

    def degree(self, i: int) -> int:
        return len(neighbors(self, i))

    def distance(self, i: int, j: int) -> float:
        """Euclidean distance between sites i and j (requires positions)."""
        if self.positions is None:
            raise ValueError("lattice has no stored positions")
        pi, pj = self.positions[i - 1], self.positions[j - 1]
        return float(np.hypot(pi[0] - pj[0], pi[1] - pj[1]))


def _normalize_edges(edges) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((min(int(i), int(j)), max(int(i), int(j))) for i, j in edges))


def build_wheel7() -> SpinLattice:
    """Canonical 7-site wheel: 2-3-2 rows, center site 4, 12 edges.

    The hexagonal ring in rotation order is (1 2 5 7 6 3); the stored
    rotation permutation advances along that cycle and fixes the center.
    """
    cyc = WHEEL7_RING_CYCLE
    mapping = [0] * 7
    mapping[4 - 1] = 4
    for k, site in enumerate(cyc):
        mapping[site - 1] = cyc[(k + 1) % 6]
    return SpinLattice(
        n_sites=7,
        edges=_normalize_edges(WHEEL7_EDGES),
        positions=WHEEL7_POSITIONS,
        center_site=4,
        rotation=SitePermutation(tuple(mapping)),
    )


def neighbors(lat: SpinLattice, i: int) -> list[int]:
    """Sorted site labels sharing an edge with site i."""
    if not (1 <= i <= lat.n_sites):
        raise ValueError("site index %r out of range 1..%d" % (i, lat.n_sites))
    out = set()
    for a, b in lat.edges:
        if a == i:
            out.add(b)
        elif b == i:
            out.add(a)
    return sorted(out)


def rotation_permutation(lat: SpinLattice) -> SitePermutation:
    """The lattice's spatial rotation (order 6 for the wheel)."""
    if lat.rotation is None:
        raise UnsupportedSymmetryError("lattice carries no rotation permutation")
    return lat.rotation


def permute_edges(lat: SpinLattice, perm: SitePermutation) -> tuple[tuple[int, int], ...]:
    """Edge set with perm applied to every endpoint (normalized order)."""
    return _normalize_edges((perm(i), perm(j)) for i, j in lat.edges)


def lattice_from_dict(doc: dict) -> SpinLattice:
    """Build a lattice from {"n_sites": int, "edges": [[i, j], ...]} (1-based)."""
    try:
        n = int(doc["n_sites"])
        edges = doc["edges"]
    except (KeyError, TypeError) as exc:
        raise ValueError("lattice document needs n_sites and edges") from exc
    return SpinLattice(n_sites=n, edges=_normalize_edges(edges))


def load_lattice(spec) -> SpinLattice:
    """Resolve a lattice from a name, a dict document, or a JSON file path.

    "wheel7" is the only built-in name.
    """
    if isinstance(spec, SpinLattice):
        return spec
    if isinstance(spec, dict):
        return lattice_from_dict(spec)
    if isinstance(spec, str):
        if spec == "wheel7":
            return build_wheel7()
        if spec.endswith(".json"):
            with open(spec) as fh:
                return lattice_from_dict(json.load(fh))
        raise ValueError("unknown lattice %r (use 'wheel7' or an edge-list JSON)" % spec)
    raise ValueError("cannot interpret lattice specification %r" % (spec,))
