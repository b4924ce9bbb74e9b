"""Point-cloud homology: neighborhood complexes, GF(2) Betti numbers, clusters.

The full route builds the scale-r neighborhood (clique) complex and reads
Betti numbers off boundary ranks over the two-element field.  That blows
up combinatorially, so it carries dimension and point budgets; the
component count alone has a cheap union-find route with no budget.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import SampleSet, SpherePack

MAX_COMPLEX_DIM = 3
DEFAULT_POINT_BUDGET = 2000

_PAIR_BLOCK = 512  # row block for pair generation; caps the distance buffer


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices per dimension 0..max_dim, each a sorted vertex tuple."""

    vertex_count: int
    simplices: tuple[tuple[tuple[int, ...], ...], ...]
    scale: float
    max_dim: int

    @property
    def simplex_counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)


@dataclass(frozen=True)
class BettiProfile:
    """Betti numbers beta_0.. of a complex plus its Euler characteristic.

    The top entry reflects the dimension truncation of the complex it came
    from: simplices above max_dim that would fill top-dimensional cycles
    are not present, so only entries below the top are estimates of the
    underlying space.
    """

    betti: tuple[int, ...]
    euler_characteristic: int


@dataclass(frozen=True)
class ClusterEstimate:
    """Component count of the distance graph at a threshold."""

    threshold: float
    cluster_count: int


class UnionFind:
    """Array union-find with path compression and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size
        self.components = size

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        return True


def _as_point_array(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if pts.size else pts.reshape(0, 1)
    if pts.ndim != 2:
        raise ValueError("points must form a 2-d array, one point per row")
    return pts


def rips(points, scale: float, max_dim: int, *, max_points: int = DEFAULT_POINT_BUDGET) -> SimplicialComplex:
    """Neighborhood complex at the given scale.

    A q-simplex is any (q+1)-subset of points with all pairwise distances
    at or below the scale, so the complex is the clique expansion of the
    scale graph and is closed under faces by construction.

    Args:
        points: array-like of shape (n, dim).
        scale: connectivity distance, positive.
        max_dim: top simplex dimension to enumerate, between 1 and 3.
        max_points: point budget; larger inputs are rejected.

    Returns:
        SimplicialComplex with simplices for every dimension 0..max_dim.
    """
    if not 1 <= int(max_dim) <= MAX_COMPLEX_DIM:
        raise ValueError(f"max_dim must lie in 1..{MAX_COMPLEX_DIM}")
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    pts = _as_point_array(points)
    n = pts.shape[0]
    if n > max_points:
        raise ValueError(f"{n} points exceed the complex budget of {max_points}")
    if n:
        diffs = pts[:, None, :] - pts[None, :, :]
        adj = np.einsum("ijk,ijk->ij", diffs, diffs) <= scale * scale
        np.fill_diagonal(adj, False)
    else:
        adj = np.zeros((0, 0), dtype=bool)
    levels: list[list[tuple[int, ...]]] = [[(i,) for i in range(n)]]
    levels.append([(int(a), int(b)) for a, b in np.argwhere(np.triu(adj, 1))])
    for q in range(2, int(max_dim) + 1):
        grown: list[tuple[int, ...]] = []
        for simplex in levels[q - 1]:
            common = np.flatnonzero(adj[list(simplex)].all(axis=0))
            for v in common[common > simplex[-1]]:
                grown.append(simplex + (int(v),))
        levels.append(grown)
    return SimplicialComplex(
        vertex_count=n,
        simplices=tuple(tuple(level) for level in levels),
        scale=float(scale),
        max_dim=int(max_dim),
    )


def _gf2_rank_columns(cols: list[int]) -> int:
    """Rank over GF(2) by left-to-right column reduction.

    Columns are bit masks over the rows.  Each one is xored with the
    earlier pivot column sharing its highest set row until it either
    empties or claims a new pivot row; int xor keeps the inner step one
    machine word per 64 rows.
    """
    pivot_at_row: dict[int, int] = {}
    rank = 0
    for col in cols:
        while col:
            low = col.bit_length() - 1
            other = pivot_at_row.get(low)
            if other is None:
                pivot_at_row[low] = col
                rank += 1
                break
            col ^= other
    return rank


def _boundary_rank(faces: tuple[tuple[int, ...], ...], simplices: tuple[tuple[int, ...], ...]) -> int:
    if not faces or not simplices:
        return 0
    index = {f: i for i, f in enumerate(faces)}
    cols = []
    for s in simplices:
        bits = 0
        for drop in range(len(s)):
            bits |= 1 << index[s[:drop] + s[drop + 1 :]]
        cols.append(bits)
    return _gf2_rank_columns(cols)


def betti(complex_: SimplicialComplex) -> BettiProfile:
    """Betti numbers over GF(2) from boundary ranks.

    beta_q = (#q-simplices) - rank(boundary_q) - rank(boundary_{q+1}),
    with the boundary below dimension zero and above the top dimension
    both zero.  The Euler characteristic is the alternating simplex-count
    sum and always equals the alternating Betti sum.
    """
    counts = complex_.simplex_counts
    ranks = [0] * (complex_.max_dim + 2)
    for q in range(1, complex_.max_dim + 1):
        ranks[q] = _boundary_rank(complex_.simplices[q - 1], complex_.simplices[q])
    bettis = tuple(counts[q] - ranks[q] - ranks[q + 1] for q in range(complex_.max_dim + 1))
    euler = sum(c if q % 2 == 0 else -c for q, c in enumerate(counts))
    return BettiProfile(betti=bettis, euler_characteristic=euler)


def betti0_linkage(points, threshold: float) -> ClusterEstimate:
    """Component count of the graph with edges at distance <= threshold.

    Union-find over the edge list, generated in row blocks so memory stays
    bounded; no point budget.
    """
    if threshold <= 0.0:
        raise ValueError("threshold must be positive")
    pts = _as_point_array(points)
    n = pts.shape[0]
    if n == 0:
        raise ValueError("no points to cluster")
    uf = UnionFind(n)
    t2 = threshold * threshold
    for start in range(0, n, _PAIR_BLOCK):
        stop = min(start + _PAIR_BLOCK, n)
        diffs = pts[start:stop, None, :] - pts[None, start:, :]
        d2 = np.einsum("ijk,ijk->ij", diffs, diffs)
        rows, cols = np.nonzero(d2 <= t2)
        keep = cols > rows  # both offset by start, so this is global j > i
        for i, j in zip(rows[keep] + start, cols[keep] + start):
            uf.union(int(i), int(j))
    return ClusterEstimate(threshold=float(threshold), cluster_count=uf.components)


def homology_estimator(
    pack: SpherePack,
    samples: SampleSet,
    scale: float,
    *,
    max_dim: int | None = None,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> BettiProfile:
    """Plug-in Betti estimate of the sampled space at a connectivity scale.

    The scale must stay inside (0, 2*radius): the inter-sphere gap is
    2*radius, so anything at or above it would merge distinct spheres.
    Within the point budget the full complex profile is computed (top
    dimension defaulting to min(d+1, 3)); above it only the component
    count is, and the profile collapses to its degree-zero part, whose
    Euler characteristic is that of the component-collapsed space.
    """
    if not 0.0 < scale < 2.0 * pack.radius:
        raise ValueError(
            f"scale {scale!r} outside (0, {2.0 * pack.radius!r}); spheres would merge or nothing connects"
        )
    if samples.n == 0:
        raise ValueError("cannot estimate homology from an empty sample")
    if samples.n <= point_budget:
        dim = min(pack.intrinsic_dim + 1, MAX_COMPLEX_DIM) if max_dim is None else int(max_dim)
        return betti(rips(samples.points, scale, dim, max_points=point_budget))
    clusters = betti0_linkage(samples.points, scale).cluster_count
    return BettiProfile(betti=(clusters,), euler_characteristic=clusters)
