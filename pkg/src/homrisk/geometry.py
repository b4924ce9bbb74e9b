"""Sphere-pack manifolds in the unit cube: construction, validation, sampling.

The null space is a grid of m disjoint d-spheres of common radius packed
into [0,1]^D with 4*radius spacing; each alternate deletes one sphere.
Sampling runs on numpy's Philox counter generator keyed directly by the
caller's seed, so draws are reproducible and independent of execution
layout.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1

# Generated points must satisfy |dist(point, center) - radius| below this.
ON_SPHERE_TOL = 1e-9


def sphere_surface_measure(d: int) -> float:
    """Surface measure of the unit d-sphere (2*pi at d=1, 4*pi at d=2)."""
    if d < 1:
        raise ValueError("sphere dimension must be >= 1")
    return 2.0 * math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0)


def unit_ball_volume(d: int) -> float:
    """Volume of the unit d-ball, the coarser normalising convention.

    The exact per-sphere mass normaliser is the surface measure; this one
    is kept around so callers can report the density floor under either
    convention.
    """
    if d < 1:
        raise ValueError("ball dimension must be >= 1")
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


@dataclass(frozen=True)
class Hypothesis:
    """Sampling regime: the full pack, one fixed deletion, or a random one.

    kind is "null", "alternate" or "mixture"; index is the 1-based sphere
    to delete and only accompanies "alternate".
    """

    kind: str
    index: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("null", "alternate", "mixture"):
            raise ValueError(f"unknown hypothesis kind {self.kind!r}")
        if self.kind == "alternate":
            if self.index is None or self.index < 1:
                raise ValueError("alternate hypothesis needs a sphere index >= 1")
        elif self.index is not None:
            raise ValueError("only the alternate hypothesis carries an index")

    @classmethod
    def null(cls) -> "Hypothesis":
        return cls("null")

    @classmethod
    def alternate(cls, index: int) -> "Hypothesis":
        return cls("alternate", int(index))

    @classmethod
    def mixture(cls) -> "Hypothesis":
        return cls("mixture")


@dataclass(frozen=True)
class SpherePack:
    """A grid of disjoint d-spheres of common radius inside [0,1]^D."""

    intrinsic_dim: int
    ambient_dim: int
    radius: float
    grid_size: int
    count: int
    centers: np.ndarray  # shape (count, ambient_dim), read-only
    total_volume: float


@dataclass(frozen=True)
class SampleSet:
    """Points drawn in one call, with the hypothesis and seed that made them."""

    points: np.ndarray  # shape (n, ambient_dim), read-only
    hypothesis: Hypothesis
    realized_removed_index: int | None
    seed: int

    @property
    def n(self) -> int:
        return int(self.points.shape[0])


@dataclass(frozen=True)
class PackCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class PackReport:
    checks: tuple[PackCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def build_pack(intrinsic_dim: int, ambient_dim: int, radius: float) -> SpherePack:
    """Build the axis-aligned grid pack.

    Centers sit at radius + 4*radius*k on each of the first d axes for
    k in 0..g-1, at radius on axis d+1, and at zero beyond; the grid size
    g = floor((1 - 2r)/(4r)) + 1 is the largest count per axis that keeps
    every sphere inside the cube at 4r spacing.

    Args:
        intrinsic_dim: sphere dimension d, at least 1.
        ambient_dim: embedding dimension, must exceed intrinsic_dim.
        radius: common sphere radius, in (0, 1/2).

    Returns:
        The constructed SpherePack with m = g**d spheres.

    Raises:
        ValueError: when the ambient dimension is too small or no sphere
            of the requested radius fits in the cube.
    """
    d = int(intrinsic_dim)
    big_d = int(ambient_dim)
    r = float(radius)
    if d < 1:
        raise ValueError("intrinsic dimension must be >= 1")
    if big_d <= d:
        raise ValueError("ambient dimension must exceed the intrinsic dimension")
    if not 0.0 < r < 0.5:
        raise ValueError("radius must lie in (0, 1/2) so a sphere fits in the cube")
    g = int(math.floor((1.0 - 2.0 * r) / (4.0 * r))) + 1
    m = g**d
    centers = np.zeros((m, big_d))
    for row, ks in enumerate(itertools.product(range(g), repeat=d)):
        for axis, k in enumerate(ks):
            centers[row, axis] = r + 4.0 * r * k
        centers[row, d] = r
    centers.flags.writeable = False
    total = m * sphere_surface_measure(d) * r**d
    return SpherePack(
        intrinsic_dim=d,
        ambient_dim=big_d,
        radius=r,
        grid_size=g,
        count=m,
        centers=centers,
        total_volume=total,
    )


def validate_pack(pack: SpherePack) -> PackReport:
    """Report-only geometric checks: containment, separation, count bounds.

    The count upper bound uses ceil(1/(4r)) per axis; the raw 1/(4r) bound
    fails for radii where 1/(4r) has fractional part above one half, even
    though the pack itself is valid, so the rounded form is what a correct
    grid actually guarantees.
    """
    r = pack.radius
    d = pack.intrinsic_dim
    varying = pack.centers[:, : d + 1]
    contained = bool(
        np.all(varying - r >= -1e-12)
        and np.all(varying + r <= 1.0 + 1e-12)
        and np.all(pack.centers >= -1e-12)
        and np.all(pack.centers <= 1.0 + 1e-12)
    )
    checks = [
        PackCheck(
            "containment",
            contained,
            f"varying-coordinate range [{varying.min():.6g}, {varying.max():.6g}], radius {r:.6g}",
        )
    ]
    if pack.count >= 2:
        # blockwise so packs with many spheres do not allocate an
        # (m, m, D) array; every ordered pair is still covered
        centers = pack.centers
        m = centers.shape[0]
        block = max(1, 2_000_000 // m)
        min_d2 = math.inf
        for start in range(0, m, block):
            chunk = centers[start : start + block]
            diffs = chunk[:, None, :] - centers[None, :, :]
            d2 = np.einsum("ijk,ijk->ij", diffs, diffs)
            local = np.arange(chunk.shape[0])
            d2[local, start + local] = np.inf
            min_d2 = min(min_d2, float(d2.min()))
        min_dist = math.sqrt(min_d2)
    else:
        min_dist = math.inf
    checks.append(
        PackCheck(
            "separation",
            min_dist >= 4.0 * r - 1e-9,
            f"min center distance {min_dist:.6g} against 4*radius = {4.0 * r:.6g}",
        )
    )
    lower = 1.0 / (8.0 * r) ** d
    upper = float(math.ceil(1.0 / (4.0 * r))) ** d
    checks.append(
        PackCheck(
            "count_bounds",
            lower <= pack.count <= upper,
            f"count {pack.count} inside [{lower:.6g}, {upper:.6g}]",
        )
    )
    checks.append(
        PackCheck(
            "grid_structure",
            pack.count == pack.grid_size**d
            and bool(np.all(pack.centers[:, d] == r))
            and bool(np.all(pack.centers[:, d + 1 :] == 0.0)),
            f"count {pack.count} = grid {pack.grid_size}**{d}, offset axis at radius, trailing axes zero",
        )
    )
    return PackReport(checks=tuple(checks))


def density_floor(pack: SpherePack) -> float:
    """Lower bound on the sampling density: one over the total surface mass."""
    if pack.total_volume <= 0.0:
        raise ValueError("pack has no surface mass")
    return 1.0 / pack.total_volume


def _draw_spheres(
    pack: SpherePack, hypothesis: Hypothesis, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, int | None]:
    """Removed-index draw (mixture only) followed by n sphere choices.

    This is the leading segment of the sample() stream; keeping it in one
    place is what lets index-only consumers agree bitwise with full point
    synthesis.
    """
    m = pack.count
    removed: int | None = None
    if hypothesis.kind == "alternate":
        if not 1 <= int(hypothesis.index) <= m:
            raise ValueError(f"alternate index {hypothesis.index} outside 1..{m}")
        removed = int(hypothesis.index)
    elif hypothesis.kind == "mixture":
        if m < 2:
            raise ValueError("deleting a sphere requires at least two spheres")
        removed = int(rng.integers(1, m + 1))
    if removed is not None and m < 2:
        raise ValueError("deleting a sphere requires at least two spheres")
    allowed = np.arange(m)
    if removed is not None:
        allowed = np.delete(allowed, removed - 1)
    spheres = allowed[rng.integers(0, len(allowed), size=n)]
    return spheres, removed


def sample_assignments(pack: SpherePack, hypothesis: Hypothesis, n: int, seed: int) -> np.ndarray:
    """0-based sphere choice per point, skipping point synthesis.

    Consumes the same leading stream state as sample() with equal
    arguments, so these choices match assign_points on the corresponding
    full SampleSet exactly (that one reports 1-based indices).  Meant for
    bulk runs where only per-sphere counts matter.
    """
    if n < 0:
        raise ValueError("sample size must be >= 0")
    rng = np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))
    spheres, _ = _draw_spheres(pack, hypothesis, n, rng)
    return spheres


def sample(pack: SpherePack, hypothesis: Hypothesis, n: int, seed: int) -> SampleSet:
    """Draw n points i.i.d. and uniform on the pack under the hypothesis.

    Each point picks an allowed sphere uniformly and then a uniform
    position on it, via a normalised Gaussian in the d+1 varying
    coordinates scaled to the sphere radius.  Under "mixture" the deleted
    sphere is drawn once per call, before any point.  The generator is
    Philox keyed by the seed, so equal arguments give bitwise-equal
    output whatever else is running.
    """
    if n < 0:
        raise ValueError("sample size must be >= 0")
    rng = np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))
    spheres, removed = _draw_spheres(pack, hypothesis, n, rng)
    d = pack.intrinsic_dim
    gauss = rng.standard_normal((n, d + 1))
    norms = np.linalg.norm(gauss, axis=1)
    while np.any(norms < 1e-12):  # essentially unreachable; keeps the map total
        redo = norms < 1e-12
        gauss[redo] = rng.standard_normal((int(redo.sum()), d + 1))
        norms = np.linalg.norm(gauss, axis=1)
    points = np.zeros((n, pack.ambient_dim))
    points[:, : d + 1] = pack.centers[spheres, : d + 1] + pack.radius * gauss / norms[:, None]
    points.flags.writeable = False
    return SampleSet(
        points=points,
        hypothesis=hypothesis,
        realized_removed_index=removed,
        seed=int(seed),
    )


def assign_points(pack: SpherePack, points: np.ndarray) -> np.ndarray:
    """Nearest-center index (1-based) for each row of points.

    Ties take the lowest index.  Rows farther than radius/2 from every
    sphere surface are rejected, since they cannot have come from the
    pack at any plausible noise level.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != pack.ambient_dim:
        raise ValueError(
            f"points have {pts.shape[1]} coordinates, pack is in dimension {pack.ambient_dim}"
        )
    diffs = pts[:, None, :] - pack.centers[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diffs, diffs)
    nearest = np.argmin(d2, axis=1)
    dist = np.sqrt(d2[np.arange(len(pts)), nearest])
    surface_gap = np.abs(dist - pack.radius)
    bad = surface_gap > 0.5 * pack.radius
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(
            f"point {i} sits {surface_gap[i]:.6g} from the nearest sphere surface, "
            f"beyond the radius/2 tolerance {0.5 * pack.radius:.6g}"
        )
    return (nearest + 1).astype(int)


def assign(pack: SpherePack, point) -> int:
    """1-based index of the sphere a single point belongs to."""
    return int(assign_points(pack, np.asarray(point, dtype=float)[None, :])[0])


def derive_seed(*parts: int) -> int:
    """Mix integer components into one 64-bit stream seed.

    Uses numpy's SeedSequence hash, which is stable across platforms, so
    (master, trial, stream) tuples map to fixed substream keys.
    """
    entropy = tuple(int(p) & _MASK64 for p in parts)
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def save_points(path, points: np.ndarray) -> None:
    """Write one point per line as comma-separated decimals, no header."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    with open(path, "w", encoding="ascii") as fh:
        for row in pts:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_points(path) -> np.ndarray:
    """Read a point file written by save_points (or by hand, same format)."""
    rows: list[list[float]] = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(f) for f in line.split(",")])
            except ValueError as exc:
                raise ValueError(f"bad point on line {lineno}: {exc}") from exc
    if not rows:
        raise ValueError(f"no points in {path}")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("rows have inconsistent coordinate counts")
    out = np.asarray(rows, dtype=float)
    out.flags.writeable = False
    return out
