"""Metric and normed-space primitives: point clouds, distance matrices,
enclosing balls, Hausdorff distance, Kuratowski embedding."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

# Absolute tolerance for all distance comparisons in this package.
TOLERANCE = 1e-9

L2 = "l2"
LINF = "linf"
L1 = "l1"
NORMS = (L2, LINF, L1)

_CDIST_METRIC = {L2: "euclidean", LINF: "chebyshev", L1: "cityblock"}


class UnsupportedNormError(ValueError):
    pass


class DuplicatePointsError(ValueError):
    def __init__(self, pairs):
        self.pairs = pairs
        super().__init__(f"duplicate points at index pairs {pairs}")


def vector_norm(v: np.ndarray, norm: str) -> float:
    v = np.asarray(v, dtype=float)
    if norm == L2:
        return float(np.linalg.norm(v))
    if norm == LINF:
        return float(np.max(np.abs(v))) if v.size else 0.0
    if norm == L1:
        return float(np.sum(np.abs(v)))
    raise UnsupportedNormError(f"unknown norm {norm!r}")


@dataclass(frozen=True)
class PointCloud:
    """Finite subset of R^N together with the ambient norm."""

    points: np.ndarray
    norm: str = L2

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise ValueError("points must be a nonempty n x N array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain NaN or infinite coordinates")
        if self.norm not in NORMS:
            raise UnsupportedNormError(f"unknown norm {self.norm!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Finite metric space given by its full distance matrix."""

    dist: np.ndarray
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise ValueError("dist must be a nonempty square matrix")
        if self.validate:
            if not np.all(np.isfinite(d)):
                raise ValueError("dist contains NaN or infinite entries")
            if np.any(np.abs(np.diagonal(d)) > 0):
                raise ValueError("dist diagonal must be zero")
            if np.any(np.abs(d - d.T) > 0):
                raise ValueError("dist must be symmetric")
            off = d[~np.eye(d.shape[0], dtype=bool)]
            if off.size and np.min(off) <= 0:
                raise ValueError("off-diagonal distances must be strictly positive")
            _check_triangle(d)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def n(self) -> int:
        return self.dist.shape[0]


def _check_triangle(d: np.ndarray) -> None:
    n = d.shape[0]
    for k in range(n):
        # d[i,j] <= d[i,k] + d[k,j] for all i, j
        if np.any(d > d[:, k][:, None] + d[None, k, :] + TOLERANCE):
            raise ValueError(f"triangle inequality violated through point {k}")


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float
    norm: str = L2

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)

    def contains(self, point, tol: float = TOLERANCE) -> bool:
        return vector_norm(np.asarray(point, float) - self.center, self.norm) <= self.radius + tol


def distance_matrix(cloud: PointCloud) -> np.ndarray:
    return cdist(cloud.points, cloud.points, metric=_CDIST_METRIC[cloud.norm])


def pairwise_distances(cloud: PointCloud) -> FiniteMetricSpace:
    """Distance matrix of a cloud in its own norm; rejects duplicate points."""
    d = distance_matrix(cloud)
    iu = np.triu_indices(cloud.n, k=1)
    dup = np.flatnonzero(d[iu] == 0.0)
    if dup.size:
        pairs = [(int(iu[0][t]), int(iu[1][t])) for t in dup]
        raise DuplicatePointsError(pairs)
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace(d, validate=False)


def diameter(ms: FiniteMetricSpace) -> float:
    return float(np.max(ms.dist))


def radius(ms: FiniteMetricSpace) -> float:
    """min over candidate centers in the space of their eccentricity."""
    return float(np.min(np.max(ms.dist, axis=1)))


def _ball_on_support(support: list[np.ndarray]) -> tuple[np.ndarray, float]:
    """Smallest L2 ball with all support points on its boundary."""
    if not support:
        return np.zeros(1), 0.0
    q0 = support[0]
    if len(support) == 1:
        return q0.copy(), 0.0
    A = np.array([p - q0 for p in support[1:]])
    b = 0.5 * np.einsum("ij,ij->i", A, A)
    # center = q0 + A^T lam with A (A^T lam) = b; least squares handles
    # affinely dependent supports
    G = A @ A.T
    lam, *_ = np.linalg.lstsq(G, b, rcond=None)
    center = q0 + A.T @ lam
    r = float(np.max(np.linalg.norm(np.array(support) - center, axis=1)))
    return center, r


def _welzl(points: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, float]:
    pts = [points[i] for i in rng.permutation(len(points))]
    dim = points.shape[1]

    def solve(idx: int, support: list[np.ndarray]) -> tuple[np.ndarray, float]:
        if idx == len(pts) or len(support) == dim + 1:
            return _ball_on_support(support)
        c, r = solve(idx + 1, support)
        p = pts[idx]
        if len(support) == 0 and idx + 1 == len(pts):
            pass
        if np.linalg.norm(p - c) <= r + TOLERANCE:
            return c, r
        return solve(idx + 1, support + [p])

    # move-to-front style restart keeps expected depth linear; the plain
    # recursion is fine at desk scale once the limit is raised
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(pts) + 1000))
    try:
        c, r = solve(0, [])
    finally:
        sys.setrecursionlimit(old)
    return c, r


def min_enclosing_ball(cloud: PointCloud, seed: int = 0) -> Ball:
    """Exact minimum enclosing ball (randomized incremental for L2,
    bounding-box formula for Linf)."""
    pts = cloud.points
    if cloud.norm == L2:
        if pts.shape[0] == 1:
            return Ball(pts[0], 0.0, L2)
        c, r = _welzl(pts, np.random.default_rng(seed))
        # tighten: r is the max distance to computed center
        r = float(np.max(np.linalg.norm(pts - c, axis=1)))
        return Ball(c, r, L2)
    if cloud.norm == LINF:
        hi = pts.max(axis=0)
        lo = pts.min(axis=0)
        return Ball((hi + lo) / 2.0, float(np.max((hi - lo) / 2.0)), LINF)
    raise UnsupportedNormError("min enclosing ball supports L2 and Linf only")


def circumradius(cloud: PointCloud, seed: int = 0) -> float:
    return min_enclosing_ball(cloud, seed=seed).radius


def enclosing_radius_of_points(points: np.ndarray, norm: str) -> float:
    """Minimum enclosing ball radius of a raw coordinate array."""
    return circumradius(PointCloud(points, norm))


def hausdorff_distance(a: PointCloud, b: PointCloud) -> float:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.norm != b.norm:
        raise ValueError(f"norm mismatch: {a.norm} vs {b.norm}")
    d = cdist(a.points, b.points, metric=_CDIST_METRIC[a.norm])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def hausdorff_between_arrays(a: np.ndarray, b: np.ndarray, norm: str = L2) -> float:
    d = cdist(np.atleast_2d(a), np.atleast_2d(b), metric=_CDIST_METRIC[norm])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def kuratowski_embed(ms: FiniteMetricSpace) -> PointCloud:
    """x -> d(x, .) into (R^n, Linf); preserves all pairwise distances."""
    return PointCloud(np.array(ms.dist), norm=LINF)
