"""Filtered Vietoris-Rips and Cech complexes.

Convention: a simplex enters the filtration at its value (closed
convention, value <= r), so intervals are closed at birth. For finite
inputs the interval endpoints agree with the open convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from persbounds.metric import (
    L1,
    L2,
    LINF,
    FiniteMetricSpace,
    PointCloud,
    TOLERANCE,
    UnsupportedNormError,
    _ball_on_support,
    distance_matrix,
    min_enclosing_ball,
    radius,
)

VR = "VR"
CECH = "Cech"


class Simplex(NamedTuple):
    """A simplex with its filtration value. NamedTuple keeps construction
    cheap at the ~10^5-simplex scale; invariants checked via check()."""

    value: float
    vertices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def check(self) -> None:
        if self.value < 0:
            raise ValueError("filtration value must be nonnegative")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValueError("vertices must be strictly increasing")


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices in filtration order: (value, dimension, lexicographic)."""

    simplices: tuple[Simplex, ...]
    n_points: int
    max_dim: int
    max_value: float
    flavor: str

    def __post_init__(self):
        object.__setattr__(self, "simplices", tuple(self.simplices))

    def by_dim(self, d: int) -> list[Simplex]:
        return [s for s in self.simplices if s.dim == d]

    def value_map(self) -> dict[tuple[int, ...], float]:
        return {s.vertices: s.value for s in self.simplices}

    def validate(self) -> None:
        vals = self.value_map()
        prev = None
        for s in self.simplices:
            s.check()
            key = (s.value, s.dim, s.vertices)
            if prev is not None and key < prev:
                raise ValueError("simplices out of filtration order")
            prev = key
            if s.dim > 0:
                for facet in combinations(s.vertices, s.dim):
                    fv = vals.get(facet)
                    if fv is None:
                        raise ValueError(f"missing face {facet} of {s.vertices}")
                    if fv > s.value:
                        raise ValueError(f"face {facet} enters after {s.vertices}")


def _sorted_simplices(simplices: list[Simplex]) -> tuple[Simplex, ...]:
    return tuple(sorted(simplices, key=lambda s: (s[0], len(s[1]), s[1])))


def _clique_extensions(adj: np.ndarray, base: list[tuple[int, ...]], n: int):
    """Extend each clique by a vertex above its maximum; adj is boolean."""
    out = []
    for clique in base:
        common = adj[clique[0]].copy()
        for v in clique[1:]:
            common &= adj[v]
        for w in range(clique[-1] + 1, n):
            if common[w]:
                out.append(clique + (w,))
    return out


def vietoris_rips(
    ms: FiniteMetricSpace, max_dim: int, max_value: float | None = None
) -> FilteredComplex:
    """VR complex: simplex value = max pairwise distance of its vertices.

    max_value defaults to radius(ms); beyond that threshold the complex is
    a cone over a central point, so no class survives.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    if max_value is None:
        max_value = radius(ms)
    if max_value < 0:
        raise ValueError("max_value must be >= 0")
    d = ms.dist
    n = ms.n
    adj = (d <= max_value) & ~np.eye(n, dtype=bool)
    simplices = [Simplex(0.0, (i,)) for i in range(n)]
    cliques = [(i,) for i in range(n)]
    for dim in range(1, max_dim + 1):
        cliques = _clique_extensions(adj, cliques, n)
        if not cliques:
            break
        idx = np.array(cliques)
        vals = np.zeros(len(cliques))
        for a, b in combinations(range(dim + 1), 2):
            np.maximum(vals, d[idx[:, a], idx[:, b]], out=vals)
        simplices.extend(Simplex(float(v), c) for c, v in zip(cliques, vals))
    return FilteredComplex(_sorted_simplices(simplices), n, max_dim, float(max_value), VR)


def _triangle_meb_radii_l2(pts: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Minimum enclosing ball radius of each point triple, vectorized.

    If the angle opposite the longest edge is non-acute the ball spans that
    edge; otherwise it is the circumscribed circle of the triangle.
    """
    p0, p1, p2 = pts[idx[:, 0]], pts[idx[:, 1]], pts[idx[:, 2]]
    a2 = np.einsum("ij,ij->i", p1 - p2, p1 - p2)
    b2 = np.einsum("ij,ij->i", p0 - p2, p0 - p2)
    c2 = np.einsum("ij,ij->i", p0 - p1, p0 - p1)
    e2 = np.sort(np.column_stack([a2, b2, c2]), axis=1)
    longest2 = e2[:, 2]
    obtuse = longest2 >= e2[:, 0] + e2[:, 1]
    # circumradius R = abc / (4K), 16 K^2 from Heron in squared lengths
    s16k2 = (
        2 * (a2 * b2 + b2 * c2 + c2 * a2) - (a2 * a2 + b2 * b2 + c2 * c2)
    )
    s16k2 = np.maximum(s16k2, 1e-300)
    circ = np.sqrt(np.maximum(a2 * b2 * c2 / s16k2, 0.0))
    return np.where(obtuse, 0.5 * np.sqrt(longest2), circ)


def _meb_radius_small_l2(pts: np.ndarray) -> float:
    """Exact enclosing-ball radius of a few points by support enumeration."""
    m = len(pts)
    best = np.inf
    for size in range(2, m + 1):
        for sub in combinations(range(m), size):
            c, r = _ball_on_support([pts[i] for i in sub])
            if r < best and np.all(
                np.linalg.norm(pts - c, axis=1) <= r + TOLERANCE
            ):
                best = r
    return float(best)


def _subset_values_linf(pts: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Linf enclosing radius of each index row: max coordinate extent / 2."""
    sub = pts[idx]  # (m, k, N)
    ext = sub.max(axis=1) - sub.min(axis=1)
    return ext.max(axis=1) / 2.0


def cech(cloud: PointCloud, max_dim: int, max_value: float | None = None) -> FilteredComplex:
    """Cech complex: simplex value = minimum enclosing ball radius of its
    vertices in the cloud's norm.

    max_value defaults to the cloud circumradius; at that threshold the
    center's ball contains every point, so no class survives.
    """
    if cloud.norm == L1:
        raise UnsupportedNormError("Cech complex supports L2 and Linf only")
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    if max_value is None:
        max_value = min_enclosing_ball(cloud).radius
    if max_value < 0:
        raise ValueError("max_value must be >= 0")
    pts = cloud.points
    n = cloud.n
    d = distance_matrix(cloud)
    edge_vals = d / 2.0
    adj = (edge_vals <= max_value) & ~np.eye(n, dtype=bool)

    simplices = [Simplex(0.0, (i,)) for i in range(n)]
    cliques = [(i,) for i in range(n)]
    prev_vals: dict[tuple[int, ...], float] = {}
    for dim in range(1, max_dim + 1):
        cliques = _clique_extensions(adj, cliques, n)
        if not cliques:
            break
        idx = np.array(cliques)
        if dim == 1:
            vals = edge_vals[idx[:, 0], idx[:, 1]]
        elif cloud.norm == LINF:
            # exact: extent maxima are monotone under inclusion in floats
            vals = _subset_values_linf(pts, idx)
        elif dim == 2:
            vals = _triangle_meb_radii_l2(pts, idx)
            # guard against sub-ulp noise: a ball value never drops below
            # its facet (edge) values
            emax = edge_vals[idx[:, 0], idx[:, 1]]
            np.maximum(emax, edge_vals[idx[:, 0], idx[:, 2]], out=emax)
            np.maximum(emax, edge_vals[idx[:, 1], idx[:, 2]], out=emax)
            np.maximum(vals, emax, out=vals)
        else:
            vals = np.array([_meb_radius_small_l2(pts[list(c)]) for c in cliques])
            fmax = np.array(
                [
                    max(prev_vals[f] for f in combinations(c, dim))
                    for c in cliques
                ]
            )
            vals = np.maximum(vals, fmax)
        keep = vals <= max_value + TOLERANCE
        track = cloud.norm == L2 and 2 < dim + 1 <= max_dim
        kept = []
        prev_vals = {}
        for c, v, k in zip(cliques, vals.tolist(), keep.tolist()):
            if k:
                simplices.append(Simplex(v, c))
                kept.append(c)
                if track:
                    prev_vals[c] = v
        cliques = kept
    return FilteredComplex(_sorted_simplices(simplices), n, max_dim, float(max_value), CECH)


def validate_interleaving(
    fc_vr: FilteredComplex, fc_cech: FilteredComplex, sample_values: list[float]
) -> bool:
    """Check C_r subset V_2r subset C_2r on the given complexes at each
    sampled r (restricted to simplices both complexes can represent)."""
    if fc_vr.n_points != fc_cech.n_points:
        raise ValueError("complexes built from different point counts")
    vr_vals = fc_vr.value_map()
    cech_vals = fc_cech.value_map()
    for r in sample_values:
        for verts, cv in cech_vals.items():
            if cv <= r:
                vv = vr_vals.get(verts)
                if vv is None or vv > 2 * r + TOLERANCE:
                    return False
        for verts, vv in vr_vals.items():
            if vv <= 2 * r:
                cv = cech_vals.get(verts)
                if cv is None or cv > 2 * r + TOLERANCE:
                    return False
    return True
