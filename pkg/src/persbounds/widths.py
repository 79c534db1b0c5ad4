"""Width invariants: Kolmogorov width (minimax affine fitting), candidate-core
displacement bounds, Katz spread, and certified uberspread upper bounds."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import cdist

from persbounds.metric import (
    L2,
    TOLERANCE,
    FiniteMetricSpace,
    PointCloud,
    UnsupportedNormError,
    circumradius,
    diameter,
    distance_matrix,
    hausdorff_between_arrays,
    min_enclosing_ball,
    radius,
)

KW = "KW"
AW_UPPER = "AW_upper"
TW_UPPER = "TW_upper"
SPREAD = "Spread"
UBERSPREAD_UPPER = "Uberspread_upper"

EXACT = "Exact"
UPPER_BOUND = "UpperBound"
HEURISTIC = "Heuristic"

CERT_POINT = "Point"
CERT_TREE = "Tree"
CERT_CONVEX = "ConvexSet"
CERT_FLAT = "AffineFlat"
CERT_CUTLOCUS = "CutLocus"
CERT_NONE = "None"

_CONTRACTIBLE_CERTS = (CERT_POINT, CERT_TREE, CERT_CONVEX, CERT_FLAT, CERT_CUTLOCUS)


@dataclass(frozen=True)
class AffineFlat:
    """Affine k-plane: base point plus k orthonormal directions."""

    base: np.ndarray
    directions: np.ndarray  # (k, N), possibly k = 0

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        dirs = np.asarray(self.directions, dtype=float).reshape(-1, base.shape[0])
        gram = dirs @ dirs.T
        if dirs.shape[0] and not np.allclose(gram, np.eye(dirs.shape[0]), atol=1e-9):
            raise ValueError("directions must be orthonormal")
        base.setflags(write=False)
        dirs.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "directions", dirs)

    @property
    def k(self) -> int:
        return self.directions.shape[0]

    def residuals(self, points: np.ndarray) -> np.ndarray:
        """L2 distance of each point to the flat."""
        rel = np.asarray(points, float) - self.base
        if self.k:
            rel = rel - (rel @ self.directions.T) @ self.directions
        return np.linalg.norm(rel, axis=1)


@dataclass(frozen=True)
class SimplicialCore:
    """Geometric simplicial complex of dimension <= 2 used as a candidate
    core. ubercontractible_delta, when set, certifies that every
    r-neighborhood with r >= delta is contractible."""

    vertices: np.ndarray
    cells: tuple[tuple[int, ...], ...]
    certificate: str = CERT_NONE
    ubercontractible_delta: float | None = None

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[0] == 0:
            raise ValueError("core vertices must be a nonempty n x N array")
        cells = tuple(tuple(sorted(c)) for c in self.cells)
        present = set(cells)
        for c in cells:
            if len(c) > 3:
                raise ValueError("core cells of dimension > 2 are not supported")
            if len(set(c)) != len(c) or any(v < 0 or v >= len(verts) for v in c):
                raise ValueError(f"bad cell {c}")
            for drop in range(len(c)):
                face = c[:drop] + c[drop + 1 :]
                if face and face not in present:
                    raise ValueError(f"core cells not closed under faces: {face}")
        if self.certificate == CERT_TREE:
            self._check_tree(cells, len(verts))
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "cells", cells)

    @staticmethod
    def _check_tree(cells, n_verts):
        edges = [c for c in cells if len(c) == 2]
        if any(len(c) == 3 for c in cells):
            raise ValueError("Tree certificate forbids 2-cells")
        used = sorted({v for c in cells for v in c})
        parent = {v: v for v in used}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ValueError("Tree certificate: 1-skeleton has a cycle")
            parent[ra] = rb
        roots = {find(v) for v in used}
        if len(roots) > 1:
            raise ValueError("Tree certificate: 1-skeleton is disconnected")

    def sample(self, resolution: float) -> np.ndarray:
        """Dense sampling of the underlying set at the given resolution
        (max distance from any core point to a sample <= resolution/2 * sqrt(2)
        for triangles, <= resolution/2 along segments)."""
        pieces = [self.vertices]
        for c in self.cells:
            if len(c) == 2:
                a, b = self.vertices[c[0]], self.vertices[c[1]]
                m = max(2, int(math.ceil(np.linalg.norm(b - a) / max(resolution, 1e-12))) + 1)
                t = np.linspace(0.0, 1.0, m)[:, None]
                pieces.append(a + t * (b - a))
            elif len(c) == 3:
                a, b, cc = (self.vertices[i] for i in c)
                L = max(np.linalg.norm(b - a), np.linalg.norm(cc - a), np.linalg.norm(cc - b))
                m = max(2, int(math.ceil(L / max(resolution, 1e-12))) + 1)
                pts = []
                for i in range(m + 1):
                    for j in range(m + 1 - i):
                        u, v = i / m, j / m
                        pts.append(a + u * (b - a) + v * (cc - a))
                pieces.append(np.array(pts))
        return np.vstack(pieces)


@dataclass(frozen=True)
class WidthEstimate:
    kind: str
    k: int
    value: float
    exactness: str
    witness: object = field(default=None, compare=False)
    slack: float = 0.0  # documented estimator error (sampling resolution etc.)

    def __post_init__(self):
        if self.value < -TOLERANCE:
            raise ValueError("width value must be nonnegative")
        object.__setattr__(self, "value", max(self.value, 0.0))


# ---------------------------------------------------------------------------
# Kolmogorov width


@functools.lru_cache(maxsize=64)
def _triple_indices(h: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ia, ib, ic = map(np.array, zip(*itertools.combinations(range(h), 3)))
    return ia, ib, ic


def _meb_radius_2d(proj: np.ndarray) -> float:
    """Exact minimum-enclosing-circle radius in the plane by enumerating
    pair and triple support candidates (vectorized; hull reduction for
    medium inputs, generic solver for large ones)."""
    m = len(proj)
    if m == 1:
        return 0.0
    if m == 2:
        return float(np.linalg.norm(proj[0] - proj[1]) / 2.0)
    pts = proj
    if m > 20:  # hull reduction pays off only past the call overhead
        try:
            pts = proj[ConvexHull(proj).vertices]
        except QhullError:
            # collinear: half the extent along the spanning direction
            span = proj - proj[0]
            norms = np.linalg.norm(span, axis=1)
            u = span[np.argmax(norms)] / max(norms.max(), 1e-30)
            t = span @ u
            return float(t.max() - t.min()) / 2.0
    h = len(pts)
    if h > 48:
        return circumradius(PointCloud(proj, L2))
    best = math.inf
    # pair candidates: diameter-supported circles
    i, j = np.triu_indices(h, 1)
    centers = (pts[i] + pts[j]) / 2.0
    radii = np.linalg.norm(pts[i] - pts[j], axis=1) / 2.0
    d = np.linalg.norm(centers[:, None, :] - pts[None, :, :], axis=2)
    ok = (d <= radii[:, None] + 1e-9).all(axis=1)
    if ok.any():
        best = float(radii[ok].min())
    # triple candidates: circumcircles
    ia, ib, ic = _triple_indices(h)
    a, b, c = pts[ia], pts[ib], pts[ic]
    det = 2.0 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
    good = np.abs(det) > 1e-14
    if good.any():
        a, b, c, det = a[good], b[good], c[good], det[good]
        nb = (b**2).sum(axis=1) - (a**2).sum(axis=1)
        nc = (c**2).sum(axis=1) - (a**2).sum(axis=1)
        ux = (nb * (c[:, 1] - a[:, 1]) - nc * (b[:, 1] - a[:, 1])) / det
        uy = (nc * (b[:, 0] - a[:, 0]) - nb * (c[:, 0] - a[:, 0])) / det
        centers = np.column_stack([ux, uy])
        radii = np.linalg.norm(centers - a, axis=1)
        d = np.linalg.norm(centers[:, None, :] - pts[None, :, :], axis=2)
        ok = (d <= radii[:, None] + 1e-9).all(axis=1)
        if ok.any():
            best = min(best, float(radii[ok].min()))
    if not math.isfinite(best):  # numerically degenerate input
        return circumradius(PointCloud(proj, L2))
    return best


def _chebyshev_radius_in_complement(points: np.ndarray, dirs: np.ndarray) -> float:
    """Exact sup-distance from points to the best flat with the given
    directions: the enclosing-ball radius of the residual projections."""
    comp = _complement_basis(dirs, points.shape[1])
    if comp.shape[0] == 0:
        return 0.0
    proj = points @ comp.T
    if comp.shape[0] == 1:
        return float((proj.max() - proj.min()) / 2.0)
    if comp.shape[0] == 2:
        return _meb_radius_2d(proj)
    return circumradius(PointCloud(proj, L2))


def _complement_basis(dirs: np.ndarray, n_amb: int) -> np.ndarray:
    if dirs.size == 0:
        return np.eye(n_amb)
    q, _ = np.linalg.qr(np.vstack([dirs, np.eye(n_amb)]).T)
    # first k columns span dirs; remaining n-k are an orthonormal complement
    k = dirs.shape[0]
    return q[:, k:n_amb].T


def _flat_witness(points: np.ndarray, dirs: np.ndarray) -> AffineFlat:
    comp = _complement_basis(dirs, points.shape[1])
    if comp.shape[0] == 0:
        base = points.mean(axis=0)
    else:
        proj = points @ comp.T
        if comp.shape[0] == 1:
            center = np.array([(proj.max() + proj.min()) / 2.0])
        else:
            center = min_enclosing_ball(PointCloud(proj, L2)).center
        base = center @ comp
    return AffineFlat(base, dirs)


def _kw_exact_2d_k1(points: np.ndarray) -> tuple[float, np.ndarray]:
    """Exact minimal slab half-width in the plane: the optimal slab is flush
    with a point-pair direction, so search all pair directions."""
    n = len(points)
    dirs = []
    for i in range(n):
        d = points - points[i]
        nz = np.linalg.norm(d, axis=1) > 1e-14
        dirs.append(d[nz] / np.linalg.norm(d[nz], axis=1, keepdims=True))
    if not dirs or all(len(d) == 0 for d in dirs):
        return 0.0, np.array([[1.0, 0.0]])
    cand = np.vstack(dirs)
    normals = np.column_stack([-cand[:, 1], cand[:, 0]])
    proj = points @ normals.T
    widths = (proj.max(axis=0) - proj.min(axis=0)) / 2.0
    best = int(np.argmin(widths))
    return float(widths[best]), cand[best].reshape(1, 2)


def _pca_directions(points: np.ndarray) -> np.ndarray:
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=True)
    return vt


def _orient(dirs0: np.ndarray, comp0: np.ndarray, params: np.ndarray) -> np.ndarray:
    """Tilt a k-dim direction frame by tangent parameters ((N-k) x k)."""
    k = dirs0.shape[0]
    b = params.reshape(comp0.shape[0], k)
    tilted = dirs0 + b.T @ comp0
    q, _ = np.linalg.qr(tilted.T)
    return q.T[:k]


def kolmogorov_width(
    cloud: PointCloud, k: int, restarts: int = 8, force_heuristic: bool = False
) -> WidthEstimate:
    """Minimal sup-distance to an affine k-plane.

    Exact for k = 0 (circumradius) and for k = 1 in the plane; otherwise a
    multi-start minimax search (PCA warm start plus sampled orientations,
    Nelder-Mead refinement with an exact Chebyshev center per orientation),
    labeled Heuristic and treated as an upper bound downstream.
    force_heuristic skips the exact shortcuts (for validating the search
    against them).
    """
    if cloud.norm != L2:
        raise UnsupportedNormError("Kolmogorov width supports the L2 norm only")
    N = cloud.dim
    if not 0 <= k < N:
        raise ValueError(f"need 0 <= k < ambient dimension {N}")
    pts = cloud.points
    if k == 0:  # the search degenerates at k = 0; circumradius is exact
        ball = min_enclosing_ball(cloud)
        return WidthEstimate(
            KW, 0, ball.radius, EXACT, _flat_witness(pts, np.empty((0, N)))
        )
    if k == 1 and N == 2 and not force_heuristic:
        val, dirs = _kw_exact_2d_k1(pts)
        return WidthEstimate(KW, 1, val, EXACT, _flat_witness(pts, dirs))

    rng = np.random.default_rng(0)
    pca = _pca_directions(pts)
    starts = [pca[:k]]
    # structured sphere sweep for 1-dim subspaces / complements
    for _ in range(max(restarts, 1) - 1):
        m = rng.normal(size=(N, N))
        q, _ = np.linalg.qr(m)
        starts.append(q.T[:k])
    if k == 1:
        # dense direction sweep: golden-angle sphere sampling in 3D, uniform
        # angles in higher dimensions via random supplement
        sweeps = rng.normal(size=(256, N))
        sweeps /= np.linalg.norm(sweeps, axis=1, keepdims=True)
        vals = [
            _chebyshev_radius_in_complement(pts, s.reshape(1, N)) for s in sweeps
        ]
        order = np.argsort(vals)[: min(4, max(restarts, 1))]
        starts.extend(sweeps[i].reshape(1, N) for i in order)
    if k == N - 1:
        # optimize over the 1-dim complement direction instead
        sweeps = rng.normal(size=(256, N))
        sweeps /= np.linalg.norm(sweeps, axis=1, keepdims=True)
        vals = [
            _chebyshev_radius_in_complement(pts, _complement_basis(s.reshape(1, N), N))
            for s in sweeps
        ]
        order = np.argsort(vals)[: min(4, max(restarts, 1))]
        starts.extend(
            _complement_basis(sweeps[i].reshape(1, N), N) for i in order
        )

    best_val = math.inf
    best_dirs = starts[0]
    for dirs0 in starts:
        comp0 = _complement_basis(dirs0, N)
        nparams = comp0.shape[0] * k

        def objective(params, dirs0=dirs0, comp0=comp0):
            return _chebyshev_radius_in_complement(pts, _orient(dirs0, comp0, params))

        res = minimize(
            objective,
            np.zeros(nparams),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 150},
        )
        cand_dirs = _orient(dirs0, comp0, res.x)
        cand_val = objective(res.x)
        if cand_val < best_val:
            best_val = cand_val
            best_dirs = cand_dirs
    return WidthEstimate(KW, k, best_val, HEURISTIC, _flat_witness(pts, best_dirs))


# ---------------------------------------------------------------------------
# core displacement


def _point_segment_dist(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = float(ab @ ab)
    if denom < 1e-30:
        return np.linalg.norm(p - a, axis=1)
    t = np.clip((p - a) @ ab / denom, 0.0, 1.0)
    return np.linalg.norm(p - (a + t[:, None] * ab), axis=1)


def _point_triangle_dist(p: np.ndarray, a, b, c) -> np.ndarray:
    """Exact distance from points to a (possibly degenerate) triangle."""
    ab, ac = b - a, c - a
    gram = np.array([[ab @ ab, ab @ ac], [ab @ ac, ac @ ac]])
    if np.linalg.det(gram) < 1e-24:
        return np.minimum(
            _point_segment_dist(p, a, b),
            np.minimum(_point_segment_dist(p, a, c), _point_segment_dist(p, b, c)),
        )
    rel = p - a
    rhs = np.column_stack([rel @ ab, rel @ ac])
    uv = rhs @ np.linalg.inv(gram).T
    inside = (uv[:, 0] >= 0) & (uv[:, 1] >= 0) & (uv.sum(axis=1) <= 1)
    foot = a + uv[:, 0:1] * ab + uv[:, 1:2] * ac
    d_in = np.linalg.norm(p - foot, axis=1)
    d_edge = np.minimum(
        _point_segment_dist(p, a, b),
        np.minimum(_point_segment_dist(p, a, c), _point_segment_dist(p, b, c)),
    )
    return np.where(inside, d_in, d_edge)


def distances_to_core(points: np.ndarray, core: SimplicialCore) -> np.ndarray:
    """Exact L2 distance from each point to the core's underlying set."""
    best = cdist(points, core.vertices).min(axis=1)
    v = core.vertices
    for c in core.cells:
        if len(c) == 2:
            best = np.minimum(best, _point_segment_dist(points, v[c[0]], v[c[1]]))
        elif len(c) == 3:
            best = np.minimum(
                best, _point_triangle_dist(points, v[c[0]], v[c[1]], v[c[2]])
            )
    return best


def core_displacement(
    cloud: PointCloud, core: SimplicialCore | AffineFlat
) -> WidthEstimate:
    """Max distance from the cloud to the core set: the nearest-point map is
    one admissible continuous map, so this upper-bounds the Alexandrov-style
    width (and the treewidth variant when the core is contractible)."""
    if cloud.norm != L2:
        raise UnsupportedNormError("core displacement supports the L2 norm only")
    if isinstance(core, AffineFlat):
        val = float(core.residuals(cloud.points).max())
        return WidthEstimate(TW_UPPER, core.k, val, UPPER_BOUND, core)
    val = float(distances_to_core(cloud.points, core).max())
    top_dim = max((len(c) - 1 for c in core.cells), default=0)
    kind = TW_UPPER if core.certificate in _CONTRACTIBLE_CERTS else AW_UPPER
    return WidthEstimate(kind, top_dim, val, UPPER_BOUND, core)


def mst_core(cloud: PointCloud) -> SimplicialCore:
    """Euclidean minimum spanning tree of the points as a Tree core."""
    if cloud.norm != L2:
        raise UnsupportedNormError("MST core supports the L2 norm only")
    d = distance_matrix(cloud)
    mst = minimum_spanning_tree(d).tocoo()
    cells = [(i,) for i in range(cloud.n)]
    cells += [tuple(sorted((int(i), int(j)))) for i, j in zip(mst.row, mst.col)]
    return SimplicialCore(cloud.points, tuple(cells), CERT_TREE)


# ---------------------------------------------------------------------------
# spread


def spread(ms: FiniteMetricSpace, exact_limit: int = 20) -> WidthEstimate:
    """Katz spread: min over nonempty subsets A of
    max(diam(A), sup_x d(x, A)). Exact branch-and-bound for n <= exact_limit,
    greedy farthest-point upper bound otherwise. Ties favor smaller subsets."""
    d = ms.dist
    n = ms.n
    if n == 1:
        return WidthEstimate(SPREAD, 0, 0.0, EXACT, (0,))

    def value_of(subset: list[int]) -> float:
        a = np.array(subset)
        dia = d[np.ix_(a, a)].max() if len(a) > 1 else 0.0
        cov = d[:, a].min(axis=1).max()
        return float(max(dia, cov))

    # greedy farthest-point initialization (also the large-n answer)
    best_val = math.inf
    best_sub: list[int] = []
    sub = [int(np.argmin(d.max(axis=1)))]
    for _ in range(n):
        v = value_of(sub)
        if v < best_val or (v == best_val and len(sub) < len(best_sub)):
            best_val, best_sub = v, list(sub)
        if len(sub) == n:
            break
        cov = d[:, sub].min(axis=1)
        sub.append(int(np.argmax(cov)))

    if n > exact_limit:
        return WidthEstimate(SPREAD, 0, best_val, UPPER_BOUND, tuple(sorted(best_sub)))

    # exact: DFS over include/exclude with pruning. suffix_min[i, x] =
    # min distance from x to any point with index >= i.
    suffix_min = np.empty((n + 1, n))
    suffix_min[n] = math.inf
    for i in range(n - 1, -1, -1):
        suffix_min[i] = np.minimum(suffix_min[i + 1], d[i])

    best = [best_val, len(best_sub), sorted(best_sub)]
    INFV = math.inf

    def dfs(i: int, chosen: list[int], diam_a: float, cov: np.ndarray):
        if diam_a >= best[0] + 1e-15:
            return
        # even taking every remaining point cannot cover better than this
        lb = float(np.minimum(cov, suffix_min[i]).max())
        if max(diam_a, lb) > best[0] + 1e-15:
            return
        if i == n:
            if not chosen:
                return
            val = max(diam_a, float(cov.max()))
            key = (val, len(chosen))
            if key < (best[0], best[1]) or (
                abs(val - best[0]) <= 1e-15 and len(chosen) < best[1]
            ):
                best[0], best[1], best[2] = val, len(chosen), list(chosen)
            return
        # include i
        nd = max(diam_a, float(d[i, chosen].max()) if chosen else 0.0)
        dfs(i + 1, chosen + [i], nd, np.minimum(cov, d[i]))
        # exclude i
        dfs(i + 1, chosen, diam_a, cov)

    dfs(0, [], 0.0, np.full(n, INFV))
    return WidthEstimate(SPREAD, 0, best[0], EXACT, tuple(sorted(best[2])))


# ---------------------------------------------------------------------------
# uberspread upper bound via certified cores


def certify_delta(core: SimplicialCore, n_amb: int) -> tuple[float, str]:
    """Certified delta such that every r-neighborhood of the core with
    r >= delta is contractible.

    - Point/ConvexSet/AffineFlat: neighborhoods are convex, delta = 0.
    - CutLocus (medial axis of a convex body): delta = 0 by the cut-locus
      property.
    - Tree in the plane: neighborhoods are connected open planar sets; their
      first homology vanishes once r exceeds the tree's Cech extinction,
      which is at most the tree's convexity deficiency, so delta =
      cdef(core). Trivial H1 in the plane implies contractible.
    - Any connected core in dimension >= 3: r-neighborhoods are star-shaped
      around the enclosing-ball center once r >= circumradius(core).
    """
    if core.ubercontractible_delta is not None:
        return core.ubercontractible_delta, "declared"
    if core.certificate in (CERT_POINT, CERT_CONVEX, CERT_FLAT, CERT_CUTLOCUS):
        return 0.0, "convex-or-cutlocus"
    if core.certificate == CERT_TREE:
        if n_amb == 2:
            from persbounds.convex_geometry import convexity_deficiency

            samples = core.sample(_core_resolution(core))
            val, _ = convexity_deficiency(PointCloud(samples, L2))
            return val, "planar-tree-cdef"
        return circumradius(PointCloud(core.vertices, L2)), "star-shaped"
    raise ValueError(f"core certificate {core.certificate!r} cannot be certified")


def _core_resolution(core: SimplicialCore) -> float:
    ext = core.vertices.max(axis=0) - core.vertices.min(axis=0)
    scale = float(np.linalg.norm(ext))
    # 2-cells are sampled on a triangular grid, so the budget is quadratic
    denom = 100.0 if any(len(c) == 3 for c in core.cells) else 1000.0
    return max(scale / denom, 1e-9)


def uberspread_upper(
    cloud: PointCloud, core: SimplicialCore, resolution: float | None = None
) -> WidthEstimate:
    """Certified uberspread upper bound: max of the two-sided Hausdorff
    distance to a dense core sampling and the certified contractibility
    threshold of the core."""
    if core.certificate == CERT_NONE:
        raise ValueError("core must carry a certificate")
    if cloud.norm != L2:
        raise UnsupportedNormError("uberspread bound supports the L2 norm only")
    h = resolution if resolution is not None else _core_resolution(core)
    samples = core.sample(h)
    dh = hausdorff_between_arrays(cloud.points, samples, L2)
    delta, _why = certify_delta(core, cloud.dim)
    return WidthEstimate(
        UBERSPREAD_UPPER,
        0,
        max(dh, delta),
        UPPER_BOUND,
        core,
        slack=h,
    )
