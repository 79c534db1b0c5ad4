"""Convex-hull geometry: 2D hulls, convexity deficiency (Hausdorff distance
from a cloud to its convex hull), medial-axis cores of convex polygons, and
convex-core lifespan caps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, Delaunay, QhullError, Voronoi
from scipy.spatial.distance import cdist

from persbounds.metric import L2, TOLERANCE, PointCloud, UnsupportedNormError
from persbounds.widths import (
    CERT_CONVEX,
    CERT_CUTLOCUS,
    EXACT,
    HEURISTIC,
    SimplicialCore,
)

POLYGON = "polygon"
SEGMENT = "segment"
POINT = "point"


@dataclass(frozen=True)
class Polygon2D:
    """Convex polygon with CCW vertices; degenerate inputs collapse to a
    segment or point variant."""

    vertices: np.ndarray
    kind: str = POLYGON

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] == 0:
            raise ValueError("vertices must be an m x 2 array")
        if self.kind == POLYGON:
            if v.shape[0] < 3:
                raise ValueError("polygon needs at least 3 vertices")
            m = v.shape[0]
            for i in range(m):
                a, b, c = v[i], v[(i + 1) % m], v[(i + 2) % m]
                cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
                if cross < -1e-12:
                    raise ValueError("vertices must wind counterclockwise (convex)")
            if len({tuple(p) for p in np.round(v, 12)}) != m:
                raise ValueError("repeated vertices")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def edges(self) -> list[tuple[np.ndarray, np.ndarray]]:
        m = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % m]) for i in range(m)]

    def contains(self, point, tol: float = TOLERANCE) -> bool:
        p = np.asarray(point, float)
        if self.kind == POINT:
            return bool(np.linalg.norm(p - self.vertices[0]) <= tol)
        if self.kind == SEGMENT:
            a, b = self.vertices[0], self.vertices[-1]
            ab = b - a
            t = np.clip(float((p - a) @ ab) / max(float(ab @ ab), 1e-30), 0, 1)
            return bool(np.linalg.norm(p - (a + t * ab)) <= tol)
        for a, b in self.edges():
            cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if cross < -tol:
                return False
        return True

    def boundary_sample(self, n_per_edge: int) -> np.ndarray:
        if self.kind == POINT:
            return self.vertices.copy()
        if self.kind == SEGMENT:
            t = np.linspace(0, 1, max(n_per_edge, 2))[:, None]
            return self.vertices[0] + t * (self.vertices[-1] - self.vertices[0])
        pts = []
        for a, b in self.edges():
            t = np.linspace(0, 1, max(n_per_edge, 2), endpoint=False)[:, None]
            pts.append(a + t * (b - a))
        return np.vstack(pts)


def convex_hull_2d(points) -> Polygon2D:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an n x 2 array")
    uniq = np.unique(np.round(pts, 12), axis=0)
    if len(uniq) == 1:
        return Polygon2D(uniq[:1], POINT)
    try:
        hull = ConvexHull(pts)
    except QhullError:
        # collinear: return the extreme segment
        direction = uniq[-1] - uniq[0]
        span = pts @ direction
        lo, hi = pts[np.argmin(span)], pts[np.argmax(span)]
        if np.linalg.norm(hi - lo) <= 1e-15:
            return Polygon2D(pts[:1], POINT)
        return Polygon2D(np.array([lo, hi]), SEGMENT)
    return Polygon2D(pts[hull.vertices], POLYGON)  # scipy returns CCW in 2D


def _segment_intersections(p, q, a, b) -> list[np.ndarray]:
    """Intersection point(s) of segments p-q and a-b (proper crossings and
    endpoint touches; overlapping collinear segments return endpoints)."""
    r = q - p
    s = b - a
    denom = r[0] * s[1] - r[1] * s[0]
    qp = a - p
    if abs(denom) < 1e-15:
        return []
    t = (qp[0] * s[1] - qp[1] * s[0]) / denom
    u = (qp[0] * r[1] - qp[1] * r[0]) / denom
    if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= u <= 1 + 1e-12:
        return [p + t * r]
    return []


def _cdef_collinear(pts: np.ndarray) -> tuple[float, np.ndarray]:
    """Hull is a segment: the farthest hull point from the cloud is the
    midpoint of the largest gap between consecutive projections."""
    uniq = np.unique(np.round(pts, 12), axis=0)
    if len(uniq) == 1:
        return 0.0, pts[0]
    direction = uniq[-1] - uniq[0]
    direction = direction / np.linalg.norm(direction)
    span = pts @ direction
    order = np.argsort(span)
    gaps = np.diff(span[order])
    if len(gaps) == 0 or gaps.max() <= 0:
        return 0.0, pts[0]
    i = int(np.argmax(gaps))
    mid = (pts[order[i]] + pts[order[i + 1]]) / 2.0
    return float(gaps.max() / 2.0), mid


def _voronoi_edge_segments(vor: Voronoi, scale: float) -> list[tuple[np.ndarray, np.ndarray, int]]:
    """Voronoi ridges as finite segments (rays truncated at ~10*scale),
    together with one generating input-point index per ridge."""
    center = vor.points.mean(axis=0)
    segs = []
    for (p1, p2), (v1, v2) in zip(vor.ridge_points, vor.ridge_vertices):
        if v1 >= 0 and v2 >= 0:
            segs.append((vor.vertices[v1], vor.vertices[v2], p1))
            continue
        v = v2 if v1 < 0 else v1
        tangent = vor.points[p2] - vor.points[p1]
        tangent = tangent / np.linalg.norm(tangent)
        normal = np.array([-tangent[1], tangent[0]])
        midpoint = (vor.points[p1] + vor.points[p2]) / 2.0
        if (midpoint - center) @ normal < 0:
            normal = -normal
        far = vor.vertices[v] + normal * 10.0 * scale
        segs.append((vor.vertices[v], far, p1))
    return segs


def _cdef_2d_exact(pts: np.ndarray) -> tuple[float, np.ndarray]:
    """sup over the hull of the distance to the cloud. Maximizer candidates:
    Voronoi vertices inside the hull, and points where a Voronoi edge
    crosses the hull boundary."""
    poly = convex_hull_2d(pts)
    if poly.kind in (POINT, SEGMENT):
        return _cdef_collinear(pts)
    vor = Voronoi(pts)
    ext = pts.max(axis=0) - pts.min(axis=0)
    scale = float(np.linalg.norm(ext))
    candidates: list[np.ndarray] = []
    for v in vor.vertices:
        if poly.contains(v, tol=1e-9):
            candidates.append(v)
    hull_edges = poly.edges()
    for a, b, _p in _voronoi_edge_segments(vor, scale):
        for ha, hb in hull_edges:
            candidates.extend(_segment_intersections(a, b, ha, hb))
    if not candidates:
        return 0.0, pts[0]
    cand = np.array(candidates)
    dmin = cdist(cand, pts).min(axis=1)
    i = int(np.argmax(dmin))
    return float(dmin[i]), cand[i]


def _cdef_heuristic(pts: np.ndarray, seed: int = 0) -> tuple[float, np.ndarray]:
    """N >= 3: lower estimate of cdef by maximizing min-distance over the
    hull from Voronoi-vertex and random interior starts."""
    n, N = pts.shape
    try:
        hull = ConvexHull(pts)
        tri = Delaunay(pts)
    except QhullError:
        # degenerate (affinely dependent): fall back to pairwise midpoints
        mids = (pts[:, None, :] + pts[None, :, :]).reshape(-1, N) / 2.0
        dmin = cdist(mids, pts).min(axis=1)
        i = int(np.argmax(dmin))
        return float(dmin[i]), mids[i]
    eqs = hull.equations  # A x + b <= 0 inside

    def inside(y):
        return np.all(eqs[:, :-1] @ y + eqs[:, -1] <= 1e-9)

    rng = np.random.default_rng(seed)
    starts: list[np.ndarray] = []
    try:
        vor = Voronoi(pts)
        starts.extend(v for v in vor.vertices if inside(v))
    except QhullError:
        pass
    # rejection-sample interior points
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    want = 200
    while len(starts) < want:
        batch = rng.uniform(lo, hi, size=(4 * want, N))
        keep = batch[tri.find_simplex(batch) >= 0]
        starts.extend(keep[: want - len(starts)])
        if len(keep) == 0:
            break
    centroid = pts.mean(axis=0)

    def project(y):
        y = np.asarray(y, float)
        if inside(y):
            return y
        # shrink toward the centroid until feasible
        lo_t, hi_t = 0.0, 1.0
        for _ in range(30):
            mid = (lo_t + hi_t) / 2
            if inside(centroid + mid * (y - centroid)):
                lo_t = mid
            else:
                hi_t = mid
        return centroid + lo_t * (y - centroid)

    def neg_f(y):
        y = project(y)
        return -float(cdist(y[None, :], pts).min())

    best_val, best_y = 0.0, pts[0]
    # every start is inside the hull by construction, so rank them directly
    if starts:
        arr = np.asarray(starts)
        depth = cdist(arr, pts).min(axis=1)
        order = arr[np.argsort(depth)[::-1][:6]]
    else:
        order = np.empty((0, N))
    for y0 in order:
        res = minimize(
            neg_f,
            y0,
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-11, "maxiter": 150},
        )
        y = project(res.x)
        val = float(cdist(y[None, :], pts).min())
        if val > best_val:
            best_val, best_y = val, y
    return best_val, best_y


def convexity_deficiency(cloud: PointCloud, seed: int = 0) -> tuple[float, str]:
    val, _, exactness = convexity_deficiency_witness(cloud, seed)
    return val, exactness


def convexity_deficiency_witness(
    cloud: PointCloud, seed: int = 0
) -> tuple[float, np.ndarray, str]:
    """(value, argmax point, exactness). Exact in the plane; a Heuristic
    lower estimate in higher ambient dimension."""
    if cloud.norm != L2:
        raise UnsupportedNormError("convexity deficiency supports the L2 norm only")
    if cloud.dim == 1:
        v, w = _cdef_collinear(np.column_stack([cloud.points[:, 0], np.zeros(cloud.n)]))
        return v, w[:1], EXACT
    if cloud.dim == 2:
        v, w = _cdef_2d_exact(cloud.points)
        return v, w, EXACT
    v, w = _cdef_heuristic(cloud.points, seed)
    return v, w, HEURISTIC


# ---------------------------------------------------------------------------
# medial axis of a convex polygon


def _edge_lines(poly: Polygon2D):
    """(normal, offset) per edge with inward unit normal: x . n = c on the
    line, x . n >= c inside."""
    normals, offsets, tangents = [], [], []
    for a, b in poly.edges():
        t = b - a
        t = t / np.linalg.norm(t)
        n = np.array([-t[1], t[0]])  # inward for CCW winding
        normals.append(n)
        offsets.append(float(a @ n))
        tangents.append(t)
    return np.array(normals), np.array(offsets), np.array(tangents)


def _vertex_trajectory(n1, c1, n2, c2):
    """Intersection of the two inward offset lines as x(t) = a + t*b."""
    A = np.array([n1, n2])
    a = np.linalg.solve(A, np.array([c1, c2]))
    b = np.linalg.solve(A, np.array([1.0, 1.0]))
    return a, b


def medial_axis_core(poly: Polygon2D) -> SimplicialCore:
    """Medial axis (cut-locus of the boundary) of a convex polygon, traced
    exactly by shrinking the polygon: each vertex follows its angular
    bisector (an affine path in the offset parameter) until an edge
    collapses; merge points are the axis branch vertices."""
    if poly.kind != POLYGON:
        raise ValueError("medial axis requires a non-degenerate convex polygon")
    normals, offsets, _ = _edge_lines(poly)
    m = len(normals)
    edges = list(range(m))  # indices into normals/offsets, cyclic order
    # vertex j sits between edges[j] and edges[j+1]; birth position/time
    births = [poly.vertices[(j + 1) % m].copy() for j in range(m)]
    segments: list[tuple[np.ndarray, np.ndarray]] = []
    t_cur = 0.0

    for _round in range(4 * m):
        k = len(edges)
        if k < 3:
            break
        traj = []
        for j in range(k):
            e1, e2 = edges[j], edges[(j + 1) % k]
            traj.append(
                _vertex_trajectory(normals[e1], offsets[e1], normals[e2], offsets[e2])
            )
        # collapse time of edge j (between vertices j-1 and j): its length
        # along the edge tangent is affine in t
        times = []
        for j in range(k):
            e = edges[j]
            n = normals[e]
            tangent = np.array([n[1], -n[0]])
            a_prev, b_prev = traj[(j - 1) % k]
            a_next, b_next = traj[j]
            alpha = float((a_next - a_prev) @ tangent)
            beta = float((b_next - b_prev) @ tangent)
            if beta >= -1e-15:
                times.append(math.inf)
            else:
                times.append(-alpha / beta)
        t_star = min(times)
        if not math.isfinite(t_star):
            break
        dying = [j for j in range(k) if times[j] <= t_star + 1e-9]
        dying_set = set(dying)
        pos = [a + t_star * b for a, b in traj]
        # vertices adjacent to a dying edge die at their t_star position
        dead_vertices = set()
        for j in dying:
            dead_vertices.add((j - 1) % k)
            dead_vertices.add(j)
        for j in sorted(dead_vertices):
            if np.linalg.norm(pos[j] - births[j]) > 1e-12:
                segments.append((births[j], pos[j]))
        # rebuild surviving edge list and vertex births
        surviving = [j for j in range(k) if j not in dying_set]
        new_edges = [edges[j] for j in surviving]
        new_births = []
        for jj in range(len(surviving)):
            j = surviving[jj]
            j_next = surviving[(jj + 1) % len(surviving)]
            # vertex between surviving edges j and j_next
            if (j + 1) % k == j_next:
                # no collapse in between: the old vertex j survives
                new_births.append(births[j])
            else:
                # merge point: position of any dead vertex between them
                new_births.append(pos[j])
        edges = new_edges
        births = new_births
        t_cur = t_star
        if len(edges) < 3:
            break

    # leftover spine: at most two merge points remain (e.g. a rectangle)
    uniq: list[np.ndarray] = []
    for p in births if len(edges) < 3 else []:
        if not any(np.linalg.norm(p - q) <= 1e-12 for q in uniq):
            uniq.append(p)
    if len(uniq) == 2:
        segments.append((uniq[0], uniq[1]))

    # assemble the core, merging coincident endpoints
    verts: list[np.ndarray] = []

    def vid(p) -> int:
        for i, q in enumerate(verts):
            if np.linalg.norm(p - q) <= 1e-9:
                return i
        verts.append(np.asarray(p, float))
        return len(verts) - 1

    cells: set[tuple[int, ...]] = set()
    for a, b in segments:
        ia, ib = vid(a), vid(b)
        cells.add((ia,))
        cells.add((ib,))
        if ia != ib:
            cells.add(tuple(sorted((ia, ib))))
    if not verts:  # degenerate: axis is a single point (regular polygon)
        center = poly.vertices.mean(axis=0)
        verts.append(center)
        cells.add((0,))
    return SimplicialCore(
        np.array(verts), tuple(sorted(cells)), CERT_CUTLOCUS, ubercontractible_delta=0.0
    )


def convex_core_lifespan_bound(cloud: PointCloud, core: SimplicialCore) -> float:
    """Hausdorff distance from the cloud to a densely sampled convex core;
    valid as a per-interval lifespan cap because convex sets in Euclidean
    space admit a 1-Lipschitz nearest-point projection."""
    if cloud.norm != L2:
        raise UnsupportedNormError("convex-core bound supports the L2 norm only")
    if core.certificate != CERT_CONVEX:
        raise ValueError("core must carry the ConvexSet certificate")
    from persbounds.metric import hausdorff_between_arrays
    from persbounds.widths import _core_resolution

    return hausdorff_between_arrays(cloud.points, core.sample(_core_resolution(core)), L2)


def hull_core_2d(cloud: PointCloud) -> SimplicialCore:
    """The filled convex hull of a planar cloud as a ConvexSet core (fan
    triangulation)."""
    poly = convex_hull_2d(cloud.points)
    if poly.kind == POINT:
        return SimplicialCore(poly.vertices, ((0,),), CERT_CONVEX, 0.0)
    if poly.kind == SEGMENT:
        return SimplicialCore(poly.vertices, ((0,), (1,), (0, 1)), CERT_CONVEX, 0.0)
    v = poly.vertices
    m = len(v)
    cells: set[tuple[int, ...]] = {(i,) for i in range(m)}
    for i in range(1, m - 1):
        cells.add((0, i, i + 1))
        cells.add(tuple(sorted((0, i))))
        cells.add(tuple(sorted((i, i + 1))))
        cells.add(tuple(sorted((0, i + 1))))
    return SimplicialCore(v, tuple(sorted(cells)), CERT_CONVEX, 0.0)
