import math

import numpy as np
import pytest

from persbounds.convex_geometry import (
    Polygon2D,
    convex_hull_2d,
    convexity_deficiency,
    convexity_deficiency_witness,
    hull_core_2d,
    medial_axis_core,
)
from persbounds.datasets import circle
from persbounds.metric import L2, LINF, PointCloud, UnsupportedNormError
from persbounds.widths import CERT_CONVEX, CERT_CUTLOCUS, distances_to_core


def test_cdef_square_corners():
    pts = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    val, witness, exactness = convexity_deficiency_witness(PointCloud(pts, L2))
    assert exactness == "Exact"
    assert val == pytest.approx(math.sqrt(2), abs=1e-9)
    assert np.allclose(witness, [0.0, 0.0], atol=1e-9)


def test_cdef_collinear():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]])
    val, exactness = convexity_deficiency(PointCloud(pts, L2))
    assert exactness == "Exact"
    assert val == pytest.approx(1.0, abs=1e-12)  # half the largest gap


def test_cdef_dense_circle_near_one():
    val, exactness = convexity_deficiency(circle(1.0, 120, seed=0))
    assert exactness == "Exact"
    assert 0.97 <= val <= 1.0


def test_cdef_grid_oracle_random_cloud():
    rng = np.random.default_rng(8)
    pts = rng.uniform(-1, 1, size=(12, 2))
    cloud = PointCloud(pts, L2)
    val, _ = convexity_deficiency(cloud)
    poly = convex_hull_2d(pts)
    # grid oracle over the hull
    xs = np.linspace(pts[:, 0].min(), pts[:, 0].max(), 160)
    ys = np.linspace(pts[:, 1].min(), pts[:, 1].max(), 160)
    best = 0.0
    for x in xs:
        inside = np.array([[x, y] for y in ys if poly.contains([x, y])])
        if len(inside):
            d = np.linalg.norm(inside[:, None] - pts[None], axis=2).min(axis=1)
            best = max(best, float(d.max()))
    assert val >= best - 1e-9
    assert val <= best + 0.05  # grid resolution slack


def test_cdef_3d_heuristic_is_lower_estimate():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-1, 1, size=(14, 3))
    val, exactness = convexity_deficiency(PointCloud(pts, L2))
    assert exactness == "Heuristic"
    assert val >= 0.0


def test_cdef_linf_rejected():
    with pytest.raises(UnsupportedNormError):
        convexity_deficiency(PointCloud(np.array([[0.0, 0.0], [1.0, 1.0]]), LINF))


def _medial_equidistance(core, poly, tol=1e-9):
    """Each medial-axis vertex is equidistant from its two nearest edges."""
    for p in core.vertices:
        dists = []
        for a, b in poly.edges():
            ab = b - a
            t = np.clip(float((p - a) @ ab) / float(ab @ ab), 0.0, 1.0)
            dists.append(float(np.linalg.norm(p - (a + t * ab))))
        dists.sort()
        assert abs(dists[0] - dists[1]) <= tol


def test_medial_axis_square_is_center():
    poly = Polygon2D(np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]))
    core = medial_axis_core(poly)
    assert core.certificate == CERT_CUTLOCUS
    assert core.ubercontractible_delta == 0.0
    # the axis is the union of the diagonals: center plus the four corners
    assert np.linalg.norm(core.vertices, axis=1).min() <= 1e-9
    for corner in poly.vertices:
        assert np.linalg.norm(core.vertices - corner, axis=1).min() <= 1e-9
    _medial_equidistance(core, poly)


def test_medial_axis_rectangle_is_centerline():
    poly = Polygon2D(np.array([[0.0, 0.0], [4.0, 0.0], [4.0, 2.0], [0.0, 2.0]]))
    core = medial_axis_core(poly)
    _medial_equidistance(core, poly)
    # interior skeleton: the centerline segment from (1,1) to (3,1)
    interior = core.vertices[np.abs(core.vertices[:, 1] - 1.0) <= 1e-9]
    xs = sorted(interior[:, 0])
    assert xs[0] == pytest.approx(1.0, abs=1e-9)
    assert xs[-1] == pytest.approx(3.0, abs=1e-9)
    # a long-edge midpoint sits exactly one inradius from the skeleton
    assert distances_to_core(np.array([[2.0, 0.0]]), core)[0] == pytest.approx(1.0, abs=1e-9)


def test_medial_axis_triangle_meets_incenter():
    tri = Polygon2D(np.array([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]))
    core = medial_axis_core(tri)
    _medial_equidistance(core, tri, tol=1e-8)
    # incenter of the 3-4-5 right triangle is (1, 1)
    d = np.linalg.norm(core.vertices - np.array([1.0, 1.0]), axis=1)
    assert d.min() <= 1e-8


def test_hull_core_covers_cloud():
    rng = np.random.default_rng(3)
    cloud = PointCloud(rng.uniform(-1, 1, size=(15, 2)), L2)
    core = hull_core_2d(cloud)
    assert core.certificate == CERT_CONVEX
    assert core.ubercontractible_delta == 0.0
    assert distances_to_core(cloud.points, core).max() <= 1e-9


def test_convex_hull_degenerate_inputs():
    seg = convex_hull_2d(np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.0]]))
    assert seg.kind != "polygon" or len(seg.vertices) >= 3
    assert seg.contains([0.25, 0.0])
    assert not seg.contains([0.25, 0.5])
