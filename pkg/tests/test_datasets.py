import math

import numpy as np
import pytest

from persbounds import datasets
from persbounds.metric import L2, LINF, FiniteMetricSpace, PointCloud, pairwise_distances


def test_generate_dispatch_and_determinism():
    for shape in datasets.SHAPES:
        a = datasets.generate(shape, seed=5)
        b = datasets.generate(shape, seed=5)
        if isinstance(a, PointCloud):
            assert np.array_equal(a.points, b.points)
        else:
            assert np.array_equal(a.dist, b.dist)
    with pytest.raises(ValueError):
        datasets.generate("nonsense")


def test_circle_on_curve():
    cloud = datasets.circle(1.0, 120, seed=7)
    assert np.all(np.abs(np.linalg.norm(cloud.points, axis=1) - 1.0) <= 1e-12)
    assert cloud.norm == L2


def test_ellipse_on_curve():
    cloud = datasets.ellipse(2.0, 1.0, 150, seed=3)
    x, y = cloud.points[:, 0], cloud.points[:, 1]
    assert np.all(np.abs(x**2 / 4 + y**2 - 1.0) <= 1e-12)


def test_ellipsoid_on_surface():
    cloud = datasets.ellipsoid(3.0, 2.0, 1.0, 200, seed=0)
    x, y, z = cloud.points.T
    assert np.all(np.abs(x**2 / 9 + y**2 / 4 + z**2 - 1.0) <= 1e-12)


def test_linf_sphere_on_square_boundary():
    cloud = datasets.linf_sphere(80)
    assert cloud.norm == LINF
    assert np.all(np.abs(np.abs(cloud.points).max(axis=1) - 1.0) <= 1e-12)


def test_torus_on_surface():
    cloud = datasets.torus(2.0, 0.7, 100, seed=1)
    x, y, z = cloud.points.T
    val = (np.sqrt(x**2 + y**2) - 2.0) ** 2 + z**2
    assert np.all(np.abs(val - 0.49) <= 1e-12)


def test_tripod_loops_no_duplicates():
    cloud = datasets.tripod_loops(n=120)
    pairwise_distances(cloud)  # raises on duplicates


def test_random_tree_metric_is_valid_and_four_point():
    ms = datasets.random_tree_metric(12, seed=4)
    assert isinstance(ms, FiniteMetricSpace)
    d = ms.dist
    # tree metrics satisfy the four-point condition
    rng = np.random.default_rng(0)
    for _ in range(60):
        i, j, k, l = rng.choice(12, size=4, replace=False)
        sums = sorted([d[i, j] + d[k, l], d[i, k] + d[j, l], d[i, l] + d[j, k]])
        assert abs(sums[2] - sums[1]) <= 1e-9


def test_ellipsoid_handles_adds_genus_sample():
    base = datasets.ellipsoid(3.0, 2.0, 1.0, 400, seed=0)
    handled = datasets.ellipsoid_handles(3.0, 2.0, 1.0, 400, handles=1, seed=0)
    # caps removed, tube added: point count differs and tube points exit
    # the ellipsoid surface
    x, y, z = handled.points.T
    level = x**2 / 9 + y**2 / 4 + z**2
    assert (level > 1.05).any()
    assert handled.n != base.n
    pairwise_distances(handled)  # no duplicate points
