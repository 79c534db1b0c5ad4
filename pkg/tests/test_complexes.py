import math

import numpy as np
import pytest

from persbounds.complexes import (
    FilteredComplex,
    Simplex,
    cech,
    validate_interleaving,
    vietoris_rips,
)
from persbounds.metric import L1, L2, LINF, PointCloud, UnsupportedNormError, pairwise_distances


def _square_cloud():
    return PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]), L2)


def test_vr_values_are_max_edge():
    cloud = _square_cloud()
    ms = pairwise_distances(cloud)
    fc = vietoris_rips(ms, 2)
    vals = fc.value_map()
    assert vals[(0, 1)] == pytest.approx(1.0)
    assert vals[(0, 2)] == pytest.approx(math.sqrt(2))
    assert vals[(0, 1, 2)] == pytest.approx(math.sqrt(2))
    fc.validate()


def test_vr_default_cap_is_radius():
    ms = pairwise_distances(_square_cloud())
    fc = vietoris_rips(ms, 2)
    assert fc.max_value == pytest.approx(math.sqrt(2))  # radius of square corners


def test_cech_edge_and_triangle_values():
    cloud = _square_cloud()
    fc = cech(cloud, 2)
    vals = fc.value_map()
    assert vals[(0, 1)] == pytest.approx(0.5)
    assert vals[(0, 2)] == pytest.approx(math.sqrt(2) / 2)
    # right triangle: MEB radius = half the hypotenuse
    assert vals[(0, 1, 2)] == pytest.approx(math.sqrt(2) / 2)


def test_cech_equilateral_triangle_value():
    tri = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]]), L2)
    fc = cech(tri, 2)
    assert fc.value_map()[(0, 1, 2)] == pytest.approx(1 / math.sqrt(3))


def test_cech_values_match_meb_for_random_cloud():
    from persbounds.metric import min_enclosing_ball

    rng = np.random.default_rng(5)
    cloud = PointCloud(rng.normal(size=(9, 2)), L2)
    fc = cech(cloud, 3, max_value=math.inf)
    for s in fc.simplices:
        if s.dim == 0:
            continue
        meb = min_enclosing_ball(PointCloud(cloud.points[list(s.vertices)], L2)).radius
        # values are monotonized over faces, so they can only exceed the MEB
        assert s.value >= meb - 1e-9
        assert s.value <= meb + 1e-6


def test_cech_linf_values_are_half_extent():
    pts = np.array([[0.0, 0.0], [2.0, 1.0], [1.0, 3.0]])
    cloud = PointCloud(pts, LINF)
    fc = cech(cloud, 2, max_value=math.inf)
    assert fc.value_map()[(0, 1, 2)] == pytest.approx(1.5)


def test_cech_l1_unsupported():
    with pytest.raises(UnsupportedNormError):
        cech(PointCloud(np.array([[0.0], [1.0]]), L1), 1)


def test_filtration_monotone_and_sorted():
    rng = np.random.default_rng(11)
    cloud = PointCloud(rng.normal(size=(10, 3)), L2)
    for fc in (cech(cloud, 2), vietoris_rips(pairwise_distances(cloud), 2)):
        fc.validate()
        vals = fc.value_map()
        for s in fc.simplices:
            for drop in range(len(s.vertices)):
                face = s.vertices[:drop] + s.vertices[drop + 1 :]
                if face:
                    assert vals[face] <= s.value + 1e-12


def test_interleaving_containments():
    rng = np.random.default_rng(2)
    cloud = PointCloud(rng.normal(size=(12, 2)), L2)
    ms = pairwise_distances(cloud)
    fc_vr = vietoris_rips(ms, 2, max_value=math.inf)
    fc_cech = cech(cloud, 2, max_value=math.inf)
    rs = list(np.linspace(0.05, 2.0, 8))
    assert validate_interleaving(fc_vr, fc_cech, rs)


def test_simplex_validation():
    with pytest.raises(ValueError):
        Simplex(1.0, (2, 1)).check()  # not sorted
    with pytest.raises(ValueError):
        Simplex(-0.5, (0,)).check()  # negative value
    with pytest.raises(ValueError):
        Simplex(1.0, (1, 1)).check()  # repeated vertex


def test_filtered_complex_validate_rejects_missing_face():
    bad = FilteredComplex(
        (Simplex(0.0, (0,)), Simplex(0.0, (1,)), Simplex(1.0, (0, 1, 2))),
        3,
        2,
        1.0,
        "VR",
    )
    with pytest.raises(ValueError):
        bad.validate()
