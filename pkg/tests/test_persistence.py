import math
import warnings

import numpy as np
import pytest

from persbounds.complexes import cech, vietoris_rips
from persbounds.metric import L2, FiniteMetricSpace, PointCloud, pairwise_distances
from persbounds.persistence import (
    PersistenceDiagram,
    bottleneck_distance,
    brute_force_persistence,
    compute_persistence,
    extinction_time,
    lifespans,
)


def _square_cloud():
    return PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]), L2)


def test_square_cech_diagram_known_values():
    fc = cech(_square_cloud(), 2)
    pd = compute_persistence(fc, 1)
    deg1 = pd.in_degree(1)
    assert len(deg1) == 1
    b, d = deg1[0]
    assert b == pytest.approx(0.5)
    assert d == pytest.approx(math.sqrt(2) / 2)
    # reduced degree 0: three merge intervals, no essentials
    assert len(pd.in_degree(0)) == 3
    assert pd.essential_count() == 0


def test_square_vr_diagram_known_values():
    ms = pairwise_distances(_square_cloud())
    pd = compute_persistence(vietoris_rips(ms, 2), 1)
    deg1 = pd.in_degree(1)
    assert len(deg1) == 1
    b, d = deg1[0]
    assert b == pytest.approx(1.0)
    assert d == pytest.approx(math.sqrt(2))


def test_matches_brute_force_on_random_spaces():
    rng = np.random.default_rng(42)
    for _ in range(8):
        pts = rng.normal(size=(7, 3))
        ms = pairwise_distances(PointCloud(pts, L2))
        fc = vietoris_rips(ms, 3, max_value=math.inf)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fast = compute_persistence(fc, 2)
            slow = brute_force_persistence(fc, 2)
        assert fast == slow


def test_essential_class_warns_and_death_inf():
    # capped filtration leaves the loop unfilled
    cloud = _square_cloud()
    fc = cech(cloud, 2, max_value=0.55)
    with pytest.warns(UserWarning):
        pd = compute_persistence(fc, 1)
    deg1 = pd.in_degree(1)
    assert len(deg1) == 1 and math.isinf(deg1[0][1])
    assert pd.essential_count() == 1


def test_zero_length_intervals_rejected():
    with pytest.raises(ValueError):
        PersistenceDiagram(((0, 1.0, 1.0),))


def test_diagram_multiset_equality():
    a = PersistenceDiagram(((0, 0.0, 1.0), (0, 0.0, 1.0), (1, 0.5, 2.0)))
    b = PersistenceDiagram(((1, 0.5, 2.0), (0, 0.0, 1.0), (0, 0.0, 1.0)))
    c = PersistenceDiagram(((1, 0.5, 2.0), (0, 0.0, 1.0)))
    assert a == b
    assert a != c


def test_bottleneck_known_values():
    a = PersistenceDiagram(((1, 0.0, 1.0),))
    b = PersistenceDiagram(((1, 0.2, 1.1),))
    assert bottleneck_distance(a, b, 1) == pytest.approx(0.2, abs=1e-9)
    # matching to the diagonal: cost is half the lifespan
    empty = PersistenceDiagram(())
    assert bottleneck_distance(a, empty, 1) == pytest.approx(0.5, abs=1e-9)
    # essential classes must match each other
    e1 = PersistenceDiagram(((1, 0.3, math.inf),))
    e2 = PersistenceDiagram(((1, 0.4, math.inf),))
    assert bottleneck_distance(e1, e2, 1) == pytest.approx(0.1, abs=1e-9)
    assert math.isinf(bottleneck_distance(e1, empty, 1))


def test_bottleneck_is_a_metric_sample():
    rng = np.random.default_rng(1)
    pds = []
    for _ in range(3):
        pts = rng.normal(size=(8, 2))
        fc = cech(PointCloud(pts, L2), 2)
        pds.append(compute_persistence(fc, 1))
    for i in range(3):
        assert bottleneck_distance(pds[i], pds[i], 1) <= 1e-12
        for j in range(3):
            for k in range(3):
                dij = bottleneck_distance(pds[i], pds[j], 1)
                assert dij <= bottleneck_distance(pds[i], pds[k], 1) + bottleneck_distance(
                    pds[k], pds[j], 1
                ) + 1e-9


def test_extinction_and_lifespans():
    pd = PersistenceDiagram(((0, 0.0, 2.0), (1, 0.5, 1.5)))
    assert extinction_time(pd) == pytest.approx(2.0)
    assert lifespans(pd, 1) == [(0.5, 1.5, 1.0)]


def test_tree_metric_has_no_degree1_classes():
    from persbounds.datasets import random_tree_metric

    for seed in range(3):
        ms = random_tree_metric(9, seed)
        fc = vietoris_rips(ms, 2, max_value=math.inf)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            pd = compute_persistence(fc, 1)
        # trees are 0-hyperbolic: VR persistence in degree 1 vanishes
        assert pd.in_degree(1) == []
