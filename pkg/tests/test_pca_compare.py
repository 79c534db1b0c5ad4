import numpy as np
import pytest

from persbounds.datasets import ellipse, random_cloud
from persbounds.metric import L2, PointCloud
from persbounds.pca_compare import (
    compare_cloud,
    compare_many,
    correlation,
    pca_sup_residual,
)


def test_collinear_cloud_all_columns_zero_at_k1():
    pts = np.column_stack([np.linspace(0, 3, 12), np.zeros(12)])
    cloud = PointCloud(pts, L2)
    (row,) = [r for r in compare_cloud(cloud, "line") if r.k == 1]
    assert row.pca_residual == pytest.approx(0.0, abs=1e-9)
    assert row.kw_value == pytest.approx(0.0, abs=1e-9)
    assert row.max_lifespan == pytest.approx(0.0, abs=1e-9)


def test_ellipse_major_axis_row():
    rows = compare_cloud(ellipse(2.0, 1.0, 100, seed=0), "ellipse")
    row = [r for r in rows if r.k == 1][0]
    # the L2-optimal line is the major axis: sup residual is the short
    # semi-axis; the width agrees; the lifespan is capped by both
    assert row.pca_residual == pytest.approx(1.0, abs=0.01)
    assert row.kw_value == pytest.approx(1.0, abs=0.01)
    assert row.max_lifespan <= row.kw_value + 1e-9


def test_lifespan_never_exceeds_width_columns():
    for seed in range(3):
        rows = compare_cloud(random_cloud(20, 2, seed), f"rand{seed}")
        for r in rows:
            assert r.max_lifespan <= r.kw_value + 1e-6


def test_correlation_emits_three_keys():
    rows, corr = compare_many(
        [("e", ellipse(2.0, 1.0, 40, 0)), ("r", random_cloud(20, 2, 0))]
    )
    assert set(corr) == {"pca_vs_lifespan", "kw_vs_lifespan", "pca_vs_kw"}
    for v in corr.values():
        assert -1.0 <= v <= 1.0


def test_correlation_empty_for_short_tables():
    rows = compare_cloud(random_cloud(10, 2, 1), "tiny")
    assert correlation(rows[:2]) == {}


def test_pca_residual_matches_direct_svd():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(30, 3))
    cloud = PointCloud(pts, L2)
    centered = pts - pts.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    proj = centered @ vt[:2].T @ vt[:2]
    expected = np.linalg.norm(centered - proj, axis=1).max()
    assert pca_sup_residual(cloud, 2) == pytest.approx(expected, abs=1e-12)
