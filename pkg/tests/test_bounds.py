import json

import numpy as np
import pytest

from persbounds import datasets
from persbounds.bounds import (
    ALL_CHECKS,
    BoundCheck,
    VerifyConfig,
    paper_suite,
    verify_bounds,
)
from persbounds.metric import L2, PointCloud, pairwise_distances


def test_boundcheck_status_rules():
    ok = BoundCheck("T9", -1, None, 1.0, 1.0000001, "Exact", 1e-6)
    assert ok.status == "satisfied"
    bad = BoundCheck("T9", -1, None, 1.1, 1.0, "Exact", 1e-6)
    assert bad.status == "violated"
    unsure = BoundCheck("T4", -1, None, 1.1, 1.0, "Heuristic", 1e-6)
    assert unsure.status == "inconclusive"


def test_unknown_and_inapplicable_checks_rejected():
    cloud = datasets.circle(1.0, 10)
    with pytest.raises(ValueError):
        verify_bounds(cloud, VerifyConfig(checks=("T99",)))
    ms = datasets.random_tree_metric(6)
    with pytest.raises(ValueError):
        verify_bounds(ms, VerifyConfig(checks=("T1",)))  # Cech rows need a cloud


def test_circle_core_checks_satisfied():
    # radius 20 so the degree-1 birth clears the b >= 1 threshold of T10
    cloud = datasets.circle(20.0, 40, seed=0)
    rep = verify_bounds(cloud, VerifyConfig(checks=("T1", "T4", "T9", "T10")))
    assert not rep.has_violation
    assert all(c.status == "satisfied" for c in rep.checks)
    ids = {c.theorem_id for c in rep.checks}
    assert ids == {"T1", "T4", "T9", "T10"}


def test_every_applicable_check_emits_rows():
    base = datasets.random_cloud(15, 2, seed=1)
    cloud = PointCloud(base.points * 10.0, L2)  # births over 1 activate T10
    rep = verify_bounds(cloud, VerifyConfig())
    ids = {c.theorem_id for c in rep.checks}
    assert ids == set(ALL_CHECKS)
    assert not rep.has_violation


def test_metric_space_input_runs_vr_rows_only():
    ms = datasets.random_tree_metric(8, seed=3)
    rep = verify_bounds(ms, VerifyConfig())
    ids = {c.theorem_id for c in rep.checks}
    assert ids <= {"T7", "T8", "T9"}
    assert not rep.has_violation


def test_corruption_flips_exact_row_to_violated():
    cloud = datasets.circle(1.0, 30, seed=0)
    rep = verify_bounds(cloud, VerifyConfig(checks=("T9", "T11"), corrupt_deaths=True))
    assert rep.has_violation
    assert any(
        c.status == "violated" and c.bound_exactness == "Exact" for c in rep.checks
    )


def test_report_deterministic_modulo_timing():
    cloud = datasets.random_cloud(12, 2, seed=5)
    cfg = VerifyConfig(checks=("T1", "T4", "T7", "T9", "T11"))
    a = verify_bounds(cloud, cfg).to_json(include_timing=False)
    b = verify_bounds(cloud, cfg).to_json(include_timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_serialization_shapes():
    cloud = datasets.circle(1.0, 20, seed=0)
    rep = verify_bounds(cloud, VerifyConfig(checks=("T4", "T9")))
    payload = rep.to_json()
    assert payload["dataset"]["n"] == 20
    assert "cech" in payload["diagrams"]
    assert {c["theorem"] for c in payload["checks"]} == {"T4", "T9"}
    rows = rep.to_csv_rows()
    assert rows[0][0] == "theorem"
    assert len(rows) == len(rep.checks) + 1


def test_paper_suite_covers_catalog():
    covered = set()
    for _name, _data, cfg in paper_suite(seed=0):
        covered |= set(cfg.checks)
    assert covered == set(ALL_CHECKS)


def test_t8_uses_same_subsample_both_sides():
    # a space whose full VR extinction would exceed 2*hcdef of a tiny
    # subsample if the sides were mismatched is still consistent here
    cloud = datasets.linf_sphere(40)
    ms = pairwise_distances(cloud)
    rep = verify_bounds(ms, VerifyConfig(checks=("T8",), hcdef_exact_limit=6))
    (row,) = rep.checks
    assert row.status == "satisfied"
    assert "subsample" in row.detail
