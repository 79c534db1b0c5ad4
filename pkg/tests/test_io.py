import math

import numpy as np
import pytest

from persbounds.complexes import cech
from persbounds.datasets import circle, random_tree_metric
from persbounds.io import (
    DataFormatError,
    diagram_from_json,
    diagram_to_json,
    load_cloud,
    load_complex,
    load_core,
    load_diagram,
    load_input,
    load_matrix,
    save_cloud,
    save_complex,
    save_core,
    save_diagram,
    save_matrix,
)
from persbounds.metric import LINF, FiniteMetricSpace, PointCloud
from persbounds.persistence import PersistenceDiagram
from persbounds.widths import CERT_TREE, SimplicialCore


def test_cloud_roundtrip_exact(tmp_path):
    cloud = circle(1.0, 40, seed=3)
    p = tmp_path / "c.csv"
    save_cloud(cloud, p)
    again = load_cloud(p)
    assert again.norm == cloud.norm
    assert np.array_equal(again.points, cloud.points)
    assert p.read_text().splitlines()[0] == "dim=2,norm=l2"


def test_cloud_header_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1.0,2.0\n")
    with pytest.raises(DataFormatError):
        load_cloud(p)
    p.write_text("dim=2,norm=l7\n1.0,2.0\n")
    with pytest.raises(DataFormatError):
        load_cloud(p)
    p.write_text("dim=3,norm=l2\n1.0,2.0\n")
    with pytest.raises(DataFormatError):
        load_cloud(p)


def test_matrix_roundtrip_and_dispatch(tmp_path):
    ms = random_tree_metric(7, seed=2)
    p = tmp_path / "m.csv"
    save_matrix(ms, p)
    again = load_matrix(p)
    assert np.array_equal(again.dist, ms.dist)
    assert isinstance(load_input(p), FiniteMetricSpace)
    c = tmp_path / "c.csv"
    save_cloud(PointCloud(np.array([[0.0, 1.0]]), LINF), c)
    assert isinstance(load_input(c), PointCloud)


def test_matrix_rejects_nonsquare(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("0,1,2\n1,0,1\n")
    with pytest.raises(DataFormatError):
        load_matrix(p)


def test_complex_roundtrip(tmp_path):
    fc = cech(circle(1.0, 12, seed=0), 2)
    p = tmp_path / "k.txt"
    save_complex(fc, p)
    again = load_complex(p, flavor=fc.flavor)
    assert again.simplices == fc.simplices
    assert again.n_points == fc.n_points


def test_complex_bad_line(tmp_path):
    p = tmp_path / "k.txt"
    p.write_text("0.5;0,1\nnot-a-simplex\n")
    with pytest.raises(DataFormatError):
        load_complex(p)


def test_core_roundtrip(tmp_path):
    core = SimplicialCore(
        np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]]),
        ((0,), (1,), (2,), (0, 1), (1, 2)),
        CERT_TREE,
    )
    p = tmp_path / "core.txt"
    save_core(core, p)
    again = load_core(p, certificate=CERT_TREE)
    assert np.array_equal(again.vertices, core.vertices)
    assert again.cells == core.cells
    assert again.certificate == CERT_TREE


def test_diagram_json_roundtrip_with_essentials():
    pd = PersistenceDiagram(((0, 0.0, 1.5), (1, 0.5, math.inf), (1, 0.2, 0.9)))
    assert diagram_from_json(diagram_to_json(pd)) == pd


def test_diagram_file_roundtrips(tmp_path):
    pd = PersistenceDiagram(((0, 0.0, 1.5), (1, 0.25, 0.75)))
    for fmt in ("json", "csv"):
        p = tmp_path / f"d.{fmt}"
        save_diagram(pd, p, fmt)
        assert load_diagram(p) == pd


def test_diagram_csv_header_enforced(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("deg,b,d\n1,0.0,1.0\n")
    with pytest.raises(DataFormatError):
        load_diagram(p)
