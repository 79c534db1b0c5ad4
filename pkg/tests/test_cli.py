import json

from click.testing import CliRunner

from persbounds.cli import main


def _run(runner, args):
    return runner.invoke(main, args, catch_exceptions=False)


def test_gen_is_deterministic(tmp_path):
    runner = CliRunner()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    r1 = _run(runner, ["gen", "--shape", "circle", "--n", "120", "--seed", "7", "--out", str(a)])
    r2 = _run(runner, ["gen", "--shape", "circle", "--n", "120", "--seed", "7", "--out", str(b)])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert a.read_text() == b.read_text()


def test_pd_writes_diagram_and_plot(tmp_path):
    runner = CliRunner()
    cloud = tmp_path / "c.csv"
    _run(runner, ["gen", "--shape", "circle", "--n", "60", "--seed", "1", "--out", str(cloud)])
    out = tmp_path / "pd.json"
    res = _run(runner, ["pd", "--input", str(cloud), "--max-dim", "2", "--out", str(out)])
    assert res.exit_code == 0
    payload = json.loads(out.read_text())
    assert payload["degrees"].get("1"), "expected a degree-1 interval"
    png = tmp_path / "pd.png"
    assert png.exists() and png.stat().st_size > 0


def test_pd_vr_from_matrix(tmp_path):
    runner = CliRunner()
    mat = tmp_path / "m.csv"
    _run(runner, ["gen", "--shape", "random_tree_metric", "--n", "8", "--seed", "3", "--out", str(mat)])
    res = _run(runner, ["pd", "--input", str(mat), "--flavor", "vr"])
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert "degrees" in payload


def test_verify_checks_subset_exit_zero(tmp_path):
    runner = CliRunner()
    cloud = tmp_path / "c.csv"
    _run(runner, ["gen", "--shape", "circle", "--n", "40", "--seed", "0", "--out", str(cloud)])
    out = tmp_path / "rep.json"
    res = runner.invoke(
        main, ["verify", "--input", str(cloud), "--checks", "T1,T4,T9", "--out", str(out)]
    )
    assert res.exit_code == 0
    payload = json.loads(out.read_text())
    assert not payload["violations"]
    assert {c["theorem"] for r in payload["reports"] for c in r["checks"]} == {"T1", "T4", "T9"}
    assert (tmp_path / "rep.png").exists()


def test_verify_corrupt_self_test_exits_two(tmp_path):
    runner = CliRunner()
    cloud = tmp_path / "c.csv"
    _run(runner, ["gen", "--shape", "circle", "--n", "30", "--seed", "0", "--out", str(cloud)])
    res = runner.invoke(
        main,
        ["verify", "--input", str(cloud), "--checks", "T9", "--self-test-corrupt", "--no-plot"],
    )
    assert res.exit_code == 2


def test_verify_usage_and_data_errors_exit_one(tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["verify", "--input", "does-not-exist.csv"])
    assert res.exit_code == 1
    res = runner.invoke(main, ["verify", "--bogus-flag"])
    assert res.exit_code == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("dim=2,norm=l2\n1.0\n")
    res = runner.invoke(main, ["verify", "--input", str(bad), "--checks", "T9"])
    assert res.exit_code == 1
    # --suite and --input are mutually exclusive
    good = tmp_path / "c.csv"
    _run(runner, ["gen", "--shape", "circle", "--n", "10", "--seed", "0", "--out", str(good)])
    res = runner.invoke(main, ["verify", "--input", str(good), "--suite", "paper"])
    assert res.exit_code == 1


def test_cdef_tightspan_spread_json(tmp_path):
    runner = CliRunner()
    cloud = tmp_path / "c.csv"
    _run(runner, ["gen", "--shape", "circle", "--n", "30", "--seed", "0", "--out", str(cloud)])
    res = _run(runner, ["cdef", "--input", str(cloud)])
    payload = json.loads(res.output)
    assert 0.9 <= payload["cdef"] <= 1.0 and payload["exactness"] == "Exact"

    mat = tmp_path / "m.csv"
    _run(runner, ["gen", "--shape", "random_tree_metric", "--n", "7", "--seed", "2", "--out", str(mat)])
    res = _run(runner, ["tightspan", "--input", str(mat)])
    payload = json.loads(res.output)
    assert payload["exact"] is True and len(payload["witness_f"]) == 7

    res = _run(runner, ["spread", "--input", str(mat)])
    payload = json.loads(res.output)
    assert payload["exactness"] == "Exact" and payload["spread"] >= 0


def test_widths_with_mst_core(tmp_path):
    runner = CliRunner()
    cloud = tmp_path / "c.csv"
    _run(runner, ["gen", "--shape", "circle", "--n", "30", "--seed", "0", "--out", str(cloud)])
    res = _run(runner, ["widths", "--input", str(cloud), "--k", "1", "--core", "mst"])
    payload = json.loads(res.output)
    assert payload["kw"]["exactness"] == "Exact"
    assert payload["core_displacement"]["value"] <= 1e-9
    assert "uberspread_upper" in payload


def test_pca_compare_csv_and_plot(tmp_path):
    runner = CliRunner()
    cloud = tmp_path / "c.csv"
    _run(runner, ["gen", "--shape", "ellipse", "--n", "40", "--seed", "0", "--out", str(cloud)])
    out = tmp_path / "pca.csv"
    res = _run(runner, ["pca-compare", "--input", str(cloud), "--out", str(out)])
    assert res.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("dataset,k,pca_sup_residual,kw")
    assert len(lines) >= 2
    assert (tmp_path / "pca.png").exists()
