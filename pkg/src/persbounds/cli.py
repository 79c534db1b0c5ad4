"""Command-line front end.

Subcommands: gen, pd, widths, cdef, tightspan, spread, verify, pca-compare.
Exit codes: 0 success, 2 bound violation, 1 usage or data error.
Report-style paths (pd, verify, pca-compare) also render a matplotlib figure
next to the delimited output unless --no-plot is given.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path

import click

from persbounds import datasets
from persbounds.bounds import (
    ALL_CHECKS,
    VerifyConfig,
    run_suite,
    verify_bounds,
)
from persbounds.complexes import cech, vietoris_rips
from persbounds.convex_geometry import convexity_deficiency_witness
from persbounds.io import (
    DataFormatError,
    load_core,
    load_input,
    save_cloud,
    save_diagram,
    save_matrix,
)
from persbounds.metric import (
    L2,
    DuplicatePointsError,
    PointCloud,
    UnsupportedNormError,
    pairwise_distances,
)
from persbounds.persistence import compute_persistence
from persbounds.tightspan import hyperconvexity_deficiency
from persbounds.widths import (
    core_displacement,
    kolmogorov_width,
    mst_core,
    spread,
    uberspread_upper,
)

# exit code 2 is reserved for bound violations; usage errors must exit 1
click.UsageError.exit_code = 1

_DATA_ERRORS = (
    DataFormatError,
    DuplicatePointsError,
    UnsupportedNormError,
    ValueError,
    OSError,
)


def _fail(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(1)


def _load(path):
    try:
        return load_input(path)
    except _DATA_ERRORS as exc:
        _fail(str(exc))


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


def _plot_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


@click.group()
def main():
    """Persistence lifespans and the metric-geometry bounds that cap them."""


@main.command()
@click.option("--shape", required=True, type=click.Choice(datasets.SHAPES))
@click.option("--n", default=None, type=int, help="number of sample points")
@click.option("--seed", default=0, type=int)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def gen(shape, n, seed, out):
    """Generate a dataset and write it as cloud CSV (or matrix CSV)."""
    params = {} if n is None else {"n": n}
    try:
        data = datasets.generate(shape, seed=seed, **params)
    except _DATA_ERRORS as exc:
        _fail(str(exc))
    if isinstance(data, PointCloud):
        save_cloud(data, out)
    else:
        save_matrix(data, out)
    click.echo(f"wrote {out} ({data.n} points)")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--flavor", default="cech", type=click.Choice(["cech", "vr"]))
@click.option("--max-dim", default=2, type=int)
@click.option("--max-filtration", default=None, type=float)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]))
@click.option("--plot/--no-plot", default=True)
def pd(input_path, flavor, max_dim, max_filtration, out, fmt, plot):
    """Compute a persistence diagram from a cloud or distance matrix."""
    data = _load(input_path)
    try:
        if flavor == "cech":
            if not isinstance(data, PointCloud):
                _fail("the Cech complex needs a point cloud input")
            fc = cech(data, max_dim, max_filtration)
        else:
            ms = pairwise_distances(data) if isinstance(data, PointCloud) else data
            fc = vietoris_rips(ms, max_dim, max_filtration)
    except _DATA_ERRORS as exc:
        _fail(str(exc))
    diagram = compute_persistence(fc, max_dim - 1)
    if out:
        save_diagram(diagram, out, fmt)
        click.echo(f"wrote {out}")
        if plot:
            from persbounds.plots import plot_diagram

            p = plot_diagram(diagram, _plot_path(out), f"{flavor} diagram")
            click.echo(f"wrote {p}")
    else:
        from persbounds.io import diagram_to_json

        click.echo(json.dumps(diagram_to_json(diagram), indent=2))


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--k", default=1, type=int)
@click.option("--restarts", default=8, type=int)
@click.option("--exact-limit", default=20, type=int, help="exact spread search cap")
@click.option(
    "--core",
    default=None,
    help="mst | flat | file:<path> - adds core displacement and uberspread rows",
)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def widths(input_path, k, restarts, exact_limit, core, seed, out):
    """Width estimates: Kolmogorov width, spread, optional core displacement."""
    data = _load(input_path)
    payload = {}
    try:
        if isinstance(data, PointCloud):
            est = kolmogorov_width(data, k, restarts)
            payload["kw"] = {"k": k, "value": est.value, "exactness": est.exactness}
            ms = pairwise_distances(data)
        else:
            ms = data
        spr = spread(ms, exact_limit)
        payload["spread"] = {"value": spr.value, "exactness": spr.exactness}
        if core:
            if not isinstance(data, PointCloud):
                _fail("--core needs a point cloud input")
            if core == "mst":
                core_obj = mst_core(data)
            elif core == "flat":
                core_obj = kolmogorov_width(data, k, restarts).witness
            elif core.startswith("file:"):
                core_obj = load_core(core[5:])
            else:
                _fail("--core must be mst, flat, or file:<path>")
            disp = core_displacement(data, core_obj)
            payload["core_displacement"] = {"value": disp.value, "exactness": disp.exactness}
            if not core.startswith("file:") and core != "flat":
                ub = uberspread_upper(data, core_obj)
                payload["uberspread_upper"] = {
                    "value": ub.value,
                    "exactness": ub.exactness,
                    "slack": ub.slack,
                }
    except _DATA_ERRORS as exc:
        _fail(str(exc))
    _emit(payload, out)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def cdef(input_path, seed, out):
    """Convexity deficiency of a point cloud (L2)."""
    data = _load(input_path)
    if not isinstance(data, PointCloud):
        _fail("convexity deficiency needs a point cloud input")
    try:
        val, witness, exactness = convexity_deficiency_witness(data, seed)
    except _DATA_ERRORS as exc:
        _fail(str(exc))
    _emit({"cdef": val, "exactness": exactness, "argmax_point": list(witness)}, out)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--exact-limit", default=8, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def tightspan(input_path, exact_limit, seed, out):
    """Hyperconvexity deficiency with a tight-span witness function."""
    data = _load(input_path)
    ms = pairwise_distances(data) if isinstance(data, PointCloud) else data
    try:
        val, witness, exactness = hyperconvexity_deficiency(ms, exact_limit, seed)
    except _DATA_ERRORS as exc:
        _fail(str(exc))
    _emit(
        {"hcdef": val, "witness_f": list(witness.f), "exact": exactness == "Exact"},
        out,
    )


@main.command("spread")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--exact-limit", default=20, type=int)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def spread_cmd(input_path, exact_limit, out):
    """Katz spread of a finite metric space."""
    data = _load(input_path)
    ms = pairwise_distances(data) if isinstance(data, PointCloud) else data
    est = spread(ms, exact_limit)
    witness = sorted(est.witness) if est.witness is not None else None
    _emit(
        {"spread": est.value, "exactness": est.exactness, "witness_subset": witness},
        out,
    )


@main.command()
@click.option("--input", "input_path", default=None, type=click.Path(exists=True))
@click.option("--suite", default=None, type=click.Choice(["paper"]))
@click.option("--checks", default=None, help="comma-separated subset of T1..T11")
@click.option("--max-dim", default=2, type=int)
@click.option("--max-filtration", default=None, type=float)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]))
@click.option("--plot/--no-plot", default=True)
@click.option(
    "--self-test-corrupt",
    is_flag=True,
    help="inflate deaths by 10% to confirm violations surface with exit code 2",
)
def verify(
    input_path, suite, checks, max_dim, max_filtration, seed, out, fmt, plot, self_test_corrupt
):
    """Check the lifespan/extinction bound catalog; exit 2 on violation."""
    if (input_path is None) == (suite is None):
        _fail("provide exactly one of --input or --suite")
    check_tuple = None
    if checks:
        check_tuple = tuple(c.strip() for c in checks.split(",") if c.strip())
        bad = [c for c in check_tuple if c not in ALL_CHECKS]
        if bad:
            _fail(f"unknown checks {bad}; valid ids are {', '.join(ALL_CHECKS)}")
    try:
        if suite:
            reports = run_suite(seed=seed)
            if self_test_corrupt:
                cfg = VerifyConfig(checks=("T9", "T11"), seed=seed, corrupt_deaths=True)
                reports.append(
                    verify_bounds(datasets.circle(1.0, 40, seed), cfg, "corruption-self-test")
                )
        else:
            data = _load(input_path)
            cfg = VerifyConfig(
                checks=check_tuple,
                max_dim=max_dim,
                max_value=max_filtration,
                seed=seed,
                corrupt_deaths=self_test_corrupt,
            )
            reports = [verify_bounds(data, cfg, Path(input_path).stem)]
    except _DATA_ERRORS as exc:
        _fail(str(exc))

    violated = any(r.has_violation for r in reports)
    if fmt == "json":
        payload = {"reports": [r.to_json() for r in reports], "violations": violated}
        _emit(payload, out)
    else:
        rows = []
        for r in reports:
            body = r.to_csv_rows()
            header, body = body[0], body[1:]
            if not rows:
                rows.append(["dataset"] + header)
            rows += [[r.dataset["name"]] + b for b in body]
        if out:
            with Path(out).open("w", newline="") as fh:
                csv.writer(fh).writerows(rows)
        else:
            w = csv.writer(sys.stdout)
            w.writerows(rows)
    for r in reports:
        s = r.summary()
        worst = min((v["worst_slack"] for v in s.values()), default=math.inf)
        click.echo(
            f"{r.dataset['name']}: {sum(v['rows'] for v in s.values())} checks, "
            f"{sum(v['violated'] for v in s.values())} violated, worst slack {worst:.4g}",
            err=True,
        )
    if out and plot:
        from persbounds.plots import plot_report

        for i, r in enumerate(reports):
            p = Path(out).with_suffix("")
            p = p.parent / f"{p.name}-{r.dataset['name']}.png" if len(reports) > 1 else _plot_path(out)
            plot_report(r, p)
            click.echo(f"wrote {p}", err=True)
    sys.exit(2 if violated else 0)


@main.command("pca-compare")
@click.option(
    "--input",
    "input_paths",
    multiple=True,
    type=click.Path(exists=True),
    help="cloud CSV; repeatable. Defaults to the stock comparison shapes.",
)
@click.option("--max-dim", default=2, type=int)
@click.option("--restarts", default=8, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--plot/--no-plot", default=True)
def pca_compare(input_paths, max_dim, restarts, seed, out, plot):
    """Tabulate PCA sup-residuals vs widths vs Cech lifespans (no assertions)."""
    from persbounds.pca_compare import (
        CSV_HEADER,
        compare_many,
        default_comparison,
    )

    if input_paths:
        clouds = []
        for p in input_paths:
            data = _load(p)
            if not isinstance(data, PointCloud) or data.norm != L2:
                _fail(f"{p}: PCA comparison needs an L2 point cloud")
            clouds.append((Path(p).stem, data))
    else:
        clouds = default_comparison(seed)
    try:
        rows, corr = compare_many(clouds, max_dim=max_dim, restarts=restarts)
    except _DATA_ERRORS as exc:
        _fail(str(exc))
    lines = [CSV_HEADER] + [r.to_list() for r in rows]
    if out:
        with Path(out).open("w", newline="") as fh:
            csv.writer(fh).writerows(lines)
        click.echo(f"wrote {out}")
    else:
        csv.writer(sys.stdout).writerows(lines)
    click.echo("correlations: " + json.dumps(corr))
    if out and plot:
        from persbounds.plots import plot_pca_compare

        p = plot_pca_compare(rows, _plot_path(out))
        click.echo(f"wrote {p}")


if __name__ == "__main__":
    main()
