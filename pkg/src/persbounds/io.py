"""File formats: point-cloud CSV (header `dim=N,norm=...`), headerless
distance-matrix CSV, complex dumps (`value;v0,v1,...`), and diagram
JSON/CSV."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from persbounds.complexes import FilteredComplex, Simplex
from persbounds.metric import NORMS, FiniteMetricSpace, PointCloud
from persbounds.persistence import PersistenceDiagram


class DataFormatError(ValueError):
    pass


def save_cloud(cloud: PointCloud, path) -> None:
    lines = [f"dim={cloud.dim},norm={cloud.norm}"]
    lines += [",".join(repr(float(x)) for x in p) for p in cloud.points]
    Path(path).write_text("\n".join(lines) + "\n")


def load_cloud(path) -> PointCloud:
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise DataFormatError(f"{path}: empty file")
    header = text[0].replace(" ", "")
    fields = dict(part.split("=", 1) for part in header.split(",") if "=" in part)
    if "dim" not in fields or "norm" not in fields:
        raise DataFormatError(f"{path}: first line must be 'dim=N,norm=l2|linf|l1'")
    dim = int(fields["dim"])
    norm = fields["norm"]
    if norm not in NORMS:
        raise DataFormatError(f"{path}: unknown norm {norm!r}")
    rows = []
    for i, line in enumerate(text[1:], start=2):
        if not line.strip():
            continue
        vals = [float(v) for v in line.split(",")]
        if len(vals) != dim:
            raise DataFormatError(f"{path}:{i}: expected {dim} coordinates, got {len(vals)}")
        rows.append(vals)
    if not rows:
        raise DataFormatError(f"{path}: no points")
    return PointCloud(np.array(rows), norm)


def save_matrix(ms: FiniteMetricSpace, path) -> None:
    lines = [",".join(repr(float(x)) for x in row) for row in ms.dist]
    Path(path).write_text("\n".join(lines) + "\n")


def load_matrix(path) -> FiniteMetricSpace:
    rows = []
    for i, line in enumerate(Path(path).read_text().strip().splitlines(), start=1):
        if not line.strip():
            continue
        rows.append([float(v) for v in line.split(",")])
    if not rows or any(len(r) != len(rows) for r in rows):
        raise DataFormatError(f"{path}: expected a square headerless matrix")
    return FiniteMetricSpace(np.array(rows))


def load_input(path) -> PointCloud | FiniteMetricSpace:
    """Cloud if the file opens with a dim=/norm= header, else a matrix."""
    first = Path(path).read_text().lstrip().splitlines()[0] if Path(path).read_text().strip() else ""
    if first.replace(" ", "").startswith("dim="):
        return load_cloud(path)
    return load_matrix(path)


def save_complex(fc: FilteredComplex, path) -> None:
    lines = [f"{s.value!r};{','.join(map(str, s.vertices))}" for s in fc.simplices]
    Path(path).write_text("\n".join(lines) + "\n")


def load_complex(path, n_points=None, max_dim=None, flavor="VR") -> FilteredComplex:
    simplices = []
    for i, line in enumerate(Path(path).read_text().strip().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            value, verts = line.split(";")
            simplices.append(
                Simplex(float(value), tuple(int(v) for v in verts.split(",")))
            )
        except ValueError as exc:
            raise DataFormatError(f"{path}:{i}: bad simplex line") from exc
    if not simplices:
        raise DataFormatError(f"{path}: empty complex")
    n = n_points if n_points is not None else max(v for s in simplices for v in s.vertices) + 1
    md = max_dim if max_dim is not None else max(s.dim for s in simplices)
    mv = max(s.value for s in simplices)
    fc = FilteredComplex(tuple(simplices), n, md, mv, flavor)
    fc.validate()
    return fc


def save_core(core, path) -> None:
    """Core dump mirroring the complex format: vertex lines `v;x,y,...`
    (in index order) followed by cell lines `c;v0[,v1[,v2]]`."""
    lines = [f"v;{','.join(repr(float(x)) for x in p)}" for p in core.vertices]
    lines += [f"c;{','.join(map(str, cell))}" for cell in core.cells]
    Path(path).write_text("\n".join(lines) + "\n")


def load_core(path, certificate: str | None = None):
    from persbounds.widths import CERT_NONE, SimplicialCore

    verts, cells = [], []
    for i, line in enumerate(Path(path).read_text().strip().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            tag, payload = line.split(";")
            if tag == "v":
                verts.append([float(x) for x in payload.split(",")])
            elif tag == "c":
                cells.append(tuple(int(v) for v in payload.split(",")))
            else:
                raise ValueError(tag)
        except ValueError as exc:
            raise DataFormatError(f"{path}:{i}: bad core line") from exc
    if not verts:
        raise DataFormatError(f"{path}: core has no vertices")
    return SimplicialCore(
        np.array(verts), tuple(cells), certificate if certificate else CERT_NONE
    )


def diagram_to_json(pd: PersistenceDiagram) -> dict:
    degrees: dict[str, list[list[float]]] = {}
    for deg, b, d in pd.intervals:
        degrees.setdefault(str(deg), []).append([b, d if math.isfinite(d) else None])
    return {"degrees": degrees}


def diagram_from_json(obj: dict) -> PersistenceDiagram:
    intervals = []
    for deg, pairs in obj["degrees"].items():
        for b, d in pairs:
            intervals.append((int(deg), float(b), math.inf if d is None else float(d)))
    return PersistenceDiagram(tuple(intervals))


def save_diagram(pd: PersistenceDiagram, path, fmt: str = "json") -> None:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(diagram_to_json(pd), indent=2) + "\n")
    elif fmt == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["degree", "birth", "death"])
            for deg, b, d in pd.intervals:
                writer.writerow([deg, repr(b), "inf" if math.isinf(d) else repr(d)])
    else:
        raise DataFormatError(f"unknown diagram format {fmt!r}")


def load_diagram(path) -> PersistenceDiagram:
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return diagram_from_json(json.loads(text))
    intervals = []
    reader = csv.reader(text.strip().splitlines())
    header = next(reader)
    if header != ["degree", "birth", "death"]:
        raise DataFormatError(f"{path}: expected 'degree,birth,death' header")
    for row in reader:
        intervals.append((int(row[0]), float(row[1]), float(row[2])))
    return PersistenceDiagram(tuple(intervals))
