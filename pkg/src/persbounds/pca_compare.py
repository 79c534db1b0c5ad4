"""Side-by-side comparison of linear (PCA) and nonlinear shape summaries.

For each cloud and each codimension index k this computes:
  * the PCA sup-residual: the worst-case distance from the cloud to its best
    least-squares k-flat (PCA gives the L2-mean-optimal flat; we report the
    sup norm of its residuals),
  * the Kolmogorov width estimate for the same k (the sup-optimal flat),
  * the largest degree-k Cech lifespan (the topological signal the width
    bounds from above).

The output is descriptive - a table plus a rank correlation between the
linear and topological columns - and makes no pass/fail assertion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import spearmanr

from persbounds.complexes import cech
from persbounds.metric import L2, PointCloud, UnsupportedNormError
from persbounds.persistence import compute_persistence, lifespans
from persbounds.widths import kolmogorov_width


@dataclass(frozen=True)
class CompareRow:
    dataset: str
    k: int
    pca_residual: float
    kw_value: float
    kw_exactness: str
    max_lifespan: float

    def to_list(self) -> list:
        return [
            self.dataset,
            self.k,
            self.pca_residual,
            self.kw_value,
            self.kw_exactness,
            self.max_lifespan,
        ]


def pca_sup_residual(cloud: PointCloud, k: int) -> float:
    """Sup distance from the cloud to its rank-k PCA flat (through the
    centroid, spanned by the top-k principal directions)."""
    if cloud.norm != L2:
        raise UnsupportedNormError("PCA residuals are an L2 construction")
    pts = cloud.points - cloud.points.mean(axis=0)
    if k == 0:
        return float(np.linalg.norm(pts, axis=1).max())
    _, _, vt = np.linalg.svd(pts, full_matrices=False)
    basis = vt[:k]
    resid = pts - pts @ basis.T @ basis
    return float(np.linalg.norm(resid, axis=1).max())


def compare_cloud(
    cloud: PointCloud,
    name: str,
    max_k: int | None = None,
    max_dim: int = 2,
    restarts: int = 8,
) -> list[CompareRow]:
    if max_k is None:
        max_k = min(cloud.dim - 1, max_dim - 1)
    fc = cech(cloud, max_dim)
    pd = compute_persistence(fc, max_dim - 1)
    rows = []
    for k in range(max_k + 1):
        est = kolmogorov_width(cloud, k, restarts)
        lives = [life for _, _, life in lifespans(pd, k)]
        # degree-0 carries one interval per point; only the largest matters
        rows.append(
            CompareRow(
                name,
                k,
                pca_sup_residual(cloud, k),
                est.value,
                est.exactness,
                max(lives) if lives else 0.0,
            )
        )
    return rows


def correlation(rows: list[CompareRow]) -> dict[str, float]:
    """Spearman rank correlations between the three columns, across rows."""
    pca = [r.pca_residual for r in rows]
    kw = [r.kw_value for r in rows]
    life = [r.max_lifespan for r in rows]
    out = {}
    if len(rows) >= 3:
        for label, a, b in (
            ("pca_vs_lifespan", pca, life),
            ("kw_vs_lifespan", kw, life),
            ("pca_vs_kw", pca, kw),
        ):
            rho = spearmanr(a, b).statistic
            out[label] = float(rho) if math.isfinite(rho) else 0.0
    return out


CSV_HEADER = ["dataset", "k", "pca_sup_residual", "kw", "kw_exactness", "max_lifespan"]


def compare_many(
    clouds: list[tuple[str, PointCloud]], max_dim: int = 2, restarts: int = 8
) -> tuple[list[CompareRow], dict[str, float]]:
    rows: list[CompareRow] = []
    for name, cloud in clouds:
        rows += compare_cloud(cloud, name, max_dim=max_dim, restarts=restarts)
    return rows, correlation(rows)


def default_comparison(seed: int = 0) -> list[tuple[str, PointCloud]]:
    """Stock cloud list contrasting linearly-thin against topologically-rich
    shapes."""
    from persbounds import datasets

    return [
        ("circle", datasets.circle(1.0, 80, seed)),
        ("ellipse", datasets.ellipse(2.0, 0.5, 80, seed)),
        ("flat_noise", datasets.random_cloud(60, 2, seed)),
        ("tripod_loops", datasets.tripod_loops(n=90, seed=seed)),
    ]
