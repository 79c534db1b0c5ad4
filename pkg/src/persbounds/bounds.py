"""The inequality-verification pipeline: evaluates the catalog of lifespan
and extinction bounds (T1-T11) on point clouds and finite metric spaces.

Catalog (measured quantity <= bound):
  T1  Cech lifespan d-b            <= Kolmogorov width KW_k
  T2  Cech lifespan (degree k>=1)  <= flat-displacement bound on AW_{k-1} of
                                      the solid convex hull
  T3  Cech lifespan (degree k)     <= flat-displacement bound on TW_k of the
                                      solid convex hull
  T4  Cech extinction              <= convexity deficiency
  T5  Cech lifespan                <= 2 * certified uberspread upper bound
  T6  Cech lifespan                <= Hausdorff distance to a convex core
  T7  VR lifespan                  <= Katz spread
  T8  VR extinction (subsample)    <= 2 * hyperconvexity deficiency (same
                                      subsample)
  T9  VR extinction <= radius; Cech extinction <= circumradius
  T10 Cech d/b (b >= 1)            <= 1 + KW_k
  T11 stability: bottleneck <= eps (Cech), <= 2 eps (VR) under an
      eps-perturbation of the cloud
"""

from __future__ import annotations

import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from persbounds.complexes import cech, vietoris_rips
from persbounds.convex_geometry import convexity_deficiency_witness
from persbounds.metric import (
    L2,
    FiniteMetricSpace,
    PointCloud,
    circumradius,
    pairwise_distances,
    radius,
)
from persbounds.persistence import (
    PersistenceDiagram,
    bottleneck_distance,
    compute_persistence,
    extinction_time,
    lifespans,
)
from persbounds.tightspan import hyperconvexity_deficiency, maxmin_subsample
from persbounds.widths import (
    EXACT,
    HEURISTIC,
    UPPER_BOUND,
    WidthEstimate,
    kolmogorov_width,
    mst_core,
    spread,
    uberspread_upper,
)

SATISFIED = "satisfied"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"

EXACT_TOL = 1e-6

ALL_CHECKS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "T11")


@dataclass(frozen=True)
class BoundCheck:
    theorem_id: str
    degree: int
    interval: tuple[float, float] | None
    measured: float
    bound_value: float
    bound_exactness: str
    tolerance: float
    detail: str = ""

    @property
    def slack(self) -> float:
        return self.bound_value - self.measured

    @property
    def status(self) -> str:
        if self.slack >= -self.tolerance:
            return SATISFIED
        # a Heuristic bound is a lower estimate of the true bound: a deficit
        # within its uncertainty cannot prove a violation
        if self.bound_exactness == HEURISTIC:
            return INCONCLUSIVE
        return VIOLATED

    @property
    def satisfied(self) -> bool:
        return self.status == SATISFIED

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "degree": self.degree,
            "interval": list(self.interval) if self.interval else None,
            "measured": self.measured,
            "bound": self.bound_value,
            "exactness": self.bound_exactness,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "status": self.status,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerifyConfig:
    checks: tuple[str, ...] | None = None  # None: every applicable check
    max_dim: int = 2
    max_value: float | None = None
    seed: int = 0
    perturb_eps: float = 0.05
    spread_exact_limit: int = 20
    hcdef_exact_limit: int = 8
    kw_restarts: int = 8
    corrupt_deaths: bool = False  # self-test hook: inflate deaths by 10%


@dataclass
class ExperimentReport:
    dataset: dict
    diagrams: dict[str, PersistenceDiagram]
    widths: dict[str, WidthEstimate | float]
    checks: list[BoundCheck]
    timing: dict[str, float] = field(default_factory=dict)
    notes: dict[str, float] = field(default_factory=dict)

    @property
    def has_violation(self) -> bool:
        return any(c.status == VIOLATED for c in self.checks)

    def summary(self) -> dict:
        per: dict[str, dict] = {}
        for c in self.checks:
            entry = per.setdefault(
                c.theorem_id,
                {"rows": 0, "satisfied": 0, "violated": 0, "inconclusive": 0, "worst_slack": math.inf},
            )
            entry["rows"] += 1
            entry[c.status] += 1
            entry["worst_slack"] = min(entry["worst_slack"], c.slack)
        return per

    def to_json(self, include_timing: bool = True) -> dict:
        from persbounds.io import diagram_to_json

        out = {
            "dataset": self.dataset,
            "diagrams": {k: diagram_to_json(v) for k, v in self.diagrams.items()},
            "widths": {
                k: (
                    {"kind": w.kind, "k": w.k, "value": w.value, "exactness": w.exactness}
                    if isinstance(w, WidthEstimate)
                    else w
                )
                for k, w in self.widths.items()
            },
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary(),
            "notes": self.notes,
            "violations": self.has_violation,
        }
        if include_timing:
            out["timing"] = self.timing
        return out

    def to_csv_rows(self) -> list[list]:
        rows = [
            [
                "theorem",
                "degree",
                "birth",
                "death",
                "measured",
                "bound",
                "exactness",
                "slack",
                "status",
            ]
        ]
        for c in self.checks:
            b, d = c.interval if c.interval else ("", "")
            rows.append(
                [c.theorem_id, c.degree, b, d, c.measured, c.bound_value, c.bound_exactness, c.slack, c.status]
            )
        return rows


def _thread_count() -> int:
    env = os.environ.get("PB_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _hull_vertex_cloud(cloud: PointCloud) -> PointCloud:
    """Extreme points of the solid convex hull. The distance to any affine
    flat is convex, so its supremum over the solid hull is attained at an
    extreme point: flat-displacement widths of the hull equal widths of this
    vertex set, with no sampling error."""
    try:
        hull = ConvexHull(cloud.points)
        return PointCloud(cloud.points[np.sort(hull.vertices)], L2)
    except QhullError:
        return PointCloud(cloud.points, L2)


def _scale_deaths(pd: PersistenceDiagram, factor: float) -> PersistenceDiagram:
    return PersistenceDiagram(
        tuple(
            (deg, b, d * factor if math.isfinite(d) else d) for deg, b, d in pd.intervals
        )
    )


def verify_bounds(
    data: PointCloud | FiniteMetricSpace,
    config: VerifyConfig = VerifyConfig(),
    dataset_name: str = "input",
) -> ExperimentReport:
    t_start = time.perf_counter()
    is_cloud = isinstance(data, PointCloud)
    checks_wanted = config.checks
    max_degree = config.max_dim - 1

    applicable: list[str] = []
    if is_cloud:
        applicable += ["T9", "T11"]
        if data.norm == L2:
            applicable += ["T1", "T2", "T3", "T4", "T5", "T6", "T10"]
        applicable += ["T7", "T8"]
    else:
        applicable += ["T7", "T8", "T9"]
    if checks_wanted is None:
        enabled = [c for c in ALL_CHECKS if c in applicable]
    else:
        unknown = [c for c in checks_wanted if c not in ALL_CHECKS]
        if unknown:
            raise ValueError(f"unknown checks {unknown}; valid ids are {ALL_CHECKS}")
        missing = [c for c in checks_wanted if c not in applicable]
        if missing:
            raise ValueError(
                f"checks {missing} are not applicable to this input "
                f"({'point cloud' if is_cloud else 'metric space'}, "
                f"norm {data.norm if is_cloud else 'n/a'})"
            )
        enabled = list(checks_wanted)

    timing: dict[str, float] = {}
    diagrams: dict[str, PersistenceDiagram] = {}
    width_log: dict[str, WidthEstimate | float] = {}
    notes: dict[str, float] = {}
    rows: list[BoundCheck] = []

    ms = pairwise_distances(data) if is_cloud else data

    need_cech = is_cloud and any(
        c in enabled for c in ("T1", "T2", "T3", "T4", "T5", "T6", "T9", "T10", "T11")
    )
    need_vr = any(c in enabled for c in ("T7", "T9", "T11"))

    cech_pd = None
    if need_cech:
        t0 = time.perf_counter()
        crad = circumradius(data)
        fc = cech(data, config.max_dim, config.max_value)
        cech_pd = compute_persistence(fc, max_degree)
        if config.corrupt_deaths:
            cech_pd = _scale_deaths(cech_pd, 1.1)
        diagrams["cech"] = cech_pd
        timing["cech"] = time.perf_counter() - t0
    vr_pd = None
    if need_vr:
        t0 = time.perf_counter()
        fc = vietoris_rips(ms, config.max_dim, config.max_value)
        vr_pd = compute_persistence(fc, max_degree)
        if config.corrupt_deaths:
            vr_pd = _scale_deaths(vr_pd, 1.1)
        diagrams["vr"] = vr_pd
        timing["vr"] = time.perf_counter() - t0

    def cech_intervals():
        out = []
        for deg in range(max_degree + 1):
            out += [(deg, b, d) for b, d, _ in lifespans(cech_pd, deg)]
        return out

    kw_cache: dict[int, WidthEstimate] = {}

    def kw(k: int) -> WidthEstimate:
        if k not in kw_cache:
            kw_cache[k] = kolmogorov_width(data, k, config.kw_restarts)
            width_log[f"KW_{k}"] = kw_cache[k]
        return kw_cache[k]

    # ------------------------------------------------------------------ T1
    if "T1" in enabled and cech_pd is not None:
        t0 = time.perf_counter()
        for deg, b, d in cech_intervals():
            if deg >= data.dim:
                continue  # KW_k needs k < ambient dimension
            est = kw(deg)
            # Heuristic KW over-estimates the width, which only loosens the
            # bound: treat it as an upper bound with exact tolerance
            exactness = est.exactness if est.exactness == EXACT else UPPER_BOUND
            rows.append(
                BoundCheck("T1", deg, (b, d), d - b, est.value, exactness, EXACT_TOL, "lifespan <= KW_k")
            )
        timing["T1"] = time.perf_counter() - t0

    # -------------------------------------------------------------- T2, T3
    if cech_pd is not None and ("T2" in enabled or "T3" in enabled):
        t0 = time.perf_counter()
        conv_cloud = _hull_vertex_cloud(data)
        flat_cache: dict[int, WidthEstimate] = {}

        def conv_flat(k: int) -> WidthEstimate:
            if k not in flat_cache:
                flat_cache[k] = kolmogorov_width(conv_cloud, k, config.kw_restarts)
                width_log[f"conv_flat_{k}"] = flat_cache[k]
            return flat_cache[k]

        for deg, b, d in cech_intervals():
            if "T2" in enabled and 1 <= deg and deg - 1 < data.dim:
                est = conv_flat(deg - 1)
                ex = est.exactness if est.exactness == EXACT else UPPER_BOUND
                rows.append(
                    BoundCheck(
                        "T2",
                        deg,
                        (b, d),
                        d - b,
                        est.value,
                        ex,
                        EXACT_TOL,
                        "lifespan <= flat displacement of solid hull (AW_{k-1} bound)",
                    )
                )
            if "T3" in enabled and deg < data.dim:
                est = conv_flat(deg)
                ex = est.exactness if est.exactness == EXACT else UPPER_BOUND
                rows.append(
                    BoundCheck(
                        "T3",
                        deg,
                        (b, d),
                        d - b,
                        est.value,
                        ex,
                        EXACT_TOL,
                        "lifespan <= flat displacement of solid hull (TW_k bound)",
                    )
                )
        timing["T2T3"] = time.perf_counter() - t0

    # ------------------------------------------------------------------ T4
    if "T4" in enabled and cech_pd is not None:
        t0 = time.perf_counter()
        cdef_val, _w, cdef_exactness = convexity_deficiency_witness(data, config.seed)
        width_log["cdef"] = cdef_val
        ext = extinction_time(cech_pd)
        tol = EXACT_TOL if cdef_exactness == EXACT else EXACT_TOL + 0.05 * cdef_val
        rows.append(
            BoundCheck(
                "T4",
                -1,
                None,
                ext,
                cdef_val,
                cdef_exactness,
                tol,
                "Cech extinction <= convexity deficiency",
            )
        )
        timing["T4"] = time.perf_counter() - t0

    # ------------------------------------------------------------------ T5
    if "T5" in enabled and cech_pd is not None:
        t0 = time.perf_counter()
        core = mst_core(data)
        est = uberspread_upper(data, core)
        width_log["uberspread"] = est
        for deg, b, d in cech_intervals():
            rows.append(
                BoundCheck(
                    "T5",
                    deg,
                    (b, d),
                    d - b,
                    2.0 * est.value,
                    UPPER_BOUND,
                    EXACT_TOL + 2.0 * est.slack,
                    "lifespan <= 2 * certified uberspread bound (MST core)",
                )
            )
        timing["T5"] = time.perf_counter() - t0

    # ------------------------------------------------------------------ T6
    if "T6" in enabled and cech_pd is not None and data.dim == 2:
        t0 = time.perf_counter()
        # convex core = solid hull; its Hausdorff distance to the cloud is
        # exactly the convexity deficiency
        cdef_val, _w, _e = convexity_deficiency_witness(data, config.seed)
        width_log["hull_core_dh"] = cdef_val
        for deg, b, d in cech_intervals():
            rows.append(
                BoundCheck(
                    "T6",
                    deg,
                    (b, d),
                    d - b,
                    cdef_val,
                    EXACT,
                    EXACT_TOL,
                    "lifespan <= Hausdorff distance to the solid hull (convex core)",
                )
            )
        timing["T6"] = time.perf_counter() - t0

    # ------------------------------------------------------------------ T7
    if "T7" in enabled and vr_pd is not None:
        t0 = time.perf_counter()
        est = spread(ms, config.spread_exact_limit)
        width_log["spread"] = est
        tol = EXACT_TOL
        for deg in range(max_degree + 1):
            for b, d, life in lifespans(vr_pd, deg):
                rows.append(
                    BoundCheck(
                        "T7",
                        deg,
                        (b, d),
                        life,
                        est.value,
                        est.exactness,
                        tol,
                        "VR lifespan <= spread",
                    )
                )
        timing["T7"] = time.perf_counter() - t0

    # ------------------------------------------------------------------ T8
    if "T8" in enabled:
        t0 = time.perf_counter()
        sub = maxmin_subsample(ms, config.hcdef_exact_limit)
        ms_sub = FiniteMetricSpace(ms.dist[np.ix_(sub, sub)], validate=False)
        hc_val, _wit, hc_exact = hyperconvexity_deficiency(
            ms_sub, exact_limit=config.hcdef_exact_limit, seed=config.seed
        )
        width_log["hcdef_subsample"] = hc_val
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fc_sub = vietoris_rips(ms_sub, min(config.max_dim, ms_sub.n - 1))
            pd_sub = compute_persistence(fc_sub, min(max_degree, ms_sub.n - 2))
        if config.corrupt_deaths:
            pd_sub = _scale_deaths(pd_sub, 1.1)
        xi_sub = extinction_time(pd_sub)
        notes["hcdef_over_radius"] = hc_val / max(radius(ms_sub), 1e-30)
        rows.append(
            BoundCheck(
                "T8",
                -1,
                None,
                xi_sub,
                2.0 * hc_val,
                hc_exact,
                EXACT_TOL,
                f"VR extinction <= 2*hcdef on a {ms_sub.n}-point farthest-point subsample",
            )
        )
        timing["T8"] = time.perf_counter() - t0

    # ------------------------------------------------------------------ T9
    if "T9" in enabled:
        t0 = time.perf_counter()
        if vr_pd is not None:
            rows.append(
                BoundCheck(
                    "T9",
                    -1,
                    None,
                    extinction_time(vr_pd),
                    radius(ms),
                    EXACT,
                    EXACT_TOL,
                    "VR extinction <= radius",
                )
            )
        if cech_pd is not None:
            rows.append(
                BoundCheck(
                    "T9",
                    -1,
                    None,
                    extinction_time(cech_pd),
                    circumradius(data),
                    EXACT,
                    EXACT_TOL,
                    "Cech extinction <= circumradius",
                )
            )
        timing["T9"] = time.perf_counter() - t0

    # ----------------------------------------------------------------- T10
    if "T10" in enabled and cech_pd is not None:
        t0 = time.perf_counter()
        for deg, b, d in cech_intervals():
            if b < 1.0 or deg >= data.dim:
                continue
            est = kw(deg)
            exactness = est.exactness if est.exactness == EXACT else UPPER_BOUND
            rows.append(
                BoundCheck(
                    "T10",
                    deg,
                    (b, d),
                    d / b,
                    1.0 + est.value,
                    exactness,
                    EXACT_TOL,
                    "d/b <= 1 + KW_k for births >= 1",
                )
            )
        timing["T10"] = time.perf_counter() - t0

    # ----------------------------------------------------------------- T11
    if "T11" in enabled and is_cloud:
        t0 = time.perf_counter()
        eps = config.perturb_eps
        rng = np.random.default_rng(config.seed + 7)
        noise = rng.normal(size=data.points.shape)
        norms = np.linalg.norm(noise, axis=1, keepdims=True)
        radii = rng.uniform(0, eps, size=(data.n, 1))
        pert = PointCloud(data.points + noise / np.maximum(norms, 1e-30) * radii, data.norm)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if cech_pd is not None:
                pd2 = compute_persistence(
                    cech(pert, config.max_dim, config.max_value), max_degree
                )
                for deg in range(max_degree + 1):
                    bd = bottleneck_distance(cech_pd, pd2, deg)
                    rows.append(
                        BoundCheck(
                            "T11",
                            deg,
                            None,
                            bd,
                            eps,
                            EXACT,
                            1e-9,
                            "Cech bottleneck <= perturbation size",
                        )
                    )
            if vr_pd is not None:
                ms2 = pairwise_distances(pert)
                pd2 = compute_persistence(
                    vietoris_rips(ms2, config.max_dim, config.max_value), max_degree
                )
                for deg in range(max_degree + 1):
                    bd = bottleneck_distance(vr_pd, pd2, deg)
                    rows.append(
                        BoundCheck(
                            "T11",
                            deg,
                            None,
                            bd,
                            2.0 * eps,
                            EXACT,
                            1e-9,
                            "VR bottleneck <= twice the perturbation size",
                        )
                    )
        timing["T11"] = time.perf_counter() - t0

    timing["total"] = time.perf_counter() - t_start
    dataset = {
        "name": dataset_name,
        "kind": "cloud" if is_cloud else "metric_space",
        "n": data.n,
        "norm": data.norm if is_cloud else None,
        "dim": data.dim if is_cloud else None,
        "checks": enabled,
        "seed": config.seed,
    }
    return ExperimentReport(dataset, diagrams, width_log, rows, timing, notes)


def paper_suite(seed: int = 0) -> list[tuple[str, object, VerifyConfig]]:
    """Bundled acceptance datasets exercising every catalog entry."""
    from persbounds import datasets

    tripod = datasets.tripod_loops(seed=seed)
    return [
        ("circle", datasets.circle(1.0, 120, seed), VerifyConfig(checks=("T1", "T4", "T9"), seed=seed)),
        (
            "ellipse",
            datasets.ellipse(2.0, 1.0, 150, seed),
            VerifyConfig(checks=("T1", "T2", "T3", "T10", "T11"), seed=seed),
        ),
        (
            "linf_sphere",
            pairwise_distances(datasets.linf_sphere(80, seed)),
            VerifyConfig(checks=("T7", "T8", "T9"), hcdef_exact_limit=12, seed=seed),
        ),
        (
            "tripod_loops",
            tripod,
            VerifyConfig(checks=("T1", "T4", "T5", "T6", "T9"), seed=seed),
        ),
        (
            "random_cloud",
            datasets.random_cloud(20, 2, seed),
            VerifyConfig(checks=("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "T11"), seed=seed),
        ),
    ]


def run_suite(seed: int = 0, parallel: bool = True) -> list[ExperimentReport]:
    jobs = paper_suite(seed)

    def run(job):
        name, data, cfg = job
        return verify_bounds(data, cfg, dataset_name=name)

    if parallel and _thread_count() > 1:
        with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
            return list(pool.map(run, jobs))
    return [run(j) for j in jobs]
