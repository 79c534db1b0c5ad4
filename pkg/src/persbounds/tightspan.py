"""Tight-span (injective hull) geometry of finite metric spaces.

A point of the tight span E(X) is a function f with
f(x) + f(x') >= d(x, x') for all pairs and pointwise minimality, which is
equivalent to the extremality identity f(x) = max_x' (d(x, x') - f(x')).
Since X embeds isometrically in E(X) and ||d(x,.) - f||_inf = f(x) on E(X),
the hyperconvexity deficiency d_H(X, E(X)) collapses to

    hcdef(X) = max_{f in E(X)} min_x f(x)

(the directed distance from X into E(X) is 0; for the other direction the
nearest Kuratowski function to f is the minimizing x). This single max-min
objective is what the solvers below optimize.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import LinearConstraint, linprog, milp
from scipy.optimize import Bounds as OptBounds

from persbounds.metric import FiniteMetricSpace, TOLERANCE

EXACT = "Exact"
HEURISTIC = "Heuristic"


@dataclass(frozen=True)
class TightSpanPoint:
    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.ndim != 1 or np.any(f < -TOLERANCE):
            raise ValueError("tight-span point must be a nonnegative vector")
        f = np.maximum(f, 0.0)
        f.setflags(write=False)
        object.__setattr__(self, "f", f)


def extremal_map(f: np.ndarray, ms: FiniteMetricSpace) -> np.ndarray:
    """T(f)(x) = max_x' (d(x, x') - f(x')); fixed points are exactly E(X)."""
    return (ms.dist - np.asarray(f, float)[None, :]).max(axis=1)


def tight_span_membership(f, ms: FiniteMetricSpace, tol: float = TOLERANCE) -> bool:
    """True iff f is feasible (f(x) + f(x') >= d) and extremal within tol."""
    f = np.asarray(f, dtype=float)
    if f.shape != (ms.n,):
        raise ValueError(f"length mismatch: got {f.shape}, need ({ms.n},)")
    feas = f[:, None] + f[None, :] >= ms.dist - tol
    if not np.all(feas):
        return False
    return bool(np.max(np.abs(f - extremal_map(f, ms))) <= tol)


def project_to_tight_span(f, ms: FiniteMetricSpace, iters: int = 4000) -> np.ndarray:
    """Send an arbitrary nonnegative vector onto E(X): first raise it into
    the feasible set Delta(X), then iterate the averaging map
    f <- (f + T(f)) / 2, which fixes E(X) and contracts toward it."""
    f = np.maximum(np.asarray(f, dtype=float), 0.0)
    viol = ms.dist - (f[:, None] + f[None, :])
    bump = np.maximum(viol.max(axis=1) / 2.0, 0.0)
    f = f + bump.max() if bump.max() > 0 else f
    for _ in range(iters):
        g = extremal_map(f, ms)
        nxt = (f + g) / 2.0
        if np.max(np.abs(nxt - f)) < 1e-14:
            f = nxt
            break
        f = nxt
    return np.maximum(f, 0.0)


def _hcdef_milp(ms: FiniteMetricSpace) -> tuple[float, np.ndarray]:
    """Exact max-min over E(X) as a mixed-integer LP: maximize t subject to
    f in Delta(X), f >= t, and per-point tightness (some x' with
    f(x) + f(x') = d(x, x')) enforced with big-M binaries."""
    d = ms.dist
    n = ms.n
    diam = float(d.max())
    M = 2.0 * diam + 1.0
    # variables: f (n), t (1), z (n*n)
    nv = n + 1 + n * n

    def zi(x, y):
        return n + 1 + x * n + y

    rows, lbs, ubs = [], [], []

    def add(coeffs: dict[int, float], lb: float, ub: float):
        row = np.zeros(nv)
        for i, c in coeffs.items():
            row[i] = c
        rows.append(row)
        lbs.append(lb)
        ubs.append(ub)

    for x in range(n):
        for y in range(x + 1, n):
            add({x: 1.0, y: 1.0}, d[x, y], math.inf)  # feasibility
    for x in range(n):
        add({x: 1.0, n: -1.0}, 0.0, math.inf)  # f(x) >= t
        add({zi(x, y): 1.0 for y in range(n)}, 1.0, math.inf)  # cover
        for y in range(n):
            # z=1 forces tightness: f(x) + f(y) - d <= M (1 - z)
            coeffs = {zi(x, y): M}
            coeffs[x] = coeffs.get(x, 0.0) + 1.0
            coeffs[y] = coeffs.get(y, 0.0) + 1.0
            add(coeffs, -math.inf, float(d[x, y]) + M)

    c = np.zeros(nv)
    c[n] = -1.0  # maximize t
    integrality = np.zeros(nv)
    integrality[n + 1 :] = 1
    lo = np.zeros(nv)
    hi = np.full(nv, diam if diam > 0 else 1.0)
    hi[n + 1 :] = 1
    res = milp(
        c,
        constraints=LinearConstraint(np.array(rows), np.array(lbs), np.array(ubs)),
        integrality=integrality,
        bounds=OptBounds(lo, hi),
    )
    if not res.success:
        raise RuntimeError(f"tight-span MILP failed: {res.message}")
    f = res.x[:n]
    # polish onto E(X) to remove solver tolerance noise
    f = project_to_tight_span(f, ms)
    return float(f.min()), f


def _covering_edge_sets(n: int):
    """Edge sets (including loops) on n points covering every vertex."""
    edges = [(x, y) for x in range(n) for y in range(x, n)]
    for mask in itertools.product((0, 1), repeat=len(edges)):
        chosen = [e for e, m in zip(edges, mask) if m]
        covered = {v for e in chosen for v in e}
        if len(covered) == n:
            yield chosen


def _hcdef_enumerate(ms: FiniteMetricSpace) -> float:
    """Cross-check path for tiny spaces: enumerate tightness patterns and
    solve an LP per pattern. Exponential; used only for n <= 5."""
    d = ms.dist
    n = ms.n
    if n > 5:
        raise ValueError("pattern enumeration limited to n <= 5")
    best = 0.0
    diam = float(d.max())
    for pattern in _covering_edge_sets(n):
        # max t s.t. f(x)+f(y) = d on pattern, >= d otherwise, f >= t >= 0
        nv = n + 1
        a_eq, b_eq = [], []
        a_ub, b_ub = [], []
        pat = set(pattern)
        for x in range(n):
            for y in range(x, n):
                row = np.zeros(nv)
                row[x] += 1
                row[y] += 1
                if (x, y) in pat:
                    a_eq.append(row)
                    b_eq.append(d[x, y])
                else:
                    a_ub.append(-row)
                    b_ub.append(-d[x, y])
        for x in range(n):
            row = np.zeros(nv)
            row[x] = -1
            row[n] = 1
            a_ub.append(row)
            b_ub.append(0.0)
        c = np.zeros(nv)
        c[n] = -1.0
        res = linprog(
            c,
            A_ub=np.array(a_ub) if a_ub else None,
            b_ub=np.array(b_ub) if b_ub else None,
            A_eq=np.array(a_eq) if a_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            bounds=[(0, diam if diam > 0 else 1.0)] * n + [(0, None)],
        )
        if res.status == 0:
            best = max(best, float(res.x[n]))
    return best


def _hcdef_heuristic(ms: FiniteMetricSpace, seed: int = 0) -> tuple[float, np.ndarray]:
    """Lower estimate: project structured and random starts onto E(X) and
    keep the best min f."""
    rng = np.random.default_rng(seed)
    d = ms.dist
    n = ms.n
    rad = float(np.min(np.max(d, axis=1)))
    starts = [np.full(n, rad), d.max(axis=1) / 2.0]
    starts.extend(d[i] for i in range(min(n, 10)))
    for _ in range(40):
        starts.append(rng.uniform(0, d.max(), size=n))
    best_val, best_f = 0.0, project_to_tight_span(starts[0], ms)
    for f0 in starts:
        f = project_to_tight_span(f0, ms)
        v = float(f.min())
        if v > best_val:
            best_val, best_f = v, f
    return best_val, best_f


def hyperconvexity_deficiency(
    ms: FiniteMetricSpace, exact_limit: int = 8, seed: int = 0
) -> tuple[float, TightSpanPoint, str]:
    """(hcdef, witness in E(X), exactness). Exact via MILP for
    n <= exact_limit; otherwise a Heuristic lower estimate."""
    if ms.n == 1:
        return 0.0, TightSpanPoint(np.zeros(1)), EXACT
    if ms.n <= exact_limit:
        val, f = _hcdef_milp(ms)
        exactness = EXACT
    else:
        val, f = _hcdef_heuristic(ms, seed)
        exactness = HEURISTIC
    if not tight_span_membership(f, ms, tol=1e-7):
        raise RuntimeError("hcdef witness failed the tight-span membership check")
    return val, TightSpanPoint(f), exactness


def maxmin_subsample(ms: FiniteMetricSpace, size: int, start: int = 0) -> np.ndarray:
    """Deterministic farthest-point subsample indices (for evaluating both
    sides of an inequality on the same small subspace)."""
    if size >= ms.n:
        return np.arange(ms.n)
    chosen = [start]
    cov = ms.dist[start].copy()
    while len(chosen) < size:
        nxt = int(np.argmax(cov))
        chosen.append(nxt)
        cov = np.minimum(cov, ms.dist[nxt])
    return np.array(sorted(chosen))
