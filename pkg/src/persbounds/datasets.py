"""Deterministic dataset generators: parametric shapes the bound-verification
suite exercises, plus random clouds and random tree metrics."""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse.csgraph import shortest_path

from persbounds.metric import L2, LINF, FiniteMetricSpace, PointCloud

SHAPES = (
    "circle",
    "ellipse",
    "ellipsoid",
    "linf_sphere",
    "tripod_loops",
    "torus",
    "random_cloud",
    "random_tree_metric",
    "ellipsoid_handles",
)


def circle(r: float = 1.0, n: int = 120, seed: int = 0) -> PointCloud:
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0, 2 * math.pi)
    th = np.linspace(0, 2 * math.pi, n, endpoint=False) + phase
    return PointCloud(r * np.c_[np.cos(th), np.sin(th)], L2)


def ellipse(a: float = 2.0, b: float = 1.0, n: int = 150, seed: int = 0) -> PointCloud:
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0, 2 * math.pi)
    th = np.linspace(0, 2 * math.pi, n, endpoint=False) + phase
    return PointCloud(np.c_[a * np.cos(th), b * np.sin(th)], L2)


def _fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return np.c_[r * np.cos(phi), r * np.sin(phi), z]


def ellipsoid(
    a: float = 3.0, b: float = 2.0, c: float = 1.0, n: int = 200, seed: int = 0
) -> PointCloud:
    """Points exactly on the ellipsoid surface (scaled sphere sample)."""
    sph = _fibonacci_sphere(n)
    return PointCloud(sph * np.array([a, b, c]), L2)


def linf_sphere(n: int = 80, seed: int = 0) -> PointCloud:
    """Uniform sample of the unit sup-norm sphere in the plane (the boundary
    of the square [-1, 1]^2), carried with the Linf norm."""
    t = np.linspace(0, 8.0, n, endpoint=False)  # perimeter parameter
    pts = np.empty((n, 2))
    for i, s in enumerate(t):
        side, u = int(s // 2), s % 2
        if side == 0:
            pts[i] = (-1.0 + u, -1.0)
        elif side == 1:
            pts[i] = (1.0, -1.0 + u)
        elif side == 2:
            pts[i] = (1.0 - u, 1.0)
        else:
            pts[i] = (-1.0, 1.0 - u)
    return PointCloud(pts, LINF)


def tripod_loops(
    leg: float = 1.0, loop_r: float = 0.35, n: int = 120, seed: int = 0
) -> PointCloud:
    """Three legs from the origin with a small circle attached at each tip:
    small displacement to a tree, sizeable degree-1 lifespans."""
    angles = np.array([math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3])
    n_leg = n // 6
    n_loop = (n - 3 * n_leg) // 3
    pts = [np.zeros((1, 2))]
    for ang in angles:
        tip = leg * np.array([math.cos(ang), math.sin(ang)])
        t = np.linspace(0, 1, n_leg + 1, endpoint=False)[1:, None]  # skip shared origin
        pts.append(t * tip)
        center = tip + loop_r * np.array([math.cos(ang), math.sin(ang)])
        th = np.linspace(0, 2 * math.pi, n_loop, endpoint=False)
        pts.append(center + loop_r * np.c_[np.cos(th), np.sin(th)])
    return PointCloud(np.vstack(pts), L2)


def torus(
    R: float = 2.0, r: float = 0.7, n: int = 400, seed: int = 0
) -> PointCloud:
    rng = np.random.default_rng(seed)
    u = rng.uniform(0, 2 * math.pi, n)
    v = rng.uniform(0, 2 * math.pi, n)
    x = (R + r * np.cos(v)) * np.cos(u)
    y = (R + r * np.cos(v)) * np.sin(u)
    z = r * np.sin(v)
    return PointCloud(np.c_[x, y, z], L2)


def random_cloud(n: int = 25, dim: int = 2, seed: int = 0, norm: str = L2) -> PointCloud:
    rng = np.random.default_rng(seed)
    return PointCloud(rng.uniform(-1.0, 1.0, size=(n, dim)), norm)


def random_tree_metric(n: int = 10, seed: int = 0) -> FiniteMetricSpace:
    """Shortest-path metric of a random tree with random positive edge
    lengths (a random attachment tree on n nodes)."""
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n))
    for v in range(1, n):
        parent = int(rng.integers(0, v))
        length = float(rng.uniform(0.2, 1.0))
        w[v, parent] = w[parent, v] = length
    d = shortest_path(w, method="D", directed=False)
    d = (d + d.T) / 2.0  # Dijkstra can be asymmetric at float rounding level
    return FiniteMetricSpace(d)


def ellipsoid_handles(
    a: float = 3.0,
    b: float = 2.0,
    c: float = 1.0,
    n: int = 400,
    handles: int = 1,
    seed: int = 0,
) -> PointCloud:
    """Surgery at sampling level: remove the two polar cap samples of each
    handle site and glue in a sampled half-torus tube connecting the holes."""
    base = ellipsoid(a, b, c, n, seed).points
    rng = np.random.default_rng(seed + 1)
    pts = [base]
    cap_r = 0.35 * c
    for h in range(handles):
        # handle straddles the +z / -z poles at an x-station per handle
        x0 = (h - (handles - 1) / 2.0) * 0.8 * a / max(handles, 1)
        z0 = c * math.sqrt(max(1 - (x0 / a) ** 2, 0.05))
        top = np.array([x0, 0.0, z0])
        bot = np.array([x0, 0.0, -z0])
        pts = [
            arr[
                (np.linalg.norm(arr - top, axis=1) > cap_r)
                & (np.linalg.norm(arr - bot, axis=1) > cap_r)
            ]
            for arr in pts
        ]
        # tube around the half-ellipse arc from top to bottom bulging
        # outward in +x past the surface
        m = max(n // 4, 80)
        theta = rng.uniform(-math.pi / 2, math.pi / 2, m)  # arc parameter
        phi = rng.uniform(0, 2 * math.pi, m)  # ring angle
        ring_r = 0.8 * cap_r
        bulge = 1.2 * a - x0
        arc = np.c_[x0 + bulge * np.cos(theta), np.zeros(m), z0 * np.sin(theta)]
        # unit normal to the arc within the y=0 plane
        tang = np.c_[-bulge * np.sin(theta), np.zeros(m), z0 * np.cos(theta)]
        tang /= np.linalg.norm(tang, axis=1, keepdims=True)
        norm1 = np.c_[tang[:, 2], np.zeros(m), -tang[:, 0]]
        tube = (
            arc
            + ring_r * np.cos(phi)[:, None] * norm1
            + ring_r * np.sin(phi)[:, None] * np.array([0.0, 1.0, 0.0])
        )
        pts.append(tube)
    return PointCloud(np.vstack(pts), L2)


def generate(shape: str, seed: int = 0, **params):
    """Dispatch by shape name; deterministic for a fixed seed."""
    table = {
        "circle": circle,
        "ellipse": ellipse,
        "ellipsoid": ellipsoid,
        "linf_sphere": linf_sphere,
        "tripod_loops": tripod_loops,
        "torus": torus,
        "random_cloud": random_cloud,
        "random_tree_metric": random_tree_metric,
        "ellipsoid_handles": ellipsoid_handles,
    }
    if shape not in table:
        raise ValueError(f"unknown shape {shape!r}; choose from {sorted(table)}")
    return table[shape](seed=seed, **params)
