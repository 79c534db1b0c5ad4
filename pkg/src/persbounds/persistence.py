"""Z2 persistent homology: boundary-matrix reduction with clearing,
a dense rank-based oracle, bottleneck distance, extinction times.

Degree 0 is reduced: the single essential component (the unpaired vertex
of minimal filtration value) emits no interval.
"""

from __future__ import annotations

import math
import warnings
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from persbounds.complexes import FilteredComplex, Simplex
from persbounds.metric import TOLERANCE

INF = math.inf


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (degree, birth, death) intervals; death may be +inf for
    essential classes surviving past the filtration cap."""

    intervals: tuple[tuple[int, float, float], ...]

    def __post_init__(self):
        ivs = tuple(sorted(self.intervals))
        for deg, b, d in ivs:
            if deg < 0 or b > d:
                raise ValueError(f"bad interval ({deg}, {b}, {d})")
            if b == d:
                raise ValueError("zero-length intervals must be dropped")
        object.__setattr__(self, "intervals", ivs)

    def in_degree(self, degree: int) -> list[tuple[float, float]]:
        return [(b, d) for deg, b, d in self.intervals if deg == degree]

    def finite(self) -> "PersistenceDiagram":
        return PersistenceDiagram(
            tuple(iv for iv in self.intervals if math.isfinite(iv[2]))
        )

    def essential_count(self) -> int:
        return sum(1 for iv in self.intervals if math.isinf(iv[2]))

    @property
    def degrees(self) -> list[int]:
        return sorted({deg for deg, _, _ in self.intervals})

    def scaled(self, factor: float) -> "PersistenceDiagram":
        return PersistenceDiagram(
            tuple((deg, b * factor, d * factor) for deg, b, d in self.intervals)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return Counter(self.intervals) == Counter(other.intervals)

    def __hash__(self):
        return hash(tuple(sorted(Counter(self.intervals).items())))


def _cofacet_masks(sims: list[Simplex], cofs: list[Simplex], d: int) -> list[int]:
    """Bitmask per dim-d simplex over its cofacets, bit = m-1-position so the
    highest set bit (the reduction pivot) is the earliest cofacet."""
    m = len(cofs)
    idx = {s.vertices: i for i, s in enumerate(sims)}
    if d == 1 and m > 20000:
        # vectorized path for the edge/triangle round
        n = max(v for s in sims for v in s.vertices) + 1
        eid = np.full((n, n), -1, dtype=np.int64)
        for i, s in enumerate(sims):
            a, b = s.vertices
            eid[a, b] = i
        tri = np.array([t.vertices for t in cofs], dtype=np.int64)
        owners = np.concatenate(
            [
                eid[tri[:, 0], tri[:, 1]],
                eid[tri[:, 0], tri[:, 2]],
                eid[tri[:, 1], tri[:, 2]],
            ]
        )
        tpos = np.tile(np.arange(m, dtype=np.int64), 3)
        order = np.argsort(owners, kind="stable")
        owners = owners[order]
        tpos = tpos[order]
        bounds = np.searchsorted(owners, np.arange(len(sims) + 1))
        masks = [0] * len(sims)
        vec = np.zeros(m, dtype=bool)
        for e in range(len(sims)):
            a, b = bounds[e], bounds[e + 1]
            if a == b:
                continue
            vec[:] = False
            vec[m - 1 - tpos[a:b]] = True
            masks[e] = int.from_bytes(
                np.packbits(vec, bitorder="little").tobytes(), "little"
            )
        return masks
    masks = [0] * len(sims)
    for pos, t in enumerate(cofs):
        bit = 1 << (m - 1 - pos)
        for facet in combinations(t.vertices, d + 1):
            masks[idx[facet]] |= bit
    return masks


def compute_persistence(fc: FilteredComplex, max_degree: int) -> PersistenceDiagram:
    """Persistence pairs via Z2 column reduction of the coboundary matrix
    (the anti-transpose of the boundary matrix, which yields identical
    pairings) with the clearing optimization, columns as int bitmasks."""
    if max_degree >= fc.max_dim:
        raise ValueError(
            f"need simplices of dimension {max_degree + 1}: "
            f"degree-{max_degree} deaths require them (complex max_dim {fc.max_dim})"
        )
    top = max_degree + 1
    by_dim: list[list[Simplex]] = [[] for _ in range(top + 1)]
    for s in fc.simplices:
        if len(s.vertices) - 1 <= top:
            by_dim[len(s.vertices) - 1].append(s)

    intervals: list[tuple[int, float, float]] = []
    essential_warn = 0
    cleared: set[int] = set()  # positions in by_dim[d] paired as deaths below

    for d in range(0, max_degree + 1):
        sims = by_dim[d]
        cofs = by_dim[d + 1]
        m = len(cofs)
        masks = _cofacet_masks(sims, cofs, d)
        cols: dict[int, int] = {}  # pivot bit -> reduced column
        next_cleared: set[int] = set()
        essential: list[int] = []
        cols_get = cols.get
        for j in range(len(sims) - 1, -1, -1):
            if j in cleared:
                continue
            col = masks[j]
            while col:
                piv = col.bit_length() - 1
                other = cols_get(piv)
                if other is None:
                    break
                col ^= other
            if col:
                piv = col.bit_length() - 1
                cols[piv] = col
                tpos = m - 1 - piv
                next_cleared.add(tpos)
                b = sims[j].value
                dv = cofs[tpos].value
                if dv > b:
                    intervals.append((d, b, dv))
            else:
                essential.append(j)
        cleared = next_cleared
        if d == 0:
            # reduced homology: the essential component of minimal birth
            # value emits no interval
            if essential:
                drop = min(essential, key=lambda i: (sims[i].value, i))
                for j in essential:
                    if j != drop:
                        intervals.append((0, sims[j].value, INF))
                        essential_warn += 1
        else:
            for j in essential:
                intervals.append((d, sims[j].value, INF))
                essential_warn += 1
    if essential_warn:
        warnings.warn(
            f"{essential_warn} essential class(es) survive the filtration cap "
            "(death = inf); raise max_value/max_dim to resolve them",
            stacklevel=2,
        )
    return PersistenceDiagram(tuple(intervals))


# ---------------------------------------------------------------------------
# brute-force oracle: persistent Betti numbers by dense Z2 rank computation


def _gf2_rank(rows: list[int]) -> int:
    """Rank of a set of bitmask vectors over GF(2)."""
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            p = v.bit_length() - 1
            if p in pivots:
                v ^= pivots[p]
            else:
                pivots[p] = v
                break
    return len(pivots)


def brute_force_persistence(fc: FilteredComplex, max_degree: int) -> PersistenceDiagram:
    """Independent oracle: interval multiplicities from persistent Betti
    ranks via inclusion-exclusion over critical values.

    beta_k(r, s) = rank[B_{k+1}(s) + C_k(r)-units] - rank d_k(r) - rank B_{k+1}(s),
    with an augmentation row making degree 0 reduced.
    """
    if max_degree >= fc.max_dim:
        raise ValueError(
            f"need simplices of dimension {max_degree + 1}: "
            f"degree-{max_degree} deaths require them (complex max_dim {fc.max_dim})"
        )
    if len(fc.simplices) > 2000:
        raise ValueError("oracle size cap: at most 2000 simplices")
    top = max_degree + 1
    by_dim: list[list[Simplex]] = [[] for _ in range(top + 1)]
    for s in fc.simplices:
        if s.dim <= top:
            by_dim[s.dim].append(s)
    index = [{s.vertices: i for i, s in enumerate(sims)} for sims in by_dim]
    crit = sorted({s.value for s in fc.simplices if s.dim <= top})
    m = len(crit)

    # boundary columns per dimension, and per-dimension value arrays
    bnd: list[list[int]] = [[] for _ in range(top + 1)]
    vals: list[list[float]] = [[] for _ in range(top + 1)]
    for d in range(top + 1):
        for s in by_dim[d]:
            vals[d].append(s.value)
            if d == 0:
                bnd[0].append(1)  # augmentation row: vertex -> point
            else:
                col = 0
                for facet in combinations(s.vertices, d):
                    col ^= 1 << index[d - 1][facet]
                bnd[d].append(col)

    def count_at(d: int, value: float) -> int:
        return bisect_right(vals[d], value) if vals[d] else 0

    rank_cache: dict[tuple[int, int], int] = {}

    def rank_bnd(d: int, vi: int) -> int:
        """rank of the boundary matrix of dim-d simplices present at crit[vi]."""
        key = (d, vi)
        if key not in rank_cache:
            c = count_at(d, crit[vi])
            rank_cache[key] = _gf2_rank(bnd[d][:c])
        return rank_cache[key]

    beta_cache: dict[tuple[int, int, int], int] = {}

    def beta(k: int, i: int, j: int) -> int:
        """Reduced persistent Betti: rank of H_k(K_{crit[i]}) -> H_k(K_{crit[j]})."""
        if i < 0:
            return 0
        key = (k, i, j)
        if key in beta_cache:
            return beta_cache[key]
        ck_r = count_at(k, crit[i])
        rank_dk_r = _gf2_rank(bnd[k][:ck_r])
        ck1_s = count_at(k + 1, crit[j]) if k + 1 <= top else 0
        b_cols = bnd[k + 1][:ck1_s] if k + 1 <= top else []
        rank_b = _gf2_rank(b_cols)
        # shift unit vectors past the augmentation row is unnecessary: rows of
        # C_k units and of d_{k+1} columns live in the same k-simplex index
        # space; for k = 0 the boundary d_0 is the augmentation row only.
        joint = _gf2_rank(b_cols + [1 << t for t in range(ck_r)])
        val = joint - rank_b - rank_dk_r
        beta_cache[key] = val
        return val

    intervals: list[tuple[int, float, float]] = []
    for k in range(max_degree + 1):
        for i in range(m):
            for j in range(i + 1, m):
                mult = (
                    beta(k, i, j - 1)
                    - beta(k, i, j)
                    - beta(k, i - 1, j - 1)
                    + beta(k, i - 1, j)
                )
                for _ in range(mult):
                    intervals.append((k, crit[i], crit[j]))
            ess = beta(k, i, m - 1) - beta(k, i - 1, m - 1)
            for _ in range(ess):
                intervals.append((k, crit[i], INF))
    return PersistenceDiagram(tuple(intervals))


# ---------------------------------------------------------------------------
# bottleneck distance


def _bipartite_match_feasible(costs, left_n, right_n, c) -> bool:
    """Perfect matching in the bipartite graph of pairs with cost <= c."""
    adj = [[j for j in range(right_n) if costs[i][j] <= c] for i in range(left_n)]
    match_r = [-1] * right_n

    def augment(i, seen):
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_r[j] == -1 or augment(match_r[j], seen):
                    match_r[j] = i
                    return True
        return False

    for i in range(left_n):
        if not augment(i, [False] * right_n):
            return False
    return True


def bottleneck_distance(
    pd1: PersistenceDiagram, pd2: PersistenceDiagram, degree: int
) -> float:
    """Exact bottleneck distance in one degree: binary search over candidate
    costs with augmenting-path matching; diagonal projections allowed."""
    a = pd1.in_degree(degree)
    b = pd2.in_degree(degree)
    a_fin = [(x, y) for x, y in a if math.isfinite(y)]
    b_fin = [(x, y) for x, y in b if math.isfinite(y)]
    a_inf = sorted(x for x, y in a if math.isinf(y))
    b_inf = sorted(x for x, y in b if math.isinf(y))
    if len(a_inf) != len(b_inf):
        return INF
    ess = max((abs(x - y) for x, y in zip(a_inf, b_inf)), default=0.0)
    if not a_fin and not b_fin:
        return ess

    na, nb = len(a_fin), len(b_fin)
    n = na + nb
    # left: a points then b-projections; right: b points then a-projections
    costs = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i < na and j < nb:
                costs[i][j] = max(
                    abs(a_fin[i][0] - b_fin[j][0]), abs(a_fin[i][1] - b_fin[j][1])
                )
            elif i < na:
                # a point to its own diagonal projection only
                costs[i][j] = (
                    (a_fin[i][1] - a_fin[i][0]) / 2.0 if j - nb == i else INF
                )
            elif j < nb:
                costs[i][j] = (
                    (b_fin[j][1] - b_fin[j][0]) / 2.0 if i - na == j else INF
                )
            else:
                costs[i][j] = 0.0
    cand = sorted({c for row in costs for c in row if math.isfinite(c)} | {ess})
    # smallest candidate >= ess that admits a perfect matching
    lo = next(i for i, c in enumerate(cand) if c >= ess)
    hi = len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _bipartite_match_feasible(costs, n, n, cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(cand[lo], ess)


def extinction_time(pd: PersistenceDiagram) -> float:
    """Max death over all finite intervals; warns if essential classes
    (death = inf) are present, since the true extinction exceeds the cap."""
    if pd.essential_count():
        warnings.warn(
            "diagram has essential classes; extinction time reported over "
            "finite deaths only",
            stacklevel=2,
        )
    deaths = [d for _, _, d in pd.intervals if math.isfinite(d)]
    return max(deaths, default=0.0)


def lifespans(pd: PersistenceDiagram, degree: int) -> list[tuple[float, float, float]]:
    return [(b, d, d - b) for b, d in pd.in_degree(degree) if math.isfinite(d)]
