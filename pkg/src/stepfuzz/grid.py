"""Lattice discretization oracle.

Everything here works on integer lattice indices at a rational spacing h and
uses only finite max/min computation, deliberately independent from the exact
piecewise-linear machinery in spatial.py/endograph.py so the two can
cross-validate each other.

Distances between lattice points are taxicab (|dx1| + ... + |dxm|). In one
dimension that is |x - y|; on (x, level) pairs it equals the product metric
used for endographs, which is what makes the 2-D oracle comparable to the
exact endograph metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BadResolution, DimensionMismatch, UnboundedWindow
from .spatial import (INF, Interval, IntervalUnion, as_real, is_finite)

_BIG = 1 << 40  # distance sentinel, safely below int64 overflow under adds


def _as_spacing(h) -> Fraction:
    v = as_real(h)
    if not isinstance(v, Fraction) or v <= 0:
        raise BadResolution(f"spacing must be a positive rational, got {h!r}")
    return v


@dataclass(frozen=True)
class GridSet:
    """Finite set of lattice points i*h for integer index tuples i."""

    dimension: int
    spacing: Fraction
    points: frozenset

    def values(self):
        """Lattice points as tuples of Fractions (as single Fractions if 1-D)."""
        if self.dimension == 1:
            return {self.spacing * i for (i,) in self.points}
        return {tuple(self.spacing * c for c in p) for p in self.points}

    def __len__(self):
        return len(self.points)


def grid_of(s: IntervalUnion, h, window) -> GridSet:
    """All lattice points of h*Z inside s intersected with a bounded window."""
    h = _as_spacing(h)
    if isinstance(window, Interval):
        w_lo, w_hi = window.lo, window.hi
    else:
        w_lo, w_hi = (as_real(window[0]), as_real(window[1]))
    if not (is_finite(w_lo) and is_finite(w_hi)):
        raise UnboundedWindow("grid window must have finite ends")
    pts = set()
    for part in s.parts:
        lo = max(part.lo, w_lo)
        hi = min(part.hi, w_hi)
        if lo > hi:
            continue
        for i in range(math.ceil(lo / h), math.floor(hi / h) + 1):
            pts.add((i,))
    return GridSet(1, h, frozenset(pts))


def _min_plus_1d(costs: np.ndarray) -> np.ndarray:
    """d[i] = min over j of (|i - j| + costs[j]), exactly, in integer units."""
    n = costs.shape[-1]
    idx = np.arange(n, dtype=np.int64)
    fwd = np.minimum.accumulate(costs - idx, axis=-1) + idx
    rev = np.flip(np.minimum.accumulate(np.flip(costs, -1) + np.flip(idx, -1), axis=-1), -1) - idx
    return np.minimum(fwd, rev)


def _transform_2d(occ: np.ndarray) -> np.ndarray:
    """Taxicab distance to occupied cells, exact integer grid transform."""
    costs = np.where(occ, np.int64(0), np.int64(_BIG))
    rowwise = _min_plus_1d(costs)  # along last axis
    return _min_plus_1d(rowwise.T).T


def hausdorff_grid(a: GridSet, b: GridSet):
    """Exact taxicab Hausdorff distance between two finite lattice sets.

    Both-empty gives 0; one empty gives +inf (mirrors the empty-tolerant
    conventions of the continuous layer).
    """
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"dimension {a.dimension} vs {b.dimension}")
    if a.spacing != b.spacing:
        raise DimensionMismatch(f"spacing {a.spacing} vs {b.spacing}")
    if not a.points and not b.points:
        return Fraction(0)
    if not a.points or not b.points:
        return INF
    h = a.spacing
    if a.dimension == 1:
        d = max(_directed_1d(a, b), _directed_1d(b, a))
        return h * d
    if a.dimension == 2:
        d = _hausdorff_idx_2d(a.points, b.points)
        return h * d
    # Rare path; fine for small point sets.
    d = max(_directed_brute(a.points, b.points), _directed_brute(b.points, a.points))
    return h * d


def _directed_1d(a: GridSet, b: GridSet) -> int:
    xs = sorted(i for (i,) in a.points)
    ys = sorted(i for (i,) in b.points)
    best = 0
    j = 0
    for x in xs:
        while j + 1 < len(ys) and ys[j + 1] <= x:
            j += 1
        d = abs(x - ys[j])
        if j + 1 < len(ys):
            d = min(d, ys[j + 1] - x)
        if d > best:
            best = d
    return best


def _hausdorff_idx_2d(pa, pb) -> int:
    pts = list(pa) + list(pb)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, y0 = min(xs), min(ys)
    nx = max(xs) - x0 + 1
    ny = max(ys) - y0 + 1
    occ_a = np.zeros((nx, ny), dtype=bool)
    occ_b = np.zeros((nx, ny), dtype=bool)
    for (x, y) in pa:
        occ_a[x - x0, y - y0] = True
    for (x, y) in pb:
        occ_b[x - x0, y - y0] = True
    da = _transform_2d(occ_a)
    db = _transform_2d(occ_b)
    return int(max(db[occ_a].max(), da[occ_b].max()))


def _directed_brute(pa, pb) -> int:
    best = 0
    for p in pa:
        d = min(sum(abs(c - e) for c, e in zip(p, q)) for q in pb)
        if d > best:
            best = d
    return best


# ---------------------------------------------------------------------------
# Column-height oracle for endographs of step fuzzy sets.
#
# Over a bounded window the endograph lattice set is described per column x by
# its top lattice level floor(u(x)/h); the base line makes every column height
# at least 0. A sendograph has no base line, so columns outside the support
# are absent (height -1). The directed distance from a column top follows by
# a min-plus pass per distinct height value, all in integer units.
# ---------------------------------------------------------------------------


def column_heights(u, h, window, sendograph: bool = False) -> np.ndarray:
    """Lattice membership heights of u per column over a window; -1 = absent."""
    h = _as_spacing(h)
    w_lo, w_hi = (as_real(window[0]), as_real(window[1]))
    if not (is_finite(w_lo) and is_finite(w_hi)):
        raise UnboundedWindow("column window must have finite ends")
    i0 = math.ceil(w_lo / h)
    i1 = math.floor(w_hi / h)
    n = i1 - i0 + 1
    heights = np.full(n, -1 if sendograph else 0, dtype=np.int64)
    for a, cut in zip(u.thresholds, u.cuts):
        lvl = math.floor(a / h)
        for part in cut.parts:
            lo = max(part.lo, w_lo)
            hi = min(part.hi, w_hi)
            if lo > hi:
                continue
            ja = max(math.ceil(lo / h), i0) - i0
            jb = min(math.floor(hi / h), i1) - i0
            if ja <= jb:
                np.maximum(heights[ja:jb + 1], lvl, out=heights[ja:jb + 1])
    return heights


def _directed_columns(e: np.ndarray, g: np.ndarray) -> int:
    """max over occupied columns i of min over j of |i-j| + max(0, e[i]-g[j])."""
    best = 0
    occupied = e >= 0
    if not occupied.any():
        return 0
    absent = g < 0
    for c in np.unique(e[occupied]):
        costs = np.maximum(np.int64(0), c - g)
        costs[absent] = _BIG
        d = _min_plus_1d(costs)
        cand = int(d[e == c].max())
        if cand > best:
            best = cand
    return best


def endo_hausdorff_grid(u, v, h, window=None, sendograph: bool = False):
    """Lattice endograph (or sendograph) Hausdorff distance between step sets.

    Columns are sampled over the window (default: joint finite hull of all cut
    endpoints inflated by 1). Exact on the lattice; +inf when one side has
    occupied columns the other cannot reach within the sentinel budget.
    """
    h = _as_spacing(h)
    if window is None:
        coords = []
        for w in (u, v):
            for cut in w.cuts:
                coords.extend(cut.finite_coords())
        if not coords:
            coords = [Fraction(0)]
        window = (min(coords) - 1, max(coords) + 1)
    e = column_heights(u, h, window, sendograph)
    g = column_heights(v, h, window, sendograph)
    d = max(_directed_columns(e, g), _directed_columns(g, e))
    if d >= _BIG // 2:
        return INF
    return h * d


# ---------------------------------------------------------------------------
# Run-based grid connectivity (8-neighbor) for rasterized regions.
# ---------------------------------------------------------------------------


class DisjointSets:
    """Union-find with path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[ri] = rj

    def component_count(self, items: Iterable[int]) -> int:
        return len({self.find(i) for i in items})


def merge_runs(runs: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Merge sorted index runs that touch under 8-neighbor adjacency."""
    out: list[tuple[int, int]] = []
    for lo, hi in sorted(runs):
        if out and lo <= out[-1][1] + 1:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def runs_component_count(rows: Sequence[Sequence[tuple[int, int]]]) -> int:
    """Connected components of a region given as per-row column-index runs.

    Rows are consecutive lattice rows; runs in each row must be merged and
    sorted. Two runs in adjacent rows connect when their column ranges come
    within one cell of each other (diagonal adjacency included).
    """
    ids: list[list[int]] = []
    total = 0
    for row in rows:
        ids.append(list(range(total, total + len(row))))
        total += len(row)
    dsu = DisjointSets(total)
    for k in range(len(rows) - 1):
        upper = rows[k + 1]
        for ri, (lo, hi) in enumerate(rows[k]):
            for rj, (lo2, hi2) in enumerate(upper):
                if lo2 <= hi + 1 and lo - 1 <= hi2:
                    dsu.union(ids[k][ri], ids[k + 1][rj])
    return dsu.component_count(range(total))
