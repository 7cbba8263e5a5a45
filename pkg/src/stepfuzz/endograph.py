"""Endographs, sendographs, slice regions and the exact endograph metric.

The endograph of a step fuzzy set is the base line R x {0} together with one
prism C_j x [0, a_j] per level; the sendograph drops the base line and keeps
a support slab at height 0. Distances use d((x,s),(y,t)) = |x-y| + |s-t|, so
the distance from a point at height t to a prism with top b is the horizontal
set distance plus the vertical overshoot max(0, t-b). The directed Hausdorff
distance between two complexes is then a finite maximization of piecewise
linear envelopes, which sup_min_dist solves exactly over the rationals.

SliceSet is the companion region type: a stack of level bands whose slices
are interval unions with endpoints given by expressions in alpha. It carries
two connectivity engines: a structural one that certifies per-part endpoint
monotonicity and reasons through extreme slices and boundary gluing, and a
lattice engine that rasterizes at spacing h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core import StepFuzzySet
from .errors import (BadRange, EmptyComplex, EmptyOperand, NonMonotoneBand,
                     ValidationError)
from .exprs import Expr, Lit, evaluate
from .grid import DisjointSets, _as_spacing, merge_runs, runs_component_count
from .spatial import (INF, NEG_INF, ExtendedReal, IntervalUnion, as_level,
                      as_real, is_finite, sup_min_dist)


# ---------------------------------------------------------------------------
# Prism complexes and the endograph metric.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrismComplex:
    """Union of prisms base x [0, top] with strictly descending tops.

    Bases must expand (non-strictly) as tops descend; a sendograph repeats
    its support as a height-0 slab, which is why the expansion is allowed to
    be non-strict. base_line adds R x {0}.
    """

    prisms: tuple
    base_line: bool

    def __post_init__(self):
        ps = tuple((b, Fraction(t)) for (b, t) in self.prisms)
        object.__setattr__(self, "prisms", ps)
        for b, t in ps:
            if not isinstance(b, IntervalUnion) or b.is_empty:
                raise ValidationError("prism base must be a nonempty IntervalUnion")
            if not (0 <= t <= 1):
                raise ValidationError(f"prism top {t} outside [0, 1]")
        for i in range(1, len(ps)):
            if ps[i][1] >= ps[i - 1][1]:
                raise ValidationError("prism tops must be strictly descending")
            if not ps[i - 1][0].subset_of(ps[i][0]):
                raise ValidationError("prism bases must expand as tops descend")

    @property
    def is_empty(self) -> bool:
        return not self.prisms and not self.base_line


def endograph(u: StepFuzzySet) -> PrismComplex:
    return PrismComplex(tuple(zip(u.cuts, u.thresholds)), base_line=True)


def sendograph(u: StepFuzzySet) -> PrismComplex:
    if u.is_empty:
        return PrismComplex((), base_line=False)
    prisms = tuple(zip(u.cuts, u.thresholds)) + ((u.support, Fraction(0)),)
    return PrismComplex(prisms, base_line=False)


def dist_point_endo(p, e: PrismComplex) -> ExtendedReal:
    """Distance from a plane point (x, t) to a prism complex."""
    if e.is_empty:
        raise EmptyComplex("distance to the empty complex is undefined")
    x = as_real(p[0])
    t = as_level(p[1])
    best: ExtendedReal = t if e.base_line else INF
    for base, top in e.prisms:
        cand = base.dist(x) + max(Fraction(0), t - top)
        if cand < best:
            best = cand
    return best


def _directed_hausdorff(src: PrismComplex, dst: PrismComplex) -> ExtendedReal:
    if src.is_empty:
        return Fraction(0)
    if dst.is_empty:
        return INF
    best: ExtendedReal = Fraction(0)
    if src.base_line and not dst.base_line:
        flat = [(b, Fraction(0)) for b, _ in dst.prisms]
        best = sup_min_dist(IntervalUnion.whole(), flat, None)
        if best == INF:
            return INF
    for base, top in src.prisms:
        branches = [(b, max(Fraction(0), top - t)) for b, t in dst.prisms]
        cap = top if dst.base_line else None
        val = sup_min_dist(base, branches, cap)
        if val == INF:
            return INF
        if val > best:
            best = val
    return best


def hend(u: StepFuzzySet, v: StepFuzzySet) -> Fraction:
    """Hausdorff distance between the endographs; always finite, at most 1."""
    e, f = endograph(u), endograph(v)
    return max(_directed_hausdorff(e, f), _directed_hausdorff(f, e))


def hsend(u: StepFuzzySet, v: StepFuzzySet) -> ExtendedReal:
    """Hausdorff distance between the sendographs; may be infinite."""
    if u.is_empty or v.is_empty:
        raise EmptyOperand("sendograph metric needs nonempty operands")
    e, f = sendograph(u), sendograph(v)
    return max(_directed_hausdorff(e, f), _directed_hausdorff(f, e))


# ---------------------------------------------------------------------------
# Slice regions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SlicePart:
    """One interval of a slice; None endpoints mean unbounded sides."""

    lo: Optional[Expr]
    hi: Optional[Expr]

    def eval_at(self, alpha: Fraction) -> tuple:
        env = {"alpha": alpha}
        lo = NEG_INF if self.lo is None else evaluate(self.lo, env)
        hi = INF if self.hi is None else evaluate(self.hi, env)
        return lo, hi


@dataclass(frozen=True)
class Band:
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool
    parts: tuple

    def __post_init__(self):
        lo, hi = as_level(self.lo), as_level(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "parts", tuple(self.parts))
        if lo > hi:
            raise BadRange(f"band range [{lo}, {hi}] is inverted")
        if lo == hi and not (self.lo_closed and self.hi_closed):
            raise BadRange("a degenerate band must be closed on both sides")

    def contains_level(self, beta: Fraction) -> bool:
        if beta == self.lo:
            lo_ok = self.lo_closed
        else:
            lo_ok = beta > self.lo
        if beta == self.hi:
            hi_ok = self.hi_closed
        else:
            hi_ok = beta < self.hi
        return lo_ok and hi_ok

    def slice_at(self, beta: Fraction) -> IntervalUnion:
        pairs = []
        for part in self.parts:
            lo, hi = part.eval_at(beta)
            if lo <= hi:
                pairs.append((lo, hi))
        return IntervalUnion.of(*pairs)


def constant_band(lo, hi, lo_closed: bool, hi_closed: bool,
                  s: IntervalUnion) -> Band:
    parts = tuple(
        SlicePart(None if p.lo == NEG_INF else Lit(p.lo),
                  None if p.hi == INF else Lit(p.hi))
        for p in s.parts)
    return Band(as_level(lo), as_level(hi), lo_closed, hi_closed, parts)


@dataclass(frozen=True)
class SliceSet:
    """A region of R x [0,1] given as a stack of bands, ascending in level."""

    bands: tuple

    def __post_init__(self):
        bs = tuple(self.bands)
        object.__setattr__(self, "bands", bs)
        for i in range(1, len(bs)):
            a, b = bs[i - 1], bs[i]
            if b.lo < a.hi or (b.lo == a.hi and a.hi_closed and b.lo_closed):
                raise ValidationError("bands overlap")

    @property
    def is_empty(self) -> bool:
        return not any(b.parts for b in self.bands)

    @property
    def f_level(self) -> Optional[Fraction]:
        """Lowest band level with a (potentially) nonempty slice."""
        levels = [b.lo for b in self.bands if b.parts]
        return min(levels) if levels else None

    @property
    def s_level(self) -> Optional[Fraction]:
        levels = [b.hi for b in self.bands if b.parts]
        return max(levels) if levels else None

    def band_at(self, beta: Fraction) -> Optional[Band]:
        for b in self.bands:
            if b.contains_level(beta):
                return b
        return None


Sliceable = Union[PrismComplex, SliceSet]


def slice_at(e: Sliceable, alpha) -> IntervalUnion:
    """Horizontal section {x : (x, alpha) in region}."""
    alpha = as_level(alpha)
    if isinstance(e, PrismComplex):
        if alpha == 0 and e.base_line:
            return IntervalUnion.whole()
        best = IntervalUnion.empty()
        for base, top in e.prisms:
            if top >= alpha:
                best = base  # bases expand, the last qualifying is largest
        return best
    band = e.band_at(alpha)
    return band.slice_at(alpha) if band is not None else IntervalUnion.empty()


def truncate(u: StepFuzzySet, r, t) -> SliceSet:
    """The endograph piece between levels r and t, without the base line.

    The slice at alpha is the cut [u]_alpha (the support at alpha = 0), so
    the result is a stack of constant bands split at the thresholds of u.
    Bands whose slice is empty are omitted.
    """
    r, t = as_level(r), as_level(t)
    if r > t:
        raise BadRange(f"lower level {r} exceeds upper level {t}")
    bands: list[Band] = []
    if not u.is_empty:
        boundaries = sorted({a for a in u.thresholds if r < a < t} | {t})
        low = r
        low_closed = True
        if r in u.thresholds or r == t:
            s = u.cut(r)
            if not s.is_empty:
                bands.append(constant_band(r, r, True, True, s))
            low_closed = False
        if r < t:
            for p in boundaries:
                s = u.cut(p)
                if not s.is_empty:
                    bands.append(constant_band(low, p, low_closed, True, s))
                low = p
                low_closed = False
    return SliceSet(tuple(bands))


def as_sliceset(e: PrismComplex) -> SliceSet:
    """Rewrite a prism complex as a stack of constant bands."""
    bands: list[Band] = []
    if e.base_line:
        bands.append(constant_band(0, 0, True, True, IntervalUnion.whole()))
    low = Fraction(0)
    low_closed = not e.base_line
    for base, top in reversed(e.prisms):
        if top == low:
            if not bands:
                bands.append(constant_band(low, low, True, True, base))
            continue
        bands.append(constant_band(low, top, low_closed, True, base))
        low = top
        low_closed = False
    # merge adjacent bands carrying the same constant slice
    merged: list[Band] = []
    for b in bands:
        if merged and merged[-1].parts == b.parts and merged[-1].hi == b.lo \
                and (merged[-1].hi_closed != b.lo_closed):
            prev = merged.pop()
            b = Band(prev.lo, b.hi, prev.lo_closed, b.hi_closed, b.parts)
        merged.append(b)
    return SliceSet(tuple(merged))


# ---------------------------------------------------------------------------
# Structural connectivity.
#
# Each band part is a tube between two continuous endpoint graphs. When the
# endpoints are certified monotone over the band (checked at the band ends,
# small interior offsets and the midpoint), the tube is connected and its
# contacts with other tubes and with neighboring bands can be decided from
# finitely many exact evaluations:
#
#   * two tubes touch inside the band iff their gap closes at an in-band
#     sample, or closes strictly in the limit at an open band end;
#   * across a shared boundary, the band on the closed side contributes its
#     exact boundary slice and the open side its limit slice, and tubes glue
#     iff those intervals intersect.
#
# A part that is alive at some samples and dead at others cannot be certified
# this way; the engine refuses (NonMonotoneBand) and auto mode falls back to
# the lattice engine. Certification samples only finitely many levels, so a
# non-monotone endpoint expression that happens to look monotone on them can
# still slip through; endpoint expressions in documents are affine or simple
# quadratics, for which the check is honest.
# ---------------------------------------------------------------------------

_OFFSET = Fraction(1, 1024)


def _band_samples(band: Band) -> list[Fraction]:
    w = band.hi - band.lo
    if w == 0:
        return [band.lo]
    pts = {band.lo, band.lo + w * _OFFSET, band.lo + w / 2,
           band.hi - w * _OFFSET, band.hi}
    return sorted(pts)


def _direction(vals: Sequence) -> Optional[str]:
    """'const', 'up', 'down' or None when the samples are not monotone."""
    up = all(vals[i] <= vals[i + 1] for i in range(len(vals) - 1))
    down = all(vals[i] >= vals[i + 1] for i in range(len(vals) - 1))
    if up and down:
        return "const"
    if up:
        return "up"
    if down:
        return "down"
    return None


@dataclass
class _Tube:
    band_index: int
    part_index: int
    lo_vals: list
    hi_vals: list


def _certify_band(index: int, band: Band, samples: list[Fraction]) -> list[_Tube]:
    tubes = []
    in_band = [band.contains_level(s) for s in samples]
    for k, part in enumerate(band.parts):
        lo_vals = []
        hi_vals = []
        for s in samples:
            lo, hi = part.eval_at(s)
            lo_vals.append(lo)
            hi_vals.append(hi)
        if _direction(lo_vals) is None or _direction(hi_vals) is None:
            raise NonMonotoneBand(
                f"band {index}: part {k} endpoints are not monotone")
        alive = [lo_vals[i] <= hi_vals[i] for i in range(len(samples))]
        if not any(a for a, ib in zip(alive, in_band) if ib):
            continue  # nothing of this part lies inside the band
        if not all(alive):
            raise NonMonotoneBand(
                f"band {index}: part {k} vanishes inside the band")
        tubes.append(_Tube(index, k, lo_vals, hi_vals))
    return tubes


def band_tag(band: Band) -> str:
    """'constant', 'expanding-down', 'expanding-up' or 'mixed'.

    The tag describes how slices evolve with the level; parts may disagree,
    in which case the band is 'mixed' and connectivity reasoning is applied
    part by part.
    """
    samples = _band_samples(band)
    tags = []
    for k, part in enumerate(band.parts):
        lo_vals = [part.eval_at(s)[0] for s in samples]
        hi_vals = [part.eval_at(s)[1] for s in samples]
        dl, dh = _direction(lo_vals), _direction(hi_vals)
        if dl is None or dh is None:
            raise NonMonotoneBand(f"part {k} endpoints are not monotone")
        if dl == "const" and dh == "const":
            tags.append("constant")
        elif dl in ("const", "up") and dh in ("const", "down"):
            tags.append("expanding-down")
        elif dl in ("const", "down") and dh in ("const", "up"):
            tags.append("expanding-up")
        else:
            raise NonMonotoneBand(f"part {k} endpoints move the same way")
    if not tags:
        return "constant"
    if all(t == "constant" for t in tags):
        return "constant"
    nonconst = {t for t in tags if t != "constant"}
    return nonconst.pop() if len(nonconst) == 1 else "mixed"


def _structural_connected(ss: SliceSet) -> bool:
    per_band: list[list[_Tube]] = []
    per_band_samples: list[list[Fraction]] = []
    for i, band in enumerate(ss.bands):
        samples = _band_samples(band)
        per_band_samples.append(samples)
        per_band.append(_certify_band(i, band, samples))

    nodes = {}
    for tubes in per_band:
        for t in tubes:
            nodes[(t.band_index, t.part_index)] = len(nodes)
    dsu = DisjointSets(len(nodes))

    for i, tubes in enumerate(per_band):
        band = ss.bands[i]
        samples = per_band_samples[i]
        for ai in range(len(tubes)):
            for bi in range(ai + 1, len(tubes)):
                a, b = tubes[ai], tubes[bi]
                touch = False
                a_below = a_above = True  # which side of b the tube a stays on
                for s in range(len(samples)):
                    lo_b, hi_a = b.lo_vals[s], a.hi_vals[s]
                    lo_a, hi_b = a.lo_vals[s], b.hi_vals[s]
                    overlap = lo_b <= hi_a and lo_a <= hi_b
                    strict = lo_b < hi_a and lo_a < hi_b
                    if overlap:
                        a_below = a_above = False
                    elif lo_b > hi_a:
                        a_above = False
                    else:
                        a_below = False
                    in_band = band.contains_level(samples[s])
                    if (in_band and overlap) or (not in_band and strict):
                        touch = True
                if not touch:
                    # Certify the separation: the gap must stay on one side
                    # and close monotonically, else tubes could cross between
                    # samples. Compare endpoints directly so unbounded sides
                    # never produce inf - inf.
                    if a_below:
                        diffs = [b.lo_vals[s] - a.hi_vals[s]
                                 for s in range(len(samples))
                                 if is_finite(b.lo_vals[s]) and is_finite(a.hi_vals[s])]
                    elif a_above:
                        diffs = [a.lo_vals[s] - b.hi_vals[s]
                                 for s in range(len(samples))
                                 if is_finite(a.lo_vals[s]) and is_finite(b.hi_vals[s])]
                    else:
                        diffs = None
                    if diffs is None or _direction(diffs) is None:
                        raise NonMonotoneBand(
                            f"band {i}: gap between parts {a.part_index} and "
                            f"{b.part_index} cannot be certified")
                else:
                    dsu.union(nodes[(i, a.part_index)], nodes[(i, b.part_index)])

    for i in range(len(ss.bands) - 1):
        lower, upper = ss.bands[i], ss.bands[i + 1]
        beta = lower.hi
        if beta != upper.lo:
            continue
        if not (lower.hi_closed or upper.lo_closed):
            continue  # neither side reaches the boundary level
        for a in per_band[i]:
            la, ha = a.lo_vals[-1], a.hi_vals[-1]
            for b in per_band[i + 1]:
                lb, hb = b.lo_vals[0], b.hi_vals[0]
                if lb <= ha and la <= hb:
                    dsu.union(nodes[(i, a.part_index)],
                              nodes[(i + 1, b.part_index)])

    return dsu.component_count(range(len(nodes))) <= 1


# ---------------------------------------------------------------------------
# Lattice connectivity.
# ---------------------------------------------------------------------------


def _grid_connected(ss: SliceSet, h: Fraction, window) -> bool:
    if not ss.bands:
        return True
    if window is None:
        vals = []
        for band in ss.bands:
            for s in _band_samples(band):
                for part in band.parts:
                    lo, hi = part.eval_at(s)
                    if is_finite(lo):
                        vals.append(lo)
                    if is_finite(hi):
                        vals.append(hi)
        if not vals:
            window = (Fraction(-1), Fraction(1))
        else:
            window = (min(vals) - 1, max(vals) + 1)
    w_lo, w_hi = as_real(window[0]), as_real(window[1])
    k_lo = math.ceil(min(b.lo for b in ss.bands) / h)
    k_hi = math.floor(max(b.hi for b in ss.bands) / h)
    rows = []
    for k in range(k_lo, k_hi + 1):
        beta = h * k
        band = ss.band_at(beta)
        runs: list[tuple[int, int]] = []
        if band is not None:
            for part in band.parts:
                lo, hi = part.eval_at(beta)
                lo = max(lo, w_lo)
                hi = min(hi, w_hi)
                if lo > hi:
                    continue
                ilo = math.ceil(lo / h)
                ihi = math.floor(hi / h)
                if ilo <= ihi:
                    runs.append((ilo, ihi))
        rows.append(merge_runs(runs))
    return runs_component_count(rows) <= 1


def is_connected_sliceset(ss: SliceSet, engine: str = "auto",
                          h=Fraction(1, 1000), window=None) -> bool:
    """Whether the region is connected as a subset of R x [0,1].

    engine 'structural' certifies monotone bands and is exact but refuses
    shapes it cannot certify; 'grid' rasterizes at spacing h and is
    resolution-limited; 'auto' tries structural first and falls back.
    """
    h = _as_spacing(h)
    if engine == "structural":
        return _structural_connected(ss)
    if engine == "grid":
        return _grid_connected(ss, h, window)
    if engine == "auto":
        try:
            return _structural_connected(ss)
        except NonMonotoneBand:
            return _grid_connected(ss, h, window)
    raise ValidationError(f"unknown engine {engine!r}")


def is_compact_sliceset(ss: SliceSet) -> bool:
    """True iff the spatial projection of the region is bounded.

    The regions built here are closed by construction, so boundedness of the
    projection is the whole content of compactness. Endpoint expressions are
    sampled at band ends and midpoints; a part with a missing endpoint is
    unbounded outright.
    """
    for band in ss.bands:
        samples = _band_samples(band)
        for part in band.parts:
            if part.lo is None or part.hi is None:
                alive = any(part.eval_at(s)[0] <= part.eval_at(s)[1]
                            for s in samples)
                if alive:
                    return False
            for s in samples:
                lo, hi = part.eval_at(s)
                if lo <= hi and not (is_finite(lo) and is_finite(hi)):
                    return False
    return True
