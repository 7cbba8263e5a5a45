"""Exact geometry of finite unions of closed intervals on the real line.

Endpoints are exact rationals (fractions.Fraction) or the infinity sentinels
float('inf') / float('-inf'). Fraction compares and adds correctly against the
float infinities, so extended-real arithmetic needs no wrapper class:

    ExtendedReal = Fraction | float   (float values are only +-inf)
    Level        = Fraction in [0, 1]

Conventions fixed here and used everywhere above: the distance from a point to
the empty set is +inf, the empty set is connected and bounded, and the
Hausdorff metric itself rejects empty operands (callers that need an
empty-tolerant version use hausdorff_ext).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import EmptyOperand, OutOfRange

INF = float("inf")
NEG_INF = float("-inf")

ExtendedReal = Union[Fraction, float]
Level = Fraction


def as_real(x) -> ExtendedReal:
    """Convert x to an exact endpoint value.

    Accepts Fraction, int, str ("0.6", "1/3", "inf", "-inf") and float.
    Finite floats are taken at their exact binary value; pass strings or
    Fractions when a decimal literal must be exact (e.g. "0.6" -> 3/5).
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a real value")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x == INF or x == NEG_INF:
            return x
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if s in ("inf", "+inf"):
            return INF
        if s == "-inf":
            return NEG_INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as a real value")


def as_level(x) -> Level:
    """Convert x to a Fraction in [0, 1]; raises OutOfRange otherwise."""
    v = as_real(x)
    if not isinstance(v, Fraction) or v < 0 or v > 1:
        raise OutOfRange(f"level {x!r} not in [0, 1]")
    return v


def is_finite(x: ExtendedReal) -> bool:
    return isinstance(x, Fraction)


@dataclass(frozen=True)
class Interval:
    """Closed interval of reals between lo and hi; either end may be infinite."""

    lo: ExtendedReal
    hi: ExtendedReal

    def __post_init__(self):
        if self.lo == INF or self.hi == NEG_INF:
            raise ValueError("interval ends reversed at infinity")
        if self.lo > self.hi:
            raise ValueError(f"interval with lo {self.lo} > hi {self.hi}")

    def contains(self, x) -> bool:
        x = as_real(x)
        return self.lo <= x <= self.hi

    @property
    def is_bounded(self) -> bool:
        return is_finite(self.lo) and is_finite(self.hi)

    def dist(self, x: ExtendedReal) -> Fraction:
        if x < self.lo:
            return self.lo - x
        if x > self.hi:
            return x - self.hi
        return Fraction(0)

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


class IntervalUnion:
    """Normalized finite union of closed intervals: sorted parts, strict gaps.

    The represented point set is closed; the empty list of parts encodes the
    empty set. Instances are immutable and hashable.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Sequence[Interval] = (), _trusted: bool = False):
        if not _trusted:
            parts = _merge_sorted(sorted(parts, key=_interval_key))
        object.__setattr__(self, "parts", tuple(parts))

    def __setattr__(self, *a):
        raise AttributeError("IntervalUnion is immutable")

    # -- constructors --

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls((), _trusted=True)

    @classmethod
    def whole(cls) -> "IntervalUnion":
        return cls((Interval(NEG_INF, INF),), _trusted=True)

    @classmethod
    def point(cls, x) -> "IntervalUnion":
        v = as_real(x)
        return cls((Interval(v, v),), _trusted=True)

    @classmethod
    def of(cls, *pairs) -> "IntervalUnion":
        """Build from (lo, hi) pairs; overlapping/touching pairs merge."""
        return cls([Interval(as_real(a), as_real(b)) for a, b in pairs])

    # -- basic protocol --

    def __eq__(self, other):
        return isinstance(other, IntervalUnion) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __bool__(self):
        return bool(self.parts)

    def __repr__(self):
        if not self.parts:
            return "{}"
        return " | ".join(repr(p) for p in self.parts)

    @property
    def is_empty(self) -> bool:
        return not self.parts

    # -- predicates --

    def contains(self, x) -> bool:
        x = as_real(x)
        return any(p.lo <= x <= p.hi for p in self.parts)

    def subset_of(self, other: "IntervalUnion") -> bool:
        """Containment test; each part must fit inside a single part of other."""
        j = 0
        for p in self.parts:
            while j < len(other.parts) and other.parts[j].hi < p.lo:
                j += 1
            if j == len(other.parts):
                return False
            q = other.parts[j]
            if not (q.lo <= p.lo and p.hi <= q.hi):
                return False
        return True

    # -- algebra --

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.parts + other.parts)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for p in self.parts:
            for q in other.parts:
                lo = max(p.lo, q.lo)
                hi = min(p.hi, q.hi)
                if lo <= hi:
                    out.append(Interval(lo, hi))
        return IntervalUnion(out)

    def hull(self) -> Interval | None:
        if not self.parts:
            return None
        return Interval(self.parts[0].lo, self.parts[-1].hi)

    def gaps(self) -> list[tuple[Fraction, Fraction]]:
        """Open gaps between consecutive parts (always finite ends)."""
        out = []
        for a, b in zip(self.parts, self.parts[1:]):
            out.append((a.hi, b.lo))
        return out

    def finite_coords(self) -> list[Fraction]:
        out = []
        for p in self.parts:
            if is_finite(p.lo):
                out.append(p.lo)
            if is_finite(p.hi):
                out.append(p.hi)
        return out

    @property
    def unbounded_above(self) -> bool:
        return bool(self.parts) and self.parts[-1].hi == INF

    @property
    def unbounded_below(self) -> bool:
        return bool(self.parts) and self.parts[0].lo == NEG_INF

    def dist(self, x) -> ExtendedReal:
        """Distance from point x to this set; +inf when empty."""
        x = as_real(x)
        if not self.parts:
            return INF
        return min(p.dist(x) for p in self.parts)


def _interval_key(iv: Interval):
    # Fraction and the float infinities sort consistently together.
    return (iv.lo, iv.hi)


def _merge_sorted(parts: list[Interval]) -> list[Interval]:
    out: list[Interval] = []
    for p in parts:
        if out and p.lo <= out[-1].hi:
            if p.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, p.hi)
        else:
            out.append(p)
    return out


def normalize(parts: Iterable[Interval]) -> IntervalUnion:
    """Sorted, merged, gap-separated representation of the same point set."""
    return IntervalUnion(list(parts))


def dist_point_set(x, s: IntervalUnion) -> ExtendedReal:
    """inf over s of |x - y|; +inf when s is empty."""
    return s.dist(x)


def is_connected(s: IntervalUnion) -> bool:
    """True iff s has at most one part (the empty set counts as connected)."""
    return len(s.parts) <= 1


def is_bounded(s: IntervalUnion) -> bool:
    """True iff no part reaches an infinity (the empty set is bounded)."""
    return all(p.is_bounded for p in s.parts)


# ---------------------------------------------------------------------------
# Exact maximization of a lower envelope of shifted distance functions.
#
# The workhorse shared by the Hausdorff metric and the endograph metric:
#
#     sup over x in S of  min( cap, min_l ( dist(x, V_l) + c_l ) )
#
# Each branch x -> dist(x, V_l) + c_l is piecewise linear with slopes in
# {-1, 0, +1} and kinks at part endpoints and gap midpoints of V_l, so the
# envelope is piecewise linear too. Between consecutive breakpoints every
# branch is affine and the envelope is concave; its maximum there sits at an
# endpoint or at a crossing of two branches. Unbounded parts of S are handled
# by a symbolic limit: beyond the last breakpoint all branch slopes are >= 0,
# so the supremum over the ray equals the limit value (the smallest constant
# among flat branches, or +inf when every branch grows).
# ---------------------------------------------------------------------------


def _branch_kinks(v: IntervalUnion) -> list[Fraction]:
    ks = v.finite_coords()
    for a, b in v.gaps():
        ks.append((a + b) / 2)
    return ks


def sup_min_dist(
    s: IntervalUnion,
    branches: Sequence[tuple[IntervalUnion, Fraction]],
    cap: Fraction | None = None,
) -> ExtendedReal:
    """sup over x in s of min(cap, min over (v, c) of dist(x, v) + c).

    Every branch set must be nonempty; s must be nonempty. cap=None omits the
    constant branch. Exact over rationals; returns +inf when s escapes along a
    direction where every branch grows without bound.
    """
    if s.is_empty:
        raise EmptyOperand("supremum over the empty set")
    if not branches and cap is None:
        raise EmptyOperand("no branches to minimize over")
    for v, _c in branches:
        if v.is_empty:
            raise EmptyOperand("branch set is empty")

    def phi(x: Fraction) -> Fraction:
        best = cap
        for v, c in branches:
            d = v.dist(x) + c
            if best is None or d < best:
                best = d
        return best

    kinks: list[Fraction] = []
    for v, _c in branches:
        kinks.extend(_branch_kinks(v))

    # Limits along the two escape directions.
    flat_right = [] if cap is None else [cap]
    flat_left = [] if cap is None else [cap]
    for v, c in branches:
        if v.unbounded_above:
            flat_right.append(c)
        if v.unbounded_below:
            flat_left.append(c)
    limit_right = min(flat_right) if flat_right else INF
    limit_left = min(flat_left) if flat_left else INF

    all_coords = list(kinks)
    best: ExtendedReal | None = None

    def consider(v: ExtendedReal):
        nonlocal best
        if best is None or v > best:
            best = v

    for part in s.parts:
        lo, hi = part.lo, part.hi
        if lo == NEG_INF:
            consider(limit_left)
            if best == INF:
                return INF
        if hi == INF:
            consider(limit_right)
            if best == INF:
                return INF

        # Finite span that covers every breakpoint reachable from this part.
        coords = list(all_coords)
        if is_finite(lo):
            coords.append(lo)
        if is_finite(hi):
            coords.append(hi)
        if not coords:
            # No finite structure at all (every set is the whole line).
            consider(phi(Fraction(0)))
            continue
        span_lo = lo if is_finite(lo) else min(coords) - 1
        span_hi = hi if is_finite(hi) else max(coords) + 1
        if span_lo > span_hi:  # degenerate after clipping
            span_lo = span_hi
        pts = sorted({span_lo, span_hi, *(k for k in kinks if span_lo < k < span_hi)})

        vals = [phi(x) for x in pts]
        for v in vals:
            consider(v)

        # Concave maxima inside elementary intervals: branch crossings.
        branch_list: list[tuple[IntervalUnion | None, Fraction]] = list(branches)
        if cap is not None:
            branch_list.append((None, cap))
        for x0, x1 in zip(pts, pts[1:]):
            width = x1 - x0
            f0 = [(v.dist(x0) + c) if v is not None else c for v, c in branch_list]
            f1 = [(v.dist(x1) + c) if v is not None else c for v, c in branch_list]
            n = len(branch_list)
            for i in range(n):
                si = (f1[i] - f0[i]) / width
                for j in range(i + 1, n):
                    sj = (f1[j] - f0[j]) / width
                    if si == sj:
                        continue
                    xc = x0 + (f0[j] - f0[i]) / (si - sj)
                    if x0 < xc < x1:
                        consider(phi(xc))

    assert best is not None
    return best


def hausdorff_directed(u: IntervalUnion, v: IntervalUnion) -> ExtendedReal:
    """sup over u of dist(., v). Exact; +inf when u escapes along a ray v lacks."""
    if u.is_empty or v.is_empty:
        raise EmptyOperand("hausdorff_directed requires nonempty operands")
    return sup_min_dist(u, [(v, Fraction(0))], None)


def hausdorff(u: IntervalUnion, v: IntervalUnion) -> ExtendedReal:
    """Hausdorff extended metric between nonempty closed interval unions."""
    return max(hausdorff_directed(u, v), hausdorff_directed(v, u))


def hausdorff_ext(u: IntervalUnion, v: IntervalUnion) -> ExtendedReal:
    """Empty-tolerant Hausdorff: H(0,0) = 0, H(0, nonempty) = +inf."""
    if u.is_empty and v.is_empty:
        return Fraction(0)
    if u.is_empty or v.is_empty:
        return INF
    return hausdorff(u, v)
