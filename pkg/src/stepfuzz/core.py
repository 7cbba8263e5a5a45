"""Step fuzzy sets: finitely many membership levels over interval-union cuts.

A step fuzzy set is stored as strictly descending thresholds a_1 > ... > a_K
in (0, 1] with nested cuts C_1 <= ... <= C_K. Membership of x is the largest
a_j whose cut contains x, or 0. The representation is kept canonical so that
equality of objects coincides with equality of membership functions:

  * no empty cuts (an empty top cut would contribute nothing),
  * no two adjacent cuts equal (the lower threshold would be invisible).

K = 0 encodes the empty fuzzy set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotDescending, NotNested, ValidationError
from .spatial import IntervalUnion, as_level, as_real, is_bounded, is_connected


@dataclass(frozen=True)
class StepFuzzySet:
    thresholds: tuple
    cuts: tuple

    def __post_init__(self):
        ts = tuple(self.thresholds)
        cs = tuple(self.cuts)
        object.__setattr__(self, "thresholds", ts)
        object.__setattr__(self, "cuts", cs)
        if len(ts) != len(cs):
            raise ValidationError("thresholds and cuts must have equal length")
        for a in ts:
            if not isinstance(a, Fraction):
                raise ValidationError(f"threshold {a!r} is not a Fraction")
            if not (0 < a <= 1):
                raise ValidationError(f"threshold {a} outside (0, 1]")
        for i in range(1, len(ts)):
            if ts[i] >= ts[i - 1]:
                raise NotDescending(f"thresholds not strictly descending at index {i}")
        for c in cs:
            if not isinstance(c, IntervalUnion):
                raise ValidationError(f"cut {c!r} is not an IntervalUnion")
        if cs and cs[0].is_empty:
            raise ValidationError("top cut is empty; drop unused levels instead")
        for i in range(1, len(cs)):
            if not cs[i - 1].subset_of(cs[i]):
                raise NotNested(f"cut {i - 1} is not contained in cut {i}")
            if cs[i - 1] == cs[i]:
                raise ValidationError(f"cuts {i - 1} and {i} are equal; merge the levels")

    @property
    def is_empty(self) -> bool:
        return not self.thresholds

    @property
    def support(self) -> IntervalUnion:
        """Closure of {x : u(x) > 0}; equals the widest cut."""
        return self.cuts[-1] if self.cuts else IntervalUnion.empty()

    def membership(self, x) -> Fraction:
        x = as_real(x)
        for a, c in zip(self.thresholds, self.cuts):
            if c.contains(x):
                return a
        return Fraction(0)

    def cut(self, alpha) -> IntervalUnion:
        alpha = as_level(alpha)
        if alpha == 0:
            return self.support
        for a, c in zip(reversed(self.thresholds), reversed(self.cuts)):
            if a >= alpha:
                return c
        return IntervalUnion.empty()


EMPTY_FUZZY_SET = StepFuzzySet((), ())


def from_cut_family(thresholds: Sequence, cuts: Sequence[IntervalUnion]) -> StepFuzzySet:
    """Build a step fuzzy set from descending levels and nested cuts.

    Empty cuts at the top and repeated adjacent cuts are allowed here and
    canonicalized away (the higher threshold of an equal pair survives).
    """
    ts = [as_level(a) for a in thresholds]
    cs = [c if isinstance(c, IntervalUnion) else IntervalUnion.of(*c) for c in cuts]
    if len(ts) != len(cs):
        raise ValidationError("thresholds and cuts must have equal length")
    for i in range(1, len(ts)):
        if ts[i] >= ts[i - 1]:
            raise NotDescending(f"thresholds not strictly descending at index {i}")
    for i in range(1, len(cs)):
        if not cs[i - 1].subset_of(cs[i]):
            raise NotNested(f"cut {i - 1} is not contained in cut {i}")
    if any(a == 0 for a in ts):
        raise ValidationError("threshold 0 is not a level")
    while cs and cs[0].is_empty:
        ts.pop(0)
        cs.pop(0)
    keep_t: list[Fraction] = []
    keep_c: list[IntervalUnion] = []
    for a, c in zip(ts, cs):
        if keep_c and keep_c[-1] == c:
            continue
        keep_t.append(a)
        keep_c.append(c)
    return StepFuzzySet(tuple(keep_t), tuple(keep_c))


def membership(u: StepFuzzySet, x) -> Fraction:
    return u.membership(x)


def alpha_cut(u: StepFuzzySet, alpha) -> IntervalUnion:
    """The level set [u]_alpha; alpha = 0 gives the support."""
    return u.cut(alpha)


def s_value(u: StepFuzzySet) -> Fraction:
    """Height of u: its maximum membership value (0 for the empty set)."""
    return u.thresholds[0] if u.thresholds else Fraction(0)


def singleton(x, height=1) -> StepFuzzySet:
    """The fuzzy point at x with the given height."""
    return StepFuzzySet((as_level(height),), (IntervalUnion.point(as_real(x)),))


@dataclass(frozen=True)
class ClassFlags:
    """Membership of a step set in the standard upper semicontinuous families.

    Step sets are always upper semicontinuous and their cuts are always
    closed, so the interesting axes are normality, compactness of cuts
    (equivalently boundedness of the support) and connectedness of cuts.
    """

    nonempty: bool
    normal: bool
    compact_cuts: bool
    connected_cuts: bool

    @property
    def general(self) -> bool:
        """All positive-level cuts compact (the empty set qualifies)."""
        return self.compact_cuts

    @property
    def connected(self) -> bool:
        return self.connected_cuts


def classify(u: StepFuzzySet) -> ClassFlags:
    return ClassFlags(
        nonempty=not u.is_empty,
        normal=bool(u.thresholds) and u.thresholds[0] == 1,
        compact_cuts=u.is_empty or is_bounded(u.support),
        connected_cuts=all(is_connected(c) for c in u.cuts),
    )
