"""Sequence-level analysis: metric traces, set-limit probes, classifiers.

Everything here is finite evidence. A Verdict never claims a proof: it reports
the computed trace, the tolerance, and a status derived from the tail of the
trace over an explicit schedule of indices.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import StepFuzzySet, classify, from_cut_family, s_value
from .endograph import (hend, is_compact_sliceset, is_connected_sliceset,
                        truncate)
from .errors import (BadRange, JumpLevel, OutOfDomain, OutOfRange,
                     ValidationError)
from .exprs import Expr, evaluate
from .spatial import (INF, IntervalUnion, as_level, dist_point_set,
                      hausdorff_ext, is_bounded, is_connected)

DEFAULT_TOL = Fraction(1, 10 ** 6)


# ---------------------------------------------------------------------------
# Schedules and verdicts.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing finite list of sequence indices to sample."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(n) for n in self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise ValidationError("schedule must be nonempty")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValidationError("schedule must be strictly increasing")

    @staticmethod
    def geometric(n_max: int = 1024) -> "Schedule":
        if n_max < 1:
            raise ValidationError("n_max must be at least 1")
        idx = [1]
        while idx[-1] * 2 <= n_max:
            idx.append(idx[-1] * 2)
        if idx[-1] != n_max:
            idx.append(n_max)
        return Schedule(tuple(idx))

    @staticmethod
    def linear(n_max: int, start: int = 1) -> "Schedule":
        return Schedule(tuple(range(start, n_max + 1)))

    def tail(self) -> tuple:
        k = max(1, math.ceil(len(self.indices) / 4))
        return self.indices[-k:]


DEFAULT_SCHEDULE = Schedule.geometric(1024)

CONVERGES = "converges"
DIVERGES = "diverges"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: str
    trace: tuple
    tol: object
    decay: Optional[float] = None

    def __bool__(self):
        return self.status == CONVERGES


def _tail(values: Sequence) -> list:
    k = max(1, math.ceil(len(values) / 4))
    return list(values[-k:])


def _verdict_values(values: Sequence, tol) -> str:
    """converges: final below tol with a non-increasing tail; diverges: final
    at or above tol with a tail that has not decreased; else inconclusive."""
    tail = _tail(values)
    final = values[-1]
    non_increasing = all(tail[i + 1] <= tail[i] for i in range(len(tail) - 1))
    if final < tol and non_increasing:
        return CONVERGES
    if final >= tol and tail[-1] >= tail[0]:
        return DIVERGES
    return INCONCLUSIVE


def _decay(values: Sequence) -> Optional[float]:
    tail = _tail(values)
    if len(tail) >= 2 and all(0 < v != INF for v in tail):
        try:
            return float(Fraction(tail[-1]) / Fraction(tail[0]))
        except (TypeError, ValueError):
            return None
    return None


def _verdict(trace: Sequence, tol) -> Verdict:
    values = [v for _, v in trace]
    return Verdict(_verdict_values(values, tol), tuple(trace), tol, _decay(values))


# ---------------------------------------------------------------------------
# Parameterized sequences of step fuzzy sets.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeqBand:
    """One level band of a parameterized family: (lo, hi] -> set of parts.

    Endpoints are expressions in the index variable n; parts are (lo, hi)
    expression pairs with None for an unbounded side, () meaning the empty
    set and ((None, None),) the whole line.
    """

    lo: Expr
    hi: Expr
    parts: tuple


@dataclass(frozen=True)
class FuzzySeq:
    """A fuzzy-set sequence: either direct level bands over the index n, or
    the interleaving of two arms (odd indices from the first, even from the
    second, each at index ceil(n/2))."""

    name: str
    n_min: int = 1
    bands: tuple = ()
    arms: Optional[tuple] = None  # (first, second), each FuzzySeq or StepFuzzySet

    def __post_init__(self):
        if self.arms is not None and len(self.arms) != 2:
            raise ValidationError("interleave needs exactly two arms")


def interleave(name: str, first, second, n_min: int = 1) -> FuzzySeq:
    return FuzzySeq(name, n_min, (), (first, second))


def instantiate(seq: FuzzySeq, n: int) -> StepFuzzySet:
    """The n-th member; bands whose level range collapses are dropped."""
    if n != int(n) or int(n) < seq.n_min:
        raise OutOfDomain(f"index {n} below the validity domain of {seq.name}")
    n = int(n)
    if seq.arms is not None:
        arm = seq.arms[0] if n % 2 == 1 else seq.arms[1]
        k = (n + 1) // 2
        if isinstance(arm, StepFuzzySet):
            return arm
        return instantiate(arm, k)
    env = {"n": Fraction(n)}
    thresholds = []
    cuts = []
    for band in seq.bands:
        lo = evaluate(band.lo, env)
        hi = evaluate(band.hi, env)
        if not (0 <= lo and hi <= 1):
            raise ValidationError(f"band range ({lo}, {hi}] outside [0, 1]")
        if lo >= hi:
            continue
        pairs = []
        for plo, phi in band.parts:
            a = evaluate(plo, env) if plo is not None else -INF
            b = evaluate(phi, env) if phi is not None else INF
            pairs.append((a, b))
        thresholds.append(hi)
        cuts.append(IntervalUnion.of(*pairs))
    return from_cut_family(thresholds, cuts)


# ---------------------------------------------------------------------------
# Metric traces.
# ---------------------------------------------------------------------------


def hend_trace(seq: FuzzySeq, u: StepFuzzySet,
               sched: Schedule = DEFAULT_SCHEDULE) -> list:
    return [(n, hend(instantiate(seq, n), u)) for n in sched.indices]


def verdict_hend(trace: Sequence, tol=DEFAULT_TOL) -> Verdict:
    if not trace:
        raise ValidationError("empty trace")
    return _verdict(trace, tol)


def hausdorff_level_trace(seq: FuzzySeq, u: StepFuzzySet, alpha,
                          sched: Schedule = DEFAULT_SCHEDULE) -> list:
    """Per-level Hausdorff trace H([u_n]_alpha, [u]_alpha).

    The level must avoid the thresholds of u, where the cut map jumps.
    """
    alpha = as_level(alpha)
    if alpha in u.thresholds:
        raise JumpLevel(f"level {alpha} is a threshold of the limit")
    target = u.cut(alpha)
    out = []
    for n in sched.indices:
        out.append((n, hausdorff_ext(instantiate(seq, n).cut(alpha), target)))
    return out


def s_trace(seq: FuzzySeq, sched: Schedule = DEFAULT_SCHEDULE,
            tol=DEFAULT_TOL) -> dict:
    """Heights S of the members, with a finite-evidence limit analysis."""
    trace = [(n, s_value(instantiate(seq, n))) for n in sched.indices]
    tail = _tail([v for _, v in trace])
    spread = max(tail) - min(tail)
    convergent = spread < tol
    rises = any(tail[i + 1] > tail[i] for i in range(len(tail) - 1))
    falls = any(tail[i + 1] < tail[i] for i in range(len(tail) - 1))
    return {
        "trace": trace,
        "convergent": convergent,
        "limit": tail[-1] if convergent else None,
        "oscillates": rises and falls,
    }


# ---------------------------------------------------------------------------
# Kuratowski limit probes.
# ---------------------------------------------------------------------------


def default_probes(c: IntervalUnion) -> list:
    """Inner probes on c (part endpoints and midpoints) plus outer probes
    (gap midpoints and points just outside the hull)."""
    if c.is_empty:
        return [Fraction(-1), Fraction(0), Fraction(1)]
    probes = []
    for p in c.parts:
        if p.is_bounded():
            probes.extend([p.lo, (p.lo + p.hi) / 2, p.hi])
        elif p.lo != -INF:
            probes.extend([p.lo, p.lo + 1])
        elif p.hi != INF:
            probes.extend([p.hi - 1, p.hi])
        else:
            probes.append(Fraction(0))
    for g in c.gaps():
        probes.append((g.lo + g.hi) / 2)
    hull = c.hull()
    if hull.lo != -INF:
        probes.append(hull.lo - 1)
    if hull.hi != INF:
        probes.append(hull.hi + 1)
    seen = []
    for p in probes:
        if p not in seen:
            seen.append(p)
    return seen


def kuratowski_probe(setseq: Callable[[int], IntervalUnion], c: IntervalUnion,
                     sched: Schedule = DEFAULT_SCHEDULE,
                     probes: Optional[Sequence] = None,
                     tol=DEFAULT_TOL) -> Verdict:
    """Finite evidence for lim C_n = c in the Kuratowski sense.

    Inner probes (points of c) must have d(x, C_n) -> 0. An outer probe x
    with margin m = min(d(x, c), 1) must satisfy d(x, C_n) >= m/2 over the
    schedule tail; a violation there means points of C_n cluster outside c.
    """
    if probes is None:
        probes = default_probes(c)
    if not probes:
        raise ValidationError("no probes")
    probes = [Fraction(p) if not isinstance(p, Fraction) else p for p in probes]
    sets = [setseq(n) for n in sched.indices]
    evidence = []
    inner_statuses = []
    outer_ok = []
    for x in probes:
        margin = dist_point_set(x, c)
        vals = [dist_point_set(x, s) for s in sets]
        if margin == 0:
            status = _verdict_values(vals, tol)
            inner_statuses.append(status)
            evidence.append(("inner", x, tuple(vals), status))
        else:
            m = min(margin, Fraction(1))
            ok = all(v >= m / 2 for v in _tail(vals))
            outer_ok.append(ok)
            evidence.append(("outer", x, tuple(vals), "held" if ok else "violated"))
    if any(s == DIVERGES for s in inner_statuses) or not all(outer_ok):
        status = DIVERGES
    elif all(s == CONVERGES for s in inner_statuses) and all(outer_ok):
        status = CONVERGES
    else:
        status = INCONCLUSIVE
    return Verdict(status, tuple(evidence), tol)


def gamma_test(seq: FuzzySeq, u: StepFuzzySet,
               sched: Schedule = DEFAULT_SCHEDULE,
               level_samples: int = 16, probes_per_level: int = 8,
               tol=DEFAULT_TOL, seed: int = 0) -> Verdict:
    """Evidence for Gamma-convergence of the sequence to u.

    Gamma-convergence on the line is characterized by Kuratowski convergence
    of the cuts at every level outside the (finite) jump set of u, so the
    test draws random levels in (0,1) avoiding the thresholds of u and runs
    the Kuratowski probe on the cut sequences there.
    """
    rng = random.Random(seed)
    forbidden = set(u.thresholds)
    levels = []
    while len(levels) < level_samples:
        a = Fraction(rng.random()).limit_denominator(2048)
        if 0 < a < 1 and a not in forbidden and a not in levels:
            levels.append(a)
    cache = {n: instantiate(seq, n) for n in sched.indices}
    evidence = []
    statuses = []
    for a in sorted(levels):
        c = u.cut(a)
        probes = default_probes(c)
        if len(probes) > probes_per_level:
            inner = [p for p in probes if dist_point_set(p, c) == 0]
            outer = [p for p in probes if p not in inner]
            mixed = []
            for i in range(max(len(inner), len(outer))):
                if i < len(inner):
                    mixed.append(inner[i])
                if i < len(outer):
                    mixed.append(outer[i])
            probes = mixed[:probes_per_level]
        v = kuratowski_probe(lambda n, a=a: cache[n].cut(a), c, sched,
                             probes, tol)
        statuses.append(v.status)
        evidence.append((a, v.status))
    if any(s == DIVERGES for s in statuses):
        status = DIVERGES
    elif all(s == CONVERGES for s in statuses):
        status = CONVERGES
    else:
        status = INCONCLUSIVE
    return Verdict(status, tuple(evidence), tol)


# ---------------------------------------------------------------------------
# Connectedness condition and hypothesis classification.
# ---------------------------------------------------------------------------


def connectedness_condition(seq: FuzzySeq, eps_list: Sequence,
                            sched: Schedule = DEFAULT_SCHEDULE) -> dict:
    """For each epsilon, search for delta in (0, epsilon] and a schedule
    index N with [u_n]_delta connected for every sampled n >= N.

    Connectedness of the cut is equivalent to connectedness of the truncated
    endograph, so the check runs on cuts. Candidate deltas are epsilon itself
    and the instantiated thresholds of the sampled members lying in
    (0, epsilon], tried from the largest down.
    """
    if not eps_list:
        raise ValidationError("eps_list must be nonempty")
    cache = {n: instantiate(seq, n) for n in sched.indices}
    results = []
    for eps in eps_list:
        eps = as_level(eps)
        if eps == 0:
            raise OutOfRange("epsilon must be positive")
        cands = {eps}
        for v in cache.values():
            cands.update(t for t in v.thresholds if t <= eps)
        witness = None
        for delta in sorted(cands, reverse=True):
            for i, nstart in enumerate(sched.indices):
                if all(is_connected(cache[n].cut(delta))
                       for n in sched.indices[i:]):
                    witness = (delta, nstart)
                    break
            if witness:
                break
        results.append({
            "eps": eps,
            "satisfied": witness is not None,
            "delta": witness[0] if witness else None,
            "N": witness[1] if witness else None,
        })
    return {"results": results, "satisfied": all(r["satisfied"] for r in results)}


def eventual_boundedness(seq: FuzzySeq, alpha, beta,
                         sched: Schedule = DEFAULT_SCHEDULE,
                         u: Optional[StepFuzzySet] = None) -> dict:
    """Search for N with [u_n]_beta bounded for every sampled n >= N, and
    report the hull of the union of those cuts."""
    alpha, beta = as_level(alpha), as_level(beta)
    if not (0 < alpha < beta <= 1):
        raise BadRange("need 0 < alpha < beta <= 1")
    cache = {n: instantiate(seq, n) for n in sched.indices}
    found = None
    for i, nstart in enumerate(sched.indices):
        if all(is_bounded(cache[n].cut(beta)) for n in sched.indices[i:]):
            found = (i, nstart)
            break
    hull = None
    if found is not None:
        i, _ = found
        union = IntervalUnion.empty()
        for n in sched.indices[i:]:
            union = union.union(cache[n].cut(beta))
        if not union.is_empty:
            h = union.hull()
            hull = (h.lo, h.hi)
    return {
        "alpha": alpha,
        "beta": beta,
        "bounded": found is not None,
        "N": found[1] if found else None,
        "hull": hull,
        "limit_cut_bounded": is_bounded(u.cut(alpha)) if u is not None else None,
    }


_DEFAULT_EPS = tuple(Fraction(k, 10) for k in range(1, 7))


def classify_pair(u: StepFuzzySet, seq: FuzzySeq,
                  sched: Schedule = DEFAULT_SCHEDULE,
                  xi=None, eps_list: Optional[Sequence] = None,
                  tol=DEFAULT_TOL) -> dict:
    """Report which convergence-theorem hypotheses hold on sampled evidence.

    Hypothesis labels:
      limit_general         u has compact cuts and is nonempty
      limit_normal_general  additionally u is normal
      seq_connected         every sampled member has connected cuts
      seq_normal_connected  ... and is normal
      seq_normal_gencon     ... and has compact cuts
      condition             the connectedness condition over eps_list
      wccp                  weak connectedness compact pair, via a supplied
                            xi witness and/or the endograph-metric evidence

    'applies' then flags the four classical hypothesis sets.
    """
    cu = classify(u)
    cache = {n: instantiate(seq, n) for n in sched.indices}
    cns = [classify(v) for v in cache.values()]
    limit_general = cu.nonempty and cu.compact_cuts
    limit_normal_general = limit_general and cu.normal
    seq_connected = all(c.connected_cuts for c in cns)
    seq_normal_connected = seq_connected and all(c.normal for c in cns)
    seq_normal_gencon = seq_normal_connected and all(c.compact_cuts for c in cns)
    condition = connectedness_condition(
        seq, list(eps_list) if eps_list is not None else list(_DEFAULT_EPS),
        sched)
    hend_verdict = verdict_hend(hend_trace(seq, u, sched), tol)

    wccp = None
    wccp_evidence = []
    if xi is not None:
        xi = as_level(xi)
        ok = xi < s_value(u) and is_compact_sliceset(truncate(u, xi, 1))
        witness_n = None
        if ok:
            for i, nstart in enumerate(sched.indices):
                if all(is_connected_sliceset(truncate(cache[n], xi, 1))
                       for n in sched.indices[i:]):
                    witness_n = nstart
                    break
            ok = witness_n is not None
        wccp = ok
        wccp_evidence.append(("xi", xi, ok, witness_n))
    if hend_verdict.status == CONVERGES:
        wccp = True
        wccp_evidence.append(("hend", hend_verdict.status))

    return {
        "limit_nonempty": cu.nonempty,
        "limit_general": limit_general,
        "limit_normal_general": limit_normal_general,
        "seq_connected": seq_connected,
        "seq_normal_connected": seq_normal_connected,
        "seq_normal_gencon": seq_normal_gencon,
        "condition": condition["satisfied"],
        "condition_report": condition,
        "hend_status": hend_verdict.status,
        "wccp": wccp,
        "wccp_evidence": wccp_evidence,
        "applies": {
            "normal_connected": limit_normal_general and seq_normal_connected,
            "normal_gencon": limit_normal_general and seq_normal_gencon,
            "general_connected": limit_general and seq_connected,
            "general_condition": limit_general and condition["satisfied"],
            "general_wccp": limit_general and wccp is True,
        },
    }


def family_cut_union(family: Sequence[StepFuzzySet], alpha) -> tuple:
    """Union of the cuts of a finite family at one level, with boundedness.

    On the line boundedness of the union is exactly total boundedness, which
    is what uniform cut bounds for compact families come down to.
    """
    alpha = as_level(alpha)
    union = IntervalUnion.empty()
    for u in family:
        union = union.union(u.cut(alpha))
    return union, is_bounded(union)
