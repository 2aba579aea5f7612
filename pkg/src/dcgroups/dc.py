"""Degree of commutativity: exact, Monte-Carlo and closed-form bounds."""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, ResourceError
from .groups import CENTRAL, Element, FiniteGroup, Group
from .measure import BallUniform, Measure, MeasureSeqSpec, Weight, integer_weights

DEFAULT_PAIRS_CAP = 10**8
DEFAULT_CLASS_CAP = 10_000


@dataclass(frozen=True)
class DcPoint:
    n: int
    value: Weight
    support_size: int


def _num(v):
    return float(v)


def _exact(v):
    return f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else None


@dataclass(frozen=True)
class DcReport:
    """Per-n values plus statistics over the last ``tail_window`` points.

    ``tail_max`` / ``tail_min`` are finite-prefix statistics, not limits.
    """

    points: tuple[DcPoint, ...]
    tail_window: int
    tail_max: Weight
    tail_min: Weight
    group: str = ""
    sequence: dict = field(default_factory=dict)

    @classmethod
    def build(cls, points: Sequence[DcPoint], tail_window: int, group: str = "",
              sequence: dict | None = None) -> DcReport:
        if not points:
            raise ConfigError("report needs at least one point")
        if tail_window < 1:
            raise ConfigError("tail window must be >= 1")
        tail = [p.value for p in points[-tail_window:]]
        return cls(tuple(points), tail_window, max(tail), min(tail), group, sequence or {})

    def values(self) -> list[Weight]:
        return [p.value for p in self.points]

    def to_dict(self) -> dict:
        pts = []
        for p in self.points:
            d = {"n": p.n, "value": _num(p.value), "support": p.support_size}
            if (ex := _exact(p.value)) is not None:
                d["exact"] = ex
            pts.append(d)
        return {
            "group": self.group,
            "sequence": self.sequence,
            "points": pts,
            "tail": {"window": self.tail_window, "max": _num(self.tail_max),
                     "min": _num(self.tail_min)},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value"])
        for p in self.points:
            w.writerow([p.n, repr(float(p.value))])
        return buf.getvalue()


@dataclass(frozen=True)
class McEstimate:
    mean: float
    ci_low: float
    ci_high: float
    trials: int
    seed: int

    def to_dict(self) -> dict:
        return {"mean": self.mean, "ci_low": self.ci_low, "ci_high": self.ci_high,
                "trials": self.trials, "seed": self.seed}


# ---------------------------------------------------------------------------------
# exact dc of a single measure


def _weights(mu: Measure):
    if mu.exact:
        w, D = integer_weights(mu)
        return w, D
    return mu.weights, None


def _finish(total, D, exact: bool):
    if exact:
        return Fraction(total, D * D)
    return total


def dc_all_pairs(mu: Measure, pairs_cap: int | None = DEFAULT_PAIRS_CAP) -> Weight:
    """Quadratic oracle: sum of ``mu(x) mu(y)`` over commuting ordered pairs."""
    n = len(mu)
    if pairs_cap is not None and n * n > pairs_cap:
        raise ResourceError(f"{n * n} pairs exceed cap {pairs_cap}")
    w, D = _weights(mu)
    commutes = mu.group.commutes
    items = list(w.items())
    if mu.exact:
        total = 0
        for x, wx in items:
            total += wx * sum(wy for y, wy in items if commutes(x, y))
        return _finish(total, D, True)
    terms = [wx * math.fsum(wy for y, wy in items if commutes(x, y)) for x, wx in items]
    return math.fsum(terms)


def _dc_keyed(mu: Measure) -> Weight:
    w, D = _weights(mu)
    key = mu.group.commute_key
    central = 0 if mu.exact else []
    buckets: dict = defaultdict(int) if mu.exact else defaultdict(list)
    for x, wx in w.items():
        k = key(x)
        if k is CENTRAL:
            if mu.exact:
                central += wx
            else:
                central.append(wx)
        elif mu.exact:
            buckets[k] += wx
        else:
            buckets[k].append(wx)
    if mu.exact:
        # central x pairs with everything; non-central x with central y or same key
        total = D * D - (D - central) ** 2 + sum(m * m for m in buckets.values())
        return _finish(total, D, True)
    z = math.fsum(central)
    return math.fsum([z + z * (1.0 - z)] + [math.fsum(b) ** 2 for b in buckets.values()])


def dc_of_measure(mu: Measure, pairs_cap: int | None = DEFAULT_PAIRS_CAP) -> Weight:
    """``(mu x mu)({(x, y): xy = yx})``, exact for exact measures."""
    g = mu.group
    if g.abelian:
        return Fraction(1) if mu.exact else 1.0
    if g.has_commute_key:
        return _dc_keyed(mu)
    return dc_all_pairs(mu, pairs_cap)


def commuting_pairs(group: Group, elements: Sequence[Element],
                    pairs_cap: int | None = DEFAULT_PAIRS_CAP) -> int:
    """Number of ordered commuting pairs in a finite set of distinct elements."""
    n = len(elements)
    if group.abelian:
        return n * n
    if group.has_commute_key:
        key = group.commute_key
        central = 0
        buckets: dict = defaultdict(int)
        for x in elements:
            k = key(x)
            if k is CENTRAL:
                central += 1
            else:
                buckets[k] += 1
        return n * n - (n - central) ** 2 + sum(m * m for m in buckets.values())
    if pairs_cap is not None and n * n > pairs_cap:
        raise ResourceError(f"{n * n} pairs exceed cap {pairs_cap}")
    commutes = group.commutes
    return sum(1 for x in elements for y in elements if commutes(x, y))


def dc_sequence(seq: MeasureSeqSpec, n_range: Iterable[int], tail_window: int = 10,
                pairs_cap: int | None = DEFAULT_PAIRS_CAP) -> DcReport:
    points = []
    if isinstance(seq, BallUniform):
        for n, elems in seq.sets(n_range):
            N = len(elems)
            points.append(DcPoint(n, Fraction(commuting_pairs(seq.group, elems, pairs_cap), N * N),
                                  N))
    else:
        for n, mu in seq.measures(n_range):
            points.append(DcPoint(n, dc_of_measure(mu, pairs_cap), len(mu)))
    return DcReport.build(points, tail_window, str(seq.group), seq.describe())


# ---------------------------------------------------------------------------------
# Monte Carlo


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _walk_endpoints(step: Measure, n: int, count: int, rng: np.random.Generator):
    support = step.support()
    probs = np.array([float(step.weights[x]) for x in support])
    probs /= probs.sum()
    g = step.group
    if isinstance(g, FiniteGroup):
        elems = np.array(support, dtype=np.int64)
        state = np.full(count, g.identity, dtype=np.int64)
        for _ in range(n):
            state = g.table[state, elems[rng.choice(len(support), size=count, p=probs)]]
        return state.tolist()
    mul = g.mul
    out = []
    for _ in range(count):
        x = g.identity
        for i in rng.choice(len(support), size=n, p=probs):
            x = mul(x, support[i])
        out.append(x)
    return out


def dc_montecarlo(step: Measure, n: int, trials: int, seed: int,
                  confidence: float = 0.95) -> McEstimate:
    """Fraction of independent pairs of ``n``-step walk endpoints that commute."""
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    g = step.group
    if g.abelian:
        return McEstimate(1.0, 1.0, 1.0, trials, seed)
    rng = np.random.default_rng(seed)
    ends = _walk_endpoints(step, n, 2 * trials, rng)
    xs, ys = ends[:trials], ends[trials:]
    if isinstance(g, FiniteGroup):
        x, y = np.array(xs), np.array(ys)
        hits = int(np.count_nonzero(g.table[x, y] == g.table[y, x]))
    else:
        hits = sum(1 for a, b in zip(xs, ys) if g.commutes(a, b))
    lo, hi = wilson_interval(hits, trials, confidence)
    mean = hits / trials
    return McEstimate(mean, min(lo, mean), max(hi, mean), trials, seed)


# ---------------------------------------------------------------------------------
# closed forms


def dc_central_formula(center_index: int, centralizer_indices: Sequence) -> Fraction:
    """``(1/q) * sum_t 1/[G:C_G(t)]`` over a transversal of the centre; ``inf`` or
    ``None`` entries contribute 0."""
    q = center_index
    if not isinstance(q, int) or isinstance(q, bool) or q < 1:
        raise ConfigError(f"centre index must be a positive integer, got {q!r}")
    if len(centralizer_indices) != q:
        raise ConfigError(f"expected {q} centralizer indices, got {len(centralizer_indices)}")
    total = Fraction(0)
    seen_central = False
    for k in centralizer_indices:
        if k is None or k == math.inf:
            continue
        if k < 1 or int(k) != k:
            raise ConfigError(f"bad centralizer index {k!r}")
        seen_central |= k == 1
        total += Fraction(1, int(k))
    if not seen_central:
        raise ConfigError("transversal must contain the central coset (an index of 1)")
    return total / q


def neumann_lower_bound(m: int, d: int) -> Fraction:
    """``1/(m^2 d)``."""
    if m < 1 or d < 1:
        raise ConfigError("m and d must be >= 1")
    return Fraction(1, m * m * d)


def gustafson_upper_bound(center_index: int) -> Fraction:
    """``1/2 + 1/(2q)``."""
    if center_index < 1:
        raise ConfigError("centre index must be >= 1")
    return Fraction(1, 2) + Fraction(1, 2 * center_index)


# ---------------------------------------------------------------------------------
# class sizes


def class_size(group: Group, x: Element, cap: int = DEFAULT_CLASS_CAP) -> int | None:
    """Size of the conjugacy class of ``x``, or ``None`` if it exceeds ``cap``."""
    members = None
    try:
        members = group.finite_class_members(x)
    except NotImplementedError:
        pass
    if members is not None:
        return len(members) if len(members) <= cap else None
    if group.has_commute_key and group.commute_key(x) is CENTRAL:
        return 1
    gens = group.generators()
    gens = gens + [group.inv(s) for s in gens]
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for y in frontier:
            for s in gens:
                z = group.conj(s, y)
                if z not in seen:
                    seen.add(z)
                    if len(seen) > cap:
                        return None
                    nxt.append(z)
        frontier = nxt
    return len(seen)


def mass_of_small_centralizers(mu: Measure, r, class_cap: int = DEFAULT_CLASS_CAP) -> Weight:
    """``mu({x : [G:C_G(x)] <= r})``; classes larger than ``class_cap`` count as > r."""
    r = Fraction(r)
    if r < 1:
        raise ConfigError("r must be >= 1")
    if class_cap <= r:
        raise ConfigError("class cap must exceed r")
    g = mu.group
    total = Fraction(0) if mu.exact else []
    for x, w in mu.items():
        k = 1 if g.abelian else class_size(g, x, class_cap)
        if k is not None and k <= r:
            if mu.exact:
                total += w
            else:
                total.append(w)
    return total if mu.exact else math.fsum(total)


__all__ = ["DcPoint", "DcReport", "McEstimate", "dc_of_measure", "dc_all_pairs", "dc_sequence",
           "dc_montecarlo", "wilson_interval", "dc_central_formula", "neumann_lower_bound",
           "gustafson_upper_bound", "mass_of_small_centralizers", "class_size",
           "commuting_pairs"]
