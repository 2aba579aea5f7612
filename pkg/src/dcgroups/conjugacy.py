"""Conjugacy-class canonical forms and the conjugacy ratio of ball sequences."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .dc import commuting_pairs
from .errors import ConfigError
from .finite import Verdict
from .groups import Element, GenSet, Group, ball
from .measure import BallUniform, Explicit, MeasureSeqSpec

ConjClassId = Hashable


def conj_canonical(group: Group, x: Element) -> ConjClassId:
    """Canonical representative of the conjugacy class of ``x``."""
    group.check(x)
    try:
        return group.conj_class_id(x)
    except NotImplementedError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class CrPoint:
    n: int
    classes_meeting: int
    classes_contained: int
    ball_size: int

    @property
    def cr_value(self) -> Fraction:
        return Fraction(self.classes_meeting, self.ball_size)

    @property
    def straddling(self) -> Fraction:
        """Share of classes meeting but not contained, relative to the set size."""
        return Fraction(self.classes_meeting - self.classes_contained, self.ball_size)


@dataclass(frozen=True)
class CrReport:
    points: tuple[CrPoint, ...]
    tail_window: int
    tail_max: Fraction
    tail_min: Fraction
    group: str = ""
    sequence: dict = field(default_factory=dict)

    def values(self) -> list[Fraction]:
        return [p.cr_value for p in self.points]

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "sequence": self.sequence,
            "points": [{"n": p.n, "value": float(p.cr_value),
                        "exact": f"{p.cr_value.numerator}/{p.cr_value.denominator}",
                        "support": p.ball_size, "classes_meeting": p.classes_meeting,
                        "classes_contained": p.classes_contained} for p in self.points],
            "tail": {"window": self.tail_window, "max": float(self.tail_max),
                     "min": float(self.tail_min)},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value", "classes_meeting", "classes_contained"])
        for p in self.points:
            w.writerow([p.n, repr(float(p.cr_value)), p.classes_meeting, p.classes_contained])
        return buf.getvalue()


def _uniform_sets(seq: MeasureSeqSpec, n_range: Iterable[int]):
    if isinstance(seq, BallUniform):
        yield from seq.sets(n_range)
    elif isinstance(seq, Explicit):
        for n, mu in seq.measures(n_range):
            if len(set(mu.weights.values())) != 1:
                raise ConfigError("conjugacy ratio needs uniform measures on finite sets")
            yield n, list(mu.weights)
    else:
        raise ConfigError("conjugacy ratio needs a ball or explicit uniform sequence")


class _ClassCounter:
    """Incremental class bookkeeping for a growing (or replaced) finite set."""

    def __init__(self, group: Group):
        self.group = group
        self.members: set = set()
        self.met: set = set()
        self.pending: dict = {}
        self.contained = 0

    def add(self, elems: Iterable[Element]) -> None:
        g = self.group
        for x in elems:
            if x in self.members:
                continue
            self.members.add(x)
            cid = conj_canonical(g, x)
            if cid not in self.met:
                self.met.add(cid)
                cls = g.finite_class_members(x)
                if cls is not None:
                    self.pending[cid] = cls
        done = [cid for cid, cls in self.pending.items() if cls <= self.members]
        for cid in done:
            del self.pending[cid]
        self.contained += len(done)


def cr_points(seq: MeasureSeqSpec, n_range: Iterable[int]) -> list[CrPoint]:
    group = seq.group
    points = []
    if isinstance(seq, BallUniform):
        counter = _ClassCounter(group)
        for n, new, total in seq.iter_balls(n_range):
            counter.add(new)
            points.append(CrPoint(n, len(counter.met), counter.contained, total))
        return points
    for n, elems in _uniform_sets(seq, n_range):
        counter = _ClassCounter(group)
        counter.add(elems)
        points.append(CrPoint(n, len(counter.met), counter.contained, len(elems)))
    return points


def cr_sequence(seq: MeasureSeqSpec, n_range: Iterable[int], tail_window: int = 10) -> CrReport:
    """``|{C : C meets F_n}| / |F_n|`` per n with tail statistics."""
    points = cr_points(seq, n_range)
    if tail_window < 1:
        raise ConfigError("tail window must be >= 1")
    tail = [p.cr_value for p in points[-tail_window:]]
    return CrReport(tuple(points), tail_window, max(tail), min(tail), str(seq.group),
                    seq.describe())


def contained_vs_meeting(seq: MeasureSeqSpec, n: int) -> Fraction:
    """``|{C : C meets F_n, C not inside F_n}| / |F_n|``."""
    return cr_points(seq, [n])[0].straddling


def cr_lower_bound(m: int, d: int) -> Fraction:
    if m < 1 or d < 1:
        raise ConfigError("m and d must be >= 1")
    return Fraction(1, m * m * d)


def verify_cr_eq_dc(seq: MeasureSeqSpec, n: int, tol) -> Verdict:
    """Pointwise ``|cr_n - dc_n| <= tol`` for a uniform-set sequence."""
    elems = next(iter(_uniform_sets(seq, [n])))[1]
    p = cr_points(seq, [n])[0]
    N = len(elems)
    dc = Fraction(commuting_pairs(seq.group, elems), N * N)
    gap = abs(p.cr_value - dc)
    tol = Fraction(tol) if not isinstance(tol, float) else Fraction(repr(tol))
    return Verdict("cr_eq_dc", str(seq.group), gap <= tol,
                   {"n": n, "cr": p.cr_value, "dc": dc, "gap": gap, "tol": tol})


# ---------------------------------------------------------------------------------
# brute-force oracle


def conjugates_within(group: Group, x: Element, conjugators: Iterable[Element]) -> set:
    return {group.conj(g, x) for g in conjugators}


def oracle_mismatches(group: Group, S: GenSet | None = None, radius: int = 4,
                      conj_radius: int = 8) -> list[tuple]:
    """Pairs from the ``radius`` ball where canonical forms disagree with a search for
    a conjugator in the ``conj_radius`` ball."""
    S = S or group.default_genset()
    small = sorted(ball(group, S, radius), key=group.sort_key)
    big = list(ball(group, S, conj_radius))
    ids = {x: conj_canonical(group, x) for x in small}
    bad = []
    for x in small:
        reach = conjugates_within(group, x, big)
        for y in small:
            if (y in reach) != (ids[x] == ids[y]):
                bad.append((x, y))
    return bad


def class_partition(group: Group, elements: Sequence[Element]) -> set[frozenset]:
    parts: dict = {}
    for x in elements:
        parts.setdefault(conj_canonical(group, x), set()).add(x)
    return {frozenset(p) for p in parts.values()}


__all__ = ["ConjClassId", "CrPoint", "CrReport", "conj_canonical", "cr_sequence", "cr_points",
           "contained_vs_meeting", "cr_lower_bound", "verify_cr_eq_dc", "oracle_mismatches",
           "conjugates_within", "class_partition"]
