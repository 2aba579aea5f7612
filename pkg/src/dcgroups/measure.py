"""Finitely supported probability measures on a group."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import ConfigError, ModeError, ResourceError, StructureError
from .groups import DEFAULT_BALL_CAP, Element, GenSet, Group, ball, iter_spheres

DEFAULT_SUPPORT_CAP = 5_000_000
FLOAT_MASS_TOL = 1e-12

Weight = Fraction | float


class Measure:
    """Probability measure with finite support.

    ``exact`` measures carry :class:`fractions.Fraction` weights summing to
    exactly 1; float measures sum to 1 within ``FLOAT_MASS_TOL``.  Zero
    weights are never stored.
    """

    __slots__ = ("group", "weights", "exact")

    def __init__(self, group: Group, weights: Mapping[Element, Weight], exact: bool | None = None,
                 check: bool = True):
        if exact is None:
            exact = all(isinstance(w, (Fraction, int)) for w in weights.values())
        conv = Fraction if exact else float
        self.group = group
        self.exact = exact
        self.weights = {x: conv(w) for x, w in weights.items() if w != 0}
        if check:
            self._validate()

    def _validate(self) -> None:
        if not self.weights:
            raise ConfigError("measure has empty support")
        for x, w in self.weights.items():
            if w < 0:
                raise ConfigError(f"negative weight {w} at {x!r}")
            self.group.check(x)
        total = self.mass()
        if self.exact and total != 1:
            raise ConfigError(f"total mass {total} != 1")
        if not self.exact and abs(total - 1.0) > FLOAT_MASS_TOL:
            raise ConfigError(f"total mass {total!r} not within {FLOAT_MASS_TOL} of 1")

    @classmethod
    def _raw(cls, group: Group, weights: dict, exact: bool) -> Measure:
        mu = cls.__new__(cls)
        mu.group, mu.weights, mu.exact = group, weights, exact
        return mu

    @classmethod
    def delta(cls, group: Group, x: Element | None = None) -> Measure:
        x = group.identity if x is None else x
        return cls(group, {x: Fraction(1)})

    @classmethod
    def uniform(cls, group: Group, elements: Iterable[Element]) -> Measure:
        elems = list(dict.fromkeys(elements))
        w = Fraction(1, len(elems))
        return cls(group, {x: w for x in elems})

    def mass(self) -> Weight:
        if self.exact:
            return sum(self.weights.values(), Fraction(0))
        return math.fsum(self.weights.values())

    def __getitem__(self, x: Element) -> Weight:
        return self.weights.get(x, Fraction(0) if self.exact else 0.0)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def items(self):
        return self.weights.items()

    def support(self) -> list[Element]:
        """Support in a deterministic order."""
        return sorted(self.weights, key=self.group.sort_key)

    def to_float(self) -> Measure:
        return Measure._raw(self.group, {x: float(w) for x, w in self.weights.items()}, False)

    def is_symmetric(self) -> bool:
        inv = self.group.inv
        return all(self.weights.get(inv(x)) == w for x, w in self.weights.items())

    def min_weight(self) -> Weight:
        return min(self.weights.values())

    def __eq__(self, other):
        return (isinstance(other, Measure) and self.group == other.group
                and self.exact == other.exact and self.weights == other.weights)

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"Measure({self.group}, {len(self.weights)} atoms, {mode})"


def _same(mu: Measure, nu: Measure) -> None:
    if mu.group != nu.group:
        raise StructureError(f"measures live on different groups: {mu.group} vs {nu.group}")
    if mu.exact != nu.exact:
        raise ModeError("cannot mix exact and float measures")


def integer_weights(mu: Measure) -> tuple[dict[Element, int], int]:
    """Numerators over a common denominator ``D`` (exact measures only)."""
    D = 1
    for w in mu.weights.values():
        D = D * w.denominator // math.gcd(D, w.denominator)
    return {x: w.numerator * (D // w.denominator) for x, w in mu.weights.items()}, D


def convolve(mu: Measure, nu: Measure, cap: int | None = DEFAULT_SUPPORT_CAP) -> Measure:
    """``(mu * nu)(z) = sum_x mu(x) nu(x^-1 z)``."""
    _same(mu, nu)
    mul = mu.group.mul
    out: dict = defaultdict(int if mu.exact else float)
    if mu.exact:
        a, da = integer_weights(mu)
        b, db = integer_weights(nu)
    else:
        a, b = mu.weights, nu.weights
    bi = list(b.items())
    for x, wx in a.items():
        for y, wy in bi:
            out[mul(x, y)] += wx * wy
        if cap is not None and len(out) > cap:
            raise ResourceError(f"convolution support exceeds cap {cap}")
    if mu.exact:
        D = da * db
        return Measure._raw(mu.group, {z: Fraction(w, D) for z, w in out.items()}, True)
    return Measure._raw(mu.group, dict(out), False)


def walk_power(step: Measure, n: int, cap: int | None = DEFAULT_SUPPORT_CAP) -> Measure:
    """``step^{*n}`` by binary powering."""
    if n < 1:
        raise ConfigError("walk power needs n >= 1")
    result: Measure | None = None
    done = 0
    base, base_exp, k = step, 1, n
    try:
        while True:
            if k & 1:
                result = base if result is None else convolve(result, base, cap)
                done += base_exp
            k >>= 1
            if not k:
                break
            base = convolve(base, base, cap)
            base_exp *= 2
    except ResourceError as exc:
        raise ResourceError(f"walk power {n}: {exc}", last_completed=done or None) from exc
    return result


def ball_uniform(group: Group, S: GenSet, n: int, cap: int | None = None) -> Measure:
    """Uniform measure on ``S^n``."""
    return Measure.uniform(group, sorted(ball(group, S, n, cap or DEFAULT_BALL_CAP),
                                         key=group.sort_key))


def translate(x: Element, mu: Measure) -> Measure:
    """Left translate: atom ``x g`` carries ``mu(g)``."""
    mu.group.check(x)
    mul = mu.group.mul
    return Measure._raw(mu.group, {mul(x, g): w for g, w in mu.weights.items()}, mu.exact)


def pushforward(mu: Measure, f) -> dict:
    """Image weights ``{f(x): mass}``; ``f`` may map outside the group (e.g. to cosets)."""
    out: dict = defaultdict(int if mu.exact else float)
    for x, w in mu.weights.items():
        out[f(x)] += w
    return dict(out)


def l1_distance(mu: Measure, nu: Measure) -> Weight:
    _same(mu, nu)
    keys = set(mu.weights) | set(nu.weights)
    diffs = [abs(mu[x] - nu[x]) for x in keys]
    if mu.exact:
        return sum(diffs, Fraction(0))
    return math.fsum(diffs)


def lazy_step(group: Group, S: GenSet, laziness: Fraction = Fraction(1, 2)) -> Measure:
    """Mass ``laziness`` on the identity, the rest spread evenly over ``S \\ {e}``."""
    laziness = Fraction(laziness)
    gens = S.nontrivial()
    if not 0 < laziness < 1 or not gens:
        raise ConfigError("laziness must lie in (0, 1) and S must have non-identity elements")
    w = (1 - laziness) / len(gens)
    weights = {g: w for g in gens}
    weights[group.identity] = laziness
    return Measure(group, weights)


def sample(mu: Measure, seed: int, count: int) -> list[Element]:
    """i.i.d. draws by inverse CDF over the sorted support."""
    if count <= 0:
        return []
    support = mu.support()
    w = np.array([float(mu.weights[x]) for x in support])
    cdf = np.cumsum(w)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    idx = np.searchsorted(cdf, rng.random(count), side="right")
    idx = np.minimum(idx, len(support) - 1)
    return [support[i] for i in idx]


# ---------------------------------------------------------------------------------
# measure sequences


def normalize_range(n_values: Iterable[int], minimum: int = 0) -> list[int]:
    ns = sorted(set(int(n) for n in n_values))
    if not ns:
        raise ConfigError("empty n range")
    if ns[0] < minimum:
        raise ConfigError(f"n values must be >= {minimum}")
    return ns


@dataclass(frozen=True)
class BallUniform:
    """``mu_n`` uniform on the ball ``S^n``."""

    group: Group
    genset: GenSet
    cap: int | None = None
    kind = "ball"

    def iter_balls(self, n_values: Iterable[int]) -> Iterator[tuple[int, list, int]]:
        """Yield ``(n, elements added since the previous yield, |S^n|)``."""
        ns = normalize_range(n_values)
        pending: list = []
        total = 0
        it = iter_spheres(self.group, self.genset, self.cap or DEFAULT_BALL_CAP)
        targets = iter(ns)
        target = next(targets)
        for r, sphere in enumerate(it):
            pending.extend(sphere)
            total += len(sphere)
            while r == target:
                yield target, pending, total
                pending = []
                target = next(targets, None)
                if target is None:
                    return

    def sets(self, n_values: Iterable[int]) -> Iterator[tuple[int, list]]:
        acc: list = []
        for n, new, _ in self.iter_balls(n_values):
            acc.extend(new)
            yield n, acc

    def measures(self, n_values: Iterable[int]) -> Iterator[tuple[int, Measure]]:
        for n, elems in self.sets(n_values):
            yield n, Measure.uniform(self.group, elems)

    def describe(self) -> dict:
        return {"kind": "ball", "gens": self.genset.words()}


@dataclass(frozen=True)
class WalkPower:
    """``mu_n = step^{*n}``."""

    step: Measure
    cap: int | None = DEFAULT_SUPPORT_CAP
    kind = "walk"

    @property
    def group(self) -> Group:
        return self.step.group

    def measures(self, n_values: Iterable[int]) -> Iterator[tuple[int, Measure]]:
        ns = normalize_range(n_values, minimum=1)
        current = walk_power(self.step, ns[0], self.cap)
        yield ns[0], current
        prev = ns[0]
        for n in ns[1:]:
            gap = self.step if n - prev == 1 else walk_power(self.step, n - prev, self.cap)
            try:
                current = convolve(current, gap, self.cap)
            except ResourceError as exc:
                raise ResourceError(str(exc), last_completed=prev) from exc
            prev = n
            yield n, current

    def describe(self) -> dict:
        return {"kind": "walk",
                "step": {self.group.format(x): str(w) for x, w in
                         ((x, self.step.weights[x]) for x in self.step.support())}}


@dataclass(frozen=True)
class Explicit:
    """A given list; ``mu_n`` is ``measures[n - 1]``."""

    items: tuple
    kind = "explicit"

    @property
    def group(self) -> Group:
        return self.items[0].group

    def measures(self, n_values: Iterable[int]) -> Iterator[tuple[int, Measure]]:
        for n in normalize_range(n_values, minimum=1):
            if n > len(self.items):
                raise ConfigError(f"explicit sequence has only {len(self.items)} measures")
            yield n, self.items[n - 1]

    def describe(self) -> dict:
        return {"kind": "explicit", "length": len(self.items)}


MeasureSeqSpec = BallUniform | WalkPower | Explicit


def almost_invariance_defect(seq: MeasureSeqSpec, x: Element,
                             n_range: Iterable[int]) -> list[tuple[int, Weight]]:
    """``[(n, ||x.mu_n - mu_n||_1)]``."""
    seq.group.check(x)
    out = []
    if isinstance(seq, BallUniform):
        mul = seq.group.mul
        ball: set = set()
        for n, new, total in seq.iter_balls(n_range):
            ball.update(new)
            moved = sum(1 for b in ball if mul(x, b) not in ball)
            out.append((n, Fraction(2 * moved, total)))
        return out
    for n, mu in seq.measures(n_range):
        out.append((n, l1_distance(translate(x, mu), mu)))
    return out


# ---------------------------------------------------------------------------------
# text serialization


def dump_measure(mu: Measure, header: str | None = None) -> str:
    lines = [f"# group: {header or mu.group}", f"# mode: {'exact' if mu.exact else 'float'}"]
    for x in mu.support():
        w = mu.weights[x]
        val = f"{w.numerator}/{w.denominator}" if mu.exact else repr(w)
        lines.append(f"{mu.group.format(x)}\t{val}")
    return "\n".join(lines) + "\n"


def load_measure(text: str, group: Group) -> Measure:
    weights: dict = {}
    exact = True
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            if key.strip() == "mode":
                exact = val.strip() == "exact"
            continue
        word, _, val = line.partition("\t")
        if not val:
            raise ConfigError(f"malformed measure line {raw!r}")
        x = group.parse(word)
        w = Fraction(val) if exact else float(val)
        weights[x] = weights.get(x, 0) + w
    return Measure(group, weights, exact=exact)


def measures_from_words(group: Group, weights: Mapping[str, str | Fraction | float]) -> Measure:
    """Build a measure from ``{word: weight}`` with weights like ``"1/4"``."""
    parsed: dict = {}
    exact = all(not isinstance(w, float) for w in weights.values())
    for word, w in weights.items():
        x = group.parse(word)
        parsed[x] = parsed.get(x, 0) + (Fraction(w) if exact else float(w))
    return Measure(group, parsed, exact=exact)


__all__ = ["Measure", "convolve", "walk_power", "ball_uniform", "translate", "l1_distance",
           "almost_invariance_defect", "sample", "lazy_step", "BallUniform", "WalkPower",
           "Explicit", "MeasureSeqSpec", "dump_measure", "load_measure", "pushforward",
           "integer_weights", "normalize_range", "measures_from_words"]
