"""Exact structure of finite groups and machine checks of commutativity bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import ConfigError, VerificationError
from .groups import FiniteGroup


@dataclass
class Verdict:
    """Outcome of one machine check on one group."""

    check: str
    group: str
    passed: bool
    data: dict = field(default_factory=dict)

    def raise_if_failed(self) -> Verdict:
        if not self.passed:
            raise VerificationError(f"{self.check} failed on {self.group}", self.to_dict())
        return self

    def to_dict(self) -> dict:
        return {"check": self.check, "group": self.group, "passed": self.passed,
                "data": jsonable(self.data)}


def jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else v.numerator
    if isinstance(v, dict):
        return {k: jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return [jsonable(x) for x in items]
    if isinstance(v, np.integer):
        return int(v)
    return v


@dataclass(frozen=True)
class ConjDecomp:
    classes: tuple[frozenset, ...]

    def sizes(self) -> list[int]:
        return sorted(len(c) for c in self.classes)

    def __len__(self):
        return len(self.classes)


@dataclass(frozen=True)
class NeumannDecomposition:
    alpha: Fraction
    r: Fraction
    Gamma: frozenset
    H: frozenset
    index_Gamma: int
    order_H: int
    max_class_in_Gamma: int


def center(G: FiniteGroup) -> frozenset:
    t = G.table
    return frozenset(int(z) for z in range(G.order) if np.array_equal(t[z], t[:, z]))


def centralizer(G: FiniteGroup, x: int) -> frozenset:
    t = G.table
    return frozenset(np.flatnonzero(t[x] == t[:, x]).tolist())


def conj_classes(G: FiniteGroup) -> ConjDecomp:
    seen: set = set()
    classes = []
    for x in range(G.order):
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        gens = G.generators()
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = G.conj(g, y)
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        seen |= orbit
        classes.append(frozenset(orbit))
    return ConjDecomp(tuple(classes))


def class_sizes(G: FiniteGroup) -> list[int]:
    """``[G:C_G(x)]`` for every element, by centralizer order."""
    t = G.table
    counts = (t == t.T).sum(axis=1)
    return [G.order // int(c) for c in counts]


def subgroup_closure(G: FiniteGroup, X: Iterable[int]) -> frozenset:
    return G.closure(X)


def commutator_subgroup(G: FiniteGroup, within: Iterable[int] | None = None) -> frozenset:
    """``[K, K]`` for ``K = within`` (default ``G``)."""
    K = sorted(range(G.order) if within is None else within)
    comms = {G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b)) for a in K for b in K}
    return G.closure(comms)


def is_normal(G: FiniteGroup, K: frozenset) -> bool:
    return all(G.conj(g, k) in K for g in G.generators() for k in K)


def index(G: FiniteGroup, K: frozenset) -> int:
    return G.order // len(K)


def dc_class_formula(G: FiniteGroup) -> Fraction:
    """``k(G) / |G|``."""
    return Fraction(len(conj_classes(G)), G.order)


def verify_gustafson(G: FiniteGroup) -> Verdict:
    dc = dc_class_formula(G)
    q = index(G, center(G))
    data = {"dc": dc, "center_index": q, "abelian": G.abelian}
    if G.abelian:
        ok = dc == 1 and q == 1
    else:
        bound = Fraction(1, 2) + Fraction(1, 2 * q)
        data["bound"] = bound
        ok = dc <= Fraction(5, 8) and dc <= bound and q >= 4
    return Verdict("gustafson", G.name, ok, data)


def verify_center_bound(G: FiniteGroup) -> Verdict:
    dc = dc_class_formula(G)
    eps = dc - Fraction(1, 2)
    q = index(G, center(G))
    data = {"dc": dc, "epsilon": eps, "center_index": q}
    if eps <= 0:
        data["vacuous"] = True
        return Verdict("center_bound", G.name, True, data)
    return Verdict("center_bound", G.name, q <= 1 / eps, data)


def nvl_log_bound(k: int, log=math.log) -> float:
    """``log(k^{(3 + 5 log k)/2})`` with the given logarithm used inside the exponent."""
    return 0.5 * (3 + 5 * log(k)) * math.log(k)


def verify_nvl(G: FiniteGroup, within: frozenset | None = None) -> Verdict:
    """``|[K,K]| <= k^{(3 + 5 ln k)/2}`` with ``k`` the largest class size of ``K``.

    ``K`` is ``within`` when given (its classes taken inside ``K``), else ``G``.
    """
    if within is None:
        k = max(class_sizes(G))
        derived = commutator_subgroup(G)
    else:
        K = sorted(within)
        k = max(len({G.conj(g, x) for g in K}) for x in K)
        derived = commutator_subgroup(G, K)
    d = len(derived)
    bound_ln = nvl_log_bound(k)
    bound_log2 = nvl_log_bound(k, math.log2)
    data = {"max_class": k, "derived_order": d,
            "bound_natural_log": math.exp(bound_ln), "bound_log2": math.exp(bound_log2)}
    # k == 1 gives bound exactly 1
    ok = d == 1 if k == 1 else math.log(d) <= bound_ln
    data["passes_log2"] = d == 1 if k == 1 else math.log(d) <= bound_log2
    return Verdict("nvl", G.name, ok, data)


def neumann_decompose(G: FiniteGroup) -> NeumannDecomposition:
    """Gamma generated by the elements with class size at most
    ``r = alpha^-2 + alpha^-1 + 1``, and ``H = [Gamma, Gamma]``."""
    alpha = dc_class_formula(G)
    r = 1 / alpha**2 + 1 / alpha + 1
    sizes = class_sizes(G)
    Gamma = G.closure(x for x in range(G.order) if sizes[x] <= r)
    H = commutator_subgroup(G, Gamma)
    return NeumannDecomposition(alpha, r, Gamma, H, index(G, Gamma), len(H),
                                max(sizes[x] for x in Gamma))


def verify_neumann(G: FiniteGroup) -> Verdict:
    dec = neumann_decompose(G)
    alpha, r, Gamma, H = dec.alpha, dec.r, dec.Gamma, dec.H
    idx = dec.index_Gamma
    ceil_inv = math.ceil(1 / alpha)
    Gl = sorted(Gamma)
    quotient_abelian = all(
        G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b)) in H for a in Gl for b in Gl)
    checks = {
        "H_subset_Gamma": H <= Gamma,
        "Gamma_normal": is_normal(G, Gamma),
        "H_normal": is_normal(G, H),
        "quotient_abelian": quotient_abelian,
        "index_bound": idx <= ceil_inv,
        "index_bound_strict": Fraction(idx) < 1 / alpha + 1,
        "converse_bound": alpha >= Fraction(1, idx * idx * len(H)),
    }
    if r >= 2 / alpha:
        exponent = 6 / alpha + 2
        checks["class_bound_in_Gamma"] = (
            math.log(dec.max_class_in_Gamma) <= float(exponent) * math.log(r))
    checks["nvl_in_Gamma"] = verify_nvl(G, within=Gamma).passed
    data = {"alpha": alpha, "r": r, "index_Gamma": idx, "order_H": len(H),
            "max_class_in_Gamma": dec.max_class_in_Gamma, "ceil_inv_alpha": ceil_inv,
            "checks": checks}
    return Verdict("neumann", G.name, all(checks.values()), data)


def product_set_power(G: FiniteGroup, X: Iterable[int], k: int) -> frozenset:
    """``X^k`` as a set of products of exactly ``k`` elements of ``X`` (``k >= 1``)."""
    Xa = np.array(sorted(set(X)), dtype=np.int64)
    cur = Xa
    for _ in range(k - 1):
        nxt = np.unique(G.table[np.ix_(cur, Xa)])
        if len(nxt) == len(cur):
            # e in X makes powers increasing, so equal size means stable
            break
        cur = nxt
    return frozenset(cur.tolist())


def verify_neum_translates(G: FiniteGroup, X: Iterable[int], m: int) -> Verdict:
    """``X^{3m-1} = <X>`` for symmetric ``X`` with ``e`` and ``|X| >= |G|/m``."""
    X = frozenset(X)
    if G.identity not in X:
        raise ConfigError("X must contain the identity")
    if any(G.inv(x) not in X for x in X):
        raise ConfigError("X must be symmetric")
    if m < 1 or len(X) * m < G.order:
        raise ConfigError(f"need |X| >= |G|/m (|X|={len(X)}, |G|={G.order}, m={m})")
    power = product_set_power(G, X, 3 * m - 1)
    gen = G.closure(X)
    return Verdict("neum_translates", G.name, power == gen,
                   {"m": m, "size_X": len(X), "size_power": len(power), "size_closure": len(gen)})


def verify_catalog_group(G: FiniteGroup) -> list[Verdict]:
    return [verify_gustafson(G), verify_center_bound(G), verify_neumann(G), verify_nvl(G)]


__all__ = ["Verdict", "ConjDecomp", "NeumannDecomposition", "center", "centralizer",
           "conj_classes", "class_sizes", "commutator_subgroup", "subgroup_closure",
           "dc_class_formula", "verify_gustafson", "verify_center_bound", "neumann_decompose",
           "verify_neumann",
           "verify_nvl", "verify_neum_translates", "product_set_power", "is_normal", "index",
           "verify_catalog_group"]
