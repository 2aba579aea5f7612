"""Built-in finite groups used as the verification corpus."""

from __future__ import annotations

from functools import lru_cache

from .groups import FiniteGroup


def cyclic(m: int) -> FiniteGroup:
    return FiniteGroup.from_closure([1 % m], lambda a, b: (a + b) % m, f"Z{m}",
                                    label=str, identity=0)


def dihedral(m: int) -> FiniteGroup:
    """Symmetries of the m-gon, order ``2m``; labels ``r<k>`` and ``r<k>s``."""

    def mul(x, y):
        (k, f), (l, g) = x, y
        return ((k - l if f else k + l) % m, f ^ g)

    def label(x):
        k, f = x
        if (k, f) == (0, 0):
            return "e"
        return ("" if k == 0 else "r" if k == 1 else f"r{k}") + ("s" if f else "")

    return FiniteGroup.from_closure([(1 % m, 0), (0, 1)], mul, f"D{m}", label=label,
                                    identity=(0, 0))


_QUAT_LABELS = {(1, 0): "1", (-1, 0): "-1", (1, 1): "i", (-1, 1): "-i",
                (1, 2): "j", (-1, 2): "-j", (1, 3): "k", (-1, 3): "-k"}


def quaternion() -> FiniteGroup:
    # (sign, unit) with units 1, i, j, k
    prod = {(0, u): (1, u) for u in range(4)}
    prod.update({(u, 0): (1, u) for u in range(4)})
    prod.update({(1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
                 (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
                 (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)})

    def mul(x, y):
        s, u = prod[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    return FiniteGroup.from_closure([(1, 1), (1, 2)], mul, "Q8", label=_QUAT_LABELS.get,
                                    identity=(1, 0))


def _perm_label(p: tuple) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j))
            j = p[j]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "e"


def _compose(p, q):
    # apply p, then q
    return tuple(q[i] for i in p)


def symmetric(n: int) -> FiniteGroup:
    ident = tuple(range(n))
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return FiniteGroup.from_closure(gens, _compose, f"S{n}", label=_perm_label, identity=ident)


def alternating(n: int) -> FiniteGroup:
    ident = tuple(range(n))
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return FiniteGroup.from_closure(gens, _compose, f"A{n}", label=_perm_label, identity=ident)


def heisenberg_mod(p: int) -> FiniteGroup:
    def mul(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    return FiniteGroup.from_closure([(1, 0, 0), (0, 1, 0)], mul, f"Heis{p}",
                                    label=lambda x: "[" + ",".join(map(str, x)) + "]",
                                    identity=(0, 0, 0))


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    gens = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    return FiniteGroup.from_closure(
        gens, lambda a, b: tuple((x + y) % p for x, y in zip(a, b)), f"Z{p}^{k}",
        label=lambda x: "v" + "".join(map(str, x)), identity=(0,) * k)


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    n, m = a.order, b.order
    table = [[a.table[i // m, j // m] * m + b.table[i % m, j % m] for j in range(n * m)]
             for i in range(n * m)]
    labels = [f"{a.labels[i // m]}.{b.labels[i % m]}" for i in range(n * m)]
    gens = [g * m + b.identity for g in a.generators()] + [a.identity * m + h
                                                          for h in b.generators()]
    return FiniteGroup(table, f"{a.name}x{b.name}", labels, gens)


@lru_cache(maxsize=None)
def build_catalog() -> tuple[tuple[str, FiniteGroup], ...]:
    """The fixed corpus of small groups, in a stable order."""
    out: list[tuple[str, FiniteGroup]] = []
    out += [(f"Z{m}", cyclic(m)) for m in range(1, 25)]
    out += [(f"D{m}", dihedral(m)) for m in range(3, 13)]
    out += [("Q8", quaternion()), ("S3", symmetric(3)), ("S4", symmetric(4)),
            ("A4", alternating(4)), ("Heis2", heisenberg_mod(2)), ("Heis3", heisenberg_mod(3)),
            ("Z2^3", elementary_abelian(2, 3))]
    out += [("D4xZ2", direct_product(dihedral(4), cyclic(2))),
            ("Q8xZ2", direct_product(quaternion(), cyclic(2)))]
    for name, g in out:
        g.name = name
    return tuple(out)


def catalog_group(name: str) -> FiniteGroup:
    for n, g in build_catalog():
        if n.lower() == name.lower():
            return g
    raise KeyError(name)


def catalog_names() -> list[str]:
    return [n for n, _ in build_catalog()]


__all__ = ["build_catalog", "catalog_group", "catalog_names", "cyclic", "dihedral",
           "quaternion", "symmetric", "alternating", "heisenberg_mod", "elementary_abelian",
           "direct_product"]
