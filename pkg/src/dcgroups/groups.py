"""Group families with canonical element forms.

Elements are plain hashable values (ints and tuples) in a canonical normal
form, so equality and hashing are syntactic.  A group object carries the
arithmetic; the unchecked ``mul``/``inv`` are used by the hot loops and the
checked ``multiply``/``inverse``/``commute``/``conjugate`` validate that the
arguments belong to the group.

Forms per family:

* ``FiniteGroup``: index into the multiplication table.
* ``ZPowD``: tuple of ``d`` integers.
* ``HeisenbergZ``: triple ``(a, b, c)`` with
  ``(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')``.
* ``FreeGroup``: freely reduced tuple of nonzero letters, ``-i`` is the
  inverse of letter ``i``.
* ``InfiniteDihedral``: pair ``(n, f)`` with
  ``(n,f)(m,g) = (n + (-1)**f * m, f ^ g)``.
* ``DirectProduct``: tuple of component forms.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .errors import ConfigError, GenSetError, ResourceError, StructureError

Element = Hashable

#: marker returned by ``commute_key`` for central elements
CENTRAL = None

DEFAULT_BALL_CAP = 5_000_000
ASSOCIATIVITY_CHECK_LIMIT = 256

_TOKEN_SPLIT = re.compile(r"[\s*]+")


class Group:
    """Common interface of all families."""

    family: str = "abstract"
    identity: Element
    abelian: bool = False
    #: whether ``commute_key`` gives an exact commuting criterion
    has_commute_key: bool = False

    # --- arithmetic on raw forms -------------------------------------------------

    def mul(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def inv(self, x: Element) -> Element:
        raise NotImplementedError

    def contains(self, x: Any) -> bool:
        raise NotImplementedError

    def power(self, x: Element, k: int) -> Element:
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def commutes(self, x: Element, y: Element) -> bool:
        return self.mul(x, y) == self.mul(y, x)

    def conj(self, g: Element, x: Element) -> Element:
        return self.mul(self.mul(self.inv(g), x), g)

    def sort_key(self, x: Element) -> Any:
        return x

    # --- checked public operations ------------------------------------------------

    def check(self, *xs: Any) -> None:
        for x in xs:
            if not self.contains(x):
                raise StructureError(f"{x!r} is not an element of {self}")

    def multiply(self, x: Element, y: Element) -> Element:
        self.check(x, y)
        return self.mul(x, y)

    def inverse(self, x: Element) -> Element:
        self.check(x)
        return self.inv(x)

    def commute(self, x: Element, y: Element) -> bool:
        self.check(x, y)
        return self.commutes(x, y)

    def conjugate(self, g: Element, x: Element) -> Element:
        """``g^-1 x g``."""
        self.check(g, x)
        return self.conj(g, x)

    # --- structure hooks used by dc / conjugacy ----------------------------------

    def commute_key(self, x: Element) -> Hashable:
        """``CENTRAL`` for central ``x``; otherwise a key such that two
        non-central elements commute iff their keys are equal."""
        raise NotImplementedError(f"{self.family} has no commuting key")

    def conj_class_id(self, x: Element) -> Hashable:
        raise NotImplementedError(f"no conjugacy canonical form for {self.family}")

    def finite_class_members(self, x: Element) -> frozenset | None:
        """All conjugates of ``x`` when the class is finite, else ``None``."""
        raise NotImplementedError(f"no class enumeration for {self.family}")

    # --- words -------------------------------------------------------------------

    def letters(self) -> dict[str, Element]:
        """Named generators."""
        raise NotImplementedError

    def generators(self) -> list[Element]:
        return list(self.letters().values())

    def default_genset(self) -> GenSet:
        elems = [self.identity]
        for g in self.generators():
            elems.extend([g, self.inv(g)])
        return GenSet.of(self, elems)

    def parse(self, word: str) -> Element:
        """Evaluate a word such as ``"t^2*s"`` or ``"x y^-1"``; ``e`` is the identity."""
        letters = self.letters()
        result = self.identity
        for token in _TOKEN_SPLIT.split(word.strip()):
            if not token:
                continue
            name, power = token, 1
            if "^" in token:
                name, _, exp = token.rpartition("^")
                try:
                    power = int(exp)
                except ValueError as exc:
                    raise ConfigError(f"bad exponent in {token!r}") from exc
            if name in letters:
                g = letters[name]
            elif name in ("e", "1", "id"):
                g = self.identity
            else:
                raise ConfigError(f"unknown letter {name!r} for {self}; known: {sorted(letters)}")
            result = self.mul(result, self.power(g, power))
        return result

    def format(self, x: Element) -> str:
        raise NotImplementedError

    @staticmethod
    def _join(tokens: Iterable[tuple[str, int]]) -> str:
        parts = [name if k == 1 else f"{name}^{k}" for name, k in tokens if k != 0]
        return "*".join(parts) if parts else "e"

    def renamed(self, suffix: str) -> Group:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False


# ---------------------------------------------------------------------------------
# generating sets


@dataclass(frozen=True)
class GenSet:
    group: Group = field(repr=False)
    elements: tuple
    symmetric: bool
    contains_identity: bool

    @classmethod
    def of(cls, group: Group, elements: Iterable[Element]) -> GenSet:
        seen: dict = {}
        for x in elements:
            group.check(x)
            seen.setdefault(x, None)
        elems = tuple(seen)
        sym = all(group.inv(x) in seen for x in elems)
        return cls(group, elems, sym, group.identity in seen)

    @classmethod
    def from_words(cls, group: Group, words: Iterable[str]) -> GenSet:
        return cls.of(group, [group.parse(w) for w in words])

    def require_standard(self) -> None:
        if not self.symmetric:
            raise GenSetError("generating set must be symmetric")
        if not self.contains_identity:
            raise GenSetError("generating set must contain the identity")

    def nontrivial(self) -> list:
        e = self.group.identity
        return [s for s in self.elements if s != e]

    def words(self) -> list[str]:
        return [self.group.format(s) for s in self.elements]

    def __len__(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------------------------
# finite groups given by a multiplication table


class FiniteGroup(Group):
    """A finite group stored as a multiplication table of element indices."""

    family = "FiniteTable"

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        name: str = "G",
        labels: Sequence[str] | None = None,
        generators: Sequence[int] | None = None,
        check: bool = True,
    ):
        arr = np.asarray(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ConfigError("multiplication table must be a non-empty square array")
        n = arr.shape[0]
        self.name = name
        self.order = n
        self.table = arr
        self.table.setflags(write=False)
        self._rows = [list(map(int, row)) for row in arr]
        ids = [i for i in range(n) if self._rows[i] == list(range(n))]
        if not ids:
            raise ConfigError(f"{name}: table has no identity")
        self.identity = ids[0]
        if check:
            self._check_latin()
        inverse = [0] * n
        for i in range(n):
            inverse[i] = self._rows[i].index(self.identity)
        self.inverse = np.array(inverse, dtype=np.int64)
        self._inv = inverse
        if check and n <= ASSOCIATIVITY_CHECK_LIMIT:
            self._check_associative()
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ConfigError(f"{name}: need {n} distinct labels")
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self._gens = list(generators) if generators is not None else self._greedy_generators()
        self.abelian = bool(np.array_equal(arr, arr.T))
        self._classes: list[frozenset] | None = None
        self._class_of: list[int] | None = None

    def _check_latin(self) -> None:
        target = np.arange(self.order)
        for axis in (0, 1):
            s = np.sort(self.table, axis=axis)
            expect = target[:, None] if axis == 0 else target[None, :]
            if not np.array_equal(s, np.broadcast_to(expect, s.shape)):
                raise ConfigError(f"{self.name}: table is not a Latin square")

    def _check_associative(self) -> None:
        t = self.table
        for a in range(self.order):
            # (a b) c versus a (b c), all b, c at once
            left = t[t[a]]
            right = t[a][t]
            if not np.array_equal(left, right):
                raise ConfigError(f"{self.name}: table is not associative")

    def _greedy_generators(self) -> list[int]:
        gens: list[int] = []
        current = {self.identity}
        for x in range(self.order):
            if x not in current:
                gens.append(x)
                current = self.closure(gens)
        return gens

    def closure(self, elems: Iterable[int]) -> frozenset:
        """Subgroup generated by ``elems``."""
        elems = list(elems)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                row = self._rows[x]
                for g in elems:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def mul(self, x, y):
        return self._rows[x][y]

    def inv(self, x):
        return self._inv[x]

    def contains(self, x):
        return isinstance(x, (int, np.integer)) and not isinstance(x, bool) and 0 <= x < self.order

    def letters(self):
        out = {lab: i for i, lab in enumerate(self.labels)}
        return out

    def generators(self):
        return list(self._gens)

    def format(self, x):
        return self.labels[x]

    def parse(self, word):
        if word.strip() in self._label_index:
            return self._label_index[word.strip()]
        return super().parse(word)

    def renamed(self, suffix):
        return FiniteGroup(self.table, self.name, [f"{lab}{suffix}" for lab in self.labels],
                           self._gens, check=False)

    @property
    def is_finite(self):
        return True

    def elements(self) -> range:
        return range(self.order)

    # conjugacy

    def _compute_classes(self) -> None:
        class_of = [-1] * self.order
        classes = []
        for x in range(self.order):
            if class_of[x] >= 0:
                continue
            cls = frozenset(self.conj(g, x) for g in range(self.order))
            for y in cls:
                class_of[y] = len(classes)
            classes.append(cls)
        self._classes, self._class_of = classes, class_of

    @property
    def classes(self) -> list[frozenset]:
        if self._classes is None:
            self._compute_classes()
        return self._classes

    def conj_class_id(self, x):
        if self._class_of is None:
            self._compute_classes()
        return min(self._classes[self._class_of[x]])

    def finite_class_members(self, x):
        if self._class_of is None:
            self._compute_classes()
        return self._classes[self._class_of[x]]

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __str__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.order == other.order and np.array_equal(
            self.table, other.table)

    def __hash__(self):
        return hash((self.order, self.table.tobytes()))

    @classmethod
    def from_closure(cls, generators: Sequence[Any], mul, name: str, label=str,
                     identity: Any = None) -> FiniteGroup:
        """Tabulate the finite group generated by concrete objects under ``mul``."""
        if identity is None:
            raise ConfigError("identity object required")
        elems = [identity]
        index = {identity: 0}
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in generators:
                    y = mul(x, g)
                    if y not in index:
                        index[y] = len(elems)
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
        n = len(elems)
        table = [[index[mul(a, b)] for b in elems] for a in elems]
        gens = []
        for g in generators:
            if index[g] not in gens and index[g] != 0:
                gens.append(index[g])
        return cls(table, name, [label(x) for x in elems], gens)


# ---------------------------------------------------------------------------------
# infinite families


@dataclass(frozen=True)
class ZPowD(Group):
    """Free abelian group Z^d."""

    d: int = 1
    names: tuple = ()
    family = "ZPowD"
    abelian = True
    has_commute_key = True

    def __post_init__(self):
        if self.d < 1:
            raise ConfigError("ZPowD needs d >= 1")
        if not self.names:
            names = ("t",) if self.d == 1 else tuple(f"t{i + 1}" for i in range(self.d))
            object.__setattr__(self, "names", names)

    @property
    def identity(self):
        return (0,) * self.d

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def power(self, x, k):
        return tuple(k * a for a in x)

    def commutes(self, x, y):
        return True

    def conj(self, g, x):
        return x

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.d and all(
            isinstance(a, int) and not isinstance(a, bool) for a in x)

    def letters(self):
        out = {}
        for i, name in enumerate(self.names):
            v = [0] * self.d
            v[i] = 1
            out[name] = tuple(v)
        return out

    def format(self, x):
        return self._join(zip(self.names, x))

    def commute_key(self, x):
        return CENTRAL

    def conj_class_id(self, x):
        return x

    def finite_class_members(self, x):
        return frozenset([x])

    def renamed(self, suffix):
        return ZPowD(self.d, tuple(n + suffix for n in self.names))

    def __str__(self):
        return f"Z^{self.d}"


@dataclass(frozen=True)
class HeisenbergZ(Group):
    """Integer Heisenberg group; ``x=(1,0,0)``, ``y=(0,1,0)``, ``z=(0,0,1)`` central."""

    names: tuple = ("x", "y", "z")
    family = "HeisenbergZ"
    has_commute_key = True

    @property
    def identity(self):
        return (0, 0, 0)

    def mul(self, x, y):
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1])

    def inv(self, x):
        a, b, c = x
        return (-a, -b, a * b - c)

    def commutes(self, x, y):
        return x[0] * y[1] == y[0] * x[1]

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == 3 and all(
            isinstance(a, int) and not isinstance(a, bool) for a in x)

    def letters(self):
        return {self.names[0]: (1, 0, 0), self.names[1]: (0, 1, 0), self.names[2]: (0, 0, 1)}

    def generators(self):
        # z = [x, y] is not needed to generate
        return [(1, 0, 0), (0, 1, 0)]

    def format(self, x):
        # (a, b, c) = y^b x^a z^c
        a, b, c = x
        return self._join([(self.names[1], b), (self.names[0], a), (self.names[2], c)])

    def commute_key(self, x):
        a, b, _ = x
        if a == 0 and b == 0:
            return CENTRAL
        g = math.gcd(a, b)
        a, b = a // g, b // g
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        return (a, b)

    def conj_class_id(self, x):
        a, b, c = x
        if a == 0 and b == 0:
            return ("central", c)
        return ("line", a, b, c % math.gcd(a, b))

    def finite_class_members(self, x):
        if x[0] == 0 and x[1] == 0:
            return frozenset([x])
        return None

    def renamed(self, suffix):
        return HeisenbergZ(tuple(n + suffix for n in self.names))

    def __str__(self):
        return "Heisenberg(Z)"


def _free_names(rank: int) -> tuple:
    if rank <= 4:
        return ("x", "y", "z", "w")[:rank]
    return tuple(f"x{i + 1}" for i in range(rank))


@dataclass(frozen=True)
class FreeGroup(Group):
    """Free group of finite rank on letters ``1..rank``."""

    rank: int = 2
    names: tuple = ()
    family = "FreeGroup"
    has_commute_key = True

    def __post_init__(self):
        if self.rank < 1:
            raise ConfigError("free group rank must be >= 1")
        if not self.names:
            object.__setattr__(self, "names", _free_names(self.rank))

    @property
    def abelian(self):
        return self.rank == 1

    @property
    def identity(self):
        return ()

    def mul(self, x, y):
        i, n = 0, min(len(x), len(y))
        lx = len(x)
        while i < n and x[lx - 1 - i] == -y[i]:
            i += 1
        if i:
            return x[: lx - i] + y[i:]
        return x + y

    def inv(self, x):
        return tuple(-a for a in reversed(x))

    def contains(self, x):
        if not isinstance(x, tuple):
            return False
        for i, a in enumerate(x):
            if not isinstance(a, int) or a == 0 or abs(a) > self.rank:
                return False
            if i and x[i - 1] == -a:
                return False
        return True

    def sort_key(self, x):
        return (len(x), x)

    def letters(self):
        return {name: (i + 1,) for i, name in enumerate(self.names)}

    def format(self, x):
        tokens = []
        for letter, run in itertools.groupby(x):
            k = len(list(run))
            tokens.append((self.names[abs(letter) - 1], k if letter > 0 else -k))
        return self._join(tokens)

    @staticmethod
    def cyclic_reduction(w: tuple) -> tuple[tuple, tuple]:
        """Split ``w = u c u^-1`` with ``c`` cyclically reduced; returns ``(u, c)``."""
        i, j = 0, len(w) - 1
        while i < j and w[i] == -w[j]:
            i += 1
            j -= 1
        return w[:i], w[i:j + 1]

    @staticmethod
    def primitive_root(c: tuple) -> tuple:
        n = len(c)
        for d in range(1, n + 1):
            if n % d == 0 and c[:d] * (n // d) == c:
                return c[:d]
        return c

    def root(self, w: tuple) -> tuple:
        """The unique primitive ``r`` with ``w`` a positive power of ``r``."""
        u, c = self.cyclic_reduction(w)
        return u + self.primitive_root(c) + self.inv(u)

    def commutes(self, x, y):
        if not x or not y:
            return True
        return self.commute_key(x) == self.commute_key(y)

    def commute_key(self, x):
        if not x or self.rank == 1:
            return CENTRAL
        r = self.root(x)
        ri = self.inv(r)
        return min(r, ri)

    def conj_class_id(self, x):
        _, c = self.cyclic_reduction(x)
        if not c:
            return ()
        return min(c[i:] + c[:i] for i in range(len(c)))

    def finite_class_members(self, x):
        if not x or self.rank == 1:
            return frozenset([x])
        return None

    def renamed(self, suffix):
        return FreeGroup(self.rank, tuple(n + suffix for n in self.names))

    def __str__(self):
        return f"F{self.rank}"


@dataclass(frozen=True)
class InfiniteDihedral(Group):
    """D-infinity; ``t=(1,0)`` translates, ``s=(0,1)`` reflects; ``(n,f) = t^n s^f``."""

    names: tuple = ("t", "s")
    family = "InfiniteDihedral"
    has_commute_key = True

    @property
    def identity(self):
        return (0, 0)

    def mul(self, x, y):
        n, f = x
        m, g = y
        return (n - m if f else n + m, f ^ g)

    def inv(self, x):
        n, f = x
        return (n, 1) if f else (-n, 0)

    def contains(self, x):
        return (isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], int)
                and not isinstance(x[0], bool) and x[1] in (0, 1) and isinstance(x[1], int))

    def letters(self):
        return {self.names[0]: (1, 0), self.names[1]: (0, 1)}

    def format(self, x):
        return self._join([(self.names[0], x[0]), (self.names[1], x[1])])

    def commute_key(self, x):
        n, f = x
        if f:
            return ("R", n)
        return CENTRAL if n == 0 else "T"

    def conj_class_id(self, x):
        n, f = x
        return ("R", n % 2) if f else ("T", abs(n))

    def finite_class_members(self, x):
        n, f = x
        if f:
            return None
        return frozenset([(n, 0), (-n, 0)])

    def renamed(self, suffix):
        return InfiniteDihedral(tuple(n + suffix for n in self.names))

    def __str__(self):
        return "D_inf"


@dataclass(frozen=True)
class DirectProduct(Group):
    """Direct product; letters of the factors are embedded by name."""

    factors: tuple = ()
    family = "DirectProduct"

    def __post_init__(self):
        if len(self.factors) < 1:
            raise ConfigError("direct product needs at least one factor")
        names = [n for f in self.factors for n in f.letters()]
        if len(names) != len(set(names)):
            object.__setattr__(
                self, "factors", tuple(f.renamed(f"_{i}") for i, f in enumerate(self.factors)))

    @property
    def identity(self):
        return tuple(f.identity for f in self.factors)

    @property
    def abelian(self):
        return all(f.abelian for f in self.factors)

    @property
    def is_finite(self):
        return all(f.is_finite for f in self.factors)

    @property
    def _key_factor(self) -> int | None:
        nonab = [i for i, f in enumerate(self.factors) if not f.abelian]
        if not nonab:
            return -1
        if len(nonab) == 1 and self.factors[nonab[0]].has_commute_key:
            return nonab[0]
        return None

    @property
    def has_commute_key(self):
        return self._key_factor is not None

    def mul(self, x, y):
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, x, y))

    def inv(self, x):
        return tuple(f.inv(a) for f, a in zip(self.factors, x))

    def commutes(self, x, y):
        return all(f.commutes(a, b) for f, a, b in zip(self.factors, x, y))

    def contains(self, x):
        return (isinstance(x, tuple) and len(x) == len(self.factors)
                and all(f.contains(a) for f, a in zip(self.factors, x)))

    def sort_key(self, x):
        return tuple(f.sort_key(a) for f, a in zip(self.factors, x))

    def embed(self, i: int, a: Element) -> Element:
        e = list(self.identity)
        e[i] = a
        return tuple(e)

    def letters(self):
        out = {}
        for i, f in enumerate(self.factors):
            for name, g in f.letters().items():
                out[name] = self.embed(i, g)
        return out

    def generators(self):
        return [self.embed(i, g) for i, f in enumerate(self.factors) for g in f.generators()]

    def format(self, x):
        parts = [f.format(a) for f, a in zip(self.factors, x) if a != f.identity]
        return "*".join(parts) if parts else "e"

    def commute_key(self, x):
        k = self._key_factor
        if k is None:
            raise NotImplementedError("no commuting key for this product")
        if k < 0:
            return CENTRAL
        return self.factors[k].commute_key(x[k])

    def conj_class_id(self, x):
        return tuple(f.conj_class_id(a) for f, a in zip(self.factors, x))

    def finite_class_members(self, x):
        parts = [f.finite_class_members(a) for f, a in zip(self.factors, x)]
        if any(p is None for p in parts):
            return None
        return frozenset(itertools.product(*parts))

    def renamed(self, suffix):
        return DirectProduct(tuple(f.renamed(suffix) for f in self.factors))

    def __str__(self):
        return " x ".join(str(f) for f in self.factors)


# ---------------------------------------------------------------------------------
# balls


def _bfs_spheres(group: Group, gens: list) -> Iterator[list]:
    e = group.identity
    mul = group.mul
    seen = {e}
    frontier = [e]
    yield [e]
    while True:
        nxt = []
        for x in frontier:
            for s in gens:
                y = mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        yield nxt


def _free_spheres(letters: list) -> Iterator[list]:
    # standard letters: every reduced word is new, no deduplication needed
    frontier = [()]
    yield frontier
    while True:
        nxt = [w + (a,) for w in frontier for a in letters if not w or w[-1] != -a]
        frontier = nxt
        yield nxt


def _product_spheres(group: DirectProduct, parts: list[GenSet]) -> Iterator[list]:
    # S is the union of embedded factor generating sets, so word length is additive
    iters = [iter_spheres(f, s, cap=None) for f, s in zip(group.factors, parts)]
    cache: list[list[list]] = [[] for _ in iters]

    def sphere(i, r):
        while len(cache[i]) <= r:
            cache[i].append(next(iters[i]))
        return cache[i][r]

    def combos(i, r):
        # tuples for factors i.. with total length r
        if i == len(iters) - 1:
            return [(a,) for a in sphere(i, r)]
        out = []
        for j in range(r + 1):
            head = sphere(i, j)
            if not head:
                continue
            tails = combos(i + 1, r - j)
            out.extend((a,) + t for a in head for t in tails)
        return out

    r = 0
    while True:
        yield combos(0, r)
        r += 1


def _split_product_genset(group: DirectProduct, S: GenSet) -> list[GenSet] | None:
    per = [[f.identity] for f in group.factors]
    for s in S.elements:
        moved = [i for i, (f, a) in enumerate(zip(group.factors, s)) if a != f.identity]
        if len(moved) > 1:
            return None
        if moved:
            per[moved[0]].append(s[moved[0]])
    return [GenSet.of(f, p) for f, p in zip(group.factors, per)]


def iter_spheres(group: Group, S: GenSet, cap: int | None = DEFAULT_BALL_CAP) -> Iterator[list]:
    """Yield the spheres ``S^n \\ S^(n-1)`` for n = 0, 1, 2, ...

    Finite groups yield empty spheres forever once the ball saturates.
    Raises ``ResourceError`` when the cumulative ball size exceeds ``cap``.
    """
    if S.group != group:
        raise StructureError("generating set belongs to a different group")
    S.require_standard()
    gens = S.nontrivial()
    source: Iterator[list]
    if isinstance(group, FreeGroup) and sorted(gens) == sorted(
            [i for i in range(1, group.rank + 1)] + [-i for i in range(1, group.rank + 1)]):
        source = _free_spheres(gens)
    elif isinstance(group, DirectProduct) and (parts := _split_product_genset(group, S)):
        source = _product_spheres(group, parts)
    else:
        source = _bfs_spheres(group, gens)
    total = 0
    for radius, sphere in enumerate(source):
        total += len(sphere)
        if cap is not None and total > cap:
            raise ResourceError(
                f"ball of radius {radius} exceeds cap of {cap} elements",
                last_completed=radius - 1 if radius else None)
        yield sphere


def ball(group: Group, S: GenSet, n: int, cap: int | None = DEFAULT_BALL_CAP) -> frozenset:
    """``S^n``: all products of at most ``n`` generators."""
    if n < 0:
        raise ValueError("radius must be non-negative")
    out: set = set()
    for r, sphere in enumerate(iter_spheres(group, S, cap)):
        out.update(sphere)
        if r == n:
            return frozenset(out)
    raise AssertionError("unreachable")


def ball_sizes(group: Group, S: GenSet, n: int, cap: int | None = DEFAULT_BALL_CAP) -> list[int]:
    """``[|S^0|, ..., |S^n|]``."""
    sizes, total = [], 0
    for r, sphere in enumerate(iter_spheres(group, S, cap)):
        total += len(sphere)
        sizes.append(total)
        if r == n:
            return sizes
    raise AssertionError("unreachable")


def growth_ratio(group: Group, S: GenSet, n: int, cap: int | None = DEFAULT_BALL_CAP) -> Fraction:
    """``|S^(n+1)| / |S^n|`` exactly."""
    if n < 0:
        raise ValueError("radius must be non-negative")
    sizes = ball_sizes(group, S, n + 1, cap)
    return Fraction(sizes[n + 1], sizes[n])
