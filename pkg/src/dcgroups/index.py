"""Subgroups, Schreier coset enumeration and uniform measurement of index."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import AperiodicityError, ConfigError
from .groups import (DirectProduct, Element, FiniteGroup, FreeGroup, GenSet, Group, HeisenbergZ,
                     InfiniteDihedral, ZPowD)
from .measure import BallUniform, Measure, MeasureSeqSpec, Weight, pushforward, walk_power

DEFAULT_COSET_CAP = 1000
EXACT_POWER_LIMIT = 4096


@dataclass(frozen=True)
class AtLeast:
    """Index known only to be at least ``cap`` (treated as infinite)."""

    cap: int

    def __str__(self):
        return f">={self.cap}"


@dataclass(frozen=True)
class SubgroupOracle:
    membership: Callable[[Element], bool]
    generators: tuple | None = None
    description: str = ""

    def __contains__(self, x) -> bool:
        return bool(self.membership(x))


# ---------------------------------------------------------------------------------
# subgroup constructors


def finite_subgroup(G: FiniteGroup, gens: Iterable[int], description: str = "") -> SubgroupOracle:
    gens = tuple(gens)
    elems = G.closure(gens)
    return SubgroupOracle(elems.__contains__, gens,
                          description or f"<{', '.join(G.format(g) for g in gens)}>")


def _integer_echelon(rows: list[list[int]], d: int) -> list[tuple[int, list[int]]]:
    rows = [list(r) for r in rows if any(r)]
    basis = []
    for col in range(d):
        while True:
            nz = [r for r in rows if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                for k in range(d):
                    r[k] -= q * p[k]
            rows = [r for r in rows if any(r)]
        nz = [r for r in rows if r[col] != 0]
        if nz:
            basis.append((col, nz[0]))
            rows = [r for r in rows if r is not nz[0]]
    return basis


def lattice_subgroup(group: ZPowD, gens: Iterable[tuple], description: str = "") -> SubgroupOracle:
    """Exact membership in the sublattice of Z^d spanned by ``gens``."""
    gens = tuple(gens)
    basis = _integer_echelon([list(g) for g in gens], group.d)

    def member(v) -> bool:
        v = list(v)
        for col, p in basis:
            if v[col] % p[col]:
                return False
            q = v[col] // p[col]
            for k in range(group.d):
                v[k] -= q * p[k]
        return not any(v)

    return SubgroupOracle(member, gens,
                          description or f"<{', '.join(group.format(g) for g in gens)}>")


def subgroup_from_words(group: Group, words: Sequence[str]) -> SubgroupOracle:
    gens = tuple(group.parse(w) for w in words)
    desc = "<" + ", ".join(words) + ">"
    if isinstance(group, FiniteGroup):
        return finite_subgroup(group, gens, desc)
    if isinstance(group, ZPowD):
        return lattice_subgroup(group, gens, desc)
    raise ConfigError(
        f"generator-list subgroups are only supported for finite groups and Z^d, not {group}; "
        "use a named subgroup")


def even_sum(group: Group) -> SubgroupOracle:
    if isinstance(group, ZPowD):
        return SubgroupOracle(lambda v: sum(v) % 2 == 0, None, "even-sum")
    if isinstance(group, InfiniteDihedral):
        return SubgroupOracle(lambda x: x[0] % 2 == 0, None, "even-sum")
    raise ConfigError(f"even-sum is not defined for {group}")


def center_subgroup(group: Group) -> SubgroupOracle:
    if isinstance(group, FiniteGroup):
        t = group.table
        elems = frozenset(z for z in range(group.order) if np.array_equal(t[z], t[:, z]))
        return SubgroupOracle(elems.__contains__, tuple(sorted(elems)), "center")
    if isinstance(group, DirectProduct):
        parts = [center_subgroup(f) for f in group.factors]
        return SubgroupOracle(lambda x: all(p.membership(a) for p, a in zip(parts, x)), None,
                              "center")
    if group.abelian:
        return SubgroupOracle(lambda x: True, None, "center")
    if isinstance(group, HeisenbergZ):
        return SubgroupOracle(lambda x: x[0] == 0 and x[1] == 0, ((0, 0, 1),), "center")
    if isinstance(group, (InfiniteDihedral, FreeGroup)):
        e = group.identity
        return SubgroupOracle(lambda x: x == e, (), "center")
    raise ConfigError(f"no centre predicate for {group}")


def factor_subgroup(group: DirectProduct, i: int) -> SubgroupOracle:
    """The ``i``-th factor embedded in a direct product."""
    if not isinstance(group, DirectProduct) or not 0 <= i < len(group.factors):
        raise ConfigError(f"factor:{i} needs a direct product with more than {i} factors")
    ids = [f.identity for f in group.factors]

    def member(x):
        return all(a == e for k, (a, e) in enumerate(zip(x, ids)) if k != i)

    return SubgroupOracle(member, None, f"factor:{i}")


def translations(group: InfiniteDihedral) -> SubgroupOracle:
    return SubgroupOracle(lambda x: x[1] == 0, ((1, 0),), "translations")


# ---------------------------------------------------------------------------------
# Schreier coset enumeration


@dataclass(frozen=True)
class CosetTable:
    """Left cosets ``rep_i H`` found by BFS; ``action[(i, s)] = j`` means ``s rep_i H = rep_j H``."""

    group: Group = field(repr=False)
    subgroup: SubgroupOracle = field(repr=False)
    reps: tuple
    depths: tuple
    action: dict = field(repr=False)
    index: int | AtLeast = 0

    @property
    def finite(self) -> bool:
        return isinstance(self.index, int)

    def locate(self, x: Element) -> int | None:
        """Index of the coset containing ``x``, or ``None`` if not among the found ones."""
        g = self.group
        for i, r in enumerate(self.reps):
            if self.subgroup.membership(g.mul(g.inv(r), x)):
                return i
        return None

    def target_mass(self) -> Fraction:
        return Fraction(1, self.index) if self.finite else Fraction(0)


def schreier_cosets(group: Group, S: GenSet, H: SubgroupOracle,
                    cap: int = DEFAULT_COSET_CAP) -> CosetTable:
    """BFS over left cosets ``xH`` from ``H`` under left multiplication by ``S``."""
    if cap < 1:
        raise ConfigError("coset cap must be >= 1")
    if not H.membership(group.identity):
        raise ConfigError(f"subgroup {H.description!r} does not contain the identity")
    mul, inv, member = group.mul, group.inv, H.membership
    reps = [group.identity]
    rep_invs = [group.identity]
    depths = [0]
    action: dict = {}
    i = 0
    while i < len(reps):
        for s in S.elements:
            cand = mul(s, reps[i])
            j = next((k for k, ri in enumerate(rep_invs) if member(mul(ri, cand))), None)
            if j is None:
                if len(reps) >= cap:
                    return CosetTable(group, H, tuple(reps), tuple(depths), action, AtLeast(cap))
                j = len(reps)
                reps.append(cand)
                rep_invs.append(inv(cand))
                depths.append(depths[i] + 1)
            action[(i, s)] = j
        i += 1
    return CosetTable(group, H, tuple(reps), tuple(depths), action, len(reps))


def distinct_coset_reps(group: Group, S: GenSet, H: SubgroupOracle, m: int,
                        cap: int = DEFAULT_COSET_CAP) -> list:
    """``m`` elements of word length at most ``m`` in pairwise distinct left cosets."""
    if m < 1:
        raise ConfigError("m must be >= 1")
    table = schreier_cosets(group, S, H, max(cap, m))
    if table.finite and table.index < m:
        raise ConfigError(f"index {table.index} < {m}")
    return list(table.reps[:m])


# ---------------------------------------------------------------------------------
# coset masses


def coset_mass(mu: Measure, H: SubgroupOracle, x: Element) -> Weight:
    """``mu(xH)``."""
    g = mu.group
    g.check(x)
    xi = g.inv(x)
    ws = [w for y, w in mu.items() if H.membership(g.mul(xi, y))]
    return sum(ws, Fraction(0)) if mu.exact else math.fsum(ws)


def index_measurement_curve(seq: MeasureSeqSpec, H: SubgroupOracle, x: Element,
                            n_range: Iterable[int], index: int | AtLeast | None = None,
                            S: GenSet | None = None,
                            cap: int = DEFAULT_COSET_CAP) -> list[tuple[int, Weight]]:
    """``[(n, |mu_n(xH) - 1/[G:H]|)]``; an ``AtLeast`` index has target mass 0."""
    group = seq.group
    group.check(x)
    if index is None:
        gens = S or (seq.genset if isinstance(seq, BallUniform) else group.default_genset())
        index = schreier_cosets(group, gens, H, cap).index
    target = Fraction(1, index) if isinstance(index, int) else Fraction(0)
    out = []
    if isinstance(seq, BallUniform):
        mul, xi, member = group.mul, group.inv(x), H.membership
        hits = 0
        for n, new, total in seq.iter_balls(n_range):
            hits += sum(1 for y in new if member(mul(xi, y)))
            out.append((n, abs(Fraction(hits, total) - target)))
        return out
    for n, mu in seq.measures(n_range):
        m = coset_mass(mu, H, x)
        out.append((n, abs(m - (target if mu.exact else float(target)))))
    return out


# ---------------------------------------------------------------------------------
# mixing bound


def _frac(v) -> Fraction:
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


@dataclass(frozen=True)
class MixingParams:
    """Minimum step mass ``c`` (clamped to 1/2) and target accuracy ``epsilon``."""

    c: Fraction
    epsilon: Fraction

    def __post_init__(self):
        c, eps = _frac(self.c), _frac(self.epsilon)
        if c <= 0:
            raise ConfigError("c must be positive")
        if eps <= 0:
            raise ConfigError("epsilon must be positive")
        object.__setattr__(self, "c", min(c, Fraction(1, 2)))
        object.__setattr__(self, "epsilon", eps)

    @classmethod
    def from_step(cls, step: Measure, epsilon) -> MixingParams:
        return cls(_frac(step.min_weight()), epsilon)


def mixing_bound(params: MixingParams | None = None, *, c=None, epsilon=None) -> int:
    """Smallest integer ``n >= 1 + 32 (1-c)^2 / (c^4 eps^2)``."""
    if params is None:
        params = MixingParams(c, epsilon)
    c, eps = params.c, params.epsilon
    return math.ceil(1 + 32 * (1 - c) ** 2 / (c**4 * eps**2))


def conductance_floor(c, r, index: int | AtLeast | float | None = None) -> Fraction:
    """Lower bound ``inf pi(x) p(x,y) / r`` with uniform ``pi``: ``(c/[G:H])/r`` for
    finite index, ``c/r`` with ``pi = 1`` for infinite index (``None``/``inf``/``AtLeast``)."""
    c, r = _frac(c), _frac(r)
    if r <= 0:
        raise ConfigError("r must be positive")
    if c <= 0:
        raise ConfigError("c must be positive")
    if index is None or isinstance(index, AtLeast) or index == math.inf:
        return c / r
    return c / int(index) / r


# ---------------------------------------------------------------------------------
# coset chain


def coset_chain(step: Measure, table: CosetTable) -> list[list[Fraction]]:
    """Transition matrix ``p(i, j) = step({s : s rep_i H = rep_j H})`` on a finite table."""
    if not table.finite:
        raise ConfigError("coset chain needs a finite index")
    k = table.index
    zero = Fraction(0) if step.exact else 0.0
    P = [[zero] * k for _ in range(k)]
    for i in range(k):
        for s, w in step.items():
            j = table.action.get((i, s))
            if j is None:
                j = table.locate(step.group.mul(s, table.reps[i]))
            P[i][j] += w
    return P


def _int_matrix(P):
    den = 1
    for row in P:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    return [[v.numerator * (den // v.denominator) for v in row] for row in P], den


def _matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def _matpow_int(A, n):
    k = len(A)
    R = [[int(i == j) for j in range(k)] for i in range(k)]
    while n:
        if n & 1:
            R = _matmul(R, A)
        n >>= 1
        if n:
            A = _matmul(A, A)
    return R


def chain_power(P: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Exact ``P^n``."""
    A, den = _int_matrix(P)
    M = _matpow_int(A, n)
    D = den**n
    return [[Fraction(v, D) for v in row] for row in M]


@dataclass(frozen=True)
class DeviationCheck:
    """``bound`` is the exact deviation (``method='exact'``) or a certified upper bound."""

    n: int
    bound: Fraction
    method: str
    certificate_power: int | None = None
    float_value: float | None = None


def chain_deviation(P: list[list[Fraction]], n: int, rows: Sequence[int] = (0,),
                    cols: Sequence[int] | None = None, exact_limit: int = EXACT_POWER_LIMIT,
                    max_bits: int = 50_000) -> DeviationCheck:
    """``max |P^n(i, j) - 1/k|`` over the given rows/cols.

    For ``n <= exact_limit`` the value is exact.  Above that, ``P`` must be
    symmetric; then ``P^n - Pi = (P - Pi)^n`` and its spectral norm is
    non-increasing in ``n``, so the exact Frobenius norm of ``(P - Pi)^m``
    for a power of two ``m <= n`` bounds every entry at ``n``.
    """
    k = len(P)
    cols = range(k) if cols is None else cols
    pi = Fraction(1, k)
    fl = np.linalg.matrix_power(np.array(P, dtype=float), n)
    fval = max(abs(fl[i, j] - 1 / k) for i in rows for j in cols)
    if n <= exact_limit:
        M = chain_power(P, n)
        dev = max(abs(M[i][j] - pi) for i in rows for j in cols)
        return DeviationCheck(n, dev, "exact", None, float(fval))
    if any(P[i][j] != P[j][i] for i in range(k) for j in range(k)):
        raise ConfigError("certified envelope needs a symmetric chain")
    D = [[P[i][j] - pi for j in range(k)] for i in range(k)]
    A, den = _int_matrix(D)
    m = 1
    while 2 * m <= n and den.bit_length() <= max_bits:
        A = _matmul(A, A)
        den = den * den
        m *= 2
    frob2 = Fraction(sum(v * v for row in A for v in row), den * den)
    return DeviationCheck(n, _sqrt_upper(frob2), "certified-envelope", m, float(fval))


def _sqrt_upper(q: Fraction, digits: int = 30) -> Fraction:
    """A rational ``>= sqrt(q)`` within ``10^-digits`` relative precision."""
    if q == 0:
        return Fraction(0)
    scale = 10**digits
    num = math.isqrt(q.numerator * scale * scale // q.denominator) + 1
    return Fraction(num, scale)


@dataclass
class UniformityReport:
    epsilon: Fraction
    c: Fraction
    n_star: int
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.rows if r["status"] == "checked")

    def to_dict(self) -> dict:
        return {"epsilon": str(self.epsilon), "c": str(self.c), "n_star": self.n_star,
                "passed": self.passed, "subgroups": self.rows}


def verify_uniform_measurement(step: Measure, subgroups: Sequence[SubgroupOracle], epsilon,
                               probe_points: Sequence[Element] | None = None,
                               cap: int = DEFAULT_COSET_CAP,
                               exact_limit: int = EXACT_POWER_LIMIT) -> UniformityReport:
    """Check ``|step^{*n}(xH) - 1/[G:H]| <= eps`` at ``n = n*`` and ``2 n*`` on the
    induced coset chain, where ``n*`` is the mixing bound for ``(c, eps)``.

    Only the listed subgroups are checked.
    """
    if not step.exact:
        raise ConfigError("uniform-measurement verification needs an exact step")
    if not step.is_symmetric():
        raise ConfigError("step measure is not symmetric")
    group = step.group
    if step[group.identity] <= 0:
        raise AperiodicityError("step puts no mass on the identity; the walk may be periodic")
    params = MixingParams.from_step(step, epsilon)
    n_star = mixing_bound(params)
    report = UniformityReport(params.epsilon, params.c, n_star)
    S = GenSet.of(group, step.support())
    for H in subgroups:
        table = schreier_cosets(group, S, H, cap)
        row: dict = {"subgroup": H.description, "index": str(table.index)}
        if not table.finite:
            row.update(status="skipped", passed=None,
                       reason="index not finite within the coset cap")
            report.rows.append(row)
            continue
        P = coset_chain(step, table)
        cols = (list(range(table.index)) if probe_points is None
                else [table.locate(x) for x in probe_points])
        checks = []
        for n in (n_star, 2 * n_star):
            dc = chain_deviation(P, n, (0,), cols, exact_limit)
            checks.append({"n": n, "deviation_bound": float(dc.bound), "method": dc.method,
                           "certificate_power": dc.certificate_power,
                           "float_value": dc.float_value, "passed": dc.bound <= params.epsilon})
        row.update(status="checked", checks=checks, passed=all(c["passed"] for c in checks))
        report.rows.append(row)
    return report


def walk_coset_distribution(step: Measure, table: CosetTable, n: int) -> list[Fraction]:
    """Push ``step^{*n}`` onto the cosets of a finite table (row 0 of ``P^n``)."""
    pushed = pushforward(walk_power(step, n), table.locate)
    zero = Fraction(0) if step.exact else 0.0
    return [pushed.get(i, zero) for i in range(table.index)]


__all__ = ["AtLeast", "SubgroupOracle", "CosetTable", "MixingParams", "DeviationCheck",
           "UniformityReport", "finite_subgroup", "lattice_subgroup", "subgroup_from_words",
           "even_sum", "center_subgroup", "factor_subgroup", "translations", "schreier_cosets",
           "distinct_coset_reps", "coset_mass", "index_measurement_curve", "mixing_bound",
           "conductance_floor", "coset_chain", "chain_power", "chain_deviation",
           "verify_uniform_measurement", "walk_coset_distribution"]
