"""Acceptance criteria 1-13, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

from fractions import Fraction

import numpy as np
import pytest

from dcgroups.catalog import build_catalog, catalog_group
from dcgroups.cli import independence_gap
from dcgroups.conjugacy import cr_lower_bound, cr_sequence, oracle_mismatches
from dcgroups.dc import dc_all_pairs, dc_montecarlo, dc_of_measure, dc_sequence
from dcgroups.finite import (center, conj_classes, verify_center_bound, verify_gustafson,
                             verify_neum_translates, verify_neumann, verify_nvl)
from dcgroups.groups import DirectProduct, FreeGroup, HeisenbergZ, InfiniteDihedral, ZPowD
from dcgroups.index import (center_subgroup, even_sum, factor_subgroup, finite_subgroup,
                            index_measurement_curve, mixing_bound, verify_uniform_measurement)
from dcgroups.measure import BallUniform, Measure, WalkPower, lazy_step, walk_power

CATALOG = build_catalog()
NONABELIAN = [(n, g) for n, g in CATALOG if not g.abelian]


@pytest.mark.criterion(1, "exact finite dc equals #classes/|G|")
def test_c01_exact_finite_dc():
    for name, G in CATALOG:
        mu = Measure.uniform(G, G.elements())
        expected = Fraction(len(conj_classes(G)), G.order)
        assert dc_of_measure(mu) == expected, name
        assert dc_all_pairs(mu) == expected, name
        # independent count straight from the multiplication table
        assert Fraction(int((G.table == G.table.T).sum()), G.order**2) == expected, name
    for name, value in [("Q8", Fraction(5, 8)), ("D4", Fraction(5, 8)), ("S3", Fraction(1, 2)),
                        ("A4", Fraction(1, 3))]:
        G = catalog_group(name)
        assert dc_all_pairs(Measure.uniform(G, G.elements())) == value


@pytest.mark.criterion(2, "no nonabelian group above 5/8; 1/2 + 1/(2q) bound")
def test_c02_gustafson():
    assert NONABELIAN
    for name, G in NONABELIAN:
        v = verify_gustafson(G)
        assert v.passed, v.to_dict()
        dc = v.data["dc"]
        q = G.order // len(center(G))
        assert dc <= Fraction(5, 8)
        assert dc <= Fraction(1, 2) + Fraction(1, 2 * q)
        assert q >= 4
    for name in ("Q8", "D4"):
        G = catalog_group(name)
        assert dc_of_measure(Measure.uniform(G, G.elements())) == Fraction(5, 8)


@pytest.mark.criterion(3, "dc = 1/2 + eps with eps > 0 forces [G:Z] <= 1/eps")
def test_c03_center_bound():
    checked = 0
    for name, G in CATALOG:
        v = verify_center_bound(G)
        assert v.passed, v.to_dict()
        eps = v.data["epsilon"]
        if eps > 0:
            checked += 1
            assert G.order // len(center(G)) <= 1 / eps, name
    assert checked > 20


@pytest.mark.criterion(4, "Neumann decomposition and NVL bound (natural log)")
def test_c04_neumann():
    for name, G in CATALOG:
        v = verify_neumann(G)
        assert v.passed, v.to_dict()
        checks = v.data["checks"]
        for key in ("Gamma_normal", "H_normal", "quotient_abelian", "index_bound",
                    "converse_bound", "nvl_in_Gamma"):
            assert checks[key], (name, key)
        assert verify_nvl(G).passed, name


@pytest.mark.criterion(5, "walk measures cosets within eps at the mixing bound")
def test_c05_random_walk_uniformity():
    assert mixing_bound(c=Fraction(1, 2), epsilon=Fraction(1, 10)) == 12801
    z12 = catalog_group("Z12")
    d4 = catalog_group("D4")
    cases = [(z12, finite_subgroup(z12, [z12.parse("3")], "<3>")), (d4, center_subgroup(d4))]
    for G, H in cases:
        step = lazy_step(G, G.default_genset())
        assert step.is_symmetric() and step[G.identity] > 0
        for eps in (Fraction(5, 100), Fraction(1, 100)):
            rep = verify_uniform_measurement(step, [H], eps)
            assert rep.passed, rep.to_dict()
            row = rep.rows[0]
            assert row["status"] == "checked"
            assert all(c["deviation_bound"] <= eps for c in row["checks"])


@pytest.mark.criterion(6, "ball deviations on Z and Z^2 are at most 1/n for index 2")
def test_c06_folner_convergence():
    for G in (ZPowD(1), ZPowD(2)):
        S = G.default_genset()
        H = even_sum(G)
        for x in (G.identity, G.generators()[0]):
            curve = index_measurement_curve(BallUniform(G, S), H, x, range(1, 501), index=2)
            assert len(curve) == 500
            for n, dev in curve:
                assert dev <= Fraction(1, n), (G, x, n, dev)


@pytest.mark.criterion(7, "Z x F2 balls keep mass >= 0.1 on the infinite-index factor")
def test_c07_counterexample():
    G = DirectProduct((ZPowD(1), FreeGroup(2)))
    S = G.default_genset()
    assert len(S.elements) == 7
    H = factor_subgroup(G, 1)
    curve = index_measurement_curve(BallUniform(G, S), H, G.identity, range(5, 13),
                                    index=None, S=S, cap=200)
    assert [n for n, _ in curve] == list(range(5, 13))
    for n, mass in curve:
        # infinite index: the target mass is 0, so the deviation is the mass itself
        assert mass >= Fraction(1, 10), (n, mass)


@pytest.mark.criterion(8, "D_inf dc and cr tails near 1/4; cr = dc at n = 200")
def test_c08_dinf_triple():
    G = InfiniteDihedral()
    seq = BallUniform(G, G.default_genset())
    ns = range(150, 201)
    dc = dc_sequence(seq, ns, tail_window=len(ns))
    cr = cr_sequence(seq, ns, tail_window=len(ns))
    quarter = Fraction(1, 4)
    assert abs(dc.tail_max - quarter) <= 0.02 and abs(dc.tail_min - quarter) <= 0.02
    assert abs(cr.tail_max - quarter) <= 0.05 and abs(cr.tail_min - quarter) <= 0.05
    assert abs(dc.points[-1].value - cr.points[-1].cr_value) <= 0.05
    bound = cr_lower_bound(2, 1)
    assert bound == quarter
    assert dc.tail_min >= bound - Fraction(2, 100)
    assert cr.tail_min >= bound - Fraction(5, 100)


@pytest.mark.criterion(9, "Heisenberg ball dc strictly decreasing on [4,12], dc12 < dc4")
def test_c09_heisenberg_decay():
    G = HeisenbergZ()
    rep = dc_sequence(BallUniform(G, G.default_genset()), range(4, 13))
    vals = rep.values()
    assert vals[-1] < vals[0]
    for n, (a, b) in zip(range(4, 12), zip(vals, vals[1:])):
        assert b < a, f"dc_{n + 1} = {b} is not below dc_{n} = {a}"


@pytest.mark.criterion(10, "D_inf ball tail and lazy-walk tail agree within 0.02")
def test_c10_independence():
    G = InfiniteDihedral()
    S = G.default_genset()
    ball_ns, walk_ns = range(150, 201), range(500, 601)
    ball = dc_sequence(BallUniform(G, S), ball_ns, len(ball_ns))
    step = lazy_step(G, S, Fraction(1, 4)).to_float()
    walk = dc_sequence(WalkPower(step), walk_ns, len(walk_ns))
    gap = independence_gap(ball.tail_min, ball.tail_max, walk.tail_min, walk.tail_max)
    assert gap <= 0.02, gap


@pytest.mark.criterion(11, "D4 Monte Carlo Wilson interval contains the exact value")
def test_c11_montecarlo():
    G = catalog_group("D4")
    step = lazy_step(G, G.default_genset())
    exact = dc_of_measure(walk_power(step, 50))
    est = dc_montecarlo(step, 50, 100_000, seed=2024)
    assert est.ci_low <= exact <= est.ci_high, (est, float(exact))


@pytest.mark.criterion(12, "canonical conjugacy agrees with brute-force conjugator search")
@pytest.mark.parametrize("group,R", [(FreeGroup(2), 8), (InfiniteDihedral(), 8),
                                     (HeisenbergZ(), 6)], ids=["F2", "Dinf", "Heisenberg"])
def test_c12_conjugacy_oracle(group, R):
    assert oracle_mismatches(group, radius=4, conj_radius=R) == []


def _symmetric_sets(G, rng, limit=500):
    """Symmetric e-containing subsets: all of them when few, else ``limit`` random ones."""
    orbits, seen = [], {G.identity}
    for x in G.elements():
        if x not in seen:
            orb = {x, G.inv(x)}
            seen |= orb
            orbits.append(orb)
    if 2 ** len(orbits) <= limit:
        for mask in range(2 ** len(orbits)):
            yield frozenset({G.identity}.union(*[o for i, o in enumerate(orbits) if mask >> i & 1]))
        return
    for _ in range(limit):
        m = int(rng.integers(1, 5))
        target = -(-G.order // m)
        X = {G.identity}
        for i in rng.permutation(len(orbits)):
            if len(X) >= target and rng.random() < 0.5:
                break
            X |= orbits[i]
        yield frozenset(X)


@pytest.mark.criterion(13, "X^(3m-1) = <X> for large symmetric X")
def test_c13_neumann_translates():
    rng = np.random.default_rng(13)
    total = 0
    for name, G in CATALOG:
        for X in _symmetric_sets(G, rng):
            for m in range(1, 5):
                if len(X) * m >= G.order:
                    v = verify_neum_translates(G, X, m)
                    assert v.passed, (name, sorted(X), v.data)
                    total += 1
    assert total > 5000
