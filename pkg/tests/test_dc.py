import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dcgroups.catalog import build_catalog, catalog_group
from dcgroups.dc import (DcPoint, DcReport, class_size, commuting_pairs, dc_all_pairs,
                         dc_central_formula, dc_montecarlo, dc_of_measure, dc_sequence,
                         gustafson_upper_bound, mass_of_small_centralizers, neumann_lower_bound,
                         wilson_interval)
from dcgroups.errors import ConfigError, ResourceError
from dcgroups.finite import center, class_sizes
from dcgroups.groups import DirectProduct, FreeGroup, HeisenbergZ, InfiniteDihedral, ZPowD, ball
from dcgroups.measure import BallUniform, Measure, WalkPower, lazy_step, walk_power

D = InfiniteDihedral()
H = HeisenbergZ()
KEYED = [H, D, FreeGroup(2), DirectProduct((ZPowD(1), FreeGroup(2))),
         DirectProduct((D, ZPowD(1)))]

# exact ball values, cross-checked against an independent left-multiplication BFS with
# an all-pairs count
HEISENBERG_BALL_DC = {
    4: Fraction(883, 6075), 5: Fraction(7545, 89401), 6: Fraction(27385, 351649),
    7: Fraction(58377, 1142761), 8: Fraction(155713, 3214849), 9: Fraction(294369, 8094025),
    10: Fraction(630041, 18567481), 11: Fraction(1003897, 39450961),
    12: Fraction(672179, 26231547),
}


def dinf_ball_dc(n):
    # 2n+1 translations commute pairwise; 2n-1 reflections commute with e and themselves
    return Fraction((2 * n + 1) ** 2 + 3 * (2 * n - 1), 16 * n * n)


@st.composite
def measure_on(draw, G):
    elems = sorted(ball(G, G.default_genset(), 3), key=G.sort_key)
    atoms = draw(st.lists(st.sampled_from(elems), min_size=1, max_size=12, unique=True))
    raw = draw(st.lists(st.integers(1, 20), min_size=len(atoms), max_size=len(atoms)))
    return Measure(G, {x: Fraction(w, sum(raw)) for x, w in zip(atoms, raw)})


@pytest.mark.parametrize("G", KEYED, ids=str)
@given(data=st.data())
def test_keyed_fast_path_matches_all_pairs(G, data):
    mu = data.draw(measure_on(G))
    assert dc_of_measure(mu) == dc_all_pairs(mu)
    assert math.isclose(dc_of_measure(mu.to_float()), float(dc_all_pairs(mu)), rel_tol=1e-12)


@pytest.mark.parametrize("G", KEYED, ids=str)
def test_commuting_pairs_matches_brute_force(G):
    elems = sorted(ball(G, G.default_genset(), 3), key=G.sort_key)
    brute = sum(1 for x in elems for y in elems if G.mul(x, y) == G.mul(y, x))
    assert commuting_pairs(G, elems) == brute


def test_heisenberg_ball_values_frozen():
    rep = dc_sequence(BallUniform(H, H.default_genset()), range(4, 13))
    assert dict(zip(range(4, 13), rep.values())) == HEISENBERG_BALL_DC
    for n in range(1, 7):
        mu = Measure.uniform(H, ball(H, H.default_genset(), n))
        assert dc_all_pairs(mu) == dc_of_measure(mu)
    assert HEISENBERG_BALL_DC[12] < HEISENBERG_BALL_DC[4]


@given(st.integers(1, 40))
def test_dinf_ball_dc_closed_form(n):
    rep = dc_sequence(BallUniform(D, D.default_genset()), [n])
    assert rep.values() == [dinf_ball_dc(n)]


def test_finite_groups_go_through_all_pairs():
    for name, G in build_catalog():
        mu = Measure.uniform(G, G.elements())
        assert dc_of_measure(mu) == Fraction(int((G.table == G.table.T).sum()), G.order**2)


def test_walk_sequence_matches_direct_powers():
    step = lazy_step(D, D.default_genset())
    rep = dc_sequence(WalkPower(step), [3, 5])
    assert rep.values() == [dc_of_measure(walk_power(step, 3)), dc_of_measure(walk_power(step, 5))]


def test_abelian_is_one():
    for G in (ZPowD(3), catalog_group("Z12"), FreeGroup(1)):
        mu = lazy_step(G, G.default_genset())
        assert dc_of_measure(mu) == 1
        assert dc_of_measure(mu.to_float()) == 1.0


def test_pairs_cap():
    S4 = catalog_group("S4")
    mu = Measure.uniform(S4, S4.elements())
    with pytest.raises(ResourceError):
        dc_all_pairs(mu, pairs_cap=100)
    with pytest.raises(ResourceError):
        commuting_pairs(S4, list(S4.elements()), pairs_cap=100)


def test_report_schema_and_tail():
    rep = DcReport.build([DcPoint(1, Fraction(1, 2), 4), DcPoint(2, Fraction(1, 3), 8),
                          DcPoint(3, Fraction(2, 5), 12)], 2, "G", {"kind": "ball"})
    assert rep.tail_max == Fraction(2, 5) and rep.tail_min == Fraction(1, 3)
    d = json.loads(json.dumps(rep.to_dict()))
    assert set(d) == {"group", "sequence", "points", "tail"}
    assert d["points"][0] == {"n": 1, "value": 0.5, "support": 4, "exact": "1/2"}
    assert d["tail"] == {"window": 2, "max": 0.4, "min": 1 / 3}
    assert rep.to_csv().splitlines()[0] == "n,value"
    with pytest.raises(ConfigError):
        DcReport.build([], 1)
    with pytest.raises(ConfigError):
        DcReport.build(rep.points, 0)


# --- Monte Carlo ---------------------------------------------------------------------

def test_wilson_interval_properties():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi and math.isclose(0.5 - lo, hi - 0.5)
    lo0, hi0 = wilson_interval(0, 100)
    assert lo0 == 0.0 and 0 < hi0 < 0.05
    assert wilson_interval(500, 1000)[1] - wilson_interval(500, 1000)[0] < hi - lo


def test_montecarlo_deterministic_and_covers_exact():
    Q8 = catalog_group("Q8")
    step = lazy_step(Q8, Q8.default_genset())
    a = dc_montecarlo(step, 20, 20_000, seed=3)
    assert a == dc_montecarlo(step, 20, 20_000, seed=3)
    exact = dc_of_measure(walk_power(step, 20))
    assert a.ci_low <= exact <= a.ci_high
    est = dc_montecarlo(lazy_step(D, D.default_genset()), 6, 20_000, seed=11)
    exact = dc_of_measure(walk_power(lazy_step(D, D.default_genset()), 6))
    assert est.ci_low <= exact <= est.ci_high


def test_montecarlo_abelian_degenerate():
    est = dc_montecarlo(lazy_step(ZPowD(2), ZPowD(2).default_genset()), 10, 50, seed=1)
    assert (est.mean, est.ci_low, est.ci_high) == (1.0, 1.0, 1.0)
    with pytest.raises(ConfigError):
        dc_montecarlo(lazy_step(D, D.default_genset()), 3, 0, seed=1)


# --- closed forms --------------------------------------------------------------------

def test_central_formula_examples():
    assert dc_central_formula(4, [1, 2, 2, 2]) == Fraction(5, 8)
    assert dc_central_formula(6, [1, 3, 3, 3, 2, 2]) == Fraction(1, 2)
    assert dc_central_formula(2, [1, math.inf]) == Fraction(1, 2)
    assert dc_central_formula(2, [1, None]) == Fraction(1, 2)
    for bad in [(0, []), (2, [1]), (2, [2, 2]), (2, [1, 0]), (2, [1, 1.5])]:
        with pytest.raises(ConfigError):
            dc_central_formula(*bad)


@pytest.mark.parametrize("name,G", list(build_catalog()), ids=[n for n, _ in build_catalog()])
def test_central_formula_matches_catalog(name, G):
    Z = center(G)
    reps, seen = [], set()
    for x in G.elements():
        if x not in seen:
            reps.append(x)
            seen |= {G.mul(x, z) for z in Z}
    sizes = class_sizes(G)
    got = dc_central_formula(len(reps), [sizes[x] for x in reps])
    assert got == dc_of_measure(Measure.uniform(G, G.elements()))


def test_simple_bounds():
    assert neumann_lower_bound(2, 1) == Fraction(1, 4)
    assert neumann_lower_bound(1, 1) == 1
    assert gustafson_upper_bound(4) == Fraction(5, 8)
    with pytest.raises(ConfigError):
        neumann_lower_bound(0, 1)
    with pytest.raises(ConfigError):
        gustafson_upper_bound(0)


def test_class_sizes_across_families():
    assert class_size(D, (3, 0)) == 2
    assert class_size(D, (0, 0)) == 1
    assert class_size(D, (0, 1), cap=50) is None
    assert class_size(H, (0, 0, 5)) == 1
    assert class_size(H, (1, 0, 0), cap=50) is None
    assert class_size(catalog_group("S4"), catalog_group("S4").parse("(01)")) == 6
    P = DirectProduct((D, ZPowD(1)))
    assert class_size(P, ((2, 0), (7,))) == 2


def test_mass_of_small_centralizers():
    S3 = catalog_group("S3")
    mu = Measure.uniform(S3, S3.elements())
    # e (class 1) and the two 3-cycles (class 2); transpositions have class 3
    assert mass_of_small_centralizers(mu, 1) == Fraction(1, 6)
    assert mass_of_small_centralizers(mu, 2) == Fraction(1, 2)
    assert mass_of_small_centralizers(mu, 3) == 1
    ball_mu = Measure.uniform(D, ball(D, D.default_genset(), 5))
    # translations have class size <= 2, reflections infinite
    assert mass_of_small_centralizers(ball_mu, 2, class_cap=100) == Fraction(11, 20)
    with pytest.raises(ConfigError):
        mass_of_small_centralizers(mu, 0)
    with pytest.raises(ConfigError):
        mass_of_small_centralizers(mu, 5, class_cap=5)
