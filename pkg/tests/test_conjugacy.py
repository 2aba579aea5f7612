import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dcgroups.catalog import build_catalog, catalog_group
from dcgroups.conjugacy import (class_partition, conj_canonical, contained_vs_meeting,
                                cr_lower_bound, cr_sequence, oracle_mismatches, verify_cr_eq_dc)
from dcgroups.errors import ConfigError, StructureError
from dcgroups.finite import conj_classes
from dcgroups.groups import (DirectProduct, FreeGroup, HeisenbergZ, InfiniteDihedral, ZPowD,
                             ball)
from dcgroups.measure import BallUniform, Explicit, Measure, WalkPower, lazy_step

D, H, F = InfiniteDihedral(), HeisenbergZ(), FreeGroup(2)
letters = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10).map(
    lambda w: F.parse(" ".join(F.format((a,)) for a in w)) if w else ())


def test_canonical_examples():
    assert conj_canonical(F, F.parse("x y x^-1")) == conj_canonical(F, F.parse("y"))
    assert conj_canonical(F, F.parse("x y")) == conj_canonical(F, F.parse("y x"))
    assert conj_canonical(F, F.parse("x y")) != conj_canonical(F, F.parse("x y^-1"))
    assert conj_canonical(D, (3, 1)) == conj_canonical(D, (5, 1))
    assert conj_canonical(D, (3, 1)) != conj_canonical(D, (4, 1))
    assert conj_canonical(D, (3, 0)) == conj_canonical(D, (-3, 0))
    assert conj_canonical(H, (1, 1, 0)) == conj_canonical(H, (1, 1, 1))
    assert conj_canonical(H, (2, 0, 0)) != conj_canonical(H, (2, 0, 1))
    assert conj_canonical(H, (0, 0, 1)) != conj_canonical(H, (0, 0, 2))
    assert conj_canonical(ZPowD(2), (1, 2)) == (1, 2)
    with pytest.raises(StructureError):
        conj_canonical(D, (1, 5))


@pytest.mark.parametrize("G,R", [(D, 8), (H, 6), (DirectProduct((D, ZPowD(1))), 6)], ids=str)
def test_oracle_equivalence(G, R):
    assert oracle_mismatches(G, radius=4, conj_radius=R) == []


def test_oracle_equivalence_free_small():
    assert oracle_mismatches(F, radius=3, conj_radius=6) == []


@given(letters)
def test_free_canonical_idempotent_and_invariant(w):
    cid = conj_canonical(F, w)
    if cid:
        assert conj_canonical(F, cid) == cid
    for g in F.generators():
        for h in (g, F.inv(g)):
            assert conj_canonical(F, F.conj(h, w)) == cid


@pytest.mark.parametrize("name,G", list(build_catalog()), ids=[n for n, _ in build_catalog()])
def test_finite_partition_matches_classes(name, G):
    assert class_partition(G, list(G.elements())) == set(conj_classes(G).classes)


def test_finite_cr_saturates():
    for name in ("S4", "Q8", "D5", "Heis3"):
        G = catalog_group(name)
        rep = cr_sequence(BallUniform(G, G.default_genset()), range(0, 30))
        k = len(conj_classes(G))
        assert rep.values()[-1] == Fraction(k, G.order)
        last = rep.points[-1]
        assert last.classes_contained == last.classes_meeting == k
        assert contained_vs_meeting(BallUniform(G, G.default_genset()), 30) == 0


@given(st.integers(0, 30))
def test_zpowd_cr_is_one(n):
    for d in (1, 2):
        G = ZPowD(d)
        seq = BallUniform(G, G.default_genset())
        assert cr_sequence(seq, [n]).values() == [1]
        assert contained_vs_meeting(seq, n) == 0


@given(st.integers(2, 120))
def test_dinf_cr_closed_form(n):
    # translation classes {t^k, t^-k}, k <= n, plus two reflection classes; |B_n| = 4n
    rep = cr_sequence(BallUniform(D, D.default_genset()), [n])
    p = rep.points[0]
    assert p.cr_value == Fraction(n + 3, 4 * n)
    assert p.classes_meeting == n + 3
    assert p.classes_contained <= p.classes_meeting


def test_dinf_straddling_share_decreases():
    seq = BallUniform(D, D.default_genset())
    vals = [contained_vs_meeting(seq, n) for n in range(10, 101, 10)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_cr_report_outputs():
    rep = cr_sequence(BallUniform(D, D.default_genset()), range(1, 6), tail_window=3)
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["tail"]["window"] == 3
    assert d["points"][4]["classes_meeting"] == 8 and d["points"][4]["support"] == 20
    assert rep.to_csv().splitlines()[0] == "n,value,classes_meeting,classes_contained"
    assert rep.tail_max == max(rep.values()[-3:])


def test_cr_rejects_walks_and_nonuniform():
    step = lazy_step(D, D.default_genset())
    with pytest.raises(ConfigError):
        cr_sequence(WalkPower(step), [1])
    with pytest.raises(ConfigError):
        cr_sequence(Explicit((step,)), [1])
    uni = Explicit((Measure.uniform(D, ball(D, D.default_genset(), 3)),))
    assert cr_sequence(uni, [1]).values() == [Fraction(6, 12)]


def test_cr_eq_dc_verdicts():
    Q8 = catalog_group("Q8")
    v = verify_cr_eq_dc(BallUniform(Q8, Q8.default_genset()), 5, 0)
    assert v.passed and v.data["cr"] == v.data["dc"] == Fraction(5, 8)
    v = verify_cr_eq_dc(BallUniform(ZPowD(1), ZPowD(1).default_genset()), 10, 0)
    assert v.passed and v.data["cr"] == 1
    v = verify_cr_eq_dc(BallUniform(D, D.default_genset()), 200, 0.05)
    assert v.passed
    bad = verify_cr_eq_dc(BallUniform(D, D.default_genset()), 3, 0.001)
    assert not bad.passed and bad.data["gap"] > Fraction(1, 1000)


def test_cr_lower_bound():
    assert cr_lower_bound(2, 1) == Fraction(1, 4)
    assert cr_lower_bound(1, 1) == 1
    with pytest.raises(ConfigError):
        cr_lower_bound(0, 2)
