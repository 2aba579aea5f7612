from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dcgroups.catalog import catalog_group
from dcgroups.errors import ConfigError, ModeError, ResourceError, StructureError
from dcgroups.groups import FreeGroup, HeisenbergZ, InfiniteDihedral, ZPowD
from dcgroups.measure import (BallUniform, Explicit, Measure, WalkPower, almost_invariance_defect,
                              ball_uniform, convolve, dump_measure, l1_distance, lazy_step,
                              load_measure, measures_from_words, pushforward, sample, translate,
                              walk_power)

D = InfiniteDihedral()
Z = ZPowD(1)


def naive_convolve(mu, nu):
    out = defaultdict(Fraction)
    for x, a in mu.items():
        for y, b in nu.items():
            out[mu.group.mul(x, y)] += a * b
    return {k: v for k, v in out.items() if v}


@st.composite
def dinf_measures(draw):
    atoms = draw(st.lists(st.tuples(st.integers(-4, 4), st.integers(0, 1)), min_size=1,
                          max_size=6, unique=True))
    raw = draw(st.lists(st.integers(1, 9), min_size=len(atoms), max_size=len(atoms)))
    total = sum(raw)
    return Measure(D, {x: Fraction(w, total) for x, w in zip(atoms, raw)})


@given(dinf_measures(), dinf_measures())
def test_convolution_matches_naive(mu, nu):
    out = convolve(mu, nu)
    assert out.weights == naive_convolve(mu, nu)
    assert out.mass() == 1


@given(dinf_measures(), dinf_measures(), dinf_measures())
def test_convolution_associative(a, b, c):
    assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))


@given(dinf_measures(), st.integers(1, 6))
def test_walk_power_matches_repeated_convolution(mu, n):
    acc = mu
    for _ in range(n - 1):
        acc = convolve(acc, mu)
    assert walk_power(mu, n) == acc


def test_lazy_z_walk_square():
    step = lazy_step(Z, Z.default_genset())
    assert step.weights == {(0,): Fraction(1, 2), (1,): Fraction(1, 4), (-1,): Fraction(1, 4)}
    sq = walk_power(step, 2)
    assert sq.weights == {(0,): Fraction(3, 8), (1,): Fraction(1, 4), (-1,): Fraction(1, 4),
                          (2,): Fraction(1, 16), (-2,): Fraction(1, 16)}


def test_measure_validation():
    with pytest.raises(ConfigError):
        Measure(Z, {(0,): Fraction(1, 2)})
    with pytest.raises(ConfigError):
        Measure(Z, {(0,): Fraction(3, 2), (1,): Fraction(-1, 2)})
    with pytest.raises(ConfigError):
        Measure(Z, {})
    with pytest.raises(StructureError):
        Measure(Z, {(0, 0): Fraction(1)})
    assert Measure(Z, {(0,): 0.5, (1,): 0.5}).exact is False
    with pytest.raises(ConfigError):
        Measure(Z, {(0,): 0.5, (1,): 0.4})
    with pytest.raises(ConfigError):
        lazy_step(Z, Z.default_genset(), Fraction(1))


def test_mode_and_group_mismatch():
    mu = Measure.delta(Z)
    with pytest.raises(ModeError):
        convolve(mu, mu.to_float())
    with pytest.raises(StructureError):
        convolve(mu, Measure.delta(D))
    with pytest.raises(ConfigError):
        walk_power(mu, 0)


def test_float_convolution_close_to_exact():
    step = lazy_step(D, D.default_genset(), Fraction(1, 4))
    exact = walk_power(step, 20)
    approx = walk_power(step.to_float(), 20)
    assert set(exact.weights) == set(approx.weights)
    assert max(abs(float(exact[x]) - approx[x]) for x in exact) < 1e-14


def test_support_cap_reports_progress():
    step = lazy_step(FreeGroup(2), FreeGroup(2).default_genset())
    with pytest.raises(ResourceError) as info:
        walk_power(step, 12, cap=2000)
    assert info.value.last_completed is not None and info.value.last_completed < 12


def test_ball_uniform_and_sequences():
    mu = ball_uniform(D, D.default_genset(), 3)
    assert len(mu) == 12 and mu.mass() == 1
    seq = BallUniform(D, D.default_genset())
    sizes = [len(m) for _, m in seq.measures([1, 2, 5])]
    assert sizes == [4, 8, 20]
    step = lazy_step(D, D.default_genset())
    walk = dict(WalkPower(step).measures([1, 2, 4]))
    assert walk[4] == walk_power(step, 4)
    ex = Explicit((Measure.delta(D), mu))
    assert [n for n, _ in ex.measures([1, 2])] == [1, 2]
    with pytest.raises(ConfigError):
        list(ex.measures([3]))
    with pytest.raises(ConfigError):
        list(seq.measures([]))


@given(st.integers(1, 40))
def test_z_ball_defect_closed_form(n):
    seq = BallUniform(Z, Z.default_genset())
    [(m, d)] = almost_invariance_defect(seq, (1,), [n])
    assert m == n and d == Fraction(2, 2 * n + 1)


def test_defect_generic_path_agrees_with_ball_path():
    H = HeisenbergZ()
    seq = BallUniform(H, H.default_genset())
    x = H.parse("x")
    fast = almost_invariance_defect(seq, x, [1, 2, 3])
    slow = [(n, l1_distance(translate(x, mu), mu)) for n, mu in seq.measures([1, 2, 3])]
    assert fast == slow


def test_translate_and_pushforward():
    mu = lazy_step(Z, Z.default_genset())
    t = translate((2,), mu)
    assert t[(3,)] == Fraction(1, 4) and t[(2,)] == Fraction(1, 2)
    parity = pushforward(mu, lambda v: v[0] % 2)
    assert parity == {0: Fraction(1, 2), 1: Fraction(1, 2)}


def test_dump_load_roundtrip():
    step = lazy_step(HeisenbergZ(), HeisenbergZ().default_genset())
    mu = walk_power(step, 3)
    text = dump_measure(mu)
    assert text.startswith("# group: Heisenberg(Z)\n# mode: exact\n")
    assert load_measure(text, HeisenbergZ()) == mu
    fl = mu.to_float()
    assert load_measure(dump_measure(fl), HeisenbergZ()) == fl
    with pytest.raises(ConfigError):
        load_measure("x 1/2\n", HeisenbergZ())


def test_measures_from_words():
    mu = measures_from_words(D, {"e": "1/2", "t": "1/8", "t^-1": "1/8", "s": "1/4"})
    assert mu.is_symmetric() and mu.min_weight() == Fraction(1, 8)


def test_sample_is_seeded_and_follows_weights():
    Q8 = catalog_group("Q8")
    mu = lazy_step(Q8, Q8.default_genset())
    a, b = sample(mu, 5, 2000), sample(mu, 5, 2000)
    assert a == b
    freq = a.count(Q8.identity) / len(a)
    assert abs(freq - 0.5) < 0.05
    assert sample(mu, 1, 0) == []
