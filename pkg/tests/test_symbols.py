import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metaplectic.symbols import (SQUARE_CLASSES, LocalFieldModel, MuN, ResidueField,
                                 gamma_solutions, hilbert2_exponent4, is_quadratic_character,
                                 symbol_exponent, symbol_table, tame_symbol)

MODELS = [(q, n) for q in (3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27)
          for n in range(1, 7) if (q - 1) % n == 0]


# -- residue fields ---------------------------------------------------------

@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49])
def test_field_axioms(q):
    f = ResidueField(q)
    els = list(range(q))
    assert sorted(f.units()) == els[1:]
    assert f.order(f.primitive) == q - 1
    for a in els:
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
            assert f.pow(f.primitive, f.log(a)) == a
    sample = els[: min(q, 9)]
    for a, b, c in itertools.product(sample, repeat=3):
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))


@pytest.mark.parametrize("q", [1, 6, 10, 12, 15])
def test_non_prime_powers_rejected(q):
    with pytest.raises(ValueError):
        ResidueField(q)


def test_model_validation():
    with pytest.raises(ValueError):
        LocalFieldModel(7, 4)
    with pytest.raises(ValueError):
        LocalFieldModel(7, 3, g=2)  # 2 has order 3 in F_7
    assert LocalFieldModel(7, 3, g=3).g == 3


def test_mu_n():
    z = MuN(5, 3)
    assert z.e == 2 and (z * z).e == 1 and (z ** 3).is_one and (z * z.inverse()).is_one


# -- tame symbol ------------------------------------------------------------

def test_symbol_examples():
    m = LocalFieldModel(7, 3, g=3)
    assert m.zeta == 2
    for u, v in itertools.product(range(3), repeat=2):
        assert tame_symbol((0, u), (0, v), m).e == 0
    # (uniformizer, g) = g^-2 = 4 = zeta^2
    assert tame_symbol((1, 0), (0, 1), m).e == 2
    assert tame_symbol((1, 0), (1, 0), m).e == 0


def test_uniformizer_against_unit_orientation():
    # (uniformizer, u) = u^{-(q-1)/n} computed directly in the field
    for q, n in [(7, 3), (13, 4), (13, 6), (9, 4), (16, 5)]:
        m = LocalFieldModel(q, n)
        f = m.field
        for k in range(n):
            u = f.pow(m.g, k)
            expect = f.inv(f.pow(u, (q - 1) // n))
            assert m.field.pow(m.zeta, tame_symbol((1, 0), (0, k), m).e) == expect


@pytest.mark.parametrize("q, n", MODELS)
def test_symbol_laws_exhaustive(q, n):
    m = LocalFieldModel(q, n)
    cls = m.classes()
    tab = symbol_table(m)
    idx = {c: i for i, c in enumerate(cls)}
    for a in cls:
        for b in cls:
            s = tab[idx[a]][idx[b]]
            assert s == symbol_exponent(a, b, q, n)
            assert (s + tab[idx[b]][idx[a]]) % n == 0
            for c in cls:
                ab = m.mul_classes(a, b)
                assert tab[idx[ab]][idx[c]] == (tab[idx[a]][idx[c]] + tab[idx[b]][idx[c]]) % n
                bc = m.mul_classes(b, c)
                assert tab[idx[a]][idx[bc]] == (tab[idx[a]][idx[b]] + tab[idx[a]][idx[c]]) % n


@pytest.mark.parametrize("q, n", MODELS)
def test_symbol_a_minus_a(q, n):
    m = LocalFieldModel(q, n)
    for a in m.classes():
        neg_a = m.mul_classes(m.minus_one_class, a)
        assert tame_symbol(a, neg_a, m).is_one


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(MODELS), st.tuples(*[st.integers(-20, 20)] * 4))
def test_symbol_normalizes_out_of_range(qn, xs):
    q, n = qn
    m = LocalFieldModel(q, n)
    a, b = (xs[0], xs[1]), (xs[2], xs[3])
    assert tame_symbol(a, b, m) == tame_symbol(m.normalize(a), m.normalize(b), m)


def test_symbol_with_nonstandard_generator():
    # any generator gives a consistent symbol; the classes change, the laws do not
    for g in (3, 5):
        m = LocalFieldModel(7, 6, g=g)
        for a in m.classes():
            for b in m.classes():
                assert tame_symbol(a, b, m).e == symbol_exponent(a, b, 7, 6)


# -- gamma ------------------------------------------------------------------

@pytest.mark.parametrize("q, sq", [(5, 0), (7, 2), (13, 0), (3, 2), (9, 0), (11, 2)])
def test_gamma_solutions(q, sq):
    sols = gamma_solutions(q)
    assert len(sols) == 4
    m = LocalFieldModel(q, 2)
    for g in sols:
        assert g((0, 0)) == 0
        # gamma(uniformizer)^2 = (uniformizer, uniformizer)_2 = (-1)^((q-1)/2)
        assert (2 * g((1, 0))) % 4 == sq == hilbert2_exponent4((1, 0), (1, 0), m)
        for a in SQUARE_CLASSES:
            for b in SQUARE_CLASSES:
                assert (g(a) + g(b)) % 4 == (hilbert2_exponent4(a, b, m) + g(m.mul_classes(a, b))) % 4
    for g1, g2 in itertools.combinations(sols, 2):
        ratio = {c: (g1(c) - g2(c)) % 4 for c in SQUARE_CLASSES}
        assert is_quadratic_character(ratio)


def test_gamma_rejects_even_q():
    with pytest.raises(ValueError):
        gamma_solutions(8)


def test_quadratic_character_detector():
    assert is_quadratic_character({c: 0 for c in SQUARE_CLASSES})
    assert not is_quadratic_character({(0, 0): 0, (0, 1): 1, (1, 0): 0, (1, 1): 1})
    assert not is_quadratic_character({(0, 0): 0, (0, 1): 2, (1, 0): 0, (1, 1): 0})
