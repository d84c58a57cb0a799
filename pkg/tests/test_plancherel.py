import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from metaplectic.plancherel import (LaurentRational, archimedean_mu, gk_coefficient, local_l_factor,
                                    normalize_at_zero, plancherel_from_l_factors, plancherel_rank_one,
                                    positivity_samples, positive_real_roots, reducibility_report,
                                    transfer_linear_to_cover)

Z = sympy.Symbol("z")
GRID = [(q, n) for q in (3, 5, 7, 9, 13) for n in range(1, 7)]


def to_sympy(f: LaurentRational):
    num = sum(sympy.Rational(c.numerator, c.denominator) * Z**i for i, c in enumerate(f.num))
    den = sum(sympy.Rational(c.numerator, c.denominator) * Z**i for i, c in enumerate(f.den))
    dhalf = sympy.sqrt(sympy.Rational(f.d.denominator, f.d.numerator)) if f.dhalf_power else 1
    return dhalf * Z**f.shift * num / den


def polys(max_deg=4):
    return st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6),
                    min_size=1, max_size=max_deg + 1)


nonzero_den = polys().filter(lambda p: any(p))


def laurent():
    return st.builds(lambda n, d, s: LaurentRational.make(n, d, s), polys(), nonzero_den, st.integers(-3, 3))


# -- LaurentRational --------------------------------------------------------

def test_canonical_form():
    f = LaurentRational.make([0, 2, -2], [0, 0, 4, -4])  # 2z(1-z) / (4z^2(1-z))
    assert f == LaurentRational.make([Fraction(1, 2)], [1], -1)
    assert f.den[0] == 1


def test_zero_and_constant():
    assert LaurentRational.make([], [3]).is_zero
    assert LaurentRational.constant(5).is_constant
    with pytest.raises(ZeroDivisionError):
        LaurentRational.make([1], [0])
    with pytest.raises(ZeroDivisionError):
        LaurentRational.make([], [1]).inverse()


@settings(max_examples=150, deadline=None)
@given(laurent(), laurent())
def test_arithmetic_matches_sympy(f, g):
    assert sympy.simplify(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0
    assert sympy.simplify(to_sympy(f + g) - (to_sympy(f) + to_sympy(g))) == 0
    assert sympy.simplify(to_sympy(f.at_inverse()) - to_sympy(f).subs(Z, 1 / Z)) == 0
    assert (f * g).equals(g * f) and f * g == g * f


@settings(max_examples=100, deadline=None)
@given(laurent(), st.integers(1, 4))
def test_substitution_laws(f, n):
    assert f.at_power(n).at_inverse() == f.at_inverse().at_power(n)
    assert f.at_power(1) == f
    assert sympy.simplify(to_sympy(f.at_power(n)) - to_sympy(f).subs(Z, Z**n)) == 0


@settings(max_examples=100, deadline=None)
@given(laurent().filter(lambda f: not f.is_zero))
def test_inverse(f):
    assert f * f.inverse() == LaurentRational.constant(1)


def test_equality_is_cross_multiplication():
    a = LaurentRational.make([1, -1], [1, 1])
    b = LaurentRational.make([2, -2], [2, 2])
    assert a == b and a.equals(b)
    assert not a.equals(LaurentRational.make([1, 1], [1, -1]))


def test_mixing_discriminants_rejected():
    with pytest.raises(ValueError):
        gk_coefficient(7, 1, 2) * gk_coefficient(7, 1, 3)


# -- rank-one data ----------------------------------------------------------

def test_gk_examples():
    c = gk_coefficient(7, 1, 5)
    assert c.dhalf_power == 1 and c.limit_at_zero() == 1
    assert c == LaurentRational.make([1, Fraction(-1, 7)], [1, -1], d=5, dhalf_power=1)
    # simple poles exactly at the n-th roots of unity
    c4 = gk_coefficient(7, 4)
    den = sympy.denom(sympy.together(to_sympy(c4)))
    assert set(sympy.roots(sympy.Poly(den, Z)).keys()) == {1, -1, sympy.I, -sympy.I}
    assert c4.multiplicity_at((-1, 0, 0, 0, 1), in_denominator=True) == 1


def test_mu_example_value():
    assert plancherel_rank_one(7, 1)(Fraction(-1)) == Fraction(49, 16)


@pytest.mark.parametrize("q, n", GRID)
@pytest.mark.parametrize("d", [1, 2, Fraction(1, 3)])
def test_mu_identities(q, n, d):
    mu = plancherel_rank_one(q, n, d)
    c = gk_coefficient(q, n, d)
    assert mu * c * c.at_inverse() == LaurentRational.constant(1, d)
    assert mu == mu.at_inverse()
    assert plancherel_from_l_factors(q, n, d) == mu
    # limit at z -> 0 is d * q
    assert mu.limit_at_zero() == Fraction(d) * q


@pytest.mark.parametrize("q, n", GRID[::5])
def test_mu_matches_sympy_formula(q, n):
    d = sympy.Rational(3)
    ref = d * (1 - Z**n) * (1 - Z**-n) / ((1 - Z**n / q) * (1 - Z**-n / q))
    assert sympy.simplify(to_sympy(plancherel_rank_one(q, n, 3)) - ref) == 0


def test_l_factor():
    assert local_l_factor(7, 2) == LaurentRational.make([1], [1, 0, -1])
    assert local_l_factor(7, 2, offset=1)(Fraction(0)) == 1


@pytest.mark.parametrize("q, n", GRID)
def test_transfer(q, n):
    lin = plancherel_rank_one(q, 1, 2)
    cover = plancherel_rank_one(q, n, 2)
    assert transfer_linear_to_cover(lin, n) == cover
    assert normalize_at_zero(transfer_linear_to_cover(lin, n)) == normalize_at_zero(cover)
    assert transfer_linear_to_cover(lin.at_inverse(), n) == transfer_linear_to_cover(lin, n).at_inverse()


def test_transfer_degree_checks():
    with pytest.raises(ValueError):
        transfer_linear_to_cover(plancherel_rank_one(7, 1), 0)
    mu = plancherel_rank_one(7, 3)
    assert transfer_linear_to_cover(mu, 1) == mu


@pytest.mark.parametrize("q, n", GRID)
def test_positivity_on_unitary_axis(q, n):
    vals = positivity_samples(plancherel_rank_one(q, n), q, count=1000)
    assert len(vals) == 1000
    assert vals.real.min() >= -1e-12
    assert abs(vals.imag).max() < 1e-9


def test_bad_parameters():
    for args in [(1, 2, 1), (7, 0, 1), (7, 2, 0), (7, 2, -1)]:
        with pytest.raises(ValueError):
            plancherel_rank_one(*args)


# -- reducibility -----------------------------------------------------------

@pytest.mark.parametrize("q, n", GRID)
def test_reducibility_cover(q, n):
    rep = reducibility_report(plancherel_rank_one(q, n), q, n)
    assert rep.real_reducibility_points == (Fraction(-1, n), Fraction(1, n))
    assert rep.pole_order_at_zero_of_mu_inverse == 2 and rep.irreducible_at_zero
    assert [(p.s, p.order) for p in rep.mu_zeros] == [(0, 2)]
    assert [(p.s, p.order) for p in rep.mu_poles] == [(Fraction(-1, n), 1), (Fraction(1, n), 1)]


def test_reducibility_linear_case():
    rep = reducibility_report(plancherel_rank_one(5, 1), 5, 1)
    assert rep.real_reducibility_points == (-1, 1)


def test_reducibility_constant():
    rep = reducibility_report(LaurentRational.constant(2), 7, 1)
    assert rep.real_reducibility_points == () and rep.pole_order_at_zero_of_mu_inverse == 0
    assert not rep.irreducible_at_zero
    with pytest.raises(ValueError):
        reducibility_report(LaurentRational.make([], [1]), 7, 1)


def test_reducibility_csv():
    csv = reducibility_report(plancherel_rank_one(7, 3), 7, 3).to_csv().splitlines()
    assert csv[0] == "q,n,s_point,type,order"
    assert "7,3,1/3,reducible,1" in csv and "7,3,0,irreducible,2" in csv


def test_positive_real_roots_perfect_power_base():
    # z^4 - 81 over q = 9: z = 9^(1/2) = 3
    roots = positive_real_roots((Fraction(-81), 0, 0, 0, Fraction(1)), 9)
    assert roots == [(Fraction(1, 2), 1)]
    # (z - 2)^2 has no root of the form 3^a
    assert positive_real_roots((Fraction(4), Fraction(-4), Fraction(1)), 3) == []
    # double root at z = 5^(-1/3)
    p = (Fraction(-1, 5), 0, 0, Fraction(1))
    sq = tuple(sum(p[i] * p[k - i] for i in range(len(p)) if 0 <= k - i < len(p)) for k in range(7))
    assert positive_real_roots(sq, 5) == [(Fraction(-1, 3), 2)]


def test_imaginary_period():
    rep = reducibility_report(plancherel_rank_one(7, 3), 7, 3)
    assert math.isclose(rep.imaginary_period, 2 * math.pi / (3 * math.log(7)))


# -- archimedean ------------------------------------------------------------

def test_archimedean():
    assert archimedean_mu(0) == 0
    assert abs(archimedean_mu(2j * math.pi) - 1) < 1e-15
    assert abs(archimedean_mu(1j * math.pi) - 0.25) < 1e-15


@given(st.floats(-1e3, 1e3))
def test_archimedean_nonnegative_on_imaginary_axis(t):
    v = archimedean_mu(1j * t)
    assert v.real >= 0 and v.imag == 0
