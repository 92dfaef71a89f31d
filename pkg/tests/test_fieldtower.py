from fractions import Fraction
from math import comb

import pytest

from vlab.errors import PrecisionError, ReducibleModulus
from vlab.fieldtower import (QQ_FIELD, LaurentSeriesField, PAdicField, Poly, PrimeField,
                             PuiseuxSeriesField, RationalFunctionField, SimpleExtension, adjoin_root, gf)


def _mod(q: Fraction, p: int) -> int:
    return q.numerator * pow(q.denominator, -1, p) % p


def _half_binomials(n):
    """C(1/2, k) computed from the product formula, independently of the library."""
    out = []
    for k in range(n):
        num = Fraction(1)
        for j in range(k):
            num *= Fraction(1, 2) - j
        out.append(num / Fraction(comb(k, k) * _factorial(k)))
    return out


def _factorial(k):
    r = 1
    for i in range(2, k + 1):
        r *= i
    return r


def test_gf9_generator_squares_to_minus_one():
    F9 = gf(9)
    g = F9.gen
    assert g * g == F9(2)
    nonzero = [x for x in F9.elements() if not x.is_zero()]
    assert len(nonzero) == 8
    # Lagrange: x^8 = 1 on the multiplicative group
    assert all(x ** 8 == F9.one for x in nonzero)


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        gf(12)


def test_padic_geometric_series_is_forty():
    Q3 = PAdicField(3, prec=4)
    x = Q3(1) / (Q3(1) - 3)
    # oracle: the inverse of -2 modulo 3^4
    assert pow(-2, -1, 81) == 40
    assert Q3.unit_part(x) == (40, 4)
    assert Q3.digits(x) == (0, [1, 1, 1, 1])


def test_padic_indeterminate_valuation_raises():
    Q3 = PAdicField(3, prec=4)
    x = Q3(1) / (Q3(1) - 3)
    with pytest.raises(PrecisionError):
        Q3.valuation(x - Q3(40))
    assert Q3.valuation(Q3(Fraction(18, 5))) == 2


def test_padic_sqrt_of_seven_mod_27():
    Q3 = PAdicField(3, prec=3)
    r = Q3.sqrt(Q3(7))
    u, prec = Q3.unit_part(r)
    roots = [x for x in range(27) if (x * x - 7) % 27 == 0]
    assert prec == 3 and u in roots


def test_laurent_inverse_of_one_minus_t():
    L = LaurentSeriesField(PrimeField(5), "t", prec=8)
    t = L.gen
    y = 1 / (1 - t)
    assert [int(L.coefficient(y, k).rep) for k in range(8)] == [1] * 8
    assert L.precision(y) == 8


def test_series_sqrt_matches_binomials_mod_5():
    F5 = PrimeField(5)
    L = LaurentSeriesField(F5, "t", prec=9)
    r = L.sqrt(1 + L.gen)
    want = [_mod(c, 5) for c in _half_binomials(9)]
    got = [int(L.coefficient(r, k).rep) for k in range(9)]
    assert got == want == [1, 3, 3, 1, 0, 2, 1, 1, 2]


def test_puiseux_exponents_are_rational():
    P = PuiseuxSeriesField(QQ_FIELD, "t")
    x = P.monomial(1, Fraction(1, 3))
    assert x ** 3 == P.gen
    assert P.valuation(x) == Fraction(1, 3)


def test_ratfunc_normal_form():
    K = RationalFunctionField(QQ_FIELD, "u")
    u = K.gen
    x = (u * u - 1) / (u - 1)
    assert x == u + 1
    assert K.denominator(x) == Poly(QQ_FIELD, [1])


def test_extension_of_q3_by_sqrt3():
    Q3 = PAdicField(3, prec=6)
    E = SimpleExtension(Q3, Poly(Q3, [-3, 0, 1]), "r")
    r = E.gen
    assert r * r == E(3)
    assert (r + 1) * (r + 1).inverse() == E.one


def test_reducible_modulus_reports_factor():
    F5 = PrimeField(5)
    with pytest.raises(ReducibleModulus):
        adjoin_root(F5, Poly(F5, [-4, 0, 1]))  # X^2 - 4 = (X-2)(X+2)


def test_perfection_and_pth_roots():
    F2u = RationalFunctionField(PrimeField(2), "u")
    u = F2u.gen
    assert not F2u.is_perfect()
    ok, root = F2u.has_pth_root(u ** 2 + 1)
    assert ok and root == u + 1
    assert F2u.has_pth_root(u)[0] is False
    assert gf(8).is_perfect()


def test_tower_generators():
    K = LaurentSeriesField(RationalFunctionField(gf(4), "u"), "s")
    assert sorted(K.gens()) == ["g", "s", "u"]
    assert K.spec() == 'laurent(ratfunc(ext(gf(2), "X^2 + X + 1", gen=g), u), s, prec=8)'
