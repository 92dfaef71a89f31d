import random
from fractions import Fraction

import pytest

from vlab.errors import UnsupportedConfiguration
from vlab.fieldtower import (QQ_FIELD, LaurentSeriesField, LazyASClosure, PrimeField, PuiseuxSeriesField,
                             RationalFunctionField, gf)
from vlab.definable import (ConvexHullBound, Membership, Obstruction, Unbounded, annotate_p_class,
                            euclidean_check, in_convex_hull, natural_valuation, near_boundary_samples,
                            order_from_squares, phensel_class_compare, scanlon_membership,
                            square_leading_sampler, verify_scanlon_identity)
from vlab.valuation import Valuation


def _scanlon_model(p=2):
    U = RationalFunctionField(PrimeField(p), "u")
    A = LazyASClosure(U, p)
    K = LaurentSeriesField(A, "s", prec=8)
    return K, Valuation.stack(K, "s"), K(U.gen)


def test_membership_for_negative_value():
    K, v, t = _scanlon_model()
    member, cert = scanlon_membership(v, t, 1 / K.gen)
    assert member and isinstance(cert, Membership)
    assert cert.verify()
    assert cert.residual().at_least(8)
    assert cert.serialize().startswith("kind=membership L=")


def test_membership_for_units():
    K, v, t = _scanlon_model()
    member, cert = scanlon_membership(v, t, K(1))
    assert member and cert.verify()


def test_obstruction_for_positive_value():
    K, v, t = _scanlon_model()
    member, cert = scanlon_membership(v, t, K.gen)
    assert not member and isinstance(cert, Obstruction)
    assert cert.verify()
    assert "t_residue=u" in cert.serialize()


def test_t_with_pth_root_residue_rejected():
    K, v, _ = _scanlon_model()
    with pytest.raises(ValueError):
        scanlon_membership(v, K(K.base.base.gen) ** 2, K(1))


def test_p3_needs_stretch():
    K, v, t = _scanlon_model(3)
    with pytest.raises(UnsupportedConfiguration):
        scanlon_membership(v, t, 1 / K.gen)
    member, cert = scanlon_membership(v, t, K.gen ** -2, stretch=True)
    assert member and cert.verify()


def test_identity_on_100_samples():
    K, v, t = _scanlon_model()
    rep = verify_scanlon_identity(v, t, random.Random(42), 100)
    assert rep.passed and rep.agreements == 100
    assert rep.memberships + rep.obstructions == 100


def test_convex_hull_search_and_certificates():
    K = LaurentSeriesField(QQ_FIELD, "t")
    t = K.gen
    assert in_convex_hull(3 + t) == (True, 4)
    assert in_convex_hull(1 / t) == (False, None)
    nv = natural_valuation(K)
    c = nv.certificate(3 + t)
    assert isinstance(c, ConvexHullBound) and c.n == 4 and c.verify()
    c = nv.certificate(K(Fraction(1, 10 ** 7)) / t)
    assert isinstance(c, Unbounded) and c.verify()


def test_near_boundary_samples_agree():
    K = LaurentSeriesField(QQ_FIELD, "t")
    nv = natural_valuation(K)
    for x in near_boundary_samples(K, random.Random(1), 20):
        assert in_convex_hull(x)[0] == nv.in_ring(x)


def test_natural_valuation_needs_order():
    with pytest.raises(UnsupportedConfiguration):
        natural_valuation(LaurentSeriesField(PrimeField(5), "t"))


def test_f5_is_not_euclidean():
    rep = euclidean_check(PrimeField(5), random.Random(0))
    assert not rep.passed
    reasons = " ".join(r for _, r in rep.failures)
    assert "-1 = " in reasons and "neither of 2 and 3" in reasons


def test_laurent_q_is_not_euclidean():
    rep = euclidean_check(LaurentSeriesField(QQ_FIELD, "t"), random.Random(0), 50)
    assert not rep.passed


def test_puiseux_q_square_order():
    P = PuiseuxSeriesField(QQ_FIELD, "t")
    order, rep = order_from_squares(P, random.Random(2), 100, square_leading_sampler(P))
    assert rep.passed and order is not None
    assert order.sign(P.gen) == 1 and order.sign(-P.gen) == -1
    assert order.product_checks == 100


def test_p_class_annotations():
    F3 = PrimeField(3)
    T = LaurentSeriesField(LaurentSeriesField(F3, "s"), "t")
    vt, vts = Valuation.stack(T, "t"), Valuation.stack(T, "t", "s")
    a, b = annotate_p_class(vt, 3), annotate_p_class(vts, 3)
    assert a.p_class == b.p_class == "H1"
    assert phensel_class_compare(a, b).consistent
    B = LazyASClosure(PrimeField(2), 2)
    T2 = LaurentSeriesField(LaurentSeriesField(B, "s"), "t")
    h1 = annotate_p_class(Valuation.stack(T2, "t"), 2)
    h2 = annotate_p_class(Valuation.stack(T2, "t", "s"), 2)
    assert (h1.p_class, h2.p_class) == ("H1", "H2")
    assert phensel_class_compare(h2, h1).consistent
    with pytest.raises(ValueError):
        phensel_class_compare(h1, None)


def test_finite_field_p_extension_witness_has_nonzero_trace():
    a = annotate_p_class(Valuation.trivial(gf(4)), 2)
    assert a.p_class == "H1" and gf(4).trace(a.witness) != gf(4).zero
