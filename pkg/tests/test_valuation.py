import random
from fractions import Fraction

import pytest

from vlab.errors import UnsupportedConfiguration
from vlab.fieldtower import (QQ_FIELD, LaurentSeriesField, PAdicField, Poly, PrimeField,
                             RationalFunctionField, SimpleExtension)
from vlab.valuation import (DomainMismatch, PlaceChain, ResidueError, Valuation, compare_rings, compose,
                            finest_common_coarsening, is_convex_wrt_order)


def _q3s():
    K = LaurentSeriesField(PAdicField(3, prec=8), "s")
    return K, Valuation.stack(K, "s", "padic")


def test_rank_two_eval_reads_both_coordinates():
    K, v = _q3s()
    s = K.gen
    assert v.eval(9 / s).coords == (-1, 2)
    assert v.eval(K(Fraction(1, 3)) * s ** 4).coords == (4, -1)
    assert v.eval(K.zero).is_infinite


def test_residue_and_lift():
    K, v = _q3s()
    s = K.gen
    assert v.residue(K(4) + 3 * s) == v.residue_field(1)
    with pytest.raises(ResidueError):
        v.residue(1 / s)
    y = v.residue_field(2)
    assert v.residue(v.lift_residue(y)) == y


def test_coarsening_and_induced_are_prefix_and_suffix():
    K, v = _q3s()
    G = v.value_group
    mid = G.convex_subgroups()[1]
    w = v.coarsen(mid)
    assert w.spec() == "stack(s)" and w.residue_field == PAdicField(3, prec=8)
    vbar = v.induced_on_residue(mid)
    assert vbar.spec() == "stack(padic)"
    assert compose(w, vbar).stages == v.stages


def test_compose_checks_domains():
    K, v = _q3s()
    with pytest.raises(DomainMismatch):
        compose(v, Valuation.stack(QQ_FIELD, "3"))


def test_place_chain_composite():
    K, v = _q3s()
    chain = PlaceChain((v.coarsenings()[1], v.induced_on_residue(v.value_group.convex_subgroups()[1])))
    assert chain.composite().stages == v.stages
    assert [F.spec() for F in chain.fields] == [K.spec(), "padic(3, prec=8)", "gf(3)"]


def test_rational_place_values():
    U = RationalFunctionField(PrimeField(2), "u")
    u = U.gen
    x = u ** 3 / (u + 1)
    assert Valuation.stack(U, "u").eval(x).coords == (3,)
    assert Valuation.stack(U, "inf").eval(x).coords == (-2,)
    assert Valuation.stack(U, "u-1").eval(x).coords == (-1,)


def test_ramified_extension_has_half_integer_values():
    Q3 = PAdicField(3, prec=6)
    E = SimpleExtension(Q3, Poly(Q3, [-3, 0, 1]), "r")
    v = Valuation.stack(E, "padic")
    assert v.eval(E.gen).coords == (Fraction(1, 2),)
    assert str(v.value_group) == "(1/2)Z"
    assert v.residue_field.spec() == "gf(3)"


def test_unramified_extension_residue_is_gf9():
    Q3 = PAdicField(3, prec=6)
    E = SimpleExtension(Q3, Poly(Q3, [1, 0, 1]), "i")
    v = Valuation.stack(E, "padic")
    assert str(v.value_group) == "Z"
    assert v.residue_field.order == 9


def test_v2_v3_independent_with_certificate():
    v2, v3 = Valuation.stack(QQ_FIELD, "2"), Valuation.stack(QQ_FIELD, "3")
    cmp = compare_rings(v2, v3)
    assert cmp.relation == "incomparable-at-samples"
    join = finest_common_coarsening(v2, v3)
    assert join.kind == "independent" and join.valuation.is_trivial
    rng = random.Random(0)
    ok, bad = join.certificate.verify([QQ_FIELD.random(rng) for _ in range(100)])
    assert ok and bad is None


def test_comparable_join_is_the_coarser():
    K = LaurentSeriesField(LaurentSeriesField(PrimeField(3), "s"), "t")
    fine, coarse = Valuation.stack(K, "t", "s"), Valuation.stack(K, "t")
    assert compare_rings(fine, coarse).relation == "v finer"
    assert finest_common_coarsening(fine, coarse).valuation == coarse


def test_join_unsupported_off_q():
    K = RationalFunctionField(QQ_FIELD, "u")
    v, w = Valuation.stack(K, "u"), Valuation.stack(K, "inf")
    assert finest_common_coarsening(v, v).kind == "comparable"
    with pytest.raises(UnsupportedConfiguration):
        finest_common_coarsening(v, w)


def test_places_zero_and_infinity_are_independent():
    U = RationalFunctionField(PrimeField(2), "u")
    v, w = Valuation.stack(U, "u"), Valuation.stack(U, "inf")
    join = finest_common_coarsening(v, w)
    ok, _ = join.certificate.verify([U.random(random.Random(i)) for i in range(50)])
    assert join.valuation.is_trivial and ok


def test_t_adic_ring_is_order_convex():
    K = LaurentSeriesField(QQ_FIELD, "t")
    v = Valuation.stack(K, "t")
    assert is_convex_wrt_order(v, K, random.Random(3)).convex


def test_non_convex_ring_is_caught():
    K = LaurentSeriesField(QQ_FIELD, "t")
    v = Valuation.stack(K, "t")
    half = K(Fraction(1, 2))

    class Holey:
        def in_ring(self, x):
            return v.in_ring(x) and x != half

    rep = is_convex_wrt_order(Holey(), K, random.Random(3), extra=[half, 1])
    assert not rep.convex and rep.counterexample[0] == half


def test_unknown_stage_label():
    with pytest.raises(UnsupportedConfiguration):
        Valuation.stack(QQ_FIELD, "t")
