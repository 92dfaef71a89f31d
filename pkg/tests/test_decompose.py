import random

import pytest

from vlab.cli.build import build_model
from vlab.cli.spec import parse_spec
from vlab.decompose import (EquicharacteristicError, classify_group, decompose_group, kaplansky_check,
                            perfect_coarsening_scan, ramification_classify, standard_decomposition)
from vlab.fieldtower import QQ_FIELD, LaurentSeriesField, PAdicField, PrimeField
from vlab.ordgroup import QQ, ZZ, ValueGroup
from vlab.valuation import Valuation


def _q3s():
    K = LaurentSeriesField(PAdicField(3, prec=8), "s")
    return Valuation.stack(K, "s", "padic")


def test_q3s_chain():
    dec = standard_decomposition(_q3s(), 3, random.Random(1))
    assert dec.delta0.is_trivial
    assert str(dec.delta) == "{0} x Z"
    assert [F.spec() for F in dec.fields] == [
        "laurent(padic(3, prec=8), s, prec=8)", "padic(3, prec=8)", "gf(3)", "gf(3)"]
    assert dec.characteristics == (0, 0, 3, 3)
    assert dec.passed
    assert ("recomposition", "ok", "200/200 samples") in dec.checks


def test_rank_one_q_has_trivial_coarse_stage():
    dec = standard_decomposition(Valuation.stack(QQ_FIELD, "3"), 3)
    assert dec.delta.is_whole and dec.delta0.is_trivial
    assert [str(w.value_group) for w in dec.stages] == ["0", "Z", "0"]
    assert dec.passed


def test_equicharacteristic_rejected():
    F = LaurentSeriesField(PrimeField(5), "t")
    with pytest.raises(EquicharacteristicError):
        standard_decomposition(Valuation.stack(F, "t"), 5)
    with pytest.raises(EquicharacteristicError):
        standard_decomposition(Valuation.stack(QQ_FIELD, "2"), 3)


def test_group_level_decomposition_with_divisible_tail():
    G = ValueGroup.lex(ZZ, QQ, ZZ)
    g = decompose_group(G, G(0, 1, 0), 3)
    assert (g.delta.cut, g.delta0.cut, g.delta_p.cut) == (1, 2, 3)
    with pytest.raises(EquicharacteristicError):
        decompose_group(G, G(0, -1, 0), 3)


@pytest.mark.parametrize("comps,gamma,expected", [
    ((ZZ,), (1,), "unramified (m=2)"),
    ((ZZ,), (2,), "finitely ramified (m=3)"),
    ((QQ,), (1,), "p-divisible"),
    ((ZZ, QQ), (0, 1), "none"),
    ((ZZ, ZZ), (1, 0), "none"),
])
def test_classify_group(comps, gamma, expected):
    G = ValueGroup.lex(*comps)
    assert str(classify_group(G, G(*gamma), 3)) == expected


def _model(text):
    return build_model(parse_spec(text))


def test_ramification_of_q3_and_q3_sqrt3():
    q3 = Valuation.stack(PAdicField(3, prec=8), "padic")
    assert str(ramification_classify(q3, 3)) == "unramified (m=2)"
    m = _model('seed = 0\nfield = ext(padic(3, prec=6), "X^2 - 3", gen=r)\nvaluation = stack(padic)\n')
    rc = ramification_classify(m.valuation(None), 3)
    assert rc.finitely_ramified and rc.m == 3


def test_kaplansky_f5_laurent():
    F = LaurentSeriesField(PrimeField(5), "t")
    rep = kaplansky_check(Valuation.stack(F, "t"), 5)
    assert rep.verdicts() == ("false", "true", "proxy-false")
    assert rep.witness is not None


def test_kaplansky_puiseux_over_as_closure():
    m = _model("seed = 0\nfield = puiseux(lazy_as(gf(2), 2), t)\nvaluation = stack(t)\n")
    assert kaplansky_check(m.valuation(None), 2).verdicts() == ("true", "true", "proxy-true")


def test_perfect_coarsening_scans():
    scan = perfect_coarsening_scan(_q3s())
    assert [r[3] for r in scan.rows] == [True, True, True]
    assert scan.hypothesis == "satisfied"
    m = _model("seed = 0\nfield = laurent(ratfunc(gf(2), u), t)\nvaluation = stack(t)\n")
    scan = perfect_coarsening_scan(m.valuation(None))
    assert scan.rows[-1][3] is False
    assert scan.hypothesis == "violated"
