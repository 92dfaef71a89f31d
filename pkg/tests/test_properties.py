import random

import pytest
from hypothesis import given, strategies as st

from vlab.cli.main import fixture_names, fixture_text
from vlab.cli.spec import parse_spec, print_spec
from vlab.fieldtower import (QQ_FIELD, LaurentSeriesField, LazyASClosure, PAdicField, PrimeField,
                             PuiseuxSeriesField, RationalFunctionField, gf)
from vlab.hensel import sqrt_witness
from vlab.ordgroup import QQ, ZZ, ValueGroup, quotient
from vlab.valuation import Valuation, compose

seeds = st.integers(0, 2**32 - 1)

FIELDS = {
    "gf9": gf(9),
    "qq": QQ_FIELD,
    "f3u": RationalFunctionField(PrimeField(3), "u"),
    "f5t": LaurentSeriesField(PrimeField(5), "t"),
    "qt": PuiseuxSeriesField(QQ_FIELD, "t"),
    "as2": LazyASClosure(RationalFunctionField(PrimeField(2), "u"), 2),
}

VALUED = {
    "q3": lambda: Valuation.stack(PAdicField(3, prec=12), "padic"),
    "q5": lambda: Valuation.stack(QQ_FIELD, "5"),
    "f3u": lambda: Valuation.stack(RationalFunctionField(PrimeField(3), "u"), "u"),
    "f5t": lambda: Valuation.stack(LaurentSeriesField(PrimeField(5), "t", prec=12), "t"),
    "q3s": lambda: Valuation.stack(LaurentSeriesField(PAdicField(3, prec=12), "s", prec=12), "s", "padic"),
    "qts": lambda: Valuation.stack(LaurentSeriesField(LaurentSeriesField(QQ_FIELD, "s", prec=12), "t", prec=12),
                                   "t", "s"),
}
_cache = {}


def _v(name):
    if name not in _cache:
        _cache[name] = VALUED[name]()
    return _cache[name]


def _three(F, seed):
    rng = random.Random(seed)
    return F.random(rng), F.random(rng), F.random(rng, nonzero=True)


@given(st.sampled_from(sorted(FIELDS)), seeds)
def test_field_axioms(name, seed):
    F = FIELDS[name]
    a, b, c = _three(F, seed)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert c * c.inverse() == F.one
    assert (a * c) / c == a


@given(st.sampled_from(["gf9", "f3u", "f5t", "as2"]), seeds)
def test_frobenius_is_additive(name, seed):
    F = FIELDS[name]
    a, b, _ = _three(F, seed)
    p = F.characteristic
    assert (a + b) ** p == a ** p + b ** p


@given(st.sampled_from(sorted(VALUED)), seeds)
def test_valuation_axioms(name, seed):
    v = _v(name)
    rng = random.Random(seed)
    x, y = v.domain.random(rng, nonzero=True), v.domain.random(rng, nonzero=True)
    assert v.eval(x * y) == v.eval(x) + v.eval(y)
    s = x + y
    if not s.is_zero():
        assert v.eval(s) >= min(v.eval(x), v.eval(y))
    assert v.eval(v.domain.zero).is_infinite


@given(st.sampled_from(["q3s", "qts"]), seeds)
def test_coarsening_is_quotient_and_recomposes(name, seed):
    v = _v(name)
    x = v.domain.random(random.Random(seed), nonzero=True)
    for delta in v.value_group.convex_subgroups():
        w = v.coarsen(delta)
        _, project = quotient(v.value_group, delta)
        assert w.eval(x).coords == project(v.eval(x)).coords
        assert compose(w, v.induced_on_residue(delta)).stages == v.stages


@given(st.sampled_from(["qq", "f3u", "f5t", "qt"]), seeds)
def test_squares_have_verified_roots(name, seed):
    F = FIELDS[name]
    x = F.random(random.Random(seed), nonzero=True)
    w = sqrt_witness(F, x * x)
    assert w.present
    assert w.root * w.root == x * x


@given(st.lists(st.sampled_from([ZZ, QQ]), min_size=1, max_size=4), st.data())
def test_convex_subgroups_are_convex(comps, data):
    G = ValueGroup.lex(*comps)
    coords = st.lists(st.integers(-3, 3), min_size=G.rank, max_size=G.rank)
    a, b, c = sorted(G(*data.draw(coords)) for _ in range(3))
    for delta in G.convex_subgroups():
        # 0 <= a <= b <= c with c in delta forces b in delta
        if G.zero <= a and c in delta:
            assert b in delta
    assert (a + c) - c == a
    if a < b:
        assert a + c < b + c


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_print_round_trip(name):
    doc = parse_spec(fixture_text(name))
    assert parse_spec(print_spec(doc)) == doc


@given(st.sampled_from(fixture_names()), seeds)
def test_round_trip_with_any_seed(name, seed):
    doc = parse_spec(fixture_text(name), build=False)
    doc = type(doc)(seed, doc.field, doc.valuations, doc.order, doc.annotations, doc.checks)
    text = print_spec(doc)
    assert print_spec(parse_spec(text, build=False)) == text
