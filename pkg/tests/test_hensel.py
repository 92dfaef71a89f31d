import random
from fractions import Fraction

import pytest

from vlab.errors import HenselConditionError, NoRootError
from vlab.fieldtower import (QQ_FIELD, LaurentSeriesField, LazyASClosure, PAdicField, Poly, PrimeField,
                             RationalFunctionField, gf)
from vlab.hensel import (artin_schreier_solve, hensel_lift, henselianity_spot_check, precision_cap,
                         sqrt_witness)
from vlab.valuation import Valuation


def _x2_minus_7(prec):
    Q3 = PAdicField(3, prec=prec)
    X = Poly.x(Q3)
    return Valuation.stack(Q3, "padic"), X ** 2 - Poly(Q3, [7]), Q3


def test_sqrt7_three_digits_is_13():
    v, f, Q3 = _x2_minus_7(3)
    rep = hensel_lift(v, f, 1)
    roots = [x for x in range(27) if (x * x - 7) % 27 == 0]  # exhaustive oracle
    assert roots == [13, 14]
    assert Q3.unit_part(rep.root) == (13, 3)
    assert [str(r) for r in rep.residuals] == ["1", "2", ">=3"]
    assert rep.converged and rep.doubling_holds()


def test_sqrt7_residuals_double_until_cap():
    v, f, Q3 = _x2_minus_7(20)
    rep = hensel_lift(v, f, 1)
    assert [str(r) for r in rep.residuals] == ["1", "2", "4", "8", "16", ">=20"]
    u, _ = Q3.unit_part(rep.root)
    assert (u * u - 7) % 3 ** 20 == 0


def test_log_format():
    v, f, _ = _x2_minus_7(3)
    log = hensel_lift(v, f, 1).to_log()
    assert log.splitlines()[0].startswith("hensel f=X^2")
    assert log.splitlines()[-1].endswith("converged cap 3")


def test_hensel_condition_checked():
    v, f, _ = _x2_minus_7(5)
    with pytest.raises(HenselConditionError):
        hensel_lift(v, f, 0)  # f(0) = -7 is a unit


def test_series_sqrt_by_lifting():
    F5 = PrimeField(5)
    L = LaurentSeriesField(F5, "t", prec=10)
    v = Valuation.stack(L, "t")
    X = Poly.x(L)
    rep = hensel_lift(v, X ** 2 - Poly(L, [1 + L.gen]), 1)
    assert rep.converged
    assert [int(L.coefficient(rep.root, k).rep) for k in range(9)] == [1, 3, 3, 1, 0, 2, 1, 1, 2]
    assert precision_cap(v) == 10


def test_as_over_f4():
    F4 = gf(4)
    z = artin_schreier_solve(F4, 1)
    assert z * z + z == F4.one
    with pytest.raises(NoRootError):
        artin_schreier_solve(F4, F4.gen)  # trace of g is 1


def test_as_over_ratfunc():
    U = RationalFunctionField(PrimeField(2), "u")
    u = U.gen
    assert artin_schreier_solve(U, u ** 4 + u) in (u ** 2 + u, u ** 2 + u + 1)
    with pytest.raises(NoRootError):
        artin_schreier_solve(U, u)


def test_as_over_series_strips_poles():
    L = LaurentSeriesField(PrimeField(2), "t", prec=10)
    t = L.gen
    # t^-2 + t^-1 = wp(t^-1), so this one is solvable
    c = t ** -2 + t ** -1 + t
    z = artin_schreier_solve(L, c)
    assert L.coefficient(z, -1) == PrimeField(2).one
    c = t ** -2 + t
    with pytest.raises(NoRootError):
        artin_schreier_solve(L, c)
    z = artin_schreier_solve(L, t ** -4 + t ** -2 + t)
    d = z * z - z - (t ** -4 + t ** -2 + t)
    assert d.is_zero() or L.valuation(d) >= 10


def test_as_in_closure_adjoins():
    A = LazyASClosure(RationalFunctionField(PrimeField(2), "u"), 2)
    z = artin_schreier_solve(A, A.base.gen)
    assert z * z - z == A(A.base.gen)


def test_sqrt_witnesses():
    K = LaurentSeriesField(QQ_FIELD, "t")
    t = K.gen
    w = sqrt_witness(K, 1 + t)
    assert w.present and w.root * w.root == 1 + t or K.valuation(w.root * w.root - 1 - t) >= K.prec
    assert not sqrt_witness(K, -t).present
    assert not sqrt_witness(PrimeField(7), 3).present
    assert sqrt_witness(PrimeField(7), 2).present


def test_spot_check_on_complete_and_incomplete_fields():
    L = LaurentSeriesField(PrimeField(5), "t", prec=10)
    rep = henselianity_spot_check(Valuation.stack(L, "t"), random.Random(1), 30)
    assert rep.verdict == "no counterexample in budget"
    Q = QQ_FIELD
    X = Poly.x(Q)
    probe = (X ** 2 - Poly(Q, [7]), Q(1))  # 7 is a 3-adic square but not a rational one
    rep = henselianity_spot_check(Valuation.stack(Q, "3"), random.Random(1), 0, probes=[probe])
    assert rep.verdict == "counterexample"
    assert henselianity_spot_check(Valuation.trivial(L), random.Random(1)).verdict == "vacuous"


def test_rational_root_probe_uses_exact_roots():
    Q = QQ_FIELD
    X = Poly.x(Q)
    probe = (X ** 2 - Poly(Q, [Fraction(49, 4)]), Q(Fraction(1, 2)))
    rep = henselianity_spot_check(Valuation.stack(Q, "3"), random.Random(1), 0, probes=[probe])
    assert rep.verdict == "no counterexample in budget"
