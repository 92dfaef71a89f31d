import random
import threading

import pytest

from vlab.errors import UnsupportedConfiguration
from vlab.fieldtower import LazyASClosure, PrimeField, RationalFunctionField, gf


def _closure(p=2):
    U = RationalFunctionField(PrimeField(p), "u")
    return U, LazyASClosure(U, p)


def test_root_of_u_is_a_new_generator():
    U, A = _closure()
    z = A.artin_schreier_root(U.gen)
    assert z * z - z == A(U.gen)
    assert [g.name for g in A.generators] == ["th1"]
    assert A.verify_log()


def test_roots_in_the_base_do_not_adjoin():
    U, A = _closure()
    u = U.gen
    z = A.artin_schreier_root(u ** 2 + u)
    assert z * z - z == A(u ** 2 + u)
    assert A.generators == []


def test_span_reuses_existing_generators():
    U, A = _closure()
    u = U.gen
    A.artin_schreier_root(u)
    A.artin_schreier_root(u ** 3)
    n = len(A.generators)
    # u + u^3 + (u^2 + u) lies in the F_2-span of the earlier constants mod wp(K)
    z = A.artin_schreier_root(u + u ** 3 + u ** 2 + u)
    assert len(A.generators) == n
    assert z * z - z == A(u + u ** 3 + u ** 2 + u)


def test_p_three_closure():
    U, A = _closure(3)
    z = A.artin_schreier_root(U.gen)
    assert z ** 3 - z == A(U.gen)


def test_finite_base_closure():
    A = LazyASClosure(PrimeField(2), 2)
    z = A.artin_schreier_root(1)
    assert z * z + z == A.one
    w = A.artin_schreier_root(z)
    assert w * w - w == z
    assert A.fragment_order == 2 ** 4


def test_has_pth_root_in_closure():
    U, A = _closure()
    z = A.artin_schreier_root(U.gen)
    assert A.has_pth_root(A(U.gen))[0] is False
    ok, r = A.has_pth_root(z * z * A(U.gen) ** 2)
    assert ok and r * r == z * z * A(U.gen) ** 2


def test_inverse_and_field_axioms_on_fragment():
    U, A = _closure()
    A.artin_schreier_root(U.gen)
    rng = random.Random(5)
    for _ in range(30):
        x = A.random(rng, nonzero=True, use_generators=True)
        assert x * x.inverse() == A.one


def test_characteristic_mismatch_rejected():
    with pytest.raises(ValueError):
        LazyASClosure(gf(3), 2)


def test_coefficient_outside_base_unsupported():
    U, A = _closure()
    z = A.artin_schreier_root(U.gen)
    with pytest.raises(UnsupportedConfiguration):
        A.artin_schreier_root(z)


def test_concurrent_adjunction_is_canonical():
    U, A = _closure()
    u = U.gen
    cs = [u, u ** 3, u ** 5, u + u ** 3]

    def work():
        for c in cs:
            A.artin_schreier_root(c)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    _, B = _closure()
    for c in cs:
        B.artin_schreier_root(c)
    assert [str(g.relation) for g in A.generators] == [str(g.relation) for g in B.generators]
    assert A.verify_log()
