from fractions import Fraction

import pytest

from vlab.ordgroup import (QQ, ZZ, Component, GroupMismatch, ValueGroup, biggest_convex_avoiding,
                           concat, is_p_divisible, maximal_p_divisible_subgroup, quotient,
                           smallest_convex_containing)


def test_lex_order_is_lexicographic():
    G = ValueGroup.lex(ZZ, ZZ)
    assert G(0, 5) < G(1, -100)
    assert G(-1, 0) < G(0, -3) < G.zero < G(0, 1)
    assert G.infinity > G(10**9, 10**9)


def test_convex_subgroups_are_suffix_cuts():
    G = ValueGroup.lex(ZZ, QQ, ZZ)
    subs = G.convex_subgroups()
    assert [s.cut for s in subs] == [0, 1, 2, 3]
    assert [str(s) for s in subs] == ["lex(Z, Q, Z)", "{0} x Q x Z", "{0}^2 x Z", "0"]
    assert G(0, Fraction(1, 2), 7) in subs[1]
    assert G(1, 0, 0) not in subs[1]


def test_delta_and_delta0_around_gamma():
    G = ValueGroup.lex(ZZ, ZZ)
    gamma = G(0, 1)
    assert smallest_convex_containing(gamma).cut == 1
    assert biggest_convex_avoiding(gamma).cut == 2
    gamma = G(2, -5)
    assert smallest_convex_containing(gamma).is_whole
    assert biggest_convex_avoiding(gamma).cut == 1


def test_zero_has_no_convex_hull_question():
    G = ValueGroup.lex(ZZ)
    with pytest.raises(ValueError):
        smallest_convex_containing(G.zero)


def test_quotient_projects_to_prefix():
    G = ValueGroup.lex(ZZ, QQ)
    delta = G.convex_subgroups()[1]
    H, project = quotient(G, delta)
    assert str(H) == "Z"
    assert project(G(3, Fraction(2, 7))) == H(3)


def test_p_divisibility():
    assert is_p_divisible(ValueGroup.lex(QQ, QQ), 3)
    assert not is_p_divisible(ValueGroup.lex(QQ, ZZ), 3)
    assert maximal_p_divisible_subgroup(ValueGroup.lex(ZZ, QQ), 2).cut == 1
    assert maximal_p_divisible_subgroup(ValueGroup.lex(QQ, ZZ), 2).is_trivial


def test_scaled_component_membership():
    half = Component(Fraction(1, 2))
    G = ValueGroup.lex(half)
    assert str(G) == "(1/2)Z"
    G(Fraction(3, 2))
    with pytest.raises(ValueError):
        G(Fraction(1, 3))


def test_mismatched_groups_do_not_mix():
    with pytest.raises(GroupMismatch):
        ValueGroup.lex(ZZ)(1) + ValueGroup.lex(ZZ, ZZ)(1, 0)


def test_concat_builds_product():
    a, b = ValueGroup.lex(ZZ)(2), ValueGroup.lex(QQ)(Fraction(1, 3))
    c = concat(a, b)
    assert str(c.group) == "lex(Z, Q)" and c.coords == (2, Fraction(1, 3))
