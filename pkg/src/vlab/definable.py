"""Explicitly definable sets evaluated with re-checkable certificates.

* the set ``S = {a : exists L >= K, [L:K] < p, y in L, y^p - a y = t}``, which
  on a henselian field with ``t`` a residual non-p-th power is the valuation
  ring's complement-of-ideal ``{a : v(a) <= 0}``;
* the convex hull of the integers in an ordered series field;
* Euclidean fields, where the squares are exactly the nonnegative elements;
* comparability of p-henselian valuations by residue class.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

from .errors import UnsupportedConfiguration
from .fieldtower.base import Field, FieldElement
from .fieldtower.lazy_as import LazyASClosure
from .fieldtower.poly import Poly
from .fieldtower.ratfunc import RationalFunctionField
from .fieldtower.series import SeriesField
from .hensel import Residual, artin_schreier_solve, hensel_lift, residual, sqrt_witness
from .valuation import SeriesStage, Valuation, compare_rings

HULL_SEARCH_BOUND = 10 ** 6


# certificates ---------------------------------------------------------------

class Certificate:
    kind = "certificate"

    def verify(self) -> bool:
        raise NotImplementedError

    def fields(self) -> list[tuple[str, str]]:
        return []

    def serialize(self) -> str:
        parts = [f"kind={self.kind}"] + [f"{k}={v}" for k, v in self.fields()]
        return " ".join(parts)


@dataclass
class Membership(Certificate):
    """``y`` in ``L`` with ``y^p - a*y - t`` of valuation at least ``cap``."""

    v: Valuation
    a: FieldElement
    t: FieldElement
    b: FieldElement
    y: FieldElement
    cap: Fraction
    kind = "membership"

    @property
    def extension(self) -> Field:
        return self.y.field

    def residual(self) -> Residual:
        p = self.v.domain.characteristic
        return residual(self.v, self.y ** p - self.a * self.y - self.t)

    def verify(self) -> bool:
        p = self.v.domain.characteristic
        return self.b ** (p - 1) == self.a and self.residual().at_least(self.cap)

    def fields(self):
        return [("L", self.extension.spec()), ("y", _short(self.y)),
                ("residual", str(self.residual())), ("cap", str(self.cap))]


@dataclass
class Obstruction(Certificate):
    """``t`` residue is not a p-th power in the residue field; ``v(a) > 0``."""

    v: Valuation
    a: FieldElement
    t_residue: FieldElement
    degree_bound: int
    kind = "obstruction"

    def verify(self) -> bool:
        k = self.t_residue.field
        ok, _ = k.has_pth_root(self.t_residue)
        return not ok and self.v.in_max_ideal(self.a)

    def fields(self):
        return [("t_residue", str(self.t_residue)), ("residue_field", self.t_residue.field.spec()),
                ("v(a)", str(self.v.eval(self.a))), ("degree_bound", str(self.degree_bound))]


@dataclass
class ConvexHullBound(Certificate):
    """An integer ``n`` with ``-n < x < n``."""

    x: FieldElement
    n: int
    kind = "convex-hull-bound"

    def verify(self) -> bool:
        F = self.x.field
        return F.sign(self.n - self.x) > 0 and F.sign(self.n + self.x) > 0

    def fields(self):
        return [("x", _short(self.x)), ("n", str(self.n))]


@dataclass
class Unbounded(Certificate):
    """``|x|`` exceeds every tested integer, and its leading exponent is negative."""

    x: FieldElement
    tested_up_to: int
    leading_exponent: Fraction
    kind = "unbounded"

    def verify(self) -> bool:
        F = self.x.field
        ax = self.x if F.sign(self.x) > 0 else -self.x
        return self.leading_exponent < 0 and F.sign(ax - self.tested_up_to) > 0

    def fields(self):
        return [("x", _short(self.x)), ("tested_up_to", str(self.tested_up_to)),
                ("leading_exponent", str(self.leading_exponent))]


@dataclass
class SignWitness(Certificate):
    """``a`` is a square (with its root) or is not (with a reason)."""

    a: FieldElement
    root: FieldElement | None
    reason: str
    kind = "sign-witness"

    def verify(self) -> bool:
        if self.root is None:
            return not sqrt_witness(self.a.field, self.a).present
        return self.root * self.root == self.a

    def fields(self):
        return [("a", _short(self.a)), ("root", _short(self.root) if self.root is not None else "none"),
                ("reason", self.reason.replace(" ", "_"))]


def _short(x, width: int = 60) -> str:
    s = str(x).replace(" ", "")
    return s if len(s) <= width else s[: width - 3] + "..."


# Scanlon's set --------------------------------------------------------------

def _check_scanlon_setup(v: Valuation, t: FieldElement):
    K = v.domain
    if v.rank != 1 or not isinstance(v.stages[0], SeriesStage):
        raise UnsupportedConfiguration("the S-set is evaluated for the t-adic valuation of a series field")
    k = v.residue_field
    p = K.characteristic
    if p == 0 or not isinstance(k, LazyASClosure):
        raise UnsupportedConfiguration("residue field must be an Artin-Schreier closure of characteristic p")
    if not v.in_ring(t):
        raise ValueError(f"v(t) = {v.eval(t)} is negative")
    tbar = v.residue(t)
    ok, _ = k.has_pth_root(tbar)
    if ok:
        raise ValueError(f"residue of t = {tbar} is a p-th power")
    return K, k, p, tbar


def scanlon_membership(v: Valuation, t, a, stretch: bool = False) -> tuple[bool, Certificate]:
    """Decide ``a in S`` along the constructive proof, with a certificate.

    For ``v(a) <= 0``: take ``b`` with ``b^(p-1) = a``, solve the residue of
    ``Z^p - Z = t/(b a)`` by Artin-Schreier, lift by Newton and return
    ``y = z b``. For ``v(a) > 0`` the residue of ``t`` would have to be a
    p-th power in an extension of degree below p, which it is not.
    """
    K = v.domain
    t, a = K.coerce(t), K.coerce(a)
    K, k, p, tbar = _check_scanlon_setup(v, t)
    va = v.stages[0].value(a)
    if va is None or va > 0:
        return False, Obstruction(v, a, tbar, p - 1)
    if p == 2:
        b = a
    elif p == 3 and stretch:
        w = sqrt_witness(K, a)
        if not w.present:
            raise UnsupportedConfiguration("b with b^2 = a needs a genuine quadratic extension")
        b = w.root
    else:
        raise UnsupportedConfiguration(f"p = {p} requires the stretch configuration (p = 3, a a square)")
    c = t / (b * a)
    cap = Fraction(K.prec)
    # y^p - a y - t = b^p (z^p - z - c)
    inner_cap = cap - p * v.stages[0].value(b)
    zbar = artin_schreier_solve(k, v.residue(c))
    X = Poly.x(K)
    f = X ** p - X - Poly(K, [c])
    report = hensel_lift(v, f, K.coerce(zbar), cap=inner_cap)
    y = report.root * b
    return True, Membership(v, a, t, b, y, cap)


@dataclass
class IdentityReport:
    total: int = 0
    agreements: int = 0
    discrepancies: list = dc_field(default_factory=list)  # (a, member, v(a))
    bad_certificates: list = dc_field(default_factory=list)
    memberships: int = 0
    obstructions: int = 0

    @property
    def passed(self) -> bool:
        return not self.discrepancies and not self.bad_certificates and self.agreements == self.total


def scanlon_sampler(K: SeriesField, vmin: int = -3, vmax: int = 3) -> Callable:
    """Elements with base coefficients and leading exponent cycling ``vmin..vmax``."""
    count = [0]
    base = K.base.base if isinstance(K.base, LazyASClosure) else K.base

    def sample(rng: random.Random) -> FieldElement:
        e = vmin + count[0] % (vmax - vmin + 1)
        count[0] += 1
        terms = {e: K.base.coerce(base.random(rng, nonzero=True))}
        for step in range(1, rng.randint(1, 3)):
            terms[e + step * rng.randint(1, 2)] = K.base.coerce(base.random(rng))
        return K.from_terms(terms)

    return sample


def verify_scanlon_identity(v: Valuation, t, rng: random.Random, n: int = 100,
                            sampler: Callable | None = None) -> IdentityReport:
    sampler = sampler or scanlon_sampler(v.domain)
    report = IdentityReport()
    for _ in range(n):
        a = sampler(rng)
        member, cert = scanlon_membership(v, t, a)
        expected = v.stages[0].value(a) is not None and v.stages[0].value(a) <= 0
        report.total += 1
        if isinstance(cert, Membership):
            report.memberships += 1
        else:
            report.obstructions += 1
        if not cert.verify():
            report.bad_certificates.append((a, cert))
        if member == expected:
            report.agreements += 1
        else:
            report.discrepancies.append((a, member, v.eval(a)))
    return report


# natural valuation ----------------------------------------------------------

def _ordered_series(K: Field) -> SeriesField:
    if not isinstance(K, SeriesField) or not K.orderable:
        raise UnsupportedConfiguration(f"{K.spec()} is not an ordered series model")
    return K


def in_convex_hull(x: FieldElement, bound: int = HULL_SEARCH_BOUND) -> tuple[bool, int | None]:
    """Search ``n = 1, 2, 4, ...`` up to ``bound`` for ``-n < x < n`` using the order only."""
    F = x.field
    n = 1
    while True:
        if F.sign(n - x) > 0 and F.sign(n + x) > 0:
            return True, n
        if n >= bound:
            return False, None
        n = min(2 * n, bound)


@dataclass(frozen=True)
class NaturalValuation:
    valuation: Valuation

    @property
    def field(self) -> SeriesField:
        return self.valuation.domain

    def in_ring(self, x) -> bool:
        return self.valuation.in_ring(x)

    def certificate(self, x) -> Certificate:
        K = self.field
        x = K.coerce(x)
        if self.valuation.in_ring(x):
            c0 = K.coefficient(x, 0).rep
            n = math.floor(abs(c0)) + 1
            return ConvexHullBound(x, n)
        return Unbounded(x, HULL_SEARCH_BOUND, Fraction(K.valuation(x)))


def natural_valuation(K: Field) -> NaturalValuation:
    """The finest order-convex valuation: t-adic for an infinitesimal ``t``."""
    K = _ordered_series(K)
    return NaturalValuation(Valuation(K, (SeriesStage(K),)))


def near_boundary_samples(K: SeriesField, rng: random.Random, n: int = 20) -> list[FieldElement]:
    """Elements with large integer parts, some integral and some infinite."""
    t = K.gen
    out = []
    for i in range(n):
        big = rng.randint(10 ** 4, HULL_SEARCH_BOUND // 2) * rng.choice((1, -1))
        small = K.coerce(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        if i % 2:
            out.append(big + small * t)  # finite, just below an integer bound
        else:
            out.append(K.coerce(Fraction(1, big)) * t ** -1 + big)  # infinite, tiny leading coefficient
    return out


# Euclidean fields -----------------------------------------------------------

@dataclass
class EuclideanReport:
    passed: bool
    checked: int
    failures: list = dc_field(default_factory=list)  # (a, reason)
    witnesses: list = dc_field(default_factory=list)

    @property
    def counterexample(self) -> FieldElement | None:
        return self.failures[0][0] if self.failures else None

    @property
    def reason(self) -> str:
        return self.failures[0][1] if self.failures else ""

    def fail(self, a, reason: str) -> None:
        self.passed = False
        self.failures.append((a, reason))

    def __str__(self):
        if self.passed:
            return f"euclidean on {self.checked} samples"
        return f"not euclidean ({len(self.failures)} failures): {self.reason}"


def square_leading_sampler(K: SeriesField) -> Callable:
    """Series over Q whose leading coefficient is +-(rational square).

    Random rational leading coefficients are almost never squares, so the
    default sampler would only exercise the "neither is a square" branch.
    """
    if not isinstance(K, SeriesField) or K.characteristic != 0:
        raise UnsupportedConfiguration(f"square-leading sampler needs a series field over Q, not {K.spec()}")

    def sample(rng: random.Random) -> FieldElement:
        x = K.random(rng, nonzero=True)
        q = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        return x * (K.coerce(q * q * rng.choice((1, -1))) / K.coerce(K.leading_coefficient(x)))

    return sample


def _samples(K: Field, rng, n, sampler):
    if K.is_finite:
        return [x for x in K.elements() if not x.is_zero()]
    draw = sampler or (lambda r: K.random(r, nonzero=True))
    out = []
    while len(out) < n:
        x = draw(rng)
        if not x.is_zero():
            out.append(x)
    return out


def euclidean_check(K: Field, rng: random.Random, n: int = 200, sampler: Callable | None = None) -> EuclideanReport:
    """Exactly one of ``a, -a`` is a square for nonzero samples, and ``-1`` is not.

    Finite fields are checked exhaustively. Every failure is recorded.
    """
    report = EuclideanReport(True, 0)
    m1 = sqrt_witness(K, -K.one)
    if m1.present:
        report.fail(-K.one, f"-1 = ({m1.root})^2")
    for a in _samples(K, rng, n, sampler):
        report.checked += 1
        pos, neg = sqrt_witness(K, a), sqrt_witness(K, -a)
        if pos.present == neg.present:
            report.fail(a, f"{'both' if pos.present else 'neither'} of {a} and {-a} are squares")
        else:
            report.witnesses.append(SignWitness(a, pos.root, pos.reason))
    return report


@dataclass
class SquareOrder:
    """The sign rule ``sign(a) = +1`` iff ``a`` is a nonzero square."""

    field: Field
    product_checks: int = 0
    sum_checks: int = 0
    sums_outside_fragment: int = 0

    def sign(self, a) -> int:
        a = self.field.coerce(a)
        if a.is_zero():
            return 0
        return 1 if sqrt_witness(self.field, a).present else -1


def order_from_squares(K: Field, rng: random.Random, n: int = 200,
                       sampler: Callable | None = None) -> tuple[SquareOrder | None, EuclideanReport]:
    """The order induced by squares, checked to be a field order on samples.

    Sums whose square class is not decided inside the represented fragment
    (neither the sum nor its negative has a witness) are counted and skipped.
    """
    report = euclidean_check(K, rng, n, sampler)
    if not report.passed:
        return None, report
    order = SquareOrder(K)
    xs = _samples(K, rng, n, sampler)
    for x, y in zip(xs, xs[1:] + xs[:1]):
        sx, sy = order.sign(x), order.sign(y)
        order.product_checks += 1
        if order.sign(x * y) != sx * sy:
            report.fail(x * y, f"sign({x} * {y}) is not sign({x}) sign({y})")
            return None, report
        if sx > 0 and sy > 0:
            s = x + y
            if not sqrt_witness(K, s).present and not sqrt_witness(K, -s).present:
                order.sums_outside_fragment += 1
                continue
            order.sum_checks += 1
            if order.sign(s) <= 0:
                report.fail(s, f"{x} + {y} is not positive")
                return None, report
    return order, report


# p-henselian classes ---------------------------------------------------------

@dataclass(frozen=True)
class PClassAnnotation:
    """Whether the residue field has a Galois p-extension, by explicit witness.

    ``has_p_extension`` is a desk-scale proxy: ``True`` comes with a witness
    ``c`` (Artin-Schreier ``X^p - X - c`` or, for p = 2 off characteristic 2,
    ``X^2 - c``) that has no root; ``False`` means the residue field model is
    Artin-Schreier closed by construction.
    """

    valuation: Valuation
    p: int
    has_p_extension: bool
    witness: FieldElement | None = None

    @property
    def p_class(self) -> str:
        return "H1" if self.has_p_extension else "H2"


def p_extension_witness(k: Field, p: int) -> FieldElement | None:
    if isinstance(k, LazyASClosure) and k.p == p:
        return None
    if k.characteristic == p:
        if k.is_finite:
            c = next(x for x in k.elements() if k.trace(x) != k.zero)
            return c
        if isinstance(k, SeriesField):
            return k.gen ** -1
        if isinstance(k, RationalFunctionField):
            return k.gen
        raise UnsupportedConfiguration(f"no p-extension witness search over {k.spec()}")
    if p == 2:
        for c in (-1, 2, 3, 5, 7):
            if not sqrt_witness(k, k.coerce(c)).present:
                return k.coerce(c)
        return None
    raise UnsupportedConfiguration("p-extensions off characteristic p need roots of unity")


def annotate_p_class(v: Valuation, p: int) -> PClassAnnotation:
    w = p_extension_witness(v.residue_field, p)
    return PClassAnnotation(v, p, w is not None, w)


@dataclass(frozen=True)
class ClassComparison:
    first: str
    second: str
    relation: str
    expected: str
    consistent: bool

    def __str__(self):
        tag = "consistent" if self.consistent else "refutes the proxy annotation"
        return f"{self.first} vs {self.second}: {self.relation} (expected {self.expected}) {tag}"


def phensel_class_compare(a: PClassAnnotation | None, b: PClassAnnotation | None) -> ClassComparison:
    """Check comparability claims for p-henselian valuations against their classes.

    Two members of H1 are comparable; a member of H2 is finer than every
    member of H1. A mismatch refutes the proxy annotation, not the claim.
    """
    if a is None or b is None:
        raise ValueError("both valuations need a p-class annotation")
    cmp = compare_rings(a.valuation, b.valuation)
    rel = cmp.relation
    if a.p_class == "H1" and b.p_class == "H1":
        expected = "comparable"
        ok = rel in ("equal", "v finer", "w finer")
    elif a.p_class == "H2" and b.p_class == "H1":
        expected = "v finer"
        ok = rel == "v finer"
    elif a.p_class == "H1" and b.p_class == "H2":
        expected = "w finer"
        ok = rel == "w finer"
    else:
        expected = "any"
        ok = True
    return ClassComparison(a.p_class, b.p_class, rel, expected, ok)
