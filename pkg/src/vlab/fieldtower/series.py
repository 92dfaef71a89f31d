"""Truncated formal series ``base((t))`` with integer or rational exponents.

An element is ``(terms, prec)``: ``terms`` a sorted tuple of
``(exponent, coefficient rep)`` pairs with nonzero coefficients, ``prec`` the
absolute precision (the element is known modulo ``t^prec``) or ``None`` for
an exact element of finite support. Exact elements stay exact under ring
operations; inversion of non-monomials and other infinite expansions are cut
at ``prec`` terms of relative precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from ..errors import PrecisionError
from .base import Field, FieldElement


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a < b else b


@dataclass(frozen=True, eq=True)
class SeriesField(Field):
    base: Field
    var: str = "t"
    prec: int = 8
    rational_exponents: bool = False

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError("precision must be at least 1")

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    @property
    def orderable(self) -> bool:
        return self.base.orderable

    def _exp(self, e):
        if self.rational_exponents:
            return Fraction(e)
        e = Fraction(e)
        if e.denominator != 1:
            raise ValueError(f"exponent {e} is not an integer")
        return int(e)

    # construction ----------------------------------------------------------
    def _zero(self):
        return ((), None)

    def _from_base(self, r):
        if self.base._is_zero(r):
            return ((), None)
        return (((self._exp(0), r),), None)

    def _from_int(self, n):
        return self._from_base(self.base._from_int(n))

    def _from_fraction(self, q):
        return self._from_base(self.base._from_fraction(q))

    def monomial(self, coeff, e) -> FieldElement:
        c = self.base.coerce(coeff).rep
        if self.base._is_zero(c):
            return self.zero
        return FieldElement(self, (((self._exp(e), c),), None))

    def from_terms(self, terms, prec=None) -> FieldElement:
        """Build from ``{exponent: coefficient}`` or pairs; ``prec`` is absolute."""
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        B = self.base
        for e, c in items:
            e = self._exp(e)
            r = B.coerce(c).rep
            acc[e] = B._add(acc[e], r) if e in acc else r
        return FieldElement(self, self._make(acc, None if prec is None else self._exp(prec)))

    def _make(self, acc: dict, prec):
        B = self.base
        terms = tuple(sorted((e, c) for e, c in acc.items()
                             if not B._is_zero(c) and (prec is None or e < prec)))
        return (terms, prec)

    def _own_gens(self):
        return {self.var: FieldElement(self, (((self._exp(1), self.base._from_int(1)),), None))}

    @property
    def gen(self) -> FieldElement:
        return self._own_gens()[self.var]

    # arithmetic ------------------------------------------------------------
    def _add(self, a, b):
        if not a[0] and a[1] is None:
            return b
        if not b[0] and b[1] is None:
            return a
        B = self.base
        acc = dict(a[0])
        for e, c in b[0]:
            acc[e] = B._add(acc[e], c) if e in acc else c
        return self._make(acc, _min_prec(a[1], b[1]))

    def _neg(self, a):
        B = self.base
        return (tuple((e, B._neg(c)) for e, c in a[0]), a[1])

    def _sub(self, a, b):
        return self._add(a, self._neg(b))

    @staticmethod
    def _val_or_prec(a):
        return a[0][0][0] if a[0] else a[1]

    def _mul(self, a, b):
        if (not a[0] and a[1] is None) or (not b[0] and b[1] is None):
            return ((), None)
        va, vb = self._val_or_prec(a), self._val_or_prec(b)
        prec = None
        if a[1] is not None:
            prec = a[1] + vb
        if b[1] is not None:
            prec = _min_prec(prec, b[1] + va)
        B = self.base
        acc: dict = {}
        for e1, c1 in a[0]:
            for e2, c2 in b[0]:
                e = e1 + e2
                if prec is not None and e >= prec:
                    break
                t = B._mul(c1, c2)
                acc[e] = B._add(acc[e], t) if e in acc else t
        return self._make(acc, prec)

    def _truncate(self, a, prec):
        prec = _min_prec(a[1], prec)
        return (tuple((e, c) for e, c in a[0] if prec is None or e < prec), prec)

    def _inv(self, a):
        terms, prec = a
        if not terms:
            if prec is None:
                raise ZeroDivisionError(f"division by zero in {self.spec()}")
            raise PrecisionError(f"cannot invert O({self.var}^{prec})")
        B = self.base
        e0, c0 = terms[0]
        ic0 = B._inv(c0)
        if len(terms) == 1 and prec is None:
            return (((-e0, ic0),), None)
        rel = self.prec if prec is None else min(prec - e0, self.prec)
        if rel <= 0:
            raise PrecisionError("no relative precision left to invert")
        if not self.rational_exponents:
            # b_n = -(1/c0) * sum_{k>=1} a_k b_{n-k}
            a_coeffs = dict((e - e0, c) for e, c in terms)
            b = [ic0]
            for n in range(1, rel):
                s = B._from_int(0)
                for k in range(1, n + 1):
                    ak = a_coeffs.get(k)
                    if ak is not None and not B._is_zero(b[n - k]):
                        s = B._add(s, B._mul(ak, b[n - k]))
                b.append(B._neg(B._mul(ic0, s)))
            acc = {n - e0: c for n, c in enumerate(b)}
            return self._make(acc, rel - e0)
        # 1/(1+eps) = sum (-eps)^k for eps of positive order
        neg_eps = tuple((e - e0, B._neg(B._mul(c, ic0))) for e, c in terms[1:])
        eps_rep = (neg_eps, None)
        one = self._from_int(1)
        result = one
        power = one
        while True:
            power = self._truncate(self._mul(power, eps_rep), rel)
            if not power[0]:
                break
            result = self._add(result, power)
        result = self._truncate(result, rel)
        return self._mul(result, (((-e0, ic0),), None))

    def _is_zero(self, a):
        return not a[0]

    def _eq(self, a, b):
        return not self._sub(a, b)[0]

    def _hash(self, a):
        if a[1] is not None:
            raise TypeError("inexact series are unhashable")
        return hash(tuple((e, self.base._hash(c)) for e, c in a[0]))

    def _sort_key(self, a):
        return tuple((e, self.base._sort_key(c)) for e, c in a[0])

    def _fmt(self, a):
        terms, prec = a
        B = self.base
        v = self.var
        parts = []
        for e, c in terms:
            cs = B._fmt(c)
            mono = "" if e == 0 else (v if e == 1 else (f"{v}^{e}" if not isinstance(e, Fraction) or e.denominator == 1 else f"{v}^({e})"))
            if not mono:
                parts.append(cs if not any(ch in cs for ch in "+- ") else f"({cs})")
            elif B._eq(c, B._from_int(1)):
                parts.append(mono)
            elif B._eq(c, B._neg(B._from_int(1))) and B.characteristic != 2:
                parts.append("-" + mono)
            else:
                if any(ch in cs for ch in "+ /") or (cs.startswith("-") and "+" in cs) or " - " in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        if prec is not None:
            parts.append(f"O({v}^{prec})" if prec != 1 else f"O({v})")
        if not parts:
            return "0"
        out = parts[0]
        for part in parts[1:]:
            out += (" - " + part[1:]) if part.startswith("-") else (" + " + part)
        return out

    # structure -------------------------------------------------------------
    def valuation(self, x):
        terms, prec = self.coerce(x).rep
        if terms:
            return terms[0][0]
        if prec is None:
            return None
        raise PrecisionError(f"valuation of O({self.var}^{prec}) is indeterminate")

    def precision(self, x):
        return self.coerce(x).rep[1]

    def leading_coefficient(self, x) -> FieldElement:
        terms, prec = self.coerce(x).rep
        if not terms:
            if prec is None:
                raise ValueError("zero has no leading coefficient")
            raise PrecisionError("leading coefficient is beyond the stored precision")
        return self.base.element(terms[0][1])

    def coefficient(self, x, e) -> FieldElement:
        terms, prec = self.coerce(x).rep
        e = self._exp(e)
        if prec is not None and e >= prec:
            raise PrecisionError(f"coefficient of {self.var}^{e} is beyond O({self.var}^{prec})")
        for ee, c in terms:
            if ee == e:
                return self.base.element(c)
        return self.base.zero

    def terms(self, x) -> list[tuple]:
        return [(e, self.base.element(c)) for e, c in self.coerce(x).rep[0]]

    def truncate(self, x, prec) -> FieldElement:
        return FieldElement(self, self._truncate(self.coerce(x).rep, self._exp(prec)))

    def shift(self, x, k) -> FieldElement:
        terms, prec = self.coerce(x).rep
        k = self._exp(k)
        return FieldElement(self, (tuple((e + k, c) for e, c in terms), None if prec is None else prec + k))

    def is_perfect(self) -> bool:
        if self.characteristic == 0:
            return True
        if self.rational_exponents:
            return self.base.is_perfect()
        return False

    def has_pth_root(self, x):
        p = self.characteristic
        if p == 0:
            raise ValueError("p-th roots need positive characteristic")
        terms, prec = self.coerce(x).rep
        out = []
        for e, c in terms:
            q = Fraction(e) / p
            if not self.rational_exponents and q.denominator != 1:
                return False, None
            ok, w = self.base.has_pth_root(self.base.element(c))
            if not ok:
                return False, None
            out.append((self._exp(q), w.rep))
        new_prec = None
        if prec is not None:
            new_prec = Fraction(prec) / p
            if not self.rational_exponents:
                new_prec = -((-prec) // p)
        return True, FieldElement(self, self._make(dict(out), None if new_prec is None else self._exp(new_prec)))

    def sign(self, x) -> int:
        if not self.base.orderable:
            return super().sign(x)
        terms, prec = self.coerce(x).rep
        if not terms:
            if prec is None:
                return 0
            raise PrecisionError("sign of a zero known only to precision")
        return self.base.sign(self.base.element(terms[0][1]))

    def sqrt(self, x):
        """A square root when one exists in the represented fragment, else ``None``."""
        x = self.coerce(x)
        if self.characteristic == 2:
            ok, w = self.has_pth_root(x)
            return w if ok else None
        terms, prec = x.rep
        if not terms:
            if prec is None:
                return self.zero
            raise PrecisionError("square root of a zero known only to precision")
        e0, c0 = terms[0]
        half = Fraction(e0) / 2
        if not self.rational_exponents and half.denominator != 1:
            return None
        root_c0 = self._base_sqrt(self.base.element(c0))
        if root_c0 is None:
            return None
        B = self.base
        ic0 = B._inv(c0)
        eps = (tuple((e - e0, B._mul(c, ic0)) for e, c in terms[1:]), None if prec is None else prec - e0)
        rel = self.prec if prec is None else min(prec - e0, self.prec)
        # sqrt(1+eps) = sum binom(1/2, k) eps^k
        result = self._from_int(1)
        power = self._from_int(1)
        k = 0
        while True:
            k += 1
            power = self._truncate(self._mul(power, eps), rel)
            if not power[0]:
                break
            coef = _half_binomial(k)
            result = self._add(result, self._mul(self._from_fraction(coef), power))
        result = self._truncate(result, rel)
        lead = (((self._exp(half), root_c0.rep),), None)
        return FieldElement(self, self._mul(result, lead))

    def _base_sqrt(self, c):
        B = self.base
        fn = getattr(B, "sqrt", None)
        if fn is not None:
            return fn(c)
        if B.is_finite:
            for y in B.elements():
                if y * y == c:
                    return y
            return None
        return None

    def random(self, rng, nonzero=False, vmin=-2, vmax=3, nterms=3, base_kw=None, **kw):
        base_kw = base_kw or {}
        if not nonzero and rng.random() < 0.05:
            return self.zero
        if self.rational_exponents:
            v = Fraction(rng.randint(vmin * 6, vmax * 6), rng.choice((1, 2, 3, 6)))
            v = max(Fraction(vmin), min(Fraction(vmax), v))
            steps = [Fraction(1, rng.choice((1, 2, 3))) for _ in range(nterms)]
        else:
            v = rng.randint(vmin, vmax)
            steps = [1] * nterms
        acc = {v: self.base.random(rng, nonzero=True, **base_kw).rep}
        e = v
        for s in steps[1:]:
            e = e + s * rng.randint(1, 2)
            c = self.base.random(rng, **base_kw)
            if not c.is_zero():
                acc[e] = c.rep
        return FieldElement(self, self._make(acc, None))

    def spec(self) -> str:
        kind = "puiseux" if self.rational_exponents else "laurent"
        return f"{kind}({self.base.spec()}, {self.var}, prec={self.prec})"


def _half_binomial(k: int) -> Fraction:
    """binom(1/2, k) as an exact rational."""
    num = Fraction(1)
    for i in range(k):
        num *= Fraction(1, 2) - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return num / den


def LaurentSeriesField(base: Field, var: str = "t", prec: int = 8) -> SeriesField:
    return SeriesField(base, var, prec, False)


def PuiseuxSeriesField(base: Field, var: str = "t", prec: int = 8) -> SeriesField:
    return SeriesField(base, var, prec, True)

