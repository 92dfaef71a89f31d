"""Dense univariate polynomials over a field descriptor.

Coefficients are stored as raw representations of the coefficient field,
lowest degree first, with no trailing zeros.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from ..errors import ReducibleModulus, UnsupportedConfiguration
from .base import Field, FieldElement


def _strip(F: Field, coeffs: Sequence) -> tuple:
    coeffs = list(coeffs)
    while coeffs and F._is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = ()):
        self.field = field
        reps = []
        for c in coeffs:
            if isinstance(c, FieldElement) and c.field is field:
                reps.append(c.rep)
            else:
                reps.append(field.coerce(c).rep)
        self.coeffs = _strip(field, reps)

    @classmethod
    def from_reps(cls, field: Field, reps) -> "Poly":
        p = cls.__new__(cls)
        p.field = field
        p.coeffs = _strip(field, reps)
        return p

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls.from_reps(field, (field._from_int(0), field._from_int(1)))

    @classmethod
    def monomial(cls, field: Field, coeff, n: int) -> "Poly":
        z = field._from_int(0)
        return cls.from_reps(field, (z,) * n + (field.coerce(coeff).rep,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> FieldElement:
        F = self.field
        if 0 <= i < len(self.coeffs):
            return F.element(self.coeffs[i])
        return F.zero

    def lc(self) -> FieldElement:
        return self.field.element(self.coeffs[-1])

    def coefficients(self) -> list[FieldElement]:
        return [self.field.element(c) for c in self.coeffs]

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field is not self.field and other.field != self.field:
                return Poly(self.field, other.coefficients())
            return other
        return Poly(self.field, [other])

    def __add__(self, other):
        other = self._lift(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F._add(out[i], c)
        return Poly.from_reps(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly.from_reps(F, [F._neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.from_reps(F, ())
        out = [F._from_int(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if F._is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = F._add(out[i + j], F._mul(x, y))
        return Poly.from_reps(F, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        F = self.field
        c = F.coerce(c).rep
        return Poly.from_reps(F, [F._mul(c, x) for x in self.coeffs])

    def __divmod__(self, other: "Poly"):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lc = F._inv(other.coeffs[-1])
        q = [F._from_int(0)] * max(0, len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if F._is_zero(c):
                continue
            c = F._mul(c, inv_lc)
            q[i - db] = c
            for j, y in enumerate(other.coeffs):
                rem[i - db + j] = F._sub(rem[i - db + j], F._mul(c, y))
        return Poly.from_reps(F, q), Poly.from_reps(F, rem[:db] if db > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = self._lift(other)
        if len(self.coeffs) != len(other.coeffs):
            return (self - other).is_zero()
        F = self.field
        return all(F._eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(self.field._hash(c) for c in self.coeffs))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        F = self.field
        inv = F._inv(self.coeffs[-1])
        return Poly.from_reps(F, [F._mul(inv, c) for c in self.coeffs])

    def derivative(self) -> "Poly":
        F = self.field
        return Poly.from_reps(F, [F._mul(F._from_int(i), c) for i, c in enumerate(self.coeffs) if i])

    def __call__(self, x):
        """Evaluate by Horner's rule; ``x`` may live in an extension of the coefficients."""
        if isinstance(x, FieldElement) and x.field is not self.field:
            acc = x.field.zero
            for c in reversed(self.coeffs):
                acc = acc * x + x.field.coerce(self.field.element(c))
            return acc
        F = self.field
        xr = F.coerce(x).rep
        acc = F._from_int(0)
        for c in reversed(self.coeffs):
            acc = F._add(F._mul(acc, xr), c)
        return F.element(acc)

    def map(self, target: Field, fn=None) -> "Poly":
        fn = fn or target.coerce
        return Poly(target, [fn(c) for c in self.coefficients()])

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly(self.field, ())
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.from_reps(self.field, (c,))
        return acc

    def __str__(self):
        return format_poly(self, "X")

    def __repr__(self):
        return f"Poly({self})"


def format_poly(p: Poly, var: str) -> str:
    F = p.field
    if p.is_zero():
        return "0"
    terms = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if F._is_zero(c):
            continue
        cs = F._fmt(c)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(cs)
        elif F._eq(c, F._from_int(1)):
            terms.append(mono)
        else:
            if any(ch in cs for ch in "+- ") and not cs.startswith("("):
                cs = f"({cs})"
            terms.append(f"{cs}*{mono}")
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") and "+" not in t else " + " + t
    return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    F = a.field
    one = Poly(F, [1])
    zero = Poly(F, ())
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = r0.lc().inverse()
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def pow_mod(base: Poly, n: int, modulus: Poly) -> Poly:
    result = Poly(base.field, [1])
    base = base % modulus
    while n:
        if n & 1:
            result = (result * base) % modulus
        n >>= 1
        if n:
            base = (base * base) % modulus
    return result


# finite-field helpers ------------------------------------------------------

def monic_polys(F: Field, degree: int):
    """All monic polynomials of the given degree over a finite field."""
    elems = list(F.elements())
    for tail in itertools.product(elems, repeat=degree):
        yield Poly(F, list(tail) + [F.one])


def find_factor(f: Poly, max_degree: int | None = None) -> Poly | None:
    """A nontrivial monic factor of ``f`` by trial division, or ``None``.

    Finite coefficient fields are searched exhaustively; otherwise only
    linear factors are looked for through the field's root finder.
    """
    F = f.field
    n = f.degree
    if n <= 1:
        return None
    if F.is_finite:
        top = n // 2 if max_degree is None else min(n // 2, max_degree)
        for d in range(1, top + 1):
            for g in monic_polys(F, d):
                if (f % g).is_zero():
                    return g
        return None
    if n > 3:
        raise UnsupportedConfiguration(f"irreducibility of degree {n} over {F.spec()} is not decided")
    root = find_root(f)
    if root is None:
        return None
    return Poly(F, [-root, 1])


def find_root(f: Poly):
    F = f.field
    if F.is_finite:
        for x in F.elements():
            if f(x).is_zero():
                return x
        return None
    finder = getattr(F, "poly_root", None)
    if finder is None:
        raise UnsupportedConfiguration(f"no root finder over {F.spec()}")
    return finder(f)


IRREDUCIBILITY_DEGREE_BOUND = 6


def check_irreducible(f: Poly) -> None:
    """Raise :class:`ReducibleModulus` if ``f`` has a nontrivial factor."""
    if f.degree < 1:
        raise ValueError("a modulus must have positive degree")
    if f.degree > IRREDUCIBILITY_DEGREE_BOUND:
        raise UnsupportedConfiguration(
            f"irreducibility is only checked up to degree {IRREDUCIBILITY_DEGREE_BOUND}")
    g = find_factor(f)
    if g is not None:
        raise ReducibleModulus(f"{f} is divisible by {g}", factor=g)


def factor_squarefree_trial(f: Poly) -> list[tuple[Poly, int]]:
    """Factor a monic polynomial over a finite field into irreducibles by trial division."""
    F = f.field
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    d = 1
    while f.degree >= 2 * d:
        for g in monic_polys(F, d):
            if f.degree < 2 * d:
                break
            m = 0
            while True:
                q, r = divmod(f, g)
                if not r.is_zero():
                    break
                f, m = q, m + 1
            if m:
                out.append((g, m))
        d += 1
    if f.degree >= 1:
        for i, (g, m) in enumerate(out):
            if g == f:
                out[i] = (g, m + 1)
                break
        else:
            out.append((f, 1))
    out.sort(key=lambda gm: (gm[0].degree, [F._sort_key(c) for c in gm[0].coeffs]))
    return out


def poly_sqrt(f: Poly) -> Poly | None:
    """Monic square root of a monic polynomial, coefficients from the top; char != 2."""
    if f.degree % 2:
        return None
    F = f.field
    n = f.degree // 2
    g = [F.zero] * n + [F.one]
    two = F.coerce(2)
    for k in range(n - 1, -1, -1):
        # coefficient of X^(n+k) in g^2 fixes g_k
        acc = f[n + k]
        for i in range(k + 1, n + 1):
            j = n + k - i
            if k < j <= n:
                acc = acc - g[i] * g[j]
        g[k] = acc / two
    root = Poly(F, g)
    return root if root * root == f else None
