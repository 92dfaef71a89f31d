from __future__ import annotations

from dataclasses import dataclass

from .base import Field, FieldElement
from .poly import Poly, format_poly, poly_gcd, poly_sqrt


@dataclass(frozen=True, eq=True)
class RationalFunctionField(Field):
    """``base(var)``; representations are ``(num, den)`` coefficient tuples.

    The denominator is monic and coprime to the numerator; zero is ``((), (1,))``.
    """

    base: Field
    var: str = "u"

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    @property
    def orderable(self) -> bool:
        return False

    def _P(self, reps) -> Poly:
        return Poly.from_reps(self.base, reps)

    def _one_tuple(self):
        return (self.base._from_int(1),)

    def _normalize(self, num: Poly, den: Poly):
        if den.is_zero():
            raise ZeroDivisionError(f"division by zero in {self.spec()}")
        if num.is_zero():
            return ((), self._one_tuple())
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den.lc()
        if lc != self.base.one:
            inv = lc.inverse()
            num, den = num.scale(inv), den.scale(inv)
        return (num.coeffs, den.coeffs)

    def make(self, num: Poly, den: Poly | None = None) -> FieldElement:
        if den is None:
            den = Poly(self.base, [1])
        return FieldElement(self, self._normalize(num, den))

    def sqrt(self, x):
        """A square root in odd characteristic, or ``None``."""
        x = self.coerce(x)
        if self.characteristic == 2:
            raise ValueError("use pth_root in characteristic 2")
        if x.is_zero():
            return x
        num, den = self.numerator(x), self.denominator(x)
        lc = num.lc()
        B = self.base
        fn = getattr(B, "sqrt", None)
        if fn is not None:
            s = fn(lc)
        else:
            s = next((y for y in B.elements() if y * y == lc), None) if B.is_finite else None
        if s is None:
            return None
        rn, rd = poly_sqrt(num.scale(lc.inverse())), poly_sqrt(den)
        if rn is None or rd is None:
            return None
        return self.make(rn.scale(s), rd)

    def numerator(self, x) -> Poly:
        return self._P(self.coerce(x).rep[0])

    def denominator(self, x) -> Poly:
        return self._P(self.coerce(x).rep[1])

    def _from_base(self, r):
        if self.base._is_zero(r):
            return ((), self._one_tuple())
        return ((r,), self._one_tuple())

    def _from_int(self, n):
        return self._from_base(self.base._from_int(n))

    def _from_fraction(self, q):
        return self._from_base(self.base._from_fraction(q))

    def _add(self, a, b):
        if not a[0]:
            return b
        if not b[0]:
            return a
        P = self._P
        if a[1] == b[1]:
            return self._normalize(P(a[0]) + P(b[0]), P(a[1]))
        return self._normalize(P(a[0]) * P(b[1]) + P(b[0]) * P(a[1]), P(a[1]) * P(b[1]))

    def _neg(self, a):
        B = self.base
        return (tuple(B._neg(c) for c in a[0]), a[1])

    def _sub(self, a, b):
        return self._add(a, self._neg(b))

    def _mul(self, a, b):
        if not a[0] or not b[0]:
            return ((), self._one_tuple())
        P = self._P
        return self._normalize(P(a[0]) * P(b[0]), P(a[1]) * P(b[1]))

    def _inv(self, a):
        if not a[0]:
            raise ZeroDivisionError(f"division by zero in {self.spec()}")
        return self._normalize(self._P(a[1]), self._P(a[0]))

    def _is_zero(self, a):
        return not a[0]

    def _eq(self, a, b):
        B = self.base
        return (len(a[0]) == len(b[0]) and len(a[1]) == len(b[1])
                and all(B._eq(x, y) for x, y in zip(a[0], b[0]))
                and all(B._eq(x, y) for x, y in zip(a[1], b[1])))

    def _hash(self, a):
        B = self.base
        return hash((tuple(B._hash(c) for c in a[0]), tuple(B._hash(c) for c in a[1])))

    def _sort_key(self, a):
        B = self.base
        return (len(a[1]), len(a[0]), tuple(B._sort_key(c) for c in reversed(a[1])),
                tuple(B._sort_key(c) for c in reversed(a[0])))

    def _fmt(self, a):
        num = format_poly(self._P(a[0]), self.var)
        if len(a[1]) == 1:
            return num
        den = format_poly(self._P(a[1]), self.var)
        if len(a[0]) > 1 and any(ch in num for ch in "+-"):
            num = f"({num})"
        return f"{num}/({den})"

    def _own_gens(self):
        B = self.base
        return {self.var: FieldElement(self, ((B._from_int(0), B._from_int(1)), self._one_tuple()))}

    @property
    def gen(self) -> FieldElement:
        return self._own_gens()[self.var]

    def is_perfect(self) -> bool:
        return self.characteristic == 0

    def _poly_pth_root(self, f: Poly) -> Poly | None:
        p = self.characteristic
        out = []
        for i, c in enumerate(f.coefficients()):
            if c.is_zero():
                if i % p == 0:
                    out.append(c)
                continue
            if i % p:
                return None
            ok, w = self.base.has_pth_root(c)
            if not ok:
                return None
            out.append(w)
        return Poly(self.base, out)

    def has_pth_root(self, x):
        p = self.characteristic
        if p == 0:
            raise ValueError("p-th roots need positive characteristic")
        x = self.coerce(x)
        rn = self._poly_pth_root(self.numerator(x))
        if rn is None:
            return False, None
        rd = self._poly_pth_root(self.denominator(x))
        if rd is None:
            return False, None
        return True, self.make(rn, rd)

    def derivative(self, x) -> FieldElement:
        """Formal derivative with respect to the variable."""
        x = self.coerce(x)
        n, d = self.numerator(x), self.denominator(x)
        return self.make(n.derivative() * d - n * d.derivative(), d * d)

    def random(self, rng, nonzero=False, num_degree=2, den_degree=1, **kw):
        B = self.base
        while True:
            num = Poly(B, [B.random(rng) for _ in range(rng.randint(0, num_degree) + 1)])
            den = Poly(B, [B.random(rng) for _ in range(rng.randint(0, den_degree))] + [1])
            if den.is_zero():
                continue
            x = self.make(num, den)
            if not (nonzero and x.is_zero()):
                return x

    def spec(self) -> str:
        return f"ratfunc({self.base.spec()}, {self.var})"
