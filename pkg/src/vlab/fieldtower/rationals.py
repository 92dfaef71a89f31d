from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .base import Field, FieldElement


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class RationalField(Field):
    """The field Q with its usual order; representations are Fractions."""

    characteristic = 0
    orderable = True

    def _from_int(self, n):
        return Fraction(n)

    def _from_fraction(self, q):
        return q

    def _add(self, a, b):
        return a + b

    def _sub(self, a, b):
        return a - b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def _pow(self, a, n):
        return a ** n

    def _is_zero(self, a):
        return a == 0

    def _eq(self, a, b):
        return a == b

    def _fmt(self, a):
        return str(a)

    def _sort_key(self, a):
        return (abs(a.numerator) + a.denominator, a)

    def is_perfect(self) -> bool:
        return True

    def sign(self, x) -> int:
        r = self.coerce(x).rep
        return (r > 0) - (r < 0)

    def sqrt(self, x):
        r = _rational_sqrt(self.coerce(x).rep)
        return None if r is None else FieldElement(self, r)

    def poly_root(self, f):
        """A rational root of ``f`` via the rational root theorem, or ``None``."""
        from math import lcm

        coeffs = [self.element(c).rep for c in f.coeffs]
        den = 1
        for c in coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        if ints[0] == 0:
            return self.zero
        lead, const = abs(ints[-1]), abs(ints[0])
        for q in _divisors(lead):
            for p in _divisors(const):
                for s in (1, -1):
                    r = Fraction(s * p, q)
                    if f(FieldElement(self, r)).is_zero():
                        return FieldElement(self, r)
        return None

    def random(self, rng, nonzero=False, height=20, **kw):
        while True:
            q = Fraction(rng.randint(-height, height), rng.randint(1, height))
            if q or not nonzero:
                return FieldElement(self, q)

    def spec(self) -> str:
        return "qq"


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


QQ_FIELD = RationalField()
