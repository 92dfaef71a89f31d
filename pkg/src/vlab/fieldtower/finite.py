from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .base import Field, FieldElement


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True, eq=True)
class PrimeField(Field):
    """The prime field F_p; representations are ints in ``range(p)``."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    is_finite = True

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.p

    @property
    def degree_over_prime(self) -> int:
        return 1

    def prime_field(self) -> "PrimeField":
        return self

    def _from_int(self, n):
        return n % self.p

    def _from_fraction(self, q: Fraction):
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"{q} has no image in F_{self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def _add(self, a, b):
        return (a + b) % self.p

    def _sub(self, a, b):
        return (a - b) % self.p

    def _neg(self, a):
        return -a % self.p

    def _mul(self, a, b):
        return a * b % self.p

    def _inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return pow(a, -1, self.p)

    def _pow(self, a, n):
        if n < 0:
            a, n = self._inv(a), -n
        return pow(a, n, self.p)

    def _is_zero(self, a):
        return a == 0

    def _eq(self, a, b):
        return a == b

    def _fmt(self, a):
        return str(a)

    def elements(self) -> Iterator[FieldElement]:
        for i in range(self.p):
            yield FieldElement(self, i)

    def to_fp_vector(self, x) -> tuple[int, ...]:
        return (self.coerce(x).rep,)

    def is_perfect(self) -> bool:
        return True

    def pth_root(self, x) -> FieldElement:
        return self.coerce(x)

    def has_pth_root(self, x):
        return True, self.coerce(x)

    def trace(self, x) -> FieldElement:
        return self.coerce(x)

    def random(self, rng, nonzero=False, **kw):
        lo = 1 if nonzero else 0
        return FieldElement(self, rng.randrange(lo, self.p))

    def spec(self) -> str:
        return f"gf({self.p})"


class FiniteFieldMixin:
    """Operations shared by finite fields presented as towers over F_p."""

    def trace(self, x) -> FieldElement:
        """Absolute trace to the prime field, returned as an element of ``self``."""
        x = self.coerce(x)
        acc = x
        y = x
        for _ in range(self.degree_over_prime - 1):
            y = y ** self.characteristic
            acc = acc + y
        return acc

    def pth_root(self, x) -> FieldElement:
        x = self.coerce(x)
        return x ** (self.order // self.characteristic)

    def has_pth_root(self, x):
        return True, self.pth_root(x)

    def is_perfect(self) -> bool:
        return True

    def multiplicative_order(self, x) -> int:
        x = self.coerce(x)
        if x.is_zero():
            raise ZeroDivisionError("0 has no multiplicative order")
        n = self.order - 1
        order = n
        for q in _prime_factors(n):
            while order % q == 0 and (x ** (order // q)) == self.one:
                order //= q
        return order


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def gf(q: int, name: str = "g"):
    """The finite field with ``q`` elements.

    For ``q = p^k`` with ``k > 1`` the field is a simple extension of F_p by
    the least monic irreducible polynomial of degree ``k`` (coefficients
    compared as base-p numbers).
    """
    p = None
    for cand in range(2, q + 1):
        if q % cand == 0:
            p = cand
            break
    if p is None:
        raise ValueError(f"{q} is not a prime power")
    k = 0
    n = q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise ValueError(f"{q} is not a prime power")
    Fp = PrimeField(p)
    if k == 1:
        return Fp
    from .extension import SimpleExtension
    from .poly import Poly, find_factor

    for code in range(p ** k):
        digits = [(code // p ** i) % p for i in range(k)]
        m = Poly(Fp, digits + [1])
        if digits[0] != 0 and find_factor(m) is None:
            return SimpleExtension(Fp, m, name)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")
