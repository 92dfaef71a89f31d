from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import PrecisionError
from .base import Field, FieldElement

# rep: (val, unit, relprec). Exact zero is (None, 0, 0); a zero known only
# modulo p^k is (k, 0, 0).
EXACT_ZERO = (None, 0, 0)


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True, eq=True)
class PAdicField(Field):
    """Q_p with capped relative precision ``prec`` (number of p-adic digits)."""

    p: int
    prec: int = 10

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError("precision must be at least 1")

    @property
    def characteristic(self) -> int:
        return 0

    def _from_int(self, n):
        return self._from_fraction(Fraction(n))

    def _from_fraction(self, q):
        if q == 0:
            return EXACT_ZERO
        p = self.p
        v = _vp(q.numerator, p) - _vp(q.denominator, p)
        mod = p ** self.prec
        num = q.numerator // p ** max(v, 0)
        den = q.denominator // p ** max(-v, 0)
        return (v, num * pow(den, -1, mod) % mod, self.prec)

    def from_digits(self, digits, val: int = 0) -> FieldElement:
        """Element ``p^val * sum(d_i p^i)`` known to ``len(digits)`` digits."""
        n = sum(d * self.p ** i for i, d in enumerate(digits))
        r = len(digits)
        if n % self.p ** r == 0:
            return FieldElement(self, (val + r, 0, 0))
        w = _vp(n, self.p)
        return FieldElement(self, (val + w, n // self.p ** w, r - w))

    @staticmethod
    def _absprec(a):
        v, u, r = a
        return None if v is None else v + r

    def _add(self, a, b):
        if a[0] is None:
            return b
        if b[0] is None:
            return a
        p = self.p
        A = min(a[0] + a[2], b[0] + b[2])
        m = min(a[0], b[0])
        if A <= m:
            return (A, 0, 0)
        mod = p ** (A - m)
        s = (a[1] * p ** (a[0] - m) + b[1] * p ** (b[0] - m)) % mod
        if s == 0:
            return (A, 0, 0)
        w = _vp(s, p)
        v = m + w
        return (v, s // p ** w, A - v)

    def _neg(self, a):
        v, u, r = a
        if u == 0:
            return a
        return (v, -u % self.p ** r, r)

    def _mul(self, a, b):
        if a[0] is None or b[0] is None:
            return EXACT_ZERO
        if a[1] == 0 or b[1] == 0:
            return (a[0] + b[0], 0, 0)
        r = min(a[2], b[2])
        return (a[0] + b[0], a[1] * b[1] % self.p ** r, r)

    def _inv(self, a):
        v, u, r = a
        if v is None:
            raise ZeroDivisionError(f"division by zero in {self.spec()}")
        if u == 0:
            raise PrecisionError(f"cannot invert O({self.p}^{v})")
        return (-v, pow(u, -1, self.p ** r), r)

    def _is_zero(self, a):
        return a[1] == 0

    def _eq(self, a, b):
        return self._is_zero(self._sub(a, b))

    def _hash(self, a):
        return hash(a)

    def _sort_key(self, a):
        v, u, r = a
        return (-1 if v is None else 0, v or 0, u)

    def _pivot_key(self, a):
        return a[0] if a[1] else 10 ** 9

    def is_exact_zero(self, x) -> bool:
        return self.coerce(x).rep[0] is None

    def valuation(self, x):
        """``v_p(x)``, ``None`` for exact zero; raises for a zero known only to precision."""
        v, u, r = self.coerce(x).rep
        if v is None:
            return None
        if u == 0:
            raise PrecisionError(f"valuation of O({self.p}^{v}) is indeterminate")
        return v

    def absolute_precision(self, x):
        return self._absprec(self.coerce(x).rep)

    def unit_part(self, x) -> tuple[int, int]:
        """``(u, r)`` with ``x = p^v * u`` and ``u`` known modulo ``p^r``."""
        v, u, r = self.coerce(x).rep
        return u, r

    def digits(self, x) -> tuple[int, list[int]]:
        v, u, r = self.coerce(x).rep
        out = []
        for _ in range(r):
            out.append(u % self.p)
            u //= self.p
        return (v or 0), out

    def _fmt(self, a):
        v, u, r = a
        if v is None:
            return "0"
        p = self.p
        terms = []
        for i in range(r):
            d = u % p
            u //= p
            if d:
                e = v + i
                mono = "" if e == 0 else (f"{p}" if e == 1 else f"{p}^{e}")
                if not mono:
                    terms.append(str(d))
                else:
                    terms.append(mono if d == 1 else f"{d}*{mono}")
        big = v + r
        terms.append(f"O({p}^{big})" if big != 1 else f"O({p})")
        return " + ".join(terms)

    def is_perfect(self) -> bool:
        return True

    def sqrt(self, x):
        """Square root for odd ``p``; ``None`` if ``x`` is not a square."""
        p = self.p
        v, u, r = self.coerce(x).rep
        if v is None:
            return self.zero
        if u == 0:
            raise PrecisionError("square root of a zero known only to precision")
        if p == 2:
            if v % 2 or u % 8 != 1 or r < 3:
                return None
            raise NotImplementedError("2-adic square roots")
        if v % 2:
            return None
        roots = [s for s in range(1, p) if (s * s - u) % p == 0]
        if not roots:
            return None
        s = roots[0]
        mod = p
        while mod < p ** r:
            mod = min(mod * mod, p ** r)
            s = (s - (s * s - u) * pow(2 * s, -1, mod)) % mod
        return FieldElement(self, (v // 2, s % p ** r, r))

    def poly_root(self, f):
        """A root of ``f`` (degree <= 3, odd ``p``), or ``None`` if there is none.

        Degree 2 uses the quadratic formula; degree 3 is decided only for
        Eisenstein polynomials and integral ones with irreducible reduction.
        """
        from ..errors import UnsupportedConfiguration
        from .finite import PrimeField
        from .poly import Poly, find_factor

        n = f.degree
        c = f.coefficients()
        if n == 1:
            return -c[0] / c[1]
        if c[0].is_zero():
            return self.zero
        if n == 2 and self.p != 2:
            disc = c[1] * c[1] - 4 * c[0] * c[2]
            r = self.sqrt(disc)
            return None if r is None else (r - c[1]) / (2 * c[2])
        if n == 3:
            monic = [x / c[n] for x in c]
            vals = [None if x.is_zero() else self.valuation(x) for x in monic]
            if vals[0] == 1 and all(v is None or v >= 1 for v in vals[1:n]):
                return None
            if all(v is None or v >= 0 for v in vals):
                Fp = PrimeField(self.p)
                red = Poly(Fp, [0 if v is None or v > 0 else self.unit_part(x)[0] for v, x in zip(vals, monic)])
                if find_factor(red) is None:
                    return None
        raise UnsupportedConfiguration(f"root finding for degree {n} over {self.spec()}")

    def random(self, rng, nonzero=False, vmin=0, vmax=3, **kw):
        p = self.p
        if not nonzero and rng.random() < 0.05:
            return self.zero
        while True:
            u = rng.randrange(1, p ** self.prec)
            if u % p:
                break
        return FieldElement(self, (rng.randint(vmin, vmax), u, self.prec))

    def spec(self) -> str:
        return f"padic({self.p}, prec={self.prec})"
