from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator

from ..errors import UnsupportedConfiguration
from .base import Field, FieldElement
from .finite import FiniteFieldMixin
from .poly import Poly, check_irreducible, format_poly, poly_xgcd


def solve_linear(F: Field, rows: list[list], rhs: list):
    """Solve a square linear system over ``F`` (raw reps); ``None`` if singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    key = getattr(F, "_pivot_key", None)
    for col in range(n):
        cands = [r for r in range(col, n) if not F._is_zero(m[r][col])]
        if not cands:
            return None
        piv = min(cands, key=lambda r: key(m[r][col])) if key else cands[0]
        m[col], m[piv] = m[piv], m[col]
        inv = F._inv(m[col][col])
        m[col] = [F._mul(inv, x) for x in m[col]]
        for r in range(n):
            if r != col and not F._is_zero(m[r][col]):
                f = m[r][col]
                m[r] = [F._sub(x, F._mul(f, y)) for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def determinant(F: Field, rows: list[list]):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return F._sub(F._mul(rows[0][0], rows[1][1]), F._mul(rows[0][1], rows[1][0]))
    m = [list(r) for r in rows]
    det = F._from_int(1)
    key = getattr(F, "_pivot_key", None)
    for col in range(n):
        cands = [r for r in range(col, n) if not F._is_zero(m[r][col])]
        if not cands:
            return F._from_int(0)
        piv = min(cands, key=lambda r: key(m[r][col])) if key else cands[0]
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = F._neg(det)
        det = F._mul(det, m[col][col])
        inv = F._inv(m[col][col])
        for r in range(col + 1, n):
            if not F._is_zero(m[r][col]):
                f = F._mul(m[r][col], inv)
                m[r] = [F._sub(x, F._mul(f, y)) for x, y in zip(m[r], m[col])]
    return det


@dataclass(frozen=True, eq=True)
class SimpleExtension(FiniteFieldMixin, Field):
    """``base[X]/(modulus)`` for a monic irreducible modulus.

    Representations are tuples of base representations of length
    ``degree`` (coefficients of 1, g, g^2, ...).
    """

    base: Field
    modulus: Poly = dc_field(compare=False)
    name: str = "g"
    _key: tuple = dc_field(default=(), repr=False)

    def __post_init__(self):
        m = self.modulus
        if m.field is not self.base and m.field != self.base:
            m = Poly(self.base, m.coefficients())
        if m.degree < 1:
            raise ValueError("modulus must have positive degree")
        m = m.monic()
        if m.degree > 1:
            check_irreducible(m)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "_key", tuple(m.coeffs))

    # the modulus is compared through its coefficient reps so descriptors stay hashable
    def __hash__(self):
        return hash((self.base, self._key, self.name))

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    @property
    def degree(self) -> int:
        return self.modulus.degree

    @property
    def is_finite(self) -> bool:
        return self.base.is_finite

    @property
    def order(self) -> int:
        return self.base.order ** self.degree

    @property
    def degree_over_prime(self) -> int:
        return self.base.degree_over_prime * self.degree

    @property
    def orderable(self) -> bool:
        return False

    def prime_field(self):
        return self.base.prime_field()

    # representation-level arithmetic
    def _zero(self):
        z = self.base._from_int(0)
        return (z,) * self.degree

    def _from_base(self, r):
        z = self.base._from_int(0)
        return (r,) + (z,) * (self.degree - 1)

    def _from_int(self, n):
        return self._from_base(self.base._from_int(n))

    def _from_fraction(self, q):
        return self._from_base(self.base._from_fraction(q))

    def _add(self, a, b):
        B = self.base
        return tuple(B._add(x, y) for x, y in zip(a, b))

    def _sub(self, a, b):
        B = self.base
        return tuple(B._sub(x, y) for x, y in zip(a, b))

    def _neg(self, a):
        B = self.base
        return tuple(B._neg(x) for x in a)

    def _reduce(self, coeffs: list):
        B = self.base
        n = self.degree
        m = self.modulus.coeffs
        coeffs = list(coeffs)
        for i in range(len(coeffs) - 1, n - 1, -1):
            c = coeffs[i]
            if B._is_zero(c):
                continue
            for j in range(n):
                coeffs[i - n + j] = B._sub(coeffs[i - n + j], B._mul(c, m[j]))
        coeffs = coeffs[:n]
        z = B._from_int(0)
        return tuple(coeffs) + (z,) * (n - len(coeffs))

    def _mul(self, a, b):
        B = self.base
        out = [B._from_int(0)] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if B._is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = B._add(out[i + j], B._mul(x, y))
        return self._reduce(out)

    def _inv(self, a):
        if self._is_zero(a):
            raise ZeroDivisionError(f"division by zero in {self.spec()}")
        if all(self.base._is_zero(c) for c in a[1:]):
            return self._from_base(self.base._inv(a[0]))
        g, s, _ = poly_xgcd(Poly.from_reps(self.base, a), self.modulus)
        if g.degree != 0:
            raise ZeroDivisionError("element shares a factor with the modulus")
        return self._reduce(list(s.coeffs) or [self.base._from_int(0)])

    def _is_zero(self, a):
        return all(self.base._is_zero(x) for x in a)

    def _eq(self, a, b):
        return all(self.base._eq(x, y) for x, y in zip(a, b))

    def _hash(self, a):
        return hash(tuple(self.base._hash(x) for x in a))

    def _sort_key(self, a):
        return tuple(self.base._sort_key(x) for x in reversed(a))

    def _fmt(self, a):
        return format_poly(Poly.from_reps(self.base, a), self.name)

    def _own_gens(self):
        z = self.base._from_int(0)
        if self.degree == 1:
            rep = (self.base._neg(self.modulus.coeffs[0]),)
        else:
            rep = (z, self.base._from_int(1)) + (z,) * (self.degree - 2)
        return {self.name: FieldElement(self, rep)}

    @property
    def gen(self) -> FieldElement:
        return self._own_gens()[self.name]

    def coordinates(self, x) -> list[FieldElement]:
        return [self.base.element(c) for c in self.coerce(x).rep]

    def from_coordinates(self, coords) -> FieldElement:
        reps = [self.base.coerce(c).rep for c in coords]
        return FieldElement(self, self._reduce(reps))

    def multiplication_matrix(self, x) -> list[list]:
        x = self.coerce(x)
        cols = []
        y = x
        for _ in range(self.degree):
            cols.append(list(y.rep))
            y = y * self.gen
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def norm(self, x) -> FieldElement:
        return self.base.element(determinant(self.base, self.multiplication_matrix(x)))

    def embed(self, x) -> FieldElement:
        return self.coerce(self.base.coerce(x))

    # finite-field features
    def elements(self) -> Iterator[FieldElement]:
        if not self.base.is_finite:
            return super().elements()
        base_elems = [e.rep for e in self.base.elements()]
        return (FieldElement(self, tuple(c)) for c in itertools.product(base_elems, repeat=self.degree))

    def to_fp_vector(self, x) -> tuple[int, ...]:
        out: list[int] = []
        for c in self.coerce(x).rep:
            out.extend(self.base.to_fp_vector(self.base.element(c)))
        return tuple(out)

    def is_separable(self) -> bool:
        return not self.modulus.derivative().is_zero()

    def is_perfect(self) -> bool:
        if self.base.is_finite or self.characteristic == 0:
            return True
        if not self.is_separable():
            raise UnsupportedConfiguration("perfection of inseparable extensions is not tracked")
        return self.base.is_perfect()

    def has_pth_root(self, x):
        if self.base.is_finite:
            return FiniteFieldMixin.has_pth_root(self, x)
        p = self.characteristic
        if p == 0:
            raise ValueError("p-th roots need positive characteristic")
        if not self.is_separable():
            raise UnsupportedConfiguration("p-th roots in inseparable extensions are not tracked")
        x = self.coerce(x)
        # L^p = K^p(g^p) and {g^(p*i)} is a K-basis of L for separable L/K
        basis = [self.gen ** (p * i) for i in range(self.degree)]
        rows = [[basis[j].rep[i] for j in range(self.degree)] for i in range(self.degree)]
        ys = solve_linear(self.base, rows, list(x.rep))
        if ys is None:
            raise ArithmeticError("p-power basis is singular")
        roots = []
        for y in ys:
            ok, w = self.base.has_pth_root(self.base.element(y))
            if not ok:
                return False, None
            roots.append(w)
        witness = sum((self.coerce(w) * self.gen ** i for i, w in enumerate(roots)), self.zero)
        return True, witness

    def poly_root(self, f):
        if self.is_finite:
            for x in self.elements():
                if f(x).is_zero():
                    return x
            return None
        raise UnsupportedConfiguration(f"no root finder over {self.spec()}")

    def random(self, rng, nonzero=False, **kw):
        while True:
            x = FieldElement(self, tuple(self.base.random(rng, **kw).rep for _ in range(self.degree)))
            if not (nonzero and x.is_zero()):
                return x

    def spec(self) -> str:
        return f'ext({self.base.spec()}, "{format_poly(self.modulus, "X")}", gen={self.name})'


def adjoin_root(F: Field, m: Poly, name: str = "g"):
    """Adjoin a root of ``m`` to ``F``.

    Returns ``(L, embedding)``. Degree-1 moduli return ``F`` itself with the
    identity embedding. A reducible modulus raises
    :class:`~vlab.errors.ReducibleModulus` carrying the factor found.
    """
    if m.field is not F and m.field != F:
        m = Poly(F, m.coefficients())
    if m.degree == 1:
        return F, F.coerce
    L = SimpleExtension(F, m, name)
    return L, L.embed
