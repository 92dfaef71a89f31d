"""Lazily Artin-Schreier-closed fields.

``LazyASClosure(base, p)`` materializes roots ``th_i`` of ``X^p - X - c_i`` on
demand. Elements are sparse sums of monomials ``prod th_i^e_i`` (``e_i < p``)
with coefficients in ``base``. A new generator is adjoined only after the
equation has been shown to have no root in the current tower, so the
materialized fragment is always a field.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

from ..errors import UnsupportedConfiguration
from .artin_schreier import as_reduce, fp_basis, fp_solve, solve_wp_linear, wp
from .base import Field, FieldElement
from .extension import solve_linear
from .poly import Poly, poly_xgcd


@dataclass
class ASGenerator:
    name: str
    relation: FieldElement  # th^p - th = relation
    vector: dict | None = None  # reduced class of the relation (non-finite bases)
    correction: FieldElement | None = None  # relation - wp(correction) is reduced


class LazyASClosure(Field):
    """Artin-Schreier closure of ``base`` built lazily; compared by identity."""

    def __init__(self, base: Field, p: int):
        if base.characteristic != p:
            raise ValueError(f"base has characteristic {base.characteristic}, not {p}")
        self.base = base
        self.p = p
        self.generators: list[ASGenerator] = []
        self._cache: dict = {}
        self._mono_cache: dict = {}
        self._lock = threading.RLock()

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def witness_log(self) -> list[ASGenerator]:
        return list(self.generators)

    # monomials are tuples of (index, exponent) with 0 < exponent < p
    def _from_base(self, r):
        if self.base._is_zero(r):
            return ()
        return (((), r),)

    def _from_int(self, n):
        return self._from_base(self.base._from_int(n))

    def _from_fraction(self, q):
        return self._from_base(self.base._from_fraction(q))

    def _make(self, acc: dict):
        B = self.base
        return tuple(sorted(((m, c) for m, c in acc.items() if not B._is_zero(c)),
                            key=lambda mc: mc[0]))

    def _add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        B = self.base
        acc = dict(a)
        for m, c in b:
            acc[m] = B._add(acc[m], c) if m in acc else c
        return self._make(acc)

    def _neg(self, a):
        B = self.base
        return tuple((m, B._neg(c)) for m, c in a)

    def _scale(self, a, r):
        B = self.base
        return self._make({m: B._mul(c, r) for m, c in a})

    def _normal_mono(self, exps: tuple):
        """Rewrite a monomial with arbitrary exponents in reduced form."""
        hit = self._mono_cache.get(exps)
        if hit is not None:
            return hit
        p = self.p
        over = [i for i, e in exps if e >= p]
        if not over:
            out = (((tuple((i, e) for i, e in exps if e), self.base._from_int(1))),)
        else:
            i = max(over)
            e = dict(exps)[i]
            rest = [(j, f) for j, f in exps if j != i]
            # th^e = th^(e-p+1) + c * th^(e-p)
            first = self._normal_mono(tuple(sorted(rest + [(i, e - p + 1)])))
            second = self._mono_times(self.generators[i].relation.rep, tuple(sorted(rest + [(i, e - p)])))
            out = self._add(first, second)
        self._mono_cache[exps] = out
        return out

    def _mono_times(self, a, exps: tuple):
        acc = ()
        for m, c in a:
            merged = dict(m)
            for i, e in exps:
                merged[i] = merged.get(i, 0) + e
            term = self._normal_mono(tuple(sorted((i, e) for i, e in merged.items() if e)))
            acc = self._add(acc, self._scale(term, c))
        return acc

    def _mul(self, a, b):
        if not a or not b:
            return ()
        B = self.base
        acc: dict = {}
        for m1, c1 in a:
            for m2, c2 in b:
                c = B._mul(c1, c2)
                if not m1:
                    prod = ((m2, B._from_int(1)),)
                elif not m2:
                    prod = ((m1, B._from_int(1)),)
                else:
                    merged = dict(m1)
                    for i, e in m2:
                        merged[i] = merged.get(i, 0) + e
                    prod = self._normal_mono(tuple(sorted(merged.items())))
                for m, r in prod:
                    t = B._mul(c, r)
                    acc[m] = B._add(acc[m], t) if m in acc else t
        return self._make(acc)

    def _top(self, a) -> int:
        return max((i for m, _ in a for i, _ in m), default=-1)

    def _inv(self, a):
        if not a:
            raise ZeroDivisionError(f"division by zero in {self.spec()}")
        top = self._top(a)
        if top < 0:
            return self._from_base(self.base._inv(a[0][1]))
        p = self.p
        # a = sum_j a_j th_top^j; invert modulo X^p - X - c_top over the lower tower
        parts = [dict() for _ in range(p)]
        for m, c in a:
            e = dict(m).get(top, 0)
            parts[e][tuple((i, f) for i, f in m if i != top)] = c
        A = Poly.from_reps(self, [self._make(d) for d in parts])
        rel = self.generators[top].relation.rep
        M = Poly.from_reps(self, [self._neg(rel), self._from_int(-1)] + [()] * (p - 2) + [self._from_int(1)])
        g, s, _ = poly_xgcd(A, M)
        if g.degree != 0:
            raise ZeroDivisionError("element is a zero divisor; the tower is not a field")
        out = ()
        for j, coeff in enumerate(s.coeffs):
            if coeff:
                out = self._add(out, self._mono_times(coeff, ((top, j),) if j else ()))
        return out

    def _is_zero(self, a):
        return not a

    def _eq(self, a, b):
        if len(a) != len(b):
            return False
        B = self.base
        return all(m1 == m2 and B._eq(c1, c2) for (m1, c1), (m2, c2) in zip(a, b))

    def _hash(self, a):
        return hash(tuple((m, self.base._hash(c)) for m, c in a))

    def _constant_term(self, a):
        for m, c in a:
            if not m:
                return c
        return self.base._from_int(0)

    def _sort_key(self, a):
        return (self.base._sort_key(self._constant_term(a)),
                tuple((m, self.base._sort_key(c)) for m, c in a if m))

    def _fmt(self, a):
        if not a:
            return "0"
        B = self.base
        parts = []
        for m, c in a:
            mono = "*".join(self.generators[i].name + (f"^{e}" if e > 1 else "") for i, e in m)
            cs = B._fmt(c)
            if not mono:
                parts.append(cs)
            elif B._eq(c, B._from_int(1)):
                parts.append(mono)
            else:
                if any(ch in cs for ch in "+- /"):
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def _own_gens(self):
        one = self.base._from_int(1)
        return {g.name: FieldElement(self, ((((i, 1),), one),)) for i, g in enumerate(self.generators)}

    def constant_term(self, x) -> FieldElement:
        return self.base.element(self._constant_term(self.coerce(x).rep))

    def generators_in(self, x) -> list[int]:
        return sorted({i for m, _ in self.coerce(x).rep for i, _ in m})

    def in_base(self, x) -> bool:
        return all(not m for m, _ in self.coerce(x).rep)

    def sqrt(self, x):
        """Square roots of base elements for odd ``p``; adjoined roots have degree ``p``,
        so a base non-square stays a non-square."""
        x = self.coerce(x)
        if self.p == 2:
            raise ValueError("use pth_root in characteristic 2")
        if not self.in_base(x):
            raise UnsupportedConfiguration("square roots of elements involving adjoined generators")
        B = self.base
        c = self.constant_term(x)
        fn = getattr(B, "sqrt", None)
        if fn is not None:
            r = fn(c)
        else:
            r = next((y for y in B.elements() if y * y == c), None) if B.is_finite else None
        return None if r is None else self.coerce(r)

    # Artin-Schreier roots -------------------------------------------------
    def _canonical(self, z: FieldElement) -> FieldElement:
        roots = [z + j for j in range(self.p)]
        return min(roots, key=lambda r: self._sort_key(r.rep))

    def artin_schreier_root(self, c) -> FieldElement:
        """The canonical root of ``X^p - X = c``, adjoining a generator if needed."""
        c = self.coerce(c)
        key = self._hash(c.rep)
        with self._lock:
            for cached_c, root in self._cache.get(key, ()):
                if cached_c == c:
                    return root
            if self.base.is_finite:
                z = solve_wp_linear(self, c)
                if z is None:
                    z = self._adjoin(c, None, None)
            else:
                z = self._solve_over_function_field(c)
            root = self._canonical(z)
            self._cache.setdefault(key, []).append((c, root))
            return root

    def _solve_over_function_field(self, c: FieldElement) -> FieldElement:
        if not self.in_base(c):
            raise UnsupportedConfiguration(
                "Artin-Schreier equations with coefficients outside the base are only solved over finite bases")
        vec, d = as_reduce(self.base, self.constant_term(c))
        lam = self._express(vec)
        if lam is None:
            return self._adjoin(c, vec, self.coerce(d))
        # c = wp(d) + sum lam_i (wp(th_i) - wp(d_i)) since wp is F_p-linear
        z = self.coerce(d)
        gens = list(self._own_gens().values())
        for coeff, g, th in zip(lam, self.generators, gens):
            if coeff:
                z = z + (th - g.correction) * coeff
        return z

    def _express(self, vec: dict) -> list[int] | None:
        if not self.generators:
            return [] if not vec else None
        keys = sorted(set(vec).union(*(g.vector for g in self.generators)), key=repr)
        if not keys:
            return [0] * len(self.generators)
        rows = [[g.vector.get(k, 0) for g in self.generators] for k in keys]
        return fp_solve(rows, [vec.get(k, 0) for k in keys], self.p)

    def _adjoin(self, c: FieldElement, vec, corr) -> FieldElement:
        i = len(self.generators)
        self.generators.append(ASGenerator(f"th{i + 1}", c, vec, corr))
        self._mono_cache.clear()
        return FieldElement(self, ((((i, 1),), self.base._from_int(1)),))

    def verify_log(self) -> bool:
        """Every recorded relation ``th^p - th = c`` holds exactly."""
        gens = list(self._own_gens().values())
        return all(wp(th) == g.relation for th, g in zip(gens, self.generators))

    # finite-fragment features ---------------------------------------------
    def _monomials(self):
        n = len(self.generators)
        for exps in itertools.product(range(self.p), repeat=n):
            yield tuple((i, e) for i, e in enumerate(exps) if e)

    def fp_basis(self) -> list[FieldElement]:
        if not self.base.is_finite:
            raise UnsupportedConfiguration("the fragment is not finite over F_p")
        out = []
        one = self.base._from_int(1)
        base_basis = fp_basis(self.base)
        for m in self._monomials():
            mono = FieldElement(self, ((m, one),))
            out.extend(mono * self.coerce(b) for b in base_basis)
        return out

    def to_fp_vector(self, x) -> tuple[int, ...]:
        x = self.coerce(x)
        coeffs = dict(x.rep)
        out: list[int] = []
        for m in self._monomials():
            c = coeffs.get(m)
            out.extend(self.base.to_fp_vector(self.base.element(c if c is not None else self.base._from_int(0))))
        return tuple(out)

    @property
    def fragment_order(self) -> int:
        return self.base.order ** (self.p ** len(self.generators))

    def fragment_elements(self):
        """Enumerate the currently materialized (finite) fragment."""
        if not self.base.is_finite:
            raise UnsupportedConfiguration("the fragment is infinite")
        base_elems = [e.rep for e in self.base.elements()]
        monos = list(self._monomials())
        for coeffs in itertools.product(base_elems, repeat=len(monos)):
            yield FieldElement(self, self._make(dict(zip(monos, coeffs))))

    def trace(self, x) -> FieldElement:
        """Absolute trace of the finite fragment down to F_p."""
        x = self.coerce(x)
        acc = x
        y = x
        deg = self.base.degree_over_prime * self.p ** len(self.generators)
        for _ in range(deg - 1):
            y = y ** self.p
            acc = acc + y
        return acc

    def is_perfect(self) -> bool:
        return self.base.is_perfect()

    def has_pth_root(self, x):
        x = self.coerce(x)
        p = self.p
        if self.base.is_finite:
            return True, x ** (self.fragment_order // p)
        S = self.generators_in(x)
        if not S:
            ok, w = self.base.has_pth_root(self.constant_term(x))
            return ok, (self.coerce(w) if ok else None)
        # {prod th_i^(p*m_i)} over i in S is a base-basis of base(th_S) whose
        # span over base^p is the p-th powers
        gens = list(self._own_gens().values())
        monos = [tuple(zip(S, exps)) for exps in itertools.product(range(p), repeat=len(S))]
        index = {tuple((i, e) for i, e in m if e): k for k, m in enumerate(monos)}
        cols = []
        for m in monos:
            elt = self.one
            for i, e in m:
                elt = elt * gens[i] ** (p * e)
            col = [self.base._from_int(0)] * len(monos)
            for mm, c in elt.rep:
                col[index[mm]] = c
            cols.append(col)
        n = len(monos)
        rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [self.base._from_int(0)] * n
        for mm, c in x.rep:
            rhs[index[mm]] = c
        ys = solve_linear(self.base, rows, rhs)
        if ys is None:
            raise ArithmeticError("p-power basis is singular")
        witness = self.zero
        for m, y in zip(monos, ys):
            ok, w = self.base.has_pth_root(self.base.element(y))
            if not ok:
                return False, None
            mono = self.one
            for i, e in m:
                mono = mono * gens[i] ** e
            witness = witness + self.coerce(w) * mono
        return True, witness

    def random(self, rng, nonzero=False, use_generators=False, **kw):
        while True:
            x = self.coerce(self.base.random(rng, **kw))
            if use_generators and self.generators:
                g = list(self._own_gens().values())[rng.randrange(len(self.generators))]
                x = x + self.coerce(self.base.random(rng, **kw)) * g
            if not (nonzero and x.is_zero()):
                return x

    def spec(self) -> str:
        return f"lazy_as({self.base.spec()}, {self.p})"

    def __repr__(self):
        return f"LazyASClosure({self.base.spec()}, {self.p}; {len(self.generators)} generators)"
