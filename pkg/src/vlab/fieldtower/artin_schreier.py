"""Artin-Schreier classes ``c mod {z^p - z}`` over finite fields and F_q(u).

``as_reduce(F, c)`` returns ``(vector, d)`` where ``c - (d^p - d)`` is the
reduced representative of the class of ``c`` and ``vector`` lists its
coordinates over F_p. Reduced representatives over F_q(u) have principal
parts with pole orders prime to p, a polynomial part with exponents prime
to p, and a constant fixed by its absolute trace; they are unique in their
class, so ``c`` is of the form ``z^p - z`` exactly when its vector is zero.
"""

from __future__ import annotations

from ..errors import UnsupportedConfiguration
from .base import Field, FieldElement
from .poly import Poly, factor_squarefree_trial, pow_mod, poly_xgcd


def fp_solve(rows: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """Solve ``rows * x = rhs`` over F_p; free variables are set to 0."""
    m = [list(r) + [b % p] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] % p:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(m)):
        if m[i][ncols] % p:
            return None
    x = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = m[i][ncols]
    return x


def fp_basis(F: Field) -> list[FieldElement]:
    basis = getattr(F, "fp_basis", None)
    if basis is not None:
        return basis()
    from .finite import PrimeField
    from .extension import SimpleExtension

    if isinstance(F, PrimeField):
        return [F.one]
    if isinstance(F, SimpleExtension) and F.base.is_finite:
        out = []
        g = F.gen
        for i in range(F.degree):
            gi = g ** i
            out.extend(F.coerce(b) * gi for b in fp_basis(F.base))
        return out
    raise UnsupportedConfiguration(f"{F.spec()} has no F_p-basis")


def wp(x: FieldElement) -> FieldElement:
    """The Artin-Schreier operator ``x^p - x``."""
    return x ** x.field.characteristic - x


def solve_wp_linear(F: Field, c) -> FieldElement | None:
    """Some ``z`` in the finite field ``F`` with ``z^p - z = c``, or ``None``."""
    c = F.coerce(c)
    p = F.characteristic
    basis = fp_basis(F)
    cols = [F.to_fp_vector(wp(b)) for b in basis]
    dim = len(cols[0])
    rows = [[cols[j][i] for j in range(len(basis))] for i in range(dim)]
    sol = fp_solve(rows, list(F.to_fp_vector(c)), p)
    if sol is None:
        return None
    z = F.zero
    for lam, b in zip(sol, basis):
        if lam:
            z = z + b * lam
    return z


def _trace_one(F: Field) -> FieldElement:
    for b in fp_basis(F):
        if F.trace(b) != F.zero:
            return b * F.trace(b).inverse()
    raise AssertionError("the trace form of a finite field is nonzero")


def _as_reduce_finite(F: Field, c: FieldElement):
    tr = F.trace(c)
    e = _trace_one(F)
    d = solve_wp_linear(F, c - tr * e)
    assert d is not None
    k = F.to_fp_vector(tr)[0]
    vec = {("const",): k} if k else {}
    return vec, d


def partial_fractions(K, x, factors: list[Poly]):
    """Return ``(P, parts)`` with ``x = P + sum a_k / pi^k``.

    ``parts`` maps each irreducible ``pi`` (by position in ``factors``) to a list
    ``[a_1, a_2, ...]`` of polynomials of degree below ``deg pi``.
    """
    num, den = K.numerator(x), K.denominator(x)
    P, r = divmod(num, den)
    parts: dict[int, list[Poly]] = {}
    for idx, pi in enumerate(factors):
        m = 0
        rest = den
        while True:
            q, rr = divmod(rest, pi)
            if not rr.is_zero():
                break
            rest, m = q, m + 1
        if m == 0:
            continue
        pim = pi ** m
        g, s, _ = poly_xgcd(rest, pim)
        A = (r * s) % pim
        digits = []
        for _ in range(m):
            A, a = divmod(A, pi)
            digits.append(a)
        # digits[i] is the coefficient of pi^i in A, i.e. of 1/pi^(m-i)
        parts[idx] = [digits[m - k] for k in range(1, m + 1)]
    return P, parts


def _residue_pth_root(a: Poly, pi: Poly) -> Poly:
    F = pi.field
    Q = F.order ** pi.degree
    return pow_mod(a, Q // F.characteristic, pi)


def _as_reduce_ratfunc(K, c: FieldElement):
    F = K.base
    p = K.characteristic
    den = K.denominator(c)
    factors = [g for g, _ in factor_squarefree_trial(den)] if den.degree > 0 else []
    d = K.zero
    while True:
        P, parts = partial_fractions(K, c, factors)
        step = None
        for idx, coeffs in parts.items():
            for k in range(len(coeffs), 0, -1):
                if k % p == 0 and not coeffs[k - 1].is_zero():
                    pi = factors[idx]
                    s = _residue_pth_root(coeffs[k - 1], pi)
                    step = K.make(s, pi ** (k // p))
                    break
            if step is not None:
                break
        if step is None:
            for e in range(P.degree, 0, -1):
                b = P[e]
                if e % p == 0 and not b.is_zero():
                    root = F.pth_root(b)
                    step = K.coerce(root) * K.gen ** (e // p)
                    break
        if step is None:
            break
        c = c - wp(step)
        d = d + step
    P, parts = partial_fractions(K, c, factors)
    c0 = P[0]
    if not c0.is_zero():
        vec0, d0 = _as_reduce_finite(F, c0)
        d = d + K.coerce(d0)
        c = c - wp(K.coerce(d0))
    else:
        vec0 = {}
    vec: dict = dict(vec0)
    for e in range(1, P.degree + 1):
        for j, x in enumerate(F.to_fp_vector(P[e])):
            if x:
                vec[("inf", e, j)] = x
    for idx, coeffs in parts.items():
        key = tuple(F._sort_key(r) for r in factors[idx].coeffs)
        for k, a in enumerate(coeffs, start=1):
            for i, ai in enumerate(a.coefficients()):
                for j, x in enumerate(F.to_fp_vector(ai)):
                    if x:
                        vec[(key, k, i, j)] = x
    return vec, d


def as_reduce(F: Field, c):
    from .ratfunc import RationalFunctionField

    c = F.coerce(c)
    if F.is_finite:
        return _as_reduce_finite(F, c)
    if isinstance(F, RationalFunctionField) and F.base.is_finite:
        return _as_reduce_ratfunc(F, c)
    raise UnsupportedConfiguration(f"Artin-Schreier classes over {F.spec()} are not computed")
