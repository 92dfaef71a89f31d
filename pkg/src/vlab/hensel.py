"""Newton/Hensel lifting, Artin-Schreier solving and square-root witnesses."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import HenselConditionError, NoRootError, PrecisionError, UnsupportedConfiguration
from .fieldtower.artin_schreier import as_reduce, solve_wp_linear, wp
from .fieldtower.base import Field, FieldElement
from .fieldtower.extension import SimpleExtension
from .fieldtower.lazy_as import LazyASClosure
from .fieldtower.padic import PAdicField
from .fieldtower.poly import Poly, find_root, format_poly
from .fieldtower.ratfunc import RationalFunctionField
from .fieldtower.rationals import RationalField
from .fieldtower.series import SeriesField
from .valuation import (ExtensionStage, PAdicStage, RationalPStage, SeriesStage, Valuation)


@dataclass(frozen=True)
class Residual:
    """Valuation of a residual; ``bound`` means only ``>= value`` is known."""

    value: Fraction | None  # None is an exact zero
    bound: bool = False

    def at_least(self, cap) -> bool:
        return self.value is None or self.value >= cap

    def __str__(self):
        if self.value is None:
            return "inf"
        return (">=" if self.bound else "") + str(self.value)


def residual(v: Valuation, x: FieldElement) -> Residual:
    """``v(x)`` for a rank-1 ``v``, falling back to a lower bound for inexact zeros."""
    st = v.stages[0]
    try:
        return Residual(st.value(x))
    except PrecisionError as exc:
        err = exc
    F = x.field
    if isinstance(F, SeriesField):
        return Residual(Fraction(x.rep[1]), True)
    if isinstance(F, PAdicField):
        return Residual(Fraction(x.rep[0]), True)
    if isinstance(F, SimpleExtension) and isinstance(F.base, PAdicField):
        n = F.degree
        e = n if isinstance(st, ExtensionStage) and st.kind == "eisenstein" else 1
        lows = []
        for i, c in enumerate(F.coordinates(x)):
            if c.rep[0] is None:
                continue
            cv = F.base.valuation(c) if c.rep[1] else c.rep[0]
            lows.append(Fraction(cv) + Fraction(i, e))
        return Residual(min(lows) if lows else None, True)
    raise err


def precision_cap(v: Valuation) -> Fraction:
    F = v.domain
    if isinstance(F, (SeriesField, PAdicField)):
        return Fraction(F.prec)
    if isinstance(F, SimpleExtension) and isinstance(F.base, PAdicField):
        return Fraction(F.base.prec)
    raise UnsupportedConfiguration(f"no precision cap for {F.spec()}; pass cap explicitly")


@dataclass(frozen=True)
class TraceStep:
    index: int
    x: FieldElement
    residual: Residual
    derivative: Fraction | None


@dataclass
class LiftReport:
    f: Poly
    x0: FieldElement
    root: FieldElement | None = None
    trace: list = dc_field(default_factory=list)
    cap: Fraction | None = None
    converged: bool = False

    @property
    def iterations(self) -> int:
        return max(len(self.trace) - 1, 0)

    @property
    def residuals(self) -> list[Residual]:
        return [s.residual for s in self.trace]

    def doubling_holds(self) -> bool:
        """``v(f(x_{i+1})) >= 2 v(f(x_i)) - 2 v(f'(x_i))`` until the cap."""
        for a, b in zip(self.trace, self.trace[1:]):
            if b.residual.value is None or a.residual.value is None:
                continue
            need = 2 * a.residual.value - 2 * a.derivative
            if self.cap is not None:
                need = min(need, self.cap)
            if b.residual.value < need:
                return False
        return True

    def to_log(self, var: str = "X") -> str:
        lines = [f"hensel f={format_poly(self.f, var)} x0={self.x0}"]
        for s in self.trace:
            lines.append(f"step {s.index} residual {s.residual}")
        status = "converged" if self.converged else "stopped"
        lines.append(f"root {self.root} {status} cap {self.cap}")
        return "\n".join(lines) + "\n"


def hensel_lift(v: Valuation, f: Poly, x0, cap=None, max_steps: int = 64) -> LiftReport:
    """Newton iteration from ``x0`` until ``v(f(x)) >= cap``."""
    if v.rank != 1:
        raise UnsupportedConfiguration("Hensel lifting is implemented for rank-1 valuations")
    F = v.domain
    if f.field != F:
        f = Poly(F, f.coefficients())
    x = F.coerce(x0)
    for c in f.coefficients():
        if not c.is_zero() and not v.in_ring(c):
            raise HenselConditionError(f"coefficient {c} is not integral")
    cap = precision_cap(v) if cap is None else Fraction(cap)
    df = f.derivative()
    report = LiftReport(f, x, cap=cap)
    for i in range(max_steps + 1):
        r = residual(v, f(x))
        d = df(x)
        dv = None if d.is_zero() else v.stages[0].value(d)
        report.trace.append(TraceStep(i, x, r, dv))
        if r.at_least(cap):
            report.root, report.converged = x, True
            return report
        if i == 0:
            if dv is None or not r.value > 2 * dv:
                raise HenselConditionError(
                    f"v(f(x0)) = {r} is not greater than 2 v(f'(x0)) = {None if dv is None else 2 * dv}")
        if i == max_steps:
            break
        x = x - f(x) / d
    report.root = x
    return report


# Artin-Schreier -------------------------------------------------------------

def canonical_as_root(z: FieldElement) -> FieldElement:
    """Among ``z, z+1, ..., z+p-1`` the one with least constant-term key."""
    F = z.field
    p = F.characteristic
    return min((z + j for j in range(p)), key=lambda r: _constant_key(F, r))


def _constant_key(F: Field, r: FieldElement):
    if isinstance(F, SeriesField):
        return (_constant_key(F.base, F.coefficient(r, 0)), F.sort_key(r))
    if isinstance(F, LazyASClosure):
        return F.sort_key(r)
    if isinstance(F, RationalFunctionField):
        num, den = F.numerator(r), F.denominator(r)
        q, rem = divmod(num, den)
        return (F.base.sort_key(q[0]), F.sort_key(r))
    return F.sort_key(r)


def artin_schreier_solve(F: Field, c) -> FieldElement:
    """A root of ``z^p - z = c`` (the canonical one), or :class:`NoRootError`."""
    p = F.characteristic
    if p == 0:
        raise ValueError("Artin-Schreier equations need positive characteristic")
    c = F.coerce(c)
    if c.is_zero():
        return F.zero
    if isinstance(F, LazyASClosure):
        return F.artin_schreier_root(c)
    if F.is_finite:
        z = solve_wp_linear(F, c)
        if z is None:
            raise NoRootError(f"no root in ground field: trace of {c} is nonzero")
        return canonical_as_root(z)
    if isinstance(F, RationalFunctionField) and F.base.is_finite:
        vec, d = as_reduce(F, c)
        if vec:
            raise NoRootError(f"{c} is not of the form z^{p} - z in {F.spec()}")
        return canonical_as_root(F.coerce(d))
    if isinstance(F, SeriesField):
        return canonical_as_root(_as_solve_series(F, c))
    raise UnsupportedConfiguration(f"Artin-Schreier equations over {F.spec()}")


def _as_solve_series(F: SeriesField, c: FieldElement) -> FieldElement:
    p = F.characteristic
    B = F.base
    head = F.zero
    # strip poles: c_e t^e with p | e equals wp(c_e^(1/p) t^(e/p)) + c_e^(1/p) t^(e/p)
    while True:
        terms = [(e, a) for e, a in F.terms(c) if e < 0]
        if not terms:
            break
        e, a = terms[0]
        if Fraction(e) / p != int(Fraction(e) / p) and not F.rational_exponents:
            raise NoRootError(f"pole of order {-e} prime to {p}: no root in {F.spec()}")
        ok, w = B.has_pth_root(a)
        if not ok:
            raise NoRootError(f"coefficient {a} of t^{e} is not a p-th power")
        step = F.monomial(w, F._exp(Fraction(e) / p))
        head = head + step
        c = c - wp(step)
    c0 = F.coefficient(c, 0)
    z0 = F.coerce(artin_schreier_solve(B, c0))
    v = Valuation(F, (SeriesStage(F),))
    X = Poly.x(F)
    f = X ** p - X - Poly(F, [c])
    rep = hensel_lift(v, f, z0)
    # f' = -1 is a unit, so the true root agrees with rep.root up to the last residual
    root = rep.root
    last = rep.trace[-1].residual.value
    if last is not None:
        known = root.rep[1]
        root = F.from_terms(F.terms(root), prec=last if known is None else min(known, last))
    return head + root


# square roots ---------------------------------------------------------------

@dataclass(frozen=True)
class SqrtWitness:
    root: FieldElement | None
    reason: str

    @property
    def present(self) -> bool:
        return self.root is not None


def sqrt_witness(F: Field, a) -> SqrtWitness:
    a = F.coerce(a)
    if a.is_zero():
        return SqrtWitness(F.zero, "zero")
    if F.is_finite:
        for y in F.elements():
            if y * y == a:
                return SqrtWitness(y, "exhaustive search")
        return SqrtWitness(None, "no square root by exhaustive search")
    if isinstance(F, RationalField):
        r = F.sqrt(a)
        return SqrtWitness(r, "rational square") if r is not None else SqrtWitness(None, "not a rational square")
    if isinstance(F, PAdicField):
        r = F.sqrt(a)
        return SqrtWitness(r, "Hensel") if r is not None else SqrtWitness(None, "residue or valuation obstruction")
    if isinstance(F, SeriesField):
        e = F.valuation(a)
        if not F.rational_exponents and e % 2 and F.characteristic != 2:
            return SqrtWitness(None, f"odd leading exponent {e}")
        lead = F.leading_coefficient(a)
        base = sqrt_witness(F.base, lead)
        if not base.present:
            return SqrtWitness(None, f"leading coefficient {lead} is not a square: {base.reason}")
        r = F.sqrt(a)
        if r is None:
            return SqrtWitness(None, "no square root in the represented fragment")
        return SqrtWitness(r, "Hensel")
    if isinstance(F, (LazyASClosure, RationalFunctionField)) and F.characteristic != 2:
        r = F.sqrt(a)
        return SqrtWitness(r, "square root") if r is not None else SqrtWitness(None, "not a square")
    if F.characteristic == 2:
        ok, w = F.has_pth_root(a)
        return SqrtWitness(w, "p-th root") if ok else SqrtWitness(None, "not a square (p-basis)")
    raise UnsupportedConfiguration(f"square roots in {F.spec()}")


# henselianity ---------------------------------------------------------------

@dataclass
class SpotCheckReport:
    verdict: str  # "no counterexample in budget", "counterexample", "vacuous"
    tried: int
    counterexample: tuple | None = None  # (f, x0, reason)
    lifts: list = dc_field(default_factory=list)

    def __str__(self):
        noun = "polynomial" if self.tried == 1 else "polynomials"
        s = f"{self.verdict} ({self.tried} {noun}; evidence, not proof)"
        if self.counterexample:
            f, x0, why = self.counterexample
            s += f": f={format_poly(f, 'X')} x0={x0}: {why}"
        return s


def _probe(v: Valuation, rng: random.Random, degree: int):
    """A monic ``f = (X - x0) g + pi h`` whose reduction has the simple root ``x0``."""
    F = v.domain
    k = v.residue_field
    pi = v.uniformizers()[0]
    X = Poly.x(F)
    a = k.random(rng)
    x0 = v.lift_residue(a)

    def integral():
        while True:
            r = v.lift_residue(k.random(rng))
            if rng.random() < 0.5:
                r = r + pi * v.lift_residue(k.random(rng))
            return r

    while True:
        g = Poly(F, [integral() for _ in range(degree - 1)] + [F.one])
        if not v.residue(g(x0)).is_zero():
            break
    h = Poly(F, [integral() for _ in range(degree)])
    return (X - Poly(F, [x0])) * g + h.scale(pi), x0


def henselianity_spot_check(v: Valuation, rng: random.Random, budget: int = 100,
                            probes=()) -> SpotCheckReport:
    """Lift simple residue roots of sampled monic polynomials (degree <= 4)."""
    if v.is_trivial:
        return SpotCheckReport("vacuous", 0)
    if v.rank != 1:
        raise UnsupportedConfiguration("spot checks are implemented for rank-1 valuations")
    st = v.stages[0]
    report = SpotCheckReport("no counterexample in budget", 0)
    items = list(probes) + [_probe(v, rng, rng.randint(2, 4)) for _ in range(budget)]
    for f, x0 in items:
        report.tried += 1
        if isinstance(st, RationalPStage):
            r = find_root(f)
            if r is None or not v.in_max_ideal(r - x0):
                report.verdict = "counterexample"
                report.counterexample = (f, x0, "simple residue root with no root in the field")
                return report
            report.lifts.append(r)
            continue
        if not isinstance(st, (SeriesStage, PAdicStage, ExtensionStage)):
            raise UnsupportedConfiguration(f"no lifting procedure for stage {st.label}")
        rep = hensel_lift(v, f, x0)
        if not rep.converged:
            report.verdict = "counterexample"
            report.counterexample = (f, x0, "Newton iteration did not reach the cap")
            return report
        report.lifts.append(rep.root)
    return report
