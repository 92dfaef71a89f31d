"""Structural valuations on field towers.

A :class:`Valuation` is a stack of rank-1 *stages*. The first stage lives on
the field itself, each later stage on the residue field of the previous one.
The value group is the lexicographic product of the stage groups, so convex
subgroups (suffix cuts) correspond to prefixes of the stack. Coarsening keeps
a prefix, the induced valuation on the residue field keeps the suffix, and
composition concatenates.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Callable, Sequence

from .errors import UnsupportedConfiguration, VlabError
from .fieldtower.base import Field, FieldElement
from .fieldtower.extension import SimpleExtension
from .fieldtower.finite import PrimeField
from .fieldtower.padic import PAdicField, _vp
from .fieldtower.poly import Poly, find_factor
from .fieldtower.ratfunc import RationalFunctionField
from .fieldtower.rationals import RationalField
from .fieldtower.series import SeriesField
from .ordgroup import QQ, ZZ, Component, ConvexSubgroup, GroupElement, ValueGroup


class ResidueError(VlabError, ValueError):
    """Residue requested for an element outside the valuation ring."""


class DomainMismatch(VlabError, ValueError):
    pass


# rank-1 stages ---------------------------------------------------------------

class Stage:
    """A rank-1 valuation on ``domain`` with residue field ``residue_field``.

    ``value(x)`` is a Fraction (``None`` for zero). ``angular(x)`` is the
    residue of ``x / pi^value(x)`` for a fixed choice of uniformizing monomial,
    which is what the next stage of a stack evaluates.
    """

    domain: Field
    component: Component = ZZ
    label: str = ""

    @property
    def residue_field(self) -> Field:
        raise NotImplementedError

    def value(self, x: FieldElement):
        raise NotImplementedError

    def angular(self, x: FieldElement) -> FieldElement:
        raise NotImplementedError

    def lift(self, y: FieldElement) -> FieldElement:
        """A preimage of ``y`` in the valuation ring."""
        return self.domain.coerce(y)

    def uniformizer(self) -> FieldElement:
        raise NotImplementedError

    def residue(self, x: FieldElement) -> FieldElement:
        v = self.value(x)
        if v is None or v > 0:
            return self.residue_field.zero
        if v < 0:
            raise ResidueError(f"{x} is not integral for {self.label}")
        return self.angular(x)


@dataclass(frozen=True)
class SeriesStage(Stage):
    domain: SeriesField

    @property
    def component(self) -> Component:
        return QQ if self.domain.rational_exponents else ZZ

    @property
    def label(self) -> str:
        return self.domain.var

    @property
    def residue_field(self) -> Field:
        return self.domain.base

    def value(self, x):
        v = self.domain.valuation(x)
        return None if v is None else Fraction(v)

    def angular(self, x):
        return self.domain.leading_coefficient(x)

    def uniformizer(self):
        return self.domain.gen


@dataclass(frozen=True)
class PAdicStage(Stage):
    domain: PAdicField

    @property
    def label(self) -> str:
        return "padic"

    @property
    def residue_field(self) -> Field:
        return PrimeField(self.domain.p)

    def value(self, x):
        v = self.domain.valuation(x)
        return None if v is None else Fraction(v)

    def angular(self, x):
        u, _ = self.domain.unit_part(x)
        return self.residue_field(u)

    def lift(self, y):
        return self.domain(int(self.residue_field.coerce(y).rep))

    def uniformizer(self):
        return self.domain(self.domain.p)


@dataclass(frozen=True)
class RationalPStage(Stage):
    """The p-adic valuation on Q."""

    domain: RationalField
    p: int

    @property
    def label(self) -> str:
        return str(self.p)

    @property
    def residue_field(self) -> Field:
        return PrimeField(self.p)

    def value(self, x):
        q = self.domain.coerce(x).rep
        if q == 0:
            return None
        return Fraction(_vp(q.numerator, self.p) - _vp(q.denominator, self.p))

    def angular(self, x):
        q = self.domain.coerce(x).rep
        v = int(self.value(x))
        u = q / Fraction(self.p) ** v
        return self.residue_field(u)

    def lift(self, y):
        return self.domain(int(self.residue_field.coerce(y).rep))

    def uniformizer(self):
        return self.domain(self.p)


@dataclass(frozen=True)
class PlaceStage(Stage):
    """Order of vanishing of a rational function at ``u = point`` (or at infinity)."""

    domain: RationalFunctionField
    point: object = 0  # base-field rep, or None for the place at infinity

    @property
    def label(self) -> str:
        var = self.domain.var
        if self.point is None:
            return "inf"
        pt = self.domain.base.element(self.point)
        return var if pt.is_zero() else f"{var}-{pt}"

    @property
    def residue_field(self) -> Field:
        return self.domain.base

    def _local(self, x):
        K = self.domain
        x = K.coerce(x)
        if self.point is None:
            return None
        pi = Poly(K.base, [K.base.element(self.point) * -1, 1])
        out = []
        for f in (K.numerator(x), K.denominator(x)):
            k = 0
            while True:
                q, r = divmod(f, pi)
                if not r.is_zero():
                    break
                f, k = q, k + 1
            out.append((k, f))
        return out

    def value(self, x):
        K = self.domain
        x = K.coerce(x)
        if x.is_zero():
            return None
        if self.point is None:
            return Fraction(K.denominator(x).degree - K.numerator(x).degree)
        (a, _), (b, _) = self._local(x)
        return Fraction(a - b)

    def angular(self, x):
        K = self.domain
        x = K.coerce(x)
        if self.point is None:
            return K.numerator(x).lc() / K.denominator(x).lc()
        (_, f), (_, g) = self._local(x)
        pt = K.base.element(self.point)
        return f(pt) / g(pt)

    def uniformizer(self):
        K = self.domain
        if self.point is None:
            return 1 / K.gen
        return K.gen - K.base.element(self.point)


@dataclass(frozen=True)
class ExtensionStage(Stage):
    """The unique prolongation of the p-adic valuation to ``Q_p[X]/(m)``.

    Supported moduli are Eisenstein (totally ramified, the root is a
    uniformizer) and monic integral with irreducible reduction (unramified).
    """

    domain: SimpleExtension

    def __post_init__(self):
        self.kind

    @property
    def _padic(self) -> PAdicField:
        return self.domain.base

    @cached_property
    def kind(self) -> str:
        K = self.domain.base
        if not isinstance(K, PAdicField):
            raise UnsupportedConfiguration("prolongations are implemented over p-adic fields only")
        m = self.domain.modulus
        n = m.degree
        vals = [None if c.is_zero() else K.valuation(c) for c in m.coefficients()]
        if vals[n] != 0:
            raise UnsupportedConfiguration("modulus must be monic")
        if vals[0] == 1 and all(v is None or v >= 1 for v in vals[1:n]):
            return "eisenstein"
        if all(v is None or v >= 0 for v in vals):
            if find_factor(self._reduced_modulus()) is None:
                return "unramified"
        raise UnsupportedConfiguration(f"modulus {m} is neither Eisenstein nor unramified")

    def _reduced_modulus(self) -> Poly:
        Fp = PrimeField(self._padic.p)
        return Poly(Fp, [self._reduce_int(c) for c in self.domain.modulus.coefficients()])

    def _reduce_int(self, c: FieldElement) -> int:
        K = self._padic
        if c.is_zero():
            return 0
        v = K.valuation(c)
        if v > 0:
            return 0
        if v < 0:
            raise ResidueError("coefficient is not integral")
        return K.unit_part(c)[0] % K.p

    @property
    def component(self) -> Component:
        n = self.domain.degree
        return Component(Fraction(1, n)) if self.kind == "eisenstein" else ZZ

    @property
    def label(self) -> str:
        return "padic"

    @property
    def residue_field(self) -> Field:
        if self.kind == "eisenstein":
            return PrimeField(self._padic.p)
        return SimpleExtension(PrimeField(self._padic.p), self._reduced_modulus(), self.domain.name)

    def value(self, x):
        x = self.domain.coerce(x)
        if x.is_zero():
            return None
        v = self._padic.valuation(self.domain.norm(x))
        return Fraction(v, self.domain.degree)

    def uniformizer(self):
        if self.kind == "eisenstein":
            return self.domain.gen
        return self.domain(self._padic.p)

    def angular(self, x):
        x = self.domain.coerce(x)
        v = self.value(x)
        pi = self.uniformizer()
        k = v * self.domain.degree if self.kind == "eisenstein" else v
        unit = x / pi ** int(k)
        coords = self.domain.coordinates(unit)
        if self.kind == "eisenstein":
            return self.residue_field(self._reduce_int(coords[0]))
        R = self.residue_field
        return R.from_coordinates([self._reduce_int(c) for c in coords])

    def lift(self, y):
        R = self.residue_field
        y = R.coerce(y)
        if self.kind == "eisenstein":
            return self.domain(int(y.rep))
        return self.domain.from_coordinates([int(c) for c in y.rep])


def stage_for(field: Field, label: str) -> Stage:
    """The rank-1 stage on ``field`` named by ``label``.

    Labels: the variable of a series field; ``padic`` on p-adic fields and
    their extensions; a prime ``p`` on Q; the variable (place at 0), ``var-c``
    or ``inf`` on a rational function field.
    """
    label = label.strip()
    if isinstance(field, SeriesField) and label == field.var:
        return SeriesStage(field)
    if isinstance(field, PAdicField) and label in ("padic", str(field.p)):
        return PAdicStage(field)
    if isinstance(field, SimpleExtension) and isinstance(field.base, PAdicField) and label in ("padic", str(field.base.p)):
        return ExtensionStage(field)
    if isinstance(field, RationalField) and label.isdigit():
        PrimeField(int(label))  # rejects non-primes
        return RationalPStage(field, int(label))
    if isinstance(field, RationalFunctionField):
        var = field.var
        if label == "inf":
            return PlaceStage(field, None)
        if label == var:
            return PlaceStage(field, field.base._from_int(0))
        if label.startswith(var + "-") and label[len(var) + 1:].isdigit():
            c = field.base.coerce(int(label[len(var) + 1:]))
            return PlaceStage(field, c.rep)
    raise UnsupportedConfiguration(f"no valuation stage '{label}' on {field.spec()}")


# valuations -----------------------------------------------------------------

@dataclass(frozen=True)
class Valuation:
    domain: Field
    stages: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        current = self.domain
        for st in self.stages:
            if st.domain != current:
                raise DomainMismatch(f"stage {st.label} lives on {st.domain.spec()}, expected {current.spec()}")
            current = st.residue_field

    @classmethod
    def trivial(cls, field: Field) -> "Valuation":
        return cls(field, ())

    @classmethod
    def stack(cls, field: Field, *labels: str) -> "Valuation":
        stages = []
        current = field
        for label in labels:
            st = stage_for(current, label)
            stages.append(st)
            current = st.residue_field
        return cls(field, tuple(stages))

    @property
    def value_group(self) -> ValueGroup:
        return ValueGroup(tuple(st.component for st in self.stages))

    @property
    def residue_field(self) -> Field:
        return self.stages[-1].residue_field if self.stages else self.domain

    @property
    def rank(self) -> int:
        return len(self.stages)

    @property
    def is_trivial(self) -> bool:
        return not self.stages

    def spec(self) -> str:
        if not self.stages:
            return "trivial"
        return "stack(" + ", ".join(st.label for st in self.stages) + ")"

    def __str__(self):
        return f"{self.spec()} on {self.domain.spec()}"

    def eval(self, x) -> GroupElement:
        x = self.domain.coerce(x)
        G = self.value_group
        coords = []
        for st in self.stages:
            v = st.value(x)
            if v is None:
                return G.infinity
            coords.append(v)
            x = st.angular(x)
        if not self.stages and x.is_zero():
            return G.infinity
        return G.element(coords)

    __call__ = eval

    def in_ring(self, x) -> bool:
        return self.eval(x) >= self.value_group.zero

    def in_max_ideal(self, x) -> bool:
        return self.eval(x) > self.value_group.zero

    def residue(self, x) -> FieldElement:
        x = self.domain.coerce(x)
        for st in self.stages:
            v = st.value(x)
            if v is None or v > 0:
                return self.residue_field.zero
            if v < 0:
                raise ResidueError(f"{x} is not in the valuation ring of {self.spec()}")
            x = st.angular(x)
        return x

    def lift_residue(self, y) -> FieldElement:
        y = self.residue_field.coerce(y)
        for st in reversed(self.stages):
            y = st.lift(y)
        return self.domain.coerce(y)

    def uniformizers(self) -> list[FieldElement]:
        """For each stage, an element of ``domain`` with value ``(0,..,0,c,0,..)``."""
        out = []
        for i, st in enumerate(self.stages):
            pi = st.uniformizer()
            for prev in reversed(self.stages[:i]):
                pi = prev.lift(pi)
            out.append(self.domain.coerce(pi))
        return out

    # coarsening lattice
    def _cut(self, delta: ConvexSubgroup) -> int:
        if delta.group != self.value_group:
            raise DomainMismatch(f"{delta} is not a convex subgroup of {self.value_group}")
        return delta.cut

    def coarsen(self, delta: ConvexSubgroup) -> "Valuation":
        return Valuation(self.domain, self.stages[: self._cut(delta)])

    def induced_on_residue(self, delta: ConvexSubgroup) -> "Valuation":
        k = self._cut(delta)
        return Valuation(self.coarsen(delta).residue_field, self.stages[k:])

    def coarsenings(self) -> list["Valuation"]:
        """All coarsenings from the trivial valuation to ``self``."""
        return [Valuation(self.domain, self.stages[:k]) for k in range(self.rank + 1)]

    def sample(self, rng: random.Random, **kw) -> FieldElement:
        return self.domain.random(rng, **kw)


def compose(u: Valuation, vbar: Valuation) -> Valuation:
    if vbar.domain != u.residue_field:
        raise DomainMismatch(f"{vbar.domain.spec()} is not the residue field {u.residue_field.spec()}")
    return Valuation(u.domain, u.stages + vbar.stages)


def coarsen(v: Valuation, delta: ConvexSubgroup) -> Valuation:
    return v.coarsen(delta)


def induced_on_residue(v: Valuation, delta: ConvexSubgroup) -> Valuation:
    return v.induced_on_residue(delta)


def trivial_valuation(field: Field) -> Valuation:
    return Valuation.trivial(field)


@dataclass(frozen=True)
class PlaceChain:
    """Valuations ``v_0, v_1, ...`` where each residue field is the next domain."""

    valuations: tuple

    def __post_init__(self):
        vs = tuple(self.valuations)
        object.__setattr__(self, "valuations", vs)
        for a, b in zip(vs, vs[1:]):
            if a.residue_field != b.domain:
                raise DomainMismatch(f"{a.residue_field.spec()} is not {b.domain.spec()}")

    @property
    def fields(self) -> list[Field]:
        return [self.valuations[0].domain] + [v.residue_field for v in self.valuations]

    def composite(self) -> Valuation:
        out = self.valuations[0]
        for v in self.valuations[1:]:
            out = compose(out, v)
        return out


# comparison -----------------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    relation: str  # "v finer", "equal", "w finer", "incomparable-at-samples", "undecided"
    structural: bool
    witness_v: FieldElement | None = None  # in O_v but not O_w
    witness_w: FieldElement | None = None  # in O_w but not O_v

    def __str__(self):
        s = self.relation
        if self.witness_v is not None:
            s += f" (x={self.witness_v} in O_v only, y={self.witness_w} in O_w only)"
        return s


def _candidates(v: Valuation, w: Valuation, rng, n: int):
    for val in (v, w):
        for pi in val.uniformizers():
            yield pi
            yield 1 / pi
    for _ in range(n):
        x = v.domain.random(rng, nonzero=True)
        yield x
        yield 1 / x


def compare_rings(v: Valuation, w: Valuation, rng: random.Random | None = None,
                  samples: int = 200) -> Comparison:
    if v.domain != w.domain:
        raise DomainMismatch("valuations on different fields")
    k = min(v.rank, w.rank)
    if v.stages[:k] == w.stages[:k]:
        if v.rank == w.rank:
            return Comparison("equal", True)
        return Comparison("v finer" if v.rank > w.rank else "w finer", True)
    rng = rng or random.Random(0)
    x = y = None
    for c in _candidates(v, w, rng, samples):
        in_v, in_w = v.in_ring(c), w.in_ring(c)
        if in_v and not in_w and x is None:
            x = c
        elif in_w and not in_v and y is None:
            y = c
        if x is not None and y is not None:
            return Comparison("incomparable-at-samples", False, x, y)
    # sampling never proves an inclusion
    return Comparison("undecided", False, x, y)


@dataclass(frozen=True)
class IndependenceCertificate:
    """``x`` in O_v \\ O_w, ``y`` in O_w \\ O_v, and a splitter ``q -> (a, b)``.

    The splitter writes any ``q`` as ``a*b`` with ``a`` in O_v and ``b`` in O_w,
    so the ring generated by O_v and O_w is the whole field.
    """

    v: Valuation
    w: Valuation
    x: FieldElement
    y: FieldElement
    splitter: Callable

    def verify(self, samples: Sequence[FieldElement]) -> tuple[bool, FieldElement | None]:
        v, w = self.v, self.w
        if not (v.in_ring(self.x) and not w.in_ring(self.x)):
            return False, self.x
        if not (w.in_ring(self.y) and not v.in_ring(self.y)):
            return False, self.y
        for q in samples:
            a, b = self.splitter(q)
            if not (v.in_ring(a) and w.in_ring(b) and a * b == q):
                return False, q
        return True, None

    def describe(self) -> str:
        return f"x={self.x} in O_v only; y={self.y} in O_w only; q = (q*pi^k) * pi^-k"


@dataclass(frozen=True)
class Join:
    valuation: Valuation
    kind: str  # "comparable" or "independent"
    certificate: IndependenceCertificate | None = None


def finest_common_coarsening(v: Valuation, w: Valuation) -> Join:
    cmp = compare_rings(v, w)
    if cmp.relation == "equal":
        return Join(v, "comparable")
    if cmp.relation in ("v finer", "w finer"):
        return Join(w if cmp.relation == "v finer" else v, "comparable")
    F = v.domain
    if not (v.rank == 1 and w.rank == 1 and isinstance(F, (RationalField, RationalFunctionField))
            and (F.base.is_finite if isinstance(F, RationalFunctionField) else True)):
        raise UnsupportedConfiguration("finest common coarsening needs comparable valuations "
                                       "or two rank-1 valuations on Q or F_q(u)")
    pi = v.uniformizers()[0]
    step = v.stages[0].value(pi)
    if w.eval(pi) != w.value_group.zero:
        # e.g. u at the places 0 and inf: u/(u+1) keeps v(pi) and is a w-unit
        alt = pi / (pi + 1) if not (pi + 1).is_zero() else None
        if alt is None or w.eval(alt) != w.value_group.zero or v.stages[0].value(alt) != step:
            raise UnsupportedConfiguration("no uniformizer of v is a unit for w")
        pi = alt

    def splitter(q):
        # q * pi^k is v-integral and pi^-k is a w-unit
        q = F.coerce(q)
        if q.is_zero():
            return F.zero, F.one
        k = max(0, math.ceil(-v.stages[0].value(q) / step))
        return q * pi ** k, pi ** -k

    cert = IndependenceCertificate(v, w, w.uniformizers()[0] ** -1, pi ** -1, splitter)
    return Join(Valuation.trivial(F), "independent", cert)


# convexity ------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    checked: int
    counterexample: tuple | None = None  # (x, y) with 0 <= x <= y, y in ring, x not

    def __str__(self):
        if self.convex:
            return f"convex on {self.checked} sampled pairs"
        x, y = self.counterexample
        return f"not convex: 0 <= {x} <= {y}, {y} in ring, {x} not"


def is_convex_wrt_order(ring, field: Field, rng: random.Random, samples: int = 200,
                        extra: Sequence = (), sign: Callable | None = None) -> ConvexityReport:
    """Sampled convexity of ``{x : ring.in_ring(x)}`` for the order ``sign``.

    ``ring`` is anything with an ``in_ring`` predicate. ``extra`` elements are
    tried first, paired against each other and against the samples.
    """
    if sign is None:
        if not field.orderable:
            raise UnsupportedConfiguration(f"{field.spec()} carries no order")
        sign = field.sign

    def absval(a):
        return -a if sign(a) < 0 else a

    pool = [absval(field.coerce(e)) for e in extra]
    pool += [absval(field.random(rng)) for _ in range(samples)]
    checked = 0
    members = [y for y in pool if ring.in_ring(y)]
    for y in members:
        cands = [x for x in pool[: len(extra)] if sign(y - x) >= 0]
        cands.append(y * field.coerce(Fraction(rng.randint(0, 100), 100)))
        z = field.random(rng)
        if sign(y - absval(z)) >= 0:
            cands.append(absval(z))
        for x in cands:
            checked += 1
            if not ring.in_ring(x):
                return ConvexityReport(False, checked, (x, y))
    return ConvexityReport(True, checked)
