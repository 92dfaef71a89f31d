"""Turn parsed constructor expressions into field, group and valuation objects."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import UnsupportedConfiguration, VlabError
from ..fieldtower import (QQ_FIELD, LazyASClosure, LaurentSeriesField, PAdicField, PuiseuxSeriesField,
                          PrimeField, RationalFunctionField, SimpleExtension, gf)
from ..fieldtower.base import Field
from ..ordgroup import Component, ValueGroup
from ..valuation import Valuation
from .expr import parse_poly
from .spec import Call, FieldSpecDocument, Ident, Num, SpecSyntaxError, Str

FIELD_CONSTRUCTORS = ("gf", "qq", "ratfunc", "laurent", "puiseux", "padic", "lazy_as", "ext")


def _where(node) -> tuple[int, int]:
    return getattr(node, "line", 0) or 1, getattr(node, "col", 0) or 1


def _fail(node, msg, expected=()):
    line, col = _where(node)
    raise SpecSyntaxError(msg, line, col, expected)


def _int(node, call, what) -> int:
    if not isinstance(node, Num) or not isinstance(node.value, int):
        _fail(call, f"{call.name}: {what} must be an integer", ("integer",))
    return node.value


def _name(node, call, what) -> str:
    if isinstance(node, Ident):
        return node.name
    if isinstance(node, Str):
        return node.value
    _fail(call, f"{call.name}: {what} must be a name", ("name",))


def _arity(call: Call, lo: int, hi: int, keys=()) -> None:
    if not lo <= len(call.args) <= hi:
        want = str(lo) if lo == hi else f"{lo} to {hi}"
        _fail(call, f"{call.name} takes {want} positional arguments, got {len(call.args)}")
    for k, _ in call.kwargs:
        if k not in keys:
            _fail(call, f"{call.name}: unknown keyword '{k}'", tuple(keys) or ("no keywords",))


def build_field(node) -> Field:
    """Build a field; every error is a :class:`SpecSyntaxError` at the offending call."""
    if isinstance(node, Ident):
        if node.name == "qq":
            return QQ_FIELD
        _fail(node, f"unknown field '{node.name}'", FIELD_CONSTRUCTORS)
    if not isinstance(node, Call):
        _fail(node, "expected a field constructor", FIELD_CONSTRUCTORS)
    c = node
    try:
        if c.name == "qq":
            _arity(c, 0, 0)
            return QQ_FIELD
        if c.name == "gf":
            _arity(c, 1, 1, ("name",))
            q = _int(c.args[0], c, "order")
            name = c.kw("name")
            return gf(q, _name(name, c, "name")) if name is not None else gf(q)
        if c.name == "padic":
            _arity(c, 1, 1, ("prec",))
            prec = c.kw("prec")
            p = _int(c.args[0], c, "p")
            PrimeField(p)  # rejects composite p
            return PAdicField(p, _int(prec, c, "prec") if prec is not None else 10)
        if c.name in ("ratfunc", "laurent", "puiseux"):
            keys = ("prec",) if c.name != "ratfunc" else ()
            _arity(c, 2, 2, keys)
            base = build_field(c.args[0])
            var = _name(c.args[1], c, "variable")
            if var in base.gens() or var == "X":
                _fail(c, f"{c.name}: variable '{var}' is already in use")
            if c.name == "ratfunc":
                return RationalFunctionField(base, var)
            prec = c.kw("prec")
            prec = _int(prec, c, "prec") if prec is not None else 8
            ctor = LaurentSeriesField if c.name == "laurent" else PuiseuxSeriesField
            return ctor(base, var, prec)
        if c.name == "lazy_as":
            _arity(c, 2, 2)
            base = build_field(c.args[0])
            p = _int(c.args[1], c, "p")
            if base.characteristic != p:
                _fail(c, f"characteristic mismatch: lazy_as over {base.spec()} "
                         f"(characteristic {base.characteristic}) with p = {p}",
                      (f"p = {base.characteristic}",) if base.characteristic else ())
            return LazyASClosure(base, p)
        if c.name == "ext":
            _arity(c, 2, 2, ("gen",))
            base = build_field(c.args[0])
            if not isinstance(c.args[1], Str):
                _fail(c, "ext: modulus must be a string polynomial in X", ('"X^2 - 3"',))
            gen = c.kw("gen")
            gen = _name(gen, c, "generator") if gen is not None else "g"
            m = parse_poly(base, c.args[1].value)
            return SimpleExtension(base, m, gen)
    except SpecSyntaxError:
        raise
    except (VlabError, ValueError, ZeroDivisionError) as exc:
        _fail(c, f"{c.name}: {exc}")
    _fail(c, f"unknown constructor '{c.name}'", FIELD_CONSTRUCTORS)


def build_group(node) -> ValueGroup:
    if not isinstance(node, Call) or node.name != "lex":
        _fail(node, "expected a lex(...) group", ("lex(...)",))
    comps = []
    for a in node.args:
        if isinstance(a, Ident) and a.name in ("Z", "Q"):
            comps.append(Component(Fraction(1)) if a.name == "Z" else Component(None))
        elif isinstance(a, Call) and a.name == "Z" and len(a.args) == 1 and isinstance(a.args[0], (Num, Str)):
            try:
                scale = Fraction(str(a.args[0].value))
            except ValueError:
                _fail(a, "bad scale", ("a rational such as \"1/2\"",))
            comps.append(Component(scale))
        else:
            _fail(node, "group components are Z, Q or Z(\"c\")", ("Z", "Q", 'Z("1/2")'))
    return ValueGroup(tuple(comps))


def build_valuation(K: Field, node) -> Valuation:
    if isinstance(node, Call) and node.name == "trivial" and not node.args:
        return Valuation.trivial(K)
    if not isinstance(node, Call) or node.name != "stack":
        _fail(node, "expected stack(...) or trivial()", ("stack(...)", "trivial()"))
    labels = []
    for a in node.args:
        if isinstance(a, Num):
            labels.append(str(a.value))
        elif isinstance(a, (Ident, Str)):
            labels.append(a.name if isinstance(a, Ident) else a.value)
        else:
            _fail(node, "stack labels are names, primes or strings")
    try:
        return Valuation.stack(K, *labels)
    except (UnsupportedConfiguration, ValueError) as exc:
        _fail(node, str(exc))


@dataclass
class Model:
    """A freshly built field with its named valuations."""

    field: Field
    valuations: dict

    def valuation(self, name: str | None) -> Valuation:
        if name is None:
            if "v" in self.valuations:
                return self.valuations["v"]
            if len(self.valuations) == 1:
                return next(iter(self.valuations.values()))
            raise KeyError("no default valuation; name one with v=...")
        return self.valuations[name]


def build_model(doc: FieldSpecDocument) -> Model:
    K = build_field(doc.field)
    vals = {}
    for decl in doc.valuations:
        v = build_valuation(K, decl.stack)
        if decl.group is not None:
            G = build_group(decl.group)
            if G != v.value_group:
                _fail(decl.group, f"declared group {G} but {decl.stack} has value group {v.value_group}")
        vals[decl.name] = v
    return Model(K, vals)
