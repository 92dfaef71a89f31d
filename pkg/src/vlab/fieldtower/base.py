from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterator

from ..errors import UnsupportedConfiguration


class FieldElement:
    """An element of a declared field; arithmetic is delegated to the field."""

    __slots__ = ("field", "rep")

    def __init__(self, field: "Field", rep: Any):
        self.field = field
        self.rep = rep

    def _other(self, other):
        if isinstance(other, FieldElement) and other.field is self.field:
            return other.rep
        try:
            return self.field.coerce(other).rep
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._add(self.rep, o))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._sub(self.rep, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._sub(o, self.rep))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._mul(self.rep, o))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._mul(self.rep, self.field._inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._mul(o, self.field._inv(self.rep)))

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.rep))

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field._pow(self.rep, n))

    def inverse(self):
        return FieldElement(self.field, self.field._inv(self.rep))

    def is_zero(self) -> bool:
        return self.field._is_zero(self.rep)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.field._eq(self.rep, o)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return self.field._hash(self.rep)

    def __str__(self):
        return self.field._fmt(self.rep)

    def __repr__(self):
        return f"<{self.field.spec()}: {self}>"


class Field:
    """Abstract field descriptor working on raw representations."""

    characteristic: int = 0
    orderable: bool = False
    is_finite: bool = False

    def __call__(self, x=0) -> FieldElement:
        return self.coerce(x)

    def element(self, rep) -> FieldElement:
        return FieldElement(self, rep)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, self._from_int(0))

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, self._from_int(1))

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field is self or x.field == self:
                return FieldElement(self, x.rep)
            base = getattr(self, "base", None)
            if base is None:
                raise TypeError(f"cannot coerce {x.field.spec()} into {self.spec()}")
            return FieldElement(self, self._from_base(base.coerce(x).rep))
        if isinstance(x, bool):
            raise TypeError("bool is not a field element")
        if isinstance(x, int):
            return FieldElement(self, self._from_int(x))
        if isinstance(x, Fraction):
            return FieldElement(self, self._from_fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.spec()}")

    def _from_fraction(self, q: Fraction):
        num = self._from_int(q.numerator)
        return self._mul(num, self._inv(self._from_int(q.denominator)))

    def _from_base(self, rep):
        raise TypeError(f"{self.spec()} has no base field")

    def _sub(self, a, b):
        return self._add(a, self._neg(b))

    def _eq(self, a, b) -> bool:
        return self._is_zero(self._sub(a, b))

    def _hash(self, rep) -> int:
        return hash(rep)

    def _pow(self, rep, n: int):
        if n < 0:
            rep = self._inv(rep)
            n = -n
        result = self._from_int(1)
        while n:
            if n & 1:
                result = self._mul(result, rep)
            n >>= 1
            if n:
                rep = self._mul(rep, rep)
        return result

    def _sort_key(self, rep):
        return rep

    def sort_key(self, x: FieldElement):
        return self._sort_key(self.coerce(x).rep)

    # structural queries
    def tower(self) -> list["Field"]:
        """This field followed by its base fields, innermost last."""
        out = [self]
        while getattr(out[-1], "base", None) is not None:
            out.append(out[-1].base)
        return out

    def gens(self) -> dict[str, FieldElement]:
        names = {}
        for f in reversed(self.tower()):
            for name, g in f._own_gens().items():
                names[name] = self.coerce(g)
        return names

    def _own_gens(self) -> dict[str, FieldElement]:
        return {}

    def is_perfect(self) -> bool:
        raise UnsupportedConfiguration(f"perfection of {self.spec()} is not decided")

    def has_pth_root(self, x) -> tuple[bool, FieldElement | None]:
        raise UnsupportedConfiguration(f"p-th roots in {self.spec()} are not decided")

    def frobenius(self, x) -> FieldElement:
        if self.characteristic == 0:
            raise ValueError("frobenius needs positive characteristic")
        return self.coerce(x) ** self.characteristic

    def sign(self, x) -> int:
        raise UnsupportedConfiguration(f"{self.spec()} carries no order")

    def elements(self) -> Iterator[FieldElement]:
        raise UnsupportedConfiguration(f"{self.spec()} is not enumerable")

    def random(self, rng, **kw) -> FieldElement:
        raise UnsupportedConfiguration(f"no sampler for {self.spec()}")

    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.spec()

    def _fmt(self, rep) -> str:
        return str(rep)


def frobenius(a: FieldElement, p: int | None = None) -> FieldElement:
    if p is not None and p != a.field.characteristic:
        raise ValueError(f"characteristic is {a.field.characteristic}, not {p}")
    return a.field.frobenius(a)


def has_pth_root(a: FieldElement):
    return a.field.has_pth_root(a)


def is_perfect(field: Field) -> bool:
    return field.is_perfect()
