"""Lexicographic products of rank-1 ordered abelian groups.

A :class:`ValueGroup` is a finite lexicographic product of archimedean
components, each either ``c*Z`` for a positive rational ``c`` or the full
rational line ``Q``. The first component is the most significant one.
Convex subgroups of such a product are exactly the suffix cuts, which makes
the lattice of coarsenings finite and decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence


class GroupMismatch(ValueError):
    """Raised when elements of different value groups are combined."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _rational_gcd(values: Iterable[Fraction]) -> Fraction:
    num = 0
    den = 1
    for v in values:
        v = _frac(v)
        if v == 0:
            continue
        num = gcd(num, abs(v.numerator))
        den = den * v.denominator // gcd(den, v.denominator)
    if num == 0:
        raise ValueError("a c*Z component needs a nonzero generator")
    return Fraction(num, den)


@dataclass(frozen=True)
class Component:
    """One archimedean component: ``scale*Z`` or, with ``scale=None``, Q."""

    scale: Fraction | None = Fraction(1)

    @classmethod
    def generated_by(cls, generators: Sequence) -> "Component":
        return cls(_rational_gcd(generators))

    @property
    def divisible(self) -> bool:
        return self.scale is None

    def contains(self, x: Fraction) -> bool:
        if self.scale is None:
            return True
        return (_frac(x) / self.scale).denominator == 1

    def is_p_divisible(self, p: int) -> bool:
        # c*Z is never p-divisible: c itself has no p-th part.
        return self.scale is None

    def __str__(self) -> str:
        if self.scale is None:
            return "Q"
        if self.scale == 1:
            return "Z"
        return f"({self.scale})Z"


ZZ = Component(Fraction(1))
QQ = Component(None)


@dataclass(frozen=True)
class ValueGroup:
    components: tuple[Component, ...] = ()

    @classmethod
    def lex(cls, *components: Component) -> "ValueGroup":
        return cls(tuple(components))

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def is_trivial(self) -> bool:
        return not self.components

    def __call__(self, *coords) -> "GroupElement":
        return self.element(coords)

    def element(self, coords: Sequence) -> "GroupElement":
        coords = tuple(_frac(c) for c in coords)
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        for comp, c in zip(self.components, coords):
            if not comp.contains(c):
                raise ValueError(f"{c} is not in component {comp}")
        return GroupElement(self, coords)

    @property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (Fraction(0),) * self.rank)

    @property
    def infinity(self) -> "GroupElement":
        return GroupElement(self, None)

    def convex_subgroups(self) -> list["ConvexSubgroup"]:
        """All convex subgroups, from the whole group down to the trivial one."""
        return [ConvexSubgroup(self, k) for k in range(self.rank + 1)]

    @property
    def whole(self) -> "ConvexSubgroup":
        return ConvexSubgroup(self, 0)

    @property
    def trivial_subgroup(self) -> "ConvexSubgroup":
        return ConvexSubgroup(self, self.rank)

    def __str__(self) -> str:
        if not self.components:
            return "0"
        if len(self.components) == 1:
            return str(self.components[0])
        return "lex(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class GroupElement:
    """An element of a value group; ``coords is None`` encodes infinity."""

    group: ValueGroup
    coords: tuple[Fraction, ...] | None

    @property
    def is_infinite(self) -> bool:
        return self.coords is None

    @property
    def is_zero(self) -> bool:
        return self.coords is not None and not any(self.coords)

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement):
            raise TypeError(f"cannot combine group element with {type(other).__name__}")
        if other.group != self.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        if self.coords is None or other.coords is None:
            return self.group.infinity
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        if self.coords is None:
            raise ValueError("infinity has no negative")
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, n: int) -> "GroupElement":
        if not isinstance(n, int):
            return NotImplemented
        if self.coords is None:
            if n <= 0:
                raise ValueError("infinity times a non-positive integer")
            return self
        return GroupElement(self.group, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def compare(self, other: "GroupElement") -> int:
        """Lexicographic comparison returning -1, 0 or 1."""
        self._check(other)
        if self.coords is None:
            return 0 if other.coords is None else 1
        if other.coords is None:
            return -1
        for a, b in zip(self.coords, other.coords):
            if a != b:
                return -1 if a < b else 1
        return 0

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def leading_index(self) -> int:
        """Index of the first nonzero coordinate."""
        if self.coords is None:
            raise ValueError("infinity has no leading coordinate")
        for i, c in enumerate(self.coords):
            if c:
                return i
        raise ValueError("zero has no leading coordinate")

    def __str__(self) -> str:
        if self.coords is None:
            return "inf"
        if len(self.coords) == 1:
            return str(self.coords[0])
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def compare(a: GroupElement, b: GroupElement) -> str:
    c = a.compare(b)
    return "<" if c < 0 else (">" if c > 0 else "=")


@dataclass(frozen=True)
class ConvexSubgroup:
    """The suffix cut ``{0}^cut x (components cut..n-1)``."""

    group: ValueGroup
    cut: int

    def __post_init__(self):
        if not 0 <= self.cut <= self.group.rank:
            raise ValueError(f"cut {self.cut} out of range for rank {self.group.rank}")

    def __contains__(self, x: GroupElement) -> bool:
        if x.group != self.group:
            raise GroupMismatch(f"{x.group} vs {self.group}")
        if x.coords is None:
            return False
        return not any(x.coords[: self.cut])

    @property
    def is_trivial(self) -> bool:
        return self.cut == self.group.rank

    @property
    def is_whole(self) -> bool:
        return self.cut == 0

    def as_group(self) -> ValueGroup:
        return ValueGroup(self.group.components[self.cut:])

    def __le__(self, other: "ConvexSubgroup") -> bool:
        if other.group != self.group:
            raise GroupMismatch("subgroups of different groups")
        return self.cut >= other.cut

    def __lt__(self, other: "ConvexSubgroup") -> bool:
        return self <= other and self.cut != other.cut

    def __str__(self) -> str:
        n = self.group.rank
        if self.cut == n:
            return "0"
        if self.cut == 0:
            return str(self.group)
        tail = " x ".join(str(c) for c in self.group.components[self.cut:])
        return "{0}^%d x %s" % (self.cut, tail) if self.cut > 1 else "{0} x " + tail


def _nonzero_finite(gamma: GroupElement) -> int:
    if gamma.coords is None:
        raise ValueError("infinity lies in no convex subgroup")
    if gamma.is_zero:
        raise ValueError("zero lies in every convex subgroup")
    return gamma.leading_index()


def smallest_convex_containing(gamma: GroupElement) -> ConvexSubgroup:
    return ConvexSubgroup(gamma.group, _nonzero_finite(gamma))


def biggest_convex_avoiding(gamma: GroupElement) -> ConvexSubgroup:
    return ConvexSubgroup(gamma.group, _nonzero_finite(gamma) + 1)


def quotient(group: ValueGroup, delta: ConvexSubgroup) -> tuple[ValueGroup, Callable[[GroupElement], GroupElement]]:
    """Return ``group/delta`` and the coordinate-truncation projection."""
    if delta.group != group:
        raise GroupMismatch("subgroup of a different group")
    target = ValueGroup(group.components[: delta.cut])

    def project(x: GroupElement) -> GroupElement:
        if x.group != group:
            raise GroupMismatch(f"{x.group} vs {group}")
        if x.coords is None:
            return target.infinity
        return GroupElement(target, x.coords[: delta.cut])

    return target, project


def maximal_p_divisible_subgroup(group: ValueGroup, p: int) -> ConvexSubgroup:
    cut = group.rank
    while cut > 0 and group.components[cut - 1].is_p_divisible(p):
        cut -= 1
    return ConvexSubgroup(group, cut)


def is_p_divisible(group: ValueGroup, p: int) -> bool:
    return maximal_p_divisible_subgroup(group, p).is_whole


def concat(*parts: GroupElement) -> GroupElement:
    """Concatenate stage values into the lexicographic product of their groups."""
    group = ValueGroup(tuple(c for part in parts for c in part.group.components))
    if any(part.coords is None for part in parts):
        return group.infinity
    return GroupElement(group, tuple(c for part in parts for c in part.coords))
