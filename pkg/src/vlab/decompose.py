"""Mixed-characteristic decomposition of a valuation around ``v(p)``.

For ``char K = 0`` and ``char Kv = p`` the convex subgroups adjacent to
``v(p)`` split the place ``K -> Kv`` into three:

    K0 --[G/D]--> K1 --[D/D0]--> K2 --[D0]--> K3 = Kv

where ``D`` is the smallest and ``D0`` the largest convex subgroup
containing, respectively avoiding, ``v(p)``. ``K1`` has characteristic 0
and ``K2`` characteristic p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import NoRootError, UnsupportedConfiguration, VlabError
from .fieldtower.base import Field
from .fieldtower.lazy_as import LazyASClosure
from .hensel import artin_schreier_solve
from .ordgroup import (ConvexSubgroup, GroupElement, ValueGroup, biggest_convex_avoiding,
                       is_p_divisible, maximal_p_divisible_subgroup,
                       smallest_convex_containing)
from .valuation import PlaceChain, Valuation


class EquicharacteristicError(VlabError, ValueError):
    """``v(p)`` is not a positive finite value."""


@dataclass(frozen=True)
class GroupDecomposition:
    group: ValueGroup
    gamma: GroupElement
    delta0: ConvexSubgroup
    delta: ConvexSubgroup
    delta_p: ConvexSubgroup


def decompose_group(group: ValueGroup, gamma: GroupElement, p: int) -> GroupDecomposition:
    if gamma.is_infinite or not gamma > group.zero:
        raise EquicharacteristicError(f"v(p) = {gamma} is not positive")
    return GroupDecomposition(group, gamma, biggest_convex_avoiding(gamma),
                              smallest_convex_containing(gamma), maximal_p_divisible_subgroup(group, p))


@dataclass
class Decomposition:
    v: Valuation
    p: int
    groups: GroupDecomposition
    chain: PlaceChain
    checks: list = dc_field(default_factory=list)  # (name, status, detail)

    @property
    def delta0(self) -> ConvexSubgroup:
        return self.groups.delta0

    @property
    def delta(self) -> ConvexSubgroup:
        return self.groups.delta

    @property
    def delta_p(self) -> ConvexSubgroup:
        return self.groups.delta_p

    @property
    def stages(self) -> tuple[Valuation, Valuation, Valuation]:
        return self.chain.valuations

    @property
    def fields(self) -> list[Field]:
        return self.chain.fields

    @property
    def characteristics(self) -> tuple[int, ...]:
        return tuple(F.characteristic for F in self.fields)

    @property
    def passed(self) -> bool:
        return all(status != "fail" for _, status, _ in self.checks)

    def diagram(self) -> str:
        labels = [str(v.value_group) for v in self.stages]
        K = self.fields
        lines = [f"K0 = {K[0].spec()}"]
        for i, lab in enumerate(labels, start=1):
            lines.append(f"  --[{lab}]--> K{i} = {K[i].spec()}")
        return "\n".join(lines)

    def report(self) -> str:
        g = self.groups
        lines = [
            f"valuation  {self.v.spec()}",
            f"group      {g.group}",
            f"v({self.p})       {g.gamma}",
            f"Delta0     {g.delta0}",
            f"Delta      {g.delta}",
            f"Delta_p    {g.delta_p}",
            "chain",
        ]
        lines += ["  " + ln for ln in self.diagram().splitlines()]
        lines.append("characteristics " + " ".join(str(c) for c in self.characteristics))
        lines.append("checks")
        width = max(len(n) for n, _, _ in self.checks)
        for name, status, detail in self.checks:
            lines.append(f"  {name.ljust(width)}  {status.ljust(12)}  {detail}".rstrip())
        return "\n".join(lines) + "\n"


def _agree_on_samples(v: Valuation, w: Valuation, rng: random.Random, n: int) -> tuple[int, object]:
    for i in range(n):
        x = v.domain.random(rng)
        if v.eval(x).coords != w.eval(x).coords or v.in_ring(x) != w.in_ring(x):
            return i, x
    return n, None


def standard_decomposition(v: Valuation, p: int, rng: random.Random | None = None,
                           samples: int = 200) -> Decomposition:
    K = v.domain
    if K.characteristic != 0:
        raise EquicharacteristicError(f"{K.spec()} has characteristic {K.characteristic}")
    if v.residue_field.characteristic != p:
        raise EquicharacteristicError(f"residue field {v.residue_field.spec()} does not have characteristic {p}")
    G = v.value_group
    groups = decompose_group(G, v.eval(p), p)
    d, d0 = groups.delta.cut, groups.delta0.cut
    coarse = Valuation(K, v.stages[:d])
    middle = Valuation(coarse.residue_field, v.stages[d:d0])
    fine = v.induced_on_residue(groups.delta0)
    dec = Decomposition(v, p, groups, PlaceChain((coarse, middle, fine)))

    def check(name, ok, detail="", status=None):
        dec.checks.append((name, status or ("ok" if ok else "fail"), detail))

    check("Delta0 < Delta", groups.delta0 < groups.delta)
    check("v(p) in Delta \\ Delta0", groups.gamma in groups.delta and groups.gamma not in groups.delta0)
    check("adjacent cuts", d0 - d == 1, f"cuts {d} and {d0}")
    ch = dec.characteristics
    check("characteristics", ch[0] == ch[1] == 0 and ch[2] == ch[3] == p, " ".join(map(str, ch)))
    if isinstance(dec.fields[2], LazyASClosure):
        check("Delta0 p-divisible", groups.delta0 <= groups.delta_p, f"Delta_p = {groups.delta_p}")
    else:
        check("Delta0 p-divisible", True, "not asserted: K2 is not Artin-Schreier closed", status="skipped")
    rng = rng or random.Random(0)
    agreed, bad = _agree_on_samples(v, dec.chain.composite(), rng, samples)
    check("recomposition", bad is None, f"{agreed}/{samples} samples")
    return dec


# ramification ---------------------------------------------------------------

@dataclass(frozen=True)
class RamificationClass:
    kind: str  # "unramified", "finitely ramified", "p-divisible", "none"
    m: int | None = None  # size of [0, v(p)] when finite

    @property
    def finitely_ramified(self) -> bool:
        return self.m is not None

    def __str__(self):
        return self.kind + (f" (m={self.m})" if self.m is not None else "")


def classify_group(group: ValueGroup, gamma: GroupElement, p: int) -> RamificationClass:
    """Classify ``(group, v(p) = gamma)``.

    ``[0, gamma]`` is finite exactly when ``gamma`` sits in the last component
    and that component is discrete; it then has ``gamma/c + 1`` elements.
    """
    k = gamma.leading_index()
    comp = group.components[k]
    if k == group.rank - 1 and not comp.divisible:
        m = int(gamma.coords[k] / comp.scale) + 1
        return RamificationClass("unramified" if m == 2 else "finitely ramified", m)
    if is_p_divisible(group, p):
        return RamificationClass("p-divisible")
    return RamificationClass("none")


def ramification_classify(v: Valuation, p: int) -> RamificationClass:
    """Classify the middle stage ``(K1, v1)`` of the standard decomposition."""
    dec = standard_decomposition(v, p, samples=0)
    G = v.value_group
    # v1 has group Delta/Delta0, the single component at Delta's cut
    d = dec.delta.cut
    stage = ValueGroup(G.components[d:d + 1])
    gamma = stage.element(dec.groups.gamma.coords[d:d + 1])
    return classify_group(stage, gamma, p)


# Kaplansky ------------------------------------------------------------------

@dataclass
class KaplanskyReport:
    p: int
    p_divisible: bool
    perfect: bool | None
    as_closed: bool | None  # proxy
    witness: object = None
    note: str = ""

    @staticmethod
    def _fmt(b):
        return "undecided" if b is None else str(b).lower()

    @property
    def proxy_label(self) -> str:
        if self.as_closed is None:
            return "n/a"
        return "proxy-true" if self.as_closed else "proxy-false"

    def verdicts(self) -> tuple[str, str, str]:
        return (self._fmt(self.p_divisible), self._fmt(self.perfect), self.proxy_label)

    def __str__(self):
        a, b, c = self.verdicts()
        s = f"p-divisible={a} perfect={b} as-closed={c} (proxy, desk-scale)"
        if self.witness is not None:
            s += f" witness={self.witness}"
        return s


def kaplansky_check(v: Valuation, p: int, rng: random.Random | None = None, samples: int = 50) -> KaplanskyReport:
    rng = rng or random.Random(0)
    k = v.residue_field
    try:
        perfect = k.is_perfect()
    except UnsupportedConfiguration:
        perfect = None
    rep = KaplanskyReport(p, is_p_divisible(v.value_group, p), perfect, None)
    if k.characteristic != p:
        rep.note = f"residue characteristic is {k.characteristic}"
        return rep
    if isinstance(k, LazyASClosure):
        # sample from the fragment materialized before the check
        pool = [k.random(rng, use_generators=True) for _ in range(samples)]
    elif k.is_finite:
        pool = list(k.elements())
    else:
        pool = [k.random(rng) for _ in range(samples)]
    rep.as_closed = True
    for c in pool:
        try:
            artin_schreier_solve(k, c)
        except NoRootError:
            rep.as_closed = False
            rep.witness = c
            break
        except UnsupportedConfiguration as exc:
            rep.as_closed = None
            rep.note = str(exc)
            break
    return rep


# perfect coarsenings --------------------------------------------------------

@dataclass
class CoarseningScan:
    rows: list  # (cut, group, residue spec, perfect or None, proper)

    @property
    def hypothesis(self) -> str:
        proper = [r for r in self.rows if r[4]]
        if any(r[3] is None for r in proper):
            return "undecided"
        return "satisfied" if all(r[3] for r in proper) else "violated"

    def report(self) -> str:
        lines = []
        for cut, group, res, perf, proper in self.rows:
            tag = "proper" if proper else "full"
            pf = "undecided" if perf is None else ("perfect" if perf else "not-perfect")
            lines.append(f"{cut}  {tag:<6}  {str(group):<12}  {pf:<11}  {res}")
        lines.append(f"hypothesis {self.hypothesis}")
        return "\n".join(lines) + "\n"


def perfect_coarsening_scan(v: Valuation) -> CoarseningScan:
    """Perfection of the residue field of every coarsening of ``v``."""
    rows = []
    for k, w in enumerate(v.coarsenings()):
        try:
            perf = w.residue_field.is_perfect()
        except UnsupportedConfiguration:
            perf = None
        rows.append((k, w.value_group, w.residue_field.spec(), perf, k < v.rank))
    return CoarseningScan(rows)
