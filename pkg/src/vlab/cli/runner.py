"""Execute the check directives of a document and assemble the report."""

from __future__ import annotations

import os
import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..decompose import (EquicharacteristicError, kaplansky_check, perfect_coarsening_scan,
                         ramification_classify, standard_decomposition)
from ..definable import (PClassAnnotation, annotate_p_class, in_convex_hull,
                         natural_valuation, near_boundary_samples, order_from_squares,
                         phensel_class_compare, scanlon_sampler, square_leading_sampler,
                         verify_scanlon_identity)
from ..errors import HenselConditionError, NoRootError, PrecisionError, UnsupportedConfiguration, VlabError
from ..hensel import (artin_schreier_solve, henselianity_spot_check, hensel_lift,
                      residual, sqrt_witness)
from ..fieldtower.series import SeriesField
from ..ordgroup import quotient
from ..valuation import compare_rings, compose, finest_common_coarsening
from .build import Model, build_model
from .expr import parse_element, parse_poly
from .spec import Directive, FieldSpecDocument

PASS, FAIL, UNSUPPORTED = "pass", "fail", "unsupported"
EXIT_CODES = {PASS: 0, FAIL: 1, UNSUPPORTED: 2}
PARSE_ERROR_EXIT = 3


def budget_scale() -> float:
    raw = os.environ.get("VLAB_BUDGET", "1")
    try:
        scale = float(raw)
    except ValueError:
        raise ValueError(f"VLAB_BUDGET must be a number, got {raw!r}") from None
    if scale <= 0:
        raise ValueError("VLAB_BUDGET must be positive")
    return scale


@dataclass
class Entry:
    index: int
    kind: str
    status: str = PASS
    summary: str = ""
    details: list = dc_field(default_factory=list)
    records: list = dc_field(default_factory=list)  # (key, value)


@dataclass
class Report:
    spec: str
    seed: int
    entries: list

    @property
    def exit_code(self) -> int:
        statuses = {e.status for e in self.entries}
        if FAIL in statuses:
            return EXIT_CODES[FAIL]
        if UNSUPPORTED in statuses:
            return EXIT_CODES[UNSUPPORTED]
        return 0

    def counts(self) -> dict:
        return {s: sum(e.status == s for e in self.entries) for s in (PASS, FAIL, UNSUPPORTED)}

    def text(self) -> str:
        lines = [f"field  {self.spec}", f"seed   {self.seed}", ""]
        for e in self.entries:
            lines.append(f"[{e.index:>2}] {e.kind:<13} {e.status:<12} {e.summary}".rstrip())
            lines += [f"     {d}".rstrip() for d in e.details]
        c = self.counts()
        lines += ["", f"summary pass={c[PASS]} fail={c[FAIL]} unsupported={c[UNSUPPORTED]} exit={self.exit_code}"]
        return "\n".join(lines) + "\n"

    def records(self) -> str:
        out = [_record([("record", "run"), ("field", self.spec), ("seed", self.seed)])]
        for e in self.entries:
            out.append(_record([("record", "check"), ("index", e.index), ("kind", e.kind),
                                ("status", e.status)] + e.records))
        c = self.counts()
        out.append(_record([("record", "summary")] + list(c.items()) + [("exit", self.exit_code)]))
        return "\n".join(out) + "\n"

    def render(self, fmt: str = "text") -> str:
        return self.records() if fmt == "records" else self.text()


def _record(pairs) -> str:
    parts = []
    for k, v in pairs:
        v = str(v)
        if not v or any(ch in v for ch in ' "=\\\t'):
            v = '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
        parts.append(f"{k}={v}")
    return " ".join(parts)


def _scaled(d: Directive, default: int) -> int:
    n = int(d.get("n", default))
    return max(1, int(n * budget_scale()))


def _expect(e: Entry, d: Directive, got: str) -> None:
    want = d.get("expect")
    e.records.append(("result", got))
    if want is not None:
        e.records.append(("expect", want))
        if got != want:
            e.status = FAIL
            e.details.append(f"expected {want}, got {got}")


def _p(d: Directive, model: Model, v) -> int:
    if d.get("p") is not None:
        return int(d.get("p"))
    return v.residue_field.characteristic


# directives -----------------------------------------------------------------

def _value_lower(v, x):
    """``v(x)`` or, for an inexact zero, a lower bound on its first coordinate."""
    try:
        return v.eval(x), None
    except PrecisionError:
        return None, residual(v.coarsenings()[1], x)


def run_ultrametric(d, model, rng, e):
    v = model.valuation(d.get("v"))
    K = v.domain
    n = _scaled(d, 500)
    bounded = 0
    for i in range(n):
        x, y = K.random(rng), K.random(rng)
        vx, vy = v.eval(x), v.eval(y)
        vxy, _ = _value_lower(v, x * y)
        if vxy is None or vxy != vx + vy:
            e.status = FAIL
            e.details.append(f"v(xy) != v(x)+v(y) at x={x}, y={y}")
            break
        vs, low = _value_lower(v, x + y)
        m = min(vx, vy)
        if vs is None:
            bounded += 1
            ok = m.is_infinite is False and low.value is not None and low.value > m.coords[0]
        else:
            ok = vs >= m
        if not ok:
            e.status = FAIL
            e.details.append(f"v(x+y) < min(v(x), v(y)) at x={x}, y={y}")
            break
    else:
        i = n
    e.summary = f"{i}/{n} pairs exact" + (f" ({bounded} sums bounded below by precision)" if bounded else "")
    e.records += [("pairs", n), ("passed", i), ("bounded", bounded)]


def run_coarsening(d, model, rng, e):
    v = model.valuation(d.get("v"))
    K, G = v.domain, v.value_group
    n = _scaled(d, 200)
    xs = [K.random(rng, nonzero=True) for _ in range(n)]
    vals = [v.eval(x) for x in xs]
    subgroups = G.convex_subgroups()
    for delta in subgroups:
        w = v.coarsen(delta)
        _, project = quotient(G, delta)
        bad = next((x for x, vx in zip(xs, vals) if w.eval(x) != project(vx)), None)
        rec = compose(w, v.induced_on_residue(delta))
        same = rec.stages == v.stages and all(rec.eval(x) == vx for x, vx in zip(xs, vals))
        ok = bad is None and same
        e.details.append(f"Delta={str(delta):<12} coarsen {'ok' if bad is None else 'FAIL'}  "
                         f"recompose {'ok' if same else 'FAIL'}")
        if not ok:
            e.status = FAIL
    e.summary = f"{len(subgroups)} convex subgroups x {n} samples"
    e.records += [("subgroups", len(subgroups)), ("samples", n)]


def run_scanlon(d, model, rng, e):
    v = model.valuation(d.get("v"))
    K = v.domain
    t = parse_element(K, d.get("t", "u"))
    n = _scaled(d, 100)
    sampler = scanlon_sampler(K, int(d.get("vmin", -3)), int(d.get("vmax", 3)))
    rep = verify_scanlon_identity(v, t, rng, n, sampler)
    if not rep.passed:
        e.status = FAIL
        for a, member, va in rep.discrepancies[:5]:
            e.details.append(f"disagreement a={a} member={member} v(a)={va}")
        for a, cert in rep.bad_certificates[:5]:
            e.details.append(f"certificate failed to verify: {cert.serialize()}")
    e.summary = (f"{rep.agreements}/{rep.total} agreements "
                 f"({rep.memberships} memberships, {rep.obstructions} obstructions)")
    e.records += [("agreements", rep.agreements), ("total", rep.total),
                  ("memberships", rep.memberships), ("obstructions", rep.obstructions),
                  ("bad_certificates", len(rep.bad_certificates))]


def run_decompose(d, model, rng, e):
    v = model.valuation(d.get("v"))
    dec = standard_decomposition(v, _p(d, model, v), rng, _scaled(d, 200))
    e.details += dec.report().splitlines()
    if not dec.passed:
        e.status = FAIL
    e.summary = "chain " + " -> ".join(F.spec() for F in dec.fields)
    e.records += [("delta0", dec.delta0), ("delta", dec.delta), ("delta_p", dec.delta_p),
                  ("characteristics", ",".join(map(str, dec.characteristics)))]
    e.records += [("check_" + re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_"), status)
                  for name, status, _ in dec.checks]


def run_natural(d, model, rng, e):
    K = model.field
    nv = natural_valuation(K)
    n = _scaled(d, 200)
    adv = int(d.get("adversarial", 20))
    xs = near_boundary_samples(K, rng, adv) + [K.random(rng) for _ in range(n - adv)]
    agree = bad_certs = 0
    for x in xs:
        hull, _ = in_convex_hull(x)
        if hull == nv.in_ring(x):
            agree += 1
        elif len(e.details) < 5:
            e.details.append(f"disagreement at {x}: hull={hull} ring={nv.in_ring(x)}")
        if not nv.certificate(x).verify():
            bad_certs += 1
    if agree != len(xs) or bad_certs:
        e.status = FAIL
    e.summary = f"{agree}/{len(xs)} agreements ({adv} near-boundary), {bad_certs} bad certificates"
    e.records += [("agreements", agree), ("total", len(xs)), ("adversarial", adv), ("bad_certificates", bad_certs)]


def run_euclidean(d, model, rng, e):
    K = model.field
    n = _scaled(d, 200)
    sampler = square_leading_sampler(K) if d.get("sampler") == "square-leading" else None
    order, rep = order_from_squares(K, rng, n, sampler)
    got = "pass" if rep.passed else "fail"
    e.summary = str(rep)
    if order is not None:
        e.details.append(f"order checks: {order.product_checks} products, {order.sum_checks} sums, "
                         f"{order.sums_outside_fragment} sums outside the fragment")
    for a, why in rep.failures[:3]:
        e.details.append(f"counterexample a={a}: {why}")
    want = d.get("expect", "pass")
    e.records += [("checked", rep.checked), ("failures", len(rep.failures)), ("result", got), ("expect", want)]
    if got != want:
        e.status = FAIL


def run_kaplansky(d, model, rng, e):
    v = model.valuation(d.get("v"))
    rep = kaplansky_check(v, _p(d, model, v), rng, _scaled(d, 50))
    got = "/".join(rep.verdicts())
    e.summary = str(rep)
    if rep.note:
        e.details.append(rep.note)
    _expect(e, d, got)


def run_ramification(d, model, rng, e):
    v = model.valuation(d.get("v"))
    cls = ramification_classify(v, _p(d, model, v))
    e.summary = str(cls)
    _expect(e, d, str(cls))


def run_independence(d, model, rng, e):
    v, w = model.valuation(d.get("v", "v")), model.valuation(d.get("w", "w"))
    join = finest_common_coarsening(v, w)
    e.records.append(("join", join.valuation.spec()))
    e.records.append(("join_kind", join.kind))
    if join.certificate is None:
        e.summary = f"comparable; join is {join.valuation.spec()}"
        return
    n = _scaled(d, 100)
    K = v.domain
    qs = [K.random(rng) for _ in range(n)]
    ok, bad = join.certificate.verify(qs)
    e.summary = (f"join {join.valuation.spec()}, certificate verified on {n} samples" if ok
                 else f"join {join.valuation.spec()}, certificate fails")
    e.details.append(join.certificate.describe())
    e.records.append(("verified", n if ok else 0))
    if not ok:
        e.status = FAIL
        e.details.append(f"splitting fails at {bad}")


def run_hensel(d, model, rng, e):
    v = model.valuation(d.get("v"))
    K = v.domain
    f = parse_poly(K, d.get("f"))
    x0 = parse_element(K, d.get("x0", "0"))
    cap = d.get("cap")
    try:
        rep = hensel_lift(v, f, x0, cap=Fraction(cap) if cap is not None else None)
    except HenselConditionError as exc:
        e.status = FAIL
        e.summary = f"Hensel condition fails: {exc}"
        return
    e.details += rep.to_log().splitlines()
    e.summary = (f"root {rep.root} after {rep.iterations} steps, residuals "
                 + " ".join(str(r) for r in rep.residuals))
    e.records += [("root", rep.root), ("steps", rep.iterations),
                  ("residuals", ",".join(str(r) for r in rep.residuals)), ("converged", rep.converged)]
    if not rep.converged or not rep.doubling_holds():
        e.status = FAIL
    want = d.get("expect")
    if want is not None:
        ok = rep.root == parse_element(K, want)
        e.records.append(("expect", want))
        if not ok:
            e.status = FAIL
            e.details.append(f"expected root {want}")


def run_spotcheck(d, model, rng, e):
    v = model.valuation(d.get("v"))
    rep = henselianity_spot_check(v, rng, _scaled(d, 100))
    e.summary = str(rep)
    got = "counterexample" if rep.counterexample else "none"
    if d.get("expect") is None and got == "counterexample":
        e.status = FAIL
    _expect(e, d, got)


def run_compare(d, model, rng, e):
    v, w = model.valuation(d.get("v", "v")), model.valuation(d.get("w", "w"))
    cmp = compare_rings(v, w, rng)
    e.summary = str(cmp)
    _expect(e, d, cmp.relation)


def _annotation(doc: FieldSpecDocument, name: str, v, p: int, e: Entry) -> PClassAnnotation:
    declared = next((a.get("class") for a in doc.annotations if a.valuation == name), None)
    try:
        ann = annotate_p_class(v, p)
    except UnsupportedConfiguration:
        if declared is None:
            raise
        e.details.append(f"{name}: class {declared} taken from the annotation")
        return PClassAnnotation(v, p, declared == "H1")
    if declared is not None and declared != ann.p_class:
        e.status = FAIL
        e.details.append(f"{name}: annotated {declared} but the residue field gives {ann.p_class}")
    return ann


def run_phensel(d, model, rng, e, doc=None):
    vn, wn = d.get("v", "v"), d.get("w", "w")
    v, w = model.valuation(vn), model.valuation(wn)
    p = int(d.get("p", v.residue_field.characteristic or 2))
    a, b = _annotation(doc, vn, v, p, e), _annotation(doc, wn, w, p, e)
    cmp = phensel_class_compare(a, b)
    e.summary = str(cmp)
    e.records += [("first", cmp.first), ("second", cmp.second), ("relation", cmp.relation),
                  ("consistent", cmp.consistent)]
    if not cmp.consistent:
        e.status = FAIL


def run_perfect_scan(d, model, rng, e):
    scan = perfect_coarsening_scan(model.valuation(d.get("v")))
    e.details += scan.report().splitlines()[:-1]
    e.summary = f"hypothesis {scan.hypothesis}"
    _expect(e, d, scan.hypothesis)


def run_sqrt(d, model, rng, e):
    K = model.field
    a = parse_element(K, d.get("a"))
    w = sqrt_witness(K, a)
    got = "present" if w.present else "absent"
    e.summary = f"sqrt({a}) = {w.root} ({w.reason})" if w.present else f"no square root of {a}: {w.reason}"
    if w.present and not _solves(K, w.root * w.root - a):
        e.status = FAIL
    _expect(e, d, got)


def run_as(d, model, rng, e):
    K = model.field
    c = parse_element(K, d.get("c"))
    try:
        z = artin_schreier_solve(K, c)
    except NoRootError as exc:
        e.summary = f"no root of Z^p - Z = {c}: {exc}"
        got = "none"
    else:
        p = K.characteristic
        e.summary = f"Z = {z} solves Z^{p} - Z = {c}"
        got = "root"
        if not _solves(K, z ** p - z - c):
            e.status = FAIL
    _expect(e, d, got)


def _solves(K, diff) -> bool:
    """``diff`` is zero, or below the working precision of a series field."""
    if diff.is_zero():
        return True
    if isinstance(K, SeriesField):
        return K.valuation(diff) >= K.prec
    return False


RUNNERS = {
    "ultrametric": run_ultrametric,
    "coarsening": run_coarsening,
    "scanlon": run_scanlon,
    "decompose": run_decompose,
    "natural": run_natural,
    "euclidean": run_euclidean,
    "kaplansky": run_kaplansky,
    "ramification": run_ramification,
    "independence": run_independence,
    "hensel": run_hensel,
    "spotcheck": run_spotcheck,
    "compare": run_compare,
    "phensel": run_phensel,
    "perfect-scan": run_perfect_scan,
    "sqrt": run_sqrt,
    "as": run_as,
}


def run_directive(doc: FieldSpecDocument, index: int, seed: int) -> Entry:
    d = doc.checks[index]
    e = Entry(index + 1, d.kind)
    # a fresh model per directive: LazyASClosure grows as it is used
    model = build_model(doc)
    rng = random.Random(f"{seed}:{index}")
    try:
        if d.kind == "phensel":
            run_phensel(d, model, rng, e, doc)
        else:
            RUNNERS[d.kind](d, model, rng, e)
    except (UnsupportedConfiguration, EquicharacteristicError) as exc:
        e.status = UNSUPPORTED
        e.summary = str(exc)
        e.details = []
        e.records = [("reason", str(exc))]
    except VlabError as exc:
        e.status = FAIL
        e.summary = f"{type(exc).__name__}: {exc}"
    return e


def run_checks(doc: FieldSpecDocument, seed: int | None = None, jobs: int = 1) -> Report:
    """Run every directive; ``jobs > 1`` runs them in threads, report order is fixed."""
    seed = doc.seed if seed is None else seed
    idx = range(len(doc.checks))
    if jobs > 1 and len(doc.checks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(lambda i: run_directive(doc, i, seed), idx))
    else:
        entries = [run_directive(doc, i, seed) for i in idx]
    return Report(str(doc.field), seed, entries)
