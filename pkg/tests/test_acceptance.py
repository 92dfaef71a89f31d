"""The nine acceptance criteria; each records one PASS/FAIL line for the terminal summary."""

import random
import time
from fractions import Fraction

from make_golden import GOLDEN, classifier_table, run_cli
from vlab.cli.build import build_model
from vlab.cli.main import fixture_names, fixture_text
from vlab.cli.runner import PASS, run_directive
from vlab.cli.spec import Directive, parse_spec
from vlab.decompose import standard_decomposition
from vlab.definable import (Membership, Obstruction, in_convex_hull, natural_valuation, near_boundary_samples,
                            scanlon_membership, scanlon_sampler)
from vlab.fieldtower import QQ_FIELD, LaurentSeriesField, PAdicField, Poly, PrimeField
from vlab.hensel import hensel_lift
from vlab.valuation import Valuation, finest_common_coarsening

RESULTS = []


def record(n, ok, detail):
    RESULTS.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _docs():
    return {name: parse_spec(fixture_text(name)) for name in fixture_names()}


def _run_on_every_valuation(kind, **args):
    """Run one directive kind against every declared valuation of every fixture."""
    entries = []
    for name, doc in _docs().items():
        for decl in doc.valuations:
            d = Directive(kind, tuple([("v", decl.name)] + [(k, str(a)) for k, a in args.items()]))
            probe = type(doc)(doc.seed, doc.field, doc.valuations, doc.order, doc.annotations, (d,))
            entries.append((name, decl.name, run_directive(probe, 0, doc.seed)))
    return entries


def test_criterion_1_ultrametric_suite():
    start = time.perf_counter()
    entries = _run_on_every_valuation("ultrametric", n=500)
    elapsed = time.perf_counter() - start
    towers = {name for name, _, _ in entries}
    failed = [f"{n}/{v}" for n, v, e in entries if e.status != PASS]
    pairs = sum(dict(e.records)["passed"] for _, _, e in entries)
    # sums whose value is only bounded below still satisfy the inequality exactly
    bounded = sum(dict(e.records)["bounded"] for _, _, e in entries)
    ok = not failed and len(towers) >= 6 and elapsed < 5
    record(1, ok, f"{len(towers)} towers, {len(entries)} valuations, {pairs} exact pairs "
                  f"({bounded} sums settled by a lower bound), {elapsed:.2f}s; failures: {failed or 'none'}")


def test_criterion_2_coarsening_quotient():
    start = time.perf_counter()
    entries = _run_on_every_valuation("coarsening", n=200)
    elapsed = time.perf_counter() - start
    failed = [f"{n}/{v}" for n, v, e in entries if e.status != PASS]
    subgroups = sum(dict(e.records)["subgroups"] for _, _, e in entries)
    ok = not failed and elapsed < 5
    record(2, ok, f"{subgroups} convex subgroups x 200 samples, recomposition exact, {elapsed:.2f}s; "
                  f"failures: {failed or 'none'}")


def test_criterion_3_scanlon_identity():
    start = time.perf_counter()
    model = build_model(parse_spec(fixture_text("scanlon")))
    v = model.valuation(None)
    K = v.domain
    t = K(K.base.base.gen)
    sample = scanlon_sampler(K, -3, 3)
    rng = random.Random(42)
    agree = members = obstructions = 0
    values = set()
    bad = []
    for _ in range(100):
        a = sample(rng)
        va = v.stages[0].value(a)
        values.add(va)
        member, cert = scanlon_membership(v, t, a)
        agree += member == (va <= 0)
        if isinstance(cert, Membership):
            members += 1
            if not (cert.verify() and cert.residual().at_least(8)):
                bad.append(a)
        else:
            obstructions += 1
            k = cert.t_residue.field
            if not (isinstance(cert, Obstruction) and cert.verify() and not k.has_pth_root(cert.t_residue)[0]):
                bad.append(a)
    elapsed = time.perf_counter() - start
    ok = agree == 100 and not bad and values == set(range(-3, 4)) and elapsed < 30
    record(3, ok, f"{agree}/100 agreements over v(a) in [-3, 3] ({members} memberships with residual >= 8, "
                  f"{obstructions} obstructions), {len(bad)} bad certificates, {elapsed:.2f}s")


def _binomial_half(k):
    # binom(1/2, k), computed from the falling product
    num = Fraction(1)
    for i in range(k):
        num *= Fraction(1, 2) - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return num / den


def test_criterion_4_hensel_convergence():
    Q3 = PAdicField(3, prec=3)
    X = Poly.x(Q3)
    rep = hensel_lift(Valuation.stack(Q3, "padic"), X ** 2 - Poly(Q3, [7]), 1)
    exhaustive = [x for x in range(27) if (x * x - 7) % 27 == 0 and x % 3 == 1]
    digits = Q3.unit_part(rep.root)[0] % 27
    Q3 = PAdicField(3, prec=20)
    deep = hensel_lift(Valuation.stack(Q3, "padic"), Poly.x(Q3) ** 2 - Poly(Q3, [7]), 1)
    doubling = all(r.at_least(min(2 ** i, 20)) for i, r in enumerate(deep.residuals[1:], start=1))

    oracle = [_binomial_half(k) for k in range(9)]
    series_ok = True
    for base, reduce in ((QQ_FIELD, lambda q: q), (PrimeField(5), lambda q: q.numerator * pow(q.denominator, -1, 5) % 5)):
        L = LaurentSeriesField(base, "t", prec=10)
        lift = hensel_lift(Valuation.stack(L, "t"), Poly.x(L) ** 2 - Poly(L, [1 + L.gen]), 1)
        got = [L.coefficient(lift.root, k) for k in range(9)]
        series_ok &= got == [base(reduce(c)) for c in oracle]
    ok = digits == 13 and exhaustive == [13] and doubling and rep.converged and series_ok
    trace = ", ".join(str(r) for r in deep.residuals)
    record(4, ok, f"sqrt(7) mod 27 = {digits} (exhaustive {exhaustive}); residuals {trace}; "
                  f"sqrt(1+t) over Q and F5 matches binomials through t^8: {series_ok}")


def test_criterion_5_decomposition():
    code, out, _ = run_cli("decompose", "fixture:q3s")
    golden = out == (GOLDEN / "decompose_q3s.txt").read_text()
    K = LaurentSeriesField(PAdicField(3, prec=8), "s")
    dec = standard_decomposition(Valuation.stack(K, "s", "padic"), 3, random.Random(0))
    fields = [F.spec() for F in dec.fields]
    ok = (code == 0 and golden and dec.delta0.is_trivial and str(dec.delta) == "{0} x Z"
          and fields == ["laurent(padic(3, prec=8), s, prec=8)", "padic(3, prec=8)", "gf(3)", "gf(3)"]
          and dec.characteristics == (0, 0, 3, 3) and ("recomposition", "ok", "200/200 samples") in dec.checks)
    record(5, ok, f"Delta0={dec.delta0}, Delta={dec.delta}, chars {dec.characteristics}, golden match {golden}")


def test_criterion_6_natural_valuation():
    model = build_model(parse_spec(fixture_text("ordered_q")))
    K = model.field
    nv = natural_valuation(K)
    rng = random.Random(6)
    xs = near_boundary_samples(K, rng, 20) + [K.random(rng) for _ in range(180)]
    agree = sum(in_convex_hull(x)[0] == nv.in_ring(x) for x in xs)
    certs = sum(nv.certificate(x).verify() for x in xs)
    big = sum(1 for x in xs[:20] if abs(K.coefficient(x, 0).rep) >= 1000)
    ok = agree == 200 and certs == 200 and big > 0
    record(6, ok, f"{agree}/200 agreements (20 near-boundary, {big} with integer part >= 1000), "
                  f"{certs}/200 certificates verify")


def test_criterion_7_independence():
    v2, v3 = Valuation.stack(QQ_FIELD, "2"), Valuation.stack(QQ_FIELD, "3")
    join = finest_common_coarsening(v2, v3)
    rng = random.Random(7)
    verified, bad = join.certificate.verify([QQ_FIELD.random(rng) for _ in range(100)])
    ok = join.kind == "independent" and join.valuation.is_trivial and verified and bad is None
    record(7, ok, f"join of v2 and v3 is {join.valuation.spec()} ({join.kind}); certificate on 100 rationals: {verified}")


def test_criterion_8_classifiers():
    table = classifier_table()
    golden = (GOLDEN / "classifiers.txt").read_text()
    expected = ["unramified (m=2)", "finitely ramified (m=3)", "p-divisible", "false/true/proxy-false"]
    ok = table == golden and all(e in table for e in expected)
    record(8, ok, "; ".join(" ".join(ln.split()[1:]) for ln in table.splitlines()))


def test_criterion_9_determinism():
    differ = []
    for name in fixture_names():
        first = run_cli("check", f"fixture:{name}")[1]
        if run_cli("check", f"fixture:{name}")[1] != first:
            differ.append(name)
    record(9, not differ, f"{len(fixture_names())} fixtures, byte-identical reports on rerun; "
                          f"differing: {differ or 'none'}")

