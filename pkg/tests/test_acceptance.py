"""The seven acceptance criteria, each printing one PASS/FAIL line in the summary.

Heavy computations live in module-scoped fixtures so that the certificate
pass (criterion 7) can re-check everything the other criteria produced.
"""

import random
import time
from fractions import Fraction as F

import pytest

from lvmbtoric import reports as R
from lvmbtoric import samples
from lvmbtoric.certificates import (
    verify_completeness, verify_equivalence, verify_hulls, verify_injectivity,
    verify_pair_points, verify_polytopality, verify_support_function, verify_uncovered,
)
from lvmbtoric.datum import (
    LvmbDatum, check_generic_position, check_imbrication, check_lvm_bosio, check_sep,
    equivalent, explain_equivalence, from_toric, indispensable, raw_toric, to_toric, validate,
)
from lvmbtoric.exact import SubspaceBasis
from lvmbtoric.fan import (
    Fan, completeness_checks, covering_oracle, is_complete_projected, project_fan,
    sample_directions, support_injective,
)
from lvmbtoric.generate import GeneratorConfig, generate_datum
from lvmbtoric.io import (
    datum_from_json, equivalence_certificate, fan_from_json, hulls_certificate,
    injectivity_certificate, polytopality_certificate, support_function_certificate,
    validation_checks,
)
from lvmbtoric.shephard import check_lvm_via_fan, is_polytopal, support_function_oracle
from conftest import record_criterion
from fans import random_r2_fan

CORPUS_SHAPES = [(1, n) for n in range(2, 7)] + [(2, n) for n in range(4, 8)]
SEEDS = range(12)
MUTATIONS = (0, 3)
PRISM_VARIANTS = 40


def prism_variant(seed: int) -> LvmbDatum | None:
    """The non-LVM prism datum with seeded small perturbations; None if no longer LVMB.

    Random flips almost never leave the LVM region at these sizes, so these
    variants are what exercises the negative verdict.
    """
    base = datum_from_json(samples.raw("prism_datum"))
    rng = random.Random(seed)
    eps = F(1, rng.choice([10, 20, 50]))
    ell = tuple(tuple(x + eps * F(rng.randint(-10, 10), 10) for x in p) for p in base.ell)
    d = LvmbDatum(base.m, base.n, ell, base.family)
    return d if validate(d).is_lvmb else None


def build_corpus():
    items = []
    for m, n in CORPUS_SHAPES:
        for mu in MUTATIONS:
            for s in SEEDS:
                items.append((f"gen m={m} n={n} mut={mu} seed={s}",
                              generate_datum(GeneratorConfig(m, n, s, mutations=mu))))
    for s in range(PRISM_VARIANTS):
        d = prism_variant(s)
        if d is not None:
            items.append((f"prism variant seed={s}", d))
    return items


@pytest.fixture(scope="module")
def corpus():
    return build_corpus()


@pytest.fixture(scope="module")
def certs():
    """(label, zero-argument verifier) pairs collected by every criterion."""
    return []


# -- 1 ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def main_theorem(corpus, certs):
    t0 = time.perf_counter()
    rows = []
    for label, d in corpus:
        ok_b, hv = check_lvm_bosio(d)
        ok_f, pv = check_lvm_via_fan(d, short_circuit=False)
        rows.append((label, ok_b, ok_f))
        E, delta = raw_toric(d)
        base = project_fan(delta, E, check=False).base
        hc = hulls_certificate(hv, d.members)
        pc = polytopality_certificate(pv, base)
        certs.append((f"bosio {label}", lambda c=hc, d=d: verify_hulls(c, d, all_members=True)))
        certs.append((f"fan {label}", lambda c=pc, f=base: verify_polytopality(c, f)))
    return rows, time.perf_counter() - t0


def test_criterion_1_main_theorem(main_theorem):
    rows, elapsed = main_theorem
    bad = [r[0] for r in rows if r[1] != r[2]]
    neg = sum(1 for r in rows if r[1] is False)
    ok = len(rows) >= 200 and not bad and elapsed < 300 and neg > 0
    record_criterion(1, ok, f"{len(rows)} data, {neg} non-LVM, {len(bad)} disagreements, "
                            f"{elapsed:.1f}s (< 300s)")
    assert len(rows) >= 200
    assert not bad, bad
    assert neg > 0, "corpus never reached a non-LVM datum"
    assert elapsed < 300


# -- 2 ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def roundtrips(corpus, certs):
    failures = []
    for label, d in corpus:
        E, delta = to_toric(d)
        back = from_toric(E, delta)
        if not equivalent(d, back):
            failures.append(f"datum side {label}")
        _, info = explain_equivalence(d, back)
        c = equivalence_certificate(info)
        certs.append((f"equiv {label}", lambda c=c, a=d, b=back: verify_equivalence(c, a, b)))
        E2, delta2 = to_toric(from_toric(E, delta))
        if delta2 != delta or not E2.same_span(E):
            failures.append(f"fan side {label}")
    return failures


def test_criterion_2_roundtrip(corpus, roundtrips):
    record_criterion(2, not roundtrips, f"{len(corpus)} data both ways, "
                                        f"{len(roundtrips)} failures")
    assert not roundtrips, roundtrips


# -- 3 ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def properness(certs):
    rows = []
    for m, n in CORPUS_SHAPES:
        for jitter in (1, 2):
            for s in SEEDS:
                d = generate_datum(GeneratorConfig(m, n, s, jitter=jitter))
                label = f"jitter={jitter} m={m} n={n} seed={s}"
                assert check_generic_position(d)[0] and check_sep(d)[0], label
                imb, _ = check_imbrication(d)
                E, delta = raw_toric(d)
                inj, wit = support_injective(delta, E)
                rows.append((label, imb, inj))
                for c in validation_checks(validate(d)):
                    cert = c.get("certificate")
                    if cert is None:
                        continue
                    if cert["kind"] == "pair_points":
                        certs.append((f"pairs {label}", lambda c=cert, d=d: verify_pair_points(c, d)))
                    else:
                        certs.append((f"imbrication {label}", lambda c=cert, d=d: verify_hulls(c, d)))
                if wit is not None:
                    ic = injectivity_certificate(wit)
                    certs.append((f"injectivity {label}",
                                  lambda c=ic, f=delta, E=E: verify_injectivity(c, f, E)))
    return rows


def test_criterion_3_properness(properness):
    bad = [r[0] for r in properness if r[1] != r[2]]
    fails = sum(1 for r in properness if not r[1])
    ok = len(properness) >= 200 and not bad and fails > 0
    record_criterion(3, ok, f"{len(properness)} data, {fails} violate imbrication, "
                            f"{len(bad)} disagreements")
    assert len(properness) >= 200
    assert not bad, bad
    assert fails > 0


# -- 4 ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def completeness(corpus, certs):
    problems = []
    removed = 0
    skipped = 0
    for i, (label, d) in enumerate(corpus):
        E, delta = to_toric(d)
        target = d.n - 2 * d.m
        ok, _ = is_complete_projected(delta, E)
        pairing = completeness_checks(delta, target).pairing_ok
        pf = project_fan(delta, E)
        covered, hole = covering_oracle(pf, sample_directions(target, 1000, seed=i))
        if not (ok and pairing and covered):
            problems.append(f"{label}: complete={ok} pairing={pairing} covered={covered}")
        maxi = delta.maximal
        if len(maxi) < 2:
            skipped += 1  # n = 2m: the only maximal cone is the origin
            continue
        gone = maxi[i % len(maxi)]
        cut = Fan.from_cones(delta.ambient_dim, delta.rays, [c for c in maxi if c != gone])
        ok, cert = is_complete_projected(cut, E)
        removed += 1
        if ok or cert is None:
            problems.append(f"{label}: removal of {sorted(gone)} not detected")
            continue
        certs.append((f"incomplete {label}", lambda c=cert, f=cut, k=target: verify_completeness(c, f, k)))
        covered, hole = covering_oracle(project_fan(cut, E), sample_directions(target, 1000, seed=i))
        if not covered:
            base = project_fan(cut, E).base
            certs.append((f"uncovered {label}", lambda h=hole, b=base: verify_uncovered([str(x) for x in h], b)))
    return problems, removed, skipped


def test_criterion_4_completeness(corpus, completeness):
    problems, removed, skipped = completeness
    record_criterion(4, not problems, f"{len(corpus)} fans complete by all three tests, "
                                      f"{removed} cone removals detected, {skipped} n=2m skipped")
    assert not problems, problems


# -- 5 ------------------------------------------------------------------------------

PRISM = fan_from_json(samples.raw("prism_fan"))


@pytest.fixture(scope="module")
def polytopality(corpus, certs):
    t0 = time.perf_counter()
    rows = []

    def check(label, f):
        a, v = is_polytopal(f)
        b, h = support_function_oracle(f)
        rows.append((label, a, b))
        pc = polytopality_certificate(v, f)
        sc = support_function_certificate(b, h, f)
        certs.append((f"shephard {label}", lambda c=pc, f=f: verify_polytopality(c, f)))
        certs.append((f"support {label}", lambda c=sc, f=f: verify_support_function(c, f)))

    for label, d in corpus:
        E, delta = raw_toric(d)
        check(label, project_fan(delta, E, check=False).base)
    r2 = []
    for s in range(100):
        f = random_r2_fan(random.Random(50_000 + s))
        check(f"R2 fan {s}", f)
        r2.append(rows[-1])
    check("prism", PRISM)
    return rows, r2, rows[-1], time.perf_counter() - t0


def test_criterion_5_polytopality(polytopality):
    rows, r2, prism, elapsed = polytopality
    bad = [r[0] for r in rows if r[1] != r[2]]
    r2_ok = all(a and b for _, a, b in r2)
    prism_ok = prism[1] is False and prism[2] is False
    ok = not bad and r2_ok and prism_ok and elapsed < 120
    record_criterion(5, ok, f"{len(rows)} fans, {len(bad)} disagreements, "
                            f"{sum(a for _, a, _ in r2)}/100 R2 polytopal, prism false={prism_ok}, "
                            f"{elapsed:.1f}s (< 120s)")
    assert not bad, bad
    assert r2_ok and len(r2) == 100
    assert prism_ok
    assert elapsed < 120


# -- 6 ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def fixture_reports(certs):
    reps = [
        R.run_validate(samples.raw("hopf4")).report,
        R.run_check_lvm(samples.raw("hopf4"), "both").report,
        R.run_validate(samples.raw("badimb")).report,
        R.run_validate(samples.raw("simplex3")).report,
        R.run_check_lvm(samples.raw("simplex3"), "both").report,
        R.run_to_fan(samples.raw("hopf4")).report,
    ]
    for rep in reps:
        certs.append((f"report {rep['command']}", lambda r=rep: _report_ok(r)))
    return reps


def _report_ok(rep):
    res = R.verify_report(rep)
    return (bool(res) and all(r["ok"] for r in res)), "; ".join(r["reason"] for r in res)


def _fixture_failures(reps):
    out = []

    def expect(cond, what):
        if not cond:
            out.append(what)

    hopf = datum_from_json(samples.raw("hopf4"))
    rep = validate(hopf)
    expect(rep.is_lvmb, "hopf4 is LVMB")
    expect(indispensable(hopf) == {0, 1}, "hopf4 indispensable {0,1}")
    E, delta = to_toric(hopf)
    expect(E.same_span(SubspaceBasis(3, ((1, 0, 1), (0, 1, 1)))), "hopf4 subspace")
    rays = set(project_fan(delta, E).base.rays)
    expect(rays == {(1,), (-1,)}, "hopf4 projected rays")
    expect(check_lvm_bosio(hopf)[0], "hopf4 LVM by hulls")
    expect(check_lvm_via_fan(hopf)[0] and check_lvm_via_fan(hopf, short_circuit=False)[0],
           "hopf4 LVM by fan")
    lvm = reps[1]
    expect(lvm["verdict"] is True and {c["name"]: c["ok"] for c in lvm["checks"]}["fan"], "hopf4 report")

    bad = reps[2]
    expect(bad["verdict"] is False and bad["certificate"]["members"] == [[0, 1, 2], [0, 1, 3]],
           "badimb rejected with the pair")
    simplex = datum_from_json(samples.raw("simplex3"))
    expect(validate(simplex).is_lvmb and indispensable(simplex) == {0, 1, 2}, "simplex3 valid")
    expect(check_lvm_bosio(simplex)[0] and check_lvm_via_fan(simplex)[0], "simplex3 LVM")
    expect(reps[4]["verdict"] is True, "simplex3 report")
    expect(reps[5]["projected_fan"]["rays"] == [["1"], ["-1"]], "to-fan projected rays")
    return out


def test_criterion_6_fixtures(fixture_reports):
    failures = _fixture_failures(fixture_reports)
    record_criterion(6, not failures, "hopf4, badimb, simplex3 as derived"
                     + (f"; failed: {failures}" if failures else ""))
    assert not failures, failures


# -- 7 ------------------------------------------------------------------------------

def test_criterion_7_certificates(main_theorem, roundtrips, properness, completeness,
                                  polytopality, fixture_reports, certs):
    failed = []
    for label, check in certs:
        ok, why = check()
        if not ok:
            failed.append(f"{label}: {why}")
    record_criterion(7, bool(certs) and not failed,
                     f"{len(certs) - len(failed)}/{len(certs)} certificates re-verified")
    assert certs
    assert not failed, failed[:10]
