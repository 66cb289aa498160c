"""Verdict reports for every command, and the pass that re-checks their certificates.

A report is a JSON object with ``command``, ``verdict`` (true, false,
``"invalid"`` or ``"inconsistent"``), ``certificate``, ``checks``,
``input_digest`` and the normalized ``input``, so that :func:`verify_report`
can re-check it without the original files.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import get_context

from . import certificates as C
from .datum import (
    LvmbDatum, ValidationReport, check_generic_position, check_lvm_bosio, check_sep,
    explain_equivalence, from_toric, indispensable, raw_toric, to_toric, validate,
)
from .errors import InternalInconsistency, LvmbError
from .fan import (
    Fan, InjectivityWitness, check_projected_completeness, project_fan, validate_fan,
)
from .generate import GeneratorConfig, generate_datum
from .io import (
    datum_from_json, datum_to_json, equivalence_certificate,
    fan_from_json, fan_to_json, hulls_certificate, injectivity_certificate, iset,
    polytopality_certificate, support_function_certificate, toric_from_json,
    toric_to_json, validation_certificate, validation_checks, overlap_certificate,
)
from .shephard import shephard_verdict, support_function_oracle

EXIT_TRUE, EXIT_FALSE, EXIT_INVALID, EXIT_INCONSISTENT = 0, 1, 2, 3


@dataclass
class Outcome:
    code: int
    report: dict
    output: dict | None = None


def jsonable(x):
    if isinstance(x, ValidationReport):
        return validation_certificate(x)
    if isinstance(x, InjectivityWitness):
        return injectivity_certificate(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(i) for i in x)
    if isinstance(x, (list, tuple)):
        return [jsonable(i) for i in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    return x


def envelope(command, verdict, certificate=None, checks=(), inputs=None, digest=None, **extra):
    rep = {"command": command, "verdict": verdict, "certificate": certificate,
           "checks": list(checks), "input_digest": digest, "input": inputs}
    rep.update(extra)
    return rep


def _code(verdict: bool) -> int:
    return EXIT_TRUE if verdict else EXIT_FALSE


def guarded(command, inputs, digest, body) -> Outcome:
    """Run ``body``; turn input errors into exit 2 and inconsistencies into exit 3."""
    try:
        return body()
    except InternalInconsistency as exc:
        return Outcome(EXIT_INCONSISTENT, envelope(
            command, "inconsistent", jsonable(exc.certificates), inputs=inputs, digest=digest,
            error=str(exc)))
    except LvmbError as exc:
        return Outcome(EXIT_INVALID, envelope(
            command, "invalid", jsonable(exc.certificate), inputs=inputs, digest=digest,
            error=str(exc)))


# -- commands -----------------------------------------------------------------------

def run_validate(obj, digest=None) -> Outcome:
    def body():
        d = datum_from_json(obj)
        rep = validate(d)
        return Outcome(_code(rep.is_lvmb), envelope(
            "validate", rep.is_lvmb, validation_certificate(rep), validation_checks(rep),
            {"datum": datum_to_json(d)}, digest))
    return guarded("validate", {"datum": obj}, digest, body)


def lvm_checks(d: LvmbDatum, method: str = "both") -> tuple[bool, list]:
    """Run the requested criteria on an LVMB datum; raise on disagreement."""
    checks = []
    verdicts = []
    if method in ("bosio", "both"):
        ok, hv = check_lvm_bosio(d, check=False)
        checks.append({"name": "bosio", "ok": ok, "certificate": hulls_certificate(hv, d.members)})
        verdicts.append(ok)
    if method in ("fan", "both"):
        E, delta = raw_toric(d)
        pf = project_fan(delta, E, check=False)
        v = shephard_verdict(pf.base)
        checks.append({"name": "fan", "ok": v.polytopal,
                       "certificate": polytopality_certificate(v, pf.base)})
        verdicts.append(v.polytopal)
        ind = indispensable(d)
        if len(ind) == 2 * d.m:
            checks.append({"name": "indispensable_2m", "ok": True,
                           "certificate": {"kind": "indispensable", "indices": iset(ind)}})
            verdicts.append(True)
    if len(set(verdicts)) > 1:
        raise InternalInconsistency("LVM criteria disagree", checks)
    return verdicts[0], checks


def run_check_lvm(obj, method="both", digest=None) -> Outcome:
    def body():
        d = datum_from_json(obj)
        rep = validate(d)
        if not rep.is_lvmb:
            raise LvmbError("not an LVMB datum", rep)
        verdict, checks = lvm_checks(d, method)
        return Outcome(_code(verdict), envelope(
            "check-lvm", verdict, None, checks, {"datum": datum_to_json(d)}, digest, method=method))
    return guarded("check-lvm", {"datum": obj}, digest, body)


def run_to_fan(obj, digest=None, samples: int = 1000) -> Outcome:
    def body():
        d = datum_from_json(obj)
        E, delta = to_toric(d)
        complete, _ = check_projected_completeness(delta, E, samples=samples)
        pf = project_fan(delta, E, check=False)
        checks = [{"name": "support_injective", "ok": True},
                  {"name": "complete", "ok": complete},
                  {"name": "covering_samples", "ok": True, "value": samples}]
        out = toric_to_json(E, delta)
        return Outcome(EXIT_TRUE, envelope(
            "to-fan", True, None, checks, {"datum": datum_to_json(d)}, digest,
            output=out, projected_fan=fan_to_json(pf.base)), out)
    return guarded("to-fan", {"datum": obj}, digest, body)


def run_from_fan(obj, digest=None) -> Outcome:
    def body():
        E, delta = toric_from_json(obj)
        d = from_toric(E, delta)
        if not validate(d).is_lvmb:
            raise InternalInconsistency("pair produced a datum that is not LVMB", datum_to_json(d))
        out = datum_to_json(d)
        return Outcome(EXIT_TRUE, envelope(
            "from-fan", True, None, [{"name": "is_lvmb", "ok": True}],
            {"toric": toric_to_json(E, delta)}, digest, output=out), out)
    return guarded("from-fan", {"toric": obj}, digest, body)


def run_polytopal(obj, digest=None) -> Outcome:
    def body():
        f = fan_from_json(obj)
        ok, wit = validate_fan(f)
        if not ok:
            raise LvmbError("cones overlap", overlap_certificate(wit))
        v = shephard_verdict(f)
        oracle, h = support_function_oracle(f)
        checks = [{"name": "shephard", "ok": v.polytopal},
                  {"name": "support_function", "ok": oracle,
                   "certificate": support_function_certificate(oracle, h, f)}]
        if oracle != v.polytopal:
            raise InternalInconsistency("polytopality oracles disagree", checks)
        return Outcome(_code(v.polytopal), envelope(
            "polytopal", v.polytopal, polytopality_certificate(v, f), checks,
            {"fan": fan_to_json(f)}, digest))
    return guarded("polytopal", {"fan": obj}, digest, body)


def run_equiv(a, b, digest=None) -> Outcome:
    def body():
        d1, d2 = datum_from_json(a), datum_from_json(b)
        for d in (d1, d2):
            rep = validate(d)
            if not rep.is_lvmb:
                raise LvmbError("not an LVMB datum", rep)
        ok, info = explain_equivalence(d1, d2)
        return Outcome(_code(ok), envelope(
            "equiv", ok, equivalence_certificate(info), [],
            {"a": datum_to_json(d1), "b": datum_to_json(d2)}, digest))
    return guarded("equiv", {"a": a, "b": b}, digest, body)


def run_gen(cfg: GeneratorConfig) -> Outcome:
    def body():
        d = generate_datum(cfg)
        out = datum_to_json(d)
        lvmb = validate(d).is_lvmb
        return Outcome(EXIT_TRUE, envelope(
            "gen", True, None, [{"name": "is_lvmb", "ok": lvmb}], {"config": vars_of(cfg)},
            None, output=out), out)
    return guarded("gen", {"config": vars_of(cfg)}, None, body)


def vars_of(cfg: GeneratorConfig) -> dict:
    return {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}


def cross_check(cfg: GeneratorConfig) -> dict:
    """Generate one datum and run both LVM criteria on it."""
    d = generate_datum(cfg)
    row = {"config": vars_of(cfg), "datum": datum_to_json(d)}
    try:
        verdict, checks = lvm_checks(d, "both")
        row.update(agree=True, verdict=verdict, checks=checks)
    except InternalInconsistency as exc:
        row.update(agree=False, verdict=None, checks=jsonable(exc.certificates))
    return row


def workers() -> int:
    env = os.environ.get("LVMB_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, min(os.cpu_count() or 1, 8))


def parallel_map(fn, items, nworkers=None):
    """Order-preserving map, in worker processes when more than one is allowed."""
    nworkers = workers() if nworkers is None else nworkers
    items = list(items)
    if nworkers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with get_context("spawn").Pool(nworkers) as pool:
        return pool.map(fn, items, chunksize=1)


def run_batch(count: int, m: int, n: int, seed: int, mutations: int = 0,
              nworkers: int | None = None) -> Outcome:
    def body():
        cfgs = [GeneratorConfig(m, n, seed + i, mutations=mutations) for i in range(count)]
        rows = parallel_map(cross_check, cfgs, nworkers)
        for i, r in enumerate(rows):
            r["index"] = i
        bad = [r["index"] for r in rows if not r["agree"]]
        summary = {"count": count, "lvm": sum(1 for r in rows if r["verdict"] is True),
                   "non_lvm": sum(1 for r in rows if r["verdict"] is False),
                   "disagreements": bad}
        params = {"count": count, "m": m, "n": n, "seed": seed, "mutations": mutations}
        if bad:
            return Outcome(EXIT_INCONSISTENT, envelope(
                "batch", "inconsistent", {"disagreements": bad}, rows, params, None,
                summary=summary))
        return Outcome(EXIT_TRUE, envelope("batch", True, None, rows, params, None,
                                           summary=summary))
    return guarded("batch", None, None, body)


# -- verification -------------------------------------------------------------------

def _projected_of(d: LvmbDatum) -> Fan:
    E, delta = raw_toric(d)
    return project_fan(delta, E, check=False).base


def verify_datum_certificate(cert: dict, d: LvmbDatum) -> tuple:
    kind = cert["kind"]
    if kind == "dependent_subset":
        return C.verify_dependent_subset(cert, d)
    if kind == "sep_violation":
        return C.verify_sep_violation(cert, d)
    if kind in ("common_point", "separation"):
        return C.verify_hulls(cert, d)
    if kind == "pair_points":
        return C.verify_pair_points(cert, d)
    if kind == "indispensable":
        return C.verify_indispensable(cert, d)
    return False, f"unknown certificate kind {kind}"


def _verify_lvm_checks(checks: list, d: LvmbDatum) -> list:
    out = []
    for c in checks:
        cert = c["certificate"]
        if c["name"] == "bosio":
            ok, why = C.verify_hulls(cert, d, all_members=True)
            ok = ok and (cert["kind"] == "common_point") == c["ok"]
        elif c["name"] == "fan":
            ok, why = C.verify_polytopality(cert, _projected_of(d))
            ok = ok and (cert["kind"] in ("relint_point", "trivial_dimension")) == c["ok"]
        else:
            ok, why = C.verify_indispensable(cert, d)
        out.append({"name": c["name"], "ok": ok, "reason": why})
    return out


def verify_report(report: dict) -> list:
    """Re-check every certificate of a report; one entry per certificate."""
    cmd = report["command"]
    verdict = report["verdict"]
    inputs = report.get("input") or {}
    results = []

    def add(name, res):
        results.append({"name": name, "ok": bool(res[0]), "reason": res[1]})

    if verdict == "invalid":
        cert = report["certificate"]
        if isinstance(cert, dict) and "kind" in cert:
            results.append(_verify_invalid(cmd, cert, inputs))
    elif cmd == "validate":
        d = datum_from_json(inputs["datum"])
        for c in report["checks"]:
            if "certificate" in c:
                add(c["name"], verify_datum_certificate(c["certificate"], d))
        if verdict is True:
            add("generic_position", (check_generic_position(d)[0], "rechecked"))
            add("sep", (check_sep(d)[0], "rechecked"))
    elif cmd == "check-lvm":
        d = datum_from_json(inputs["datum"])
        results.extend(_verify_lvm_checks(report["checks"], d))
    elif cmd == "to-fan":
        d = datum_from_json(inputs["datum"])
        E, delta = raw_toric(d)
        add("output", (report["output"] == toric_to_json(E, delta), "recomputed from the datum"))
    elif cmd == "from-fan":
        E, delta = toric_from_json(inputs["toric"])
        if verdict is True:
            d = datum_from_json(report["output"])
            E2, delta2 = raw_toric(d)
            add("roundtrip", (E2.same_span(E) and delta2.same_as(delta), "pair rebuilt from output"))
    elif cmd == "polytopal":
        f = fan_from_json(inputs["fan"])
        cert = report["certificate"]
        if verdict in (True, False):
            add("shephard", C.verify_polytopality(cert, f))
            for c in report["checks"]:
                if "certificate" in c:
                    add(c["name"], C.verify_support_function(c["certificate"], f))
    elif cmd == "equiv":
        add("equivalence", C.verify_equivalence(report["certificate"],
                                                datum_from_json(inputs["a"]),
                                                datum_from_json(inputs["b"])))
    elif cmd == "batch":
        for row in report["checks"]:
            d = datum_from_json(row["datum"])
            for r in _verify_lvm_checks(row["checks"], d):
                r["name"] = f"{row['index']}:{r['name']}"
                results.append(r)
    return results


def _verify_invalid(cmd: str, cert: dict, inputs: dict) -> dict:
    """Certificates explaining why an input was rejected."""
    kind = cert["kind"]
    if cmd in ("validate", "check-lvm", "to-fan"):
        res = verify_datum_certificate(cert, datum_from_json(inputs["datum"]))
    elif cmd == "equiv":
        errs = [verify_datum_certificate(cert, datum_from_json(inputs[k])) for k in ("a", "b")]
        res = (any(e[0] for e in errs), "; ".join(e[1] for e in errs))
    elif cmd == "from-fan":
        E, delta = toric_from_json(inputs["toric"])
        if kind == "injectivity":
            res = C.verify_injectivity(cert, delta, E)
        elif kind in ("dimension", "ridge"):
            res = C.verify_completeness(cert, delta, delta.ambient_dim - E.dim)
        else:
            res = (False, f"unknown certificate kind {kind}")
    elif cmd == "polytopal":
        f = fan_from_json(inputs["fan"])
        if kind == "overlap":
            res = C.verify_overlap(cert, f)
        else:
            res = C.verify_completeness(cert, f, f.ambient_dim)
    else:
        res = (False, f"no verifier for {cmd}")
    return {"name": "rejection", "ok": bool(res[0]), "reason": res[1]}


def run_verify(report: dict, digest=None) -> Outcome:
    def body():
        results = verify_report(report)
        ok = all(r["ok"] for r in results)
        return Outcome(_code(ok), envelope(
            "verify", ok, None, results, {"command": report.get("command")}, digest,
            verified=len(results)))
    try:
        return guarded("verify", None, digest, body)
    except (KeyError, TypeError) as exc:
        return Outcome(EXIT_INVALID, envelope("verify", "invalid", None, [], None, digest,
                                              error=f"malformed report: {exc!r}"))
