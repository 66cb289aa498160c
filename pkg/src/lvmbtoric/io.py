"""JSON (de)serialization of data, fans, toric pairs and certificates.

Rationals are written as strings ``"p/q"`` (or ``"p"``).  On input JSON
integers are accepted too.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

import jsonschema

from .datum import ImbricationFailure, LvmbDatum, ValidationReport
from .errors import LvmbError
from .exact import SubspaceBasis, rat_str
from .fan import Fan, InjectivityWitness, OverlapWitness
from .lp import HullsVerdict, RelintVerdict

_RAT = {"oneOf": [{"type": "string", "pattern": r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"},
                  {"type": "integer"}]}
_VEC = {"type": "array", "items": _RAT}
_INDEX_SET = {"type": "array", "items": {"type": "integer", "minimum": 0}}

DATUM_SCHEMA = {
    "type": "object",
    "required": ["m", "n", "ell", "family"],
    "properties": {
        "m": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "ell": {"type": "array", "items": _VEC},
        "family": {"type": "array", "minItems": 1, "items": _INDEX_SET},
    },
}

FAN_SCHEMA = {
    "type": "object",
    "required": ["ambient_dim", "rays", "cones"],
    "properties": {
        "ambient_dim": {"type": "integer", "minimum": 0},
        "rays": {"type": "array", "items": _VEC},
        "cones": {"type": "array", "items": _INDEX_SET},
    },
}

SUBSPACE_SCHEMA = {
    "type": "object",
    "required": ["ambient_dim", "vectors"],
    "properties": {
        "ambient_dim": {"type": "integer", "minimum": 1},
        "vectors": {"type": "array", "items": _VEC},
    },
}

TORIC_SCHEMA = {
    "type": "object",
    "required": ["subspace", "fan"],
    "properties": {"subspace": SUBSPACE_SCHEMA, "fan": FAN_SCHEMA},
}


class InputError(LvmbError):
    """Malformed input file."""


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return loads(text, path)


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}",
                         {"line": exc.lineno, "column": exc.colno}) from None


def digest(obj: Any) -> str:
    return "sha256:" + hashlib.sha256(dumps(obj).encode()).hexdigest()


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _check(obj, schema, what):
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(root)"
        raise InputError(f"invalid {what} at {where}: {exc.message}", {"path": where}) from None


# -- encoders -----------------------------------------------------------------------

def rat(q) -> str:
    return rat_str(Fraction(q))


def rvec(v) -> list:
    return [rat(x) for x in v]


def rmat(rows) -> list:
    return [rvec(r) for r in rows]


def iset(s) -> list:
    return sorted(int(i) for i in s)


def datum_to_json(d: LvmbDatum) -> dict:
    return {"m": d.m, "n": d.n, "ell": rmat(d.ell), "family": [list(P) for P in d.members]}


def fan_to_json(f: Fan) -> dict:
    cones = sorted(f.cones, key=lambda c: (len(c), sorted(c)))
    return {"ambient_dim": f.ambient_dim, "rays": rmat(f.rays), "cones": [iset(c) for c in cones]}


def subspace_to_json(E: SubspaceBasis) -> dict:
    return {"ambient_dim": E.ambient_dim, "vectors": rmat(E.vectors)}


def toric_to_json(E: SubspaceBasis, f: Fan) -> dict:
    return {"subspace": subspace_to_json(E), "fan": fan_to_json(f)}


# -- decoders -----------------------------------------------------------------------

def _rat_in(x) -> Fraction:
    return Fraction(x)


def _vec_in(v) -> tuple:
    return tuple(_rat_in(x) for x in v)


def datum_from_json(obj) -> LvmbDatum:
    _check(obj, DATUM_SCHEMA, "datum")
    return LvmbDatum(obj["m"], obj["n"], tuple(_vec_in(p) for p in obj["ell"]),
                     frozenset(frozenset(P) for P in obj["family"]))


def fan_from_json(obj) -> Fan:
    """Rays are normalized to primitive vectors; cones are closed under faces."""
    _check(obj, FAN_SCHEMA, "fan")
    try:
        return Fan.from_cones(obj["ambient_dim"], [_vec_in(r) for r in obj["rays"]], obj["cones"])
    except ValueError as exc:
        if isinstance(exc, LvmbError):
            raise
        raise InputError(str(exc)) from None


def subspace_from_json(obj) -> SubspaceBasis:
    _check(obj, SUBSPACE_SCHEMA, "subspace")
    try:
        return SubspaceBasis(obj["ambient_dim"], tuple(_vec_in(v) for v in obj["vectors"]))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def toric_from_json(obj):
    _check(obj, TORIC_SCHEMA, "toric pair")
    return subspace_from_json(obj["subspace"]), fan_from_json(obj["fan"])


# -- certificates -------------------------------------------------------------------

def hulls_certificate(v: HullsVerdict, members) -> dict:
    """``members`` are the index sets whose hulls were intersected."""
    fams = [list(P) for P in members]
    if v.nonempty:
        return {"kind": "common_point", "members": fams, "point": rvec(v.point)}
    return {"kind": "separation", "members": fams,
            "functionals": rmat(v.functionals), "rho": rat(v.rho)}


def imbrication_certificate(fail: ImbricationFailure) -> dict:
    return hulls_certificate(fail.verdict, [fail.P, fail.Q])


def validation_checks(rep: ValidationReport) -> list:
    checks = [
        {"name": "generic_position", "ok": rep.generic_position},
        {"name": "sep", "ok": rep.sep},
        {"name": "imbrication", "ok": rep.imbrication},
    ]
    if not rep.generic_position:
        checks[0]["certificate"] = {"kind": "dependent_subset", "subset": list(rep.generic_witness)}
    if not rep.sep:
        P, i = rep.sep_counterexample
        checks[1]["certificate"] = {"kind": "sep_violation", "member": list(P), "index": i}
    if rep.imbrication is False:
        checks[2]["certificate"] = imbrication_certificate(rep.imbrication_failure)
    elif rep.imbrication:
        checks[2]["certificate"] = {
            "kind": "pair_points",
            "pairs": [{"members": [list(P), list(Q)], "point": rvec(x)}
                      for (P, Q), x in sorted(rep.pair_points.items())],
        }
    checks.append({"name": "indispensable", "ok": True, "value": iset(rep.indispensable)})
    return checks


def validation_certificate(rep: ValidationReport) -> dict | None:
    """Certificate of the first failed check, if any."""
    for c in validation_checks(rep):
        if c["ok"] is False:
            return c.get("certificate")
    return None


def injectivity_certificate(w: InjectivityWitness) -> dict:
    return {"kind": "injectivity", "sigma": iset(w.sigma), "tau": iset(w.tau),
            "x": rvec(w.x), "y": rvec(w.y), "v": rvec(w.v)}


def relint_certificate(rv: RelintVerdict, members) -> dict:
    fams = [list(S) for S in members]
    if rv.nonempty:
        return {"kind": "relint_point", "members": fams, "point": rvec(rv.point)}
    if rv.inner is None:
        return {"kind": "relint_empty", "members": fams}
    return {"kind": "relint_separation", "members": fams,
            "chart_base": rvec(rv.chart.base), "chart_directions": rmat(rv.chart.directions),
            "functionals": rmat(rv.inner.functionals), "rho": rat(rv.inner.rho)}


def polytopality_certificate(v, f: Fan) -> dict:
    """Certificate of a :class:`~lvmbtoric.shephard.PolytopalityVerdict` on ``f``.

    Member indices refer to positions in ``used_rays``.
    """
    if v.family is None:
        return {"kind": "trivial_dimension"}
    cert = relint_certificate(v.relint, v.complements)
    cert["used_rays"] = f.used_rays()
    cert["shephard_vectors"] = rmat(v.family.vectors)
    cert["lambdas"] = rvec(v.family.lambdas)
    return cert


def completeness_certificate(cert: dict | None) -> dict | None:
    if cert is None:
        return None
    out = dict(cert)
    if "uncovered" in out:
        out["uncovered"] = rvec(out["uncovered"])
    return out


def support_function_certificate(ok: bool, h, f: Fan) -> dict:
    return {"kind": "support_function", "ok": ok, "used_rays": f.used_rays(), "heights": rvec(h)}


def equivalence_certificate(info: dict) -> dict:
    out = dict(info)
    if "linear" in out:
        out["linear"] = rmat(out["linear"])
        out["shift"] = rvec(out["shift"])
    return out


def overlap_certificate(w: OverlapWitness) -> dict:
    return {"kind": "overlap", "sigma": iset(w.sigma), "tau": iset(w.tau),
            "x": rvec(w.x), "a": rvec(w.a), "b": rvec(w.b)}
