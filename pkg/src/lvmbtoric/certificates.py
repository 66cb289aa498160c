"""Re-check certificates by direct substitution.

Every verifier takes a JSON-form certificate (as produced by :mod:`lvmbtoric.io`)
and the objects it speaks about, and returns ``(ok, reason)``.  None of
them runs an LP or any other decision procedure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .datum import LvmbDatum, indispensable
from .exact import (
    SubspaceBasis, add, affinely_independent, det, dot, is_zero, lin_comb, matvec,
    rank, solve, sub, transpose,
)
from .fan import Fan, cone_membership, relation_across
from .lp import barycentric_coordinates

ONE = Fraction(1)


def _v(xs) -> tuple:
    return tuple(Fraction(x) for x in xs)


def _m(rows) -> list:
    return [_v(r) for r in rows]


def _fail(msg):
    return False, msg


def _separation(groups: Sequence[Sequence], functionals, rho) -> tuple:
    """Functionals on lifted points proving the open hulls of ``groups`` are disjoint."""
    if len(functionals) != len(groups):
        return _fail("one functional per member expected")
    if rho > 0:
        return _fail("rho must be nonpositive")
    k = len(groups[0][0])
    total = Fraction(0)
    acc = (Fraction(0),) * (k + 1)
    for pts, w in zip(groups, functionals):
        if len(w) != k + 1:
            return _fail("functional of wrong length")
        for p in pts:
            val = dot(w, tuple(p) + (ONE,))
            if val < 0:
                return _fail("functional negative on its own member")
            total += val
        acc = add(acc, w)
    if acc != (Fraction(0),) * k + (rho,):
        return _fail("functionals do not sum to (0, rho)")
    if total <= 0:
        return _fail("functionals vanish on every point")
    return True, "separation verified"


def _positive_in(pts: Sequence, x: Sequence) -> bool:
    if not affinely_independent(pts):
        return False
    lam = barycentric_coordinates(pts, x)
    return lam is not None and all(a > 0 for a in lam)


def _members_ok(d: LvmbDatum, members) -> bool:
    return all(frozenset(P) in d.family for P in members)


# -- datum certificates -------------------------------------------------------------

def verify_dependent_subset(cert, d: LvmbDatum):
    S = cert["subset"]
    if len(set(S)) != 2 * d.m + 1 or not all(0 <= i <= d.n for i in S):
        return _fail("subset has the wrong size")
    if affinely_independent(d.points(S)):
        return _fail("subset is affinely independent")
    return True, "affinely dependent subset"


def verify_sep_violation(cert, d: LvmbDatum):
    P = frozenset(cert["member"])
    i = cert["index"]
    if P not in d.family or i in P or not 0 <= i <= d.n:
        return _fail("not a member/index pair")
    if any((P - {j}) | {i} in d.family for j in P):
        return _fail("a substitute exists")
    return True, "no substitute exists"


def verify_hulls(cert, d: LvmbDatum, *, all_members: bool = False):
    members = cert["members"]
    if not _members_ok(d, members):
        return _fail("certificate refers to non-members")
    if all_members and {frozenset(P) for P in members} != d.family:
        return _fail("certificate does not cover the whole family")
    groups = [d.points(P) for P in members]
    if cert["kind"] == "common_point":
        x = _v(cert["point"])
        if all(_positive_in(g, x) for g in groups):
            return True, "point interior to every hull"
        return _fail("point not interior to some hull")
    if cert["kind"] == "separation":
        return _separation(groups, _m(cert["functionals"]), Fraction(cert["rho"]))
    return _fail(f"unexpected kind {cert['kind']}")


def verify_pair_points(cert, d: LvmbDatum):
    """Every pair of members has a recorded common interior point."""
    seen = set()
    for entry in cert["pairs"]:
        P, Q = entry["members"]
        if not _members_ok(d, [P, Q]):
            return _fail("certificate refers to non-members")
        x = _v(entry["point"])
        if not (_positive_in(d.points(P), x) and _positive_in(d.points(Q), x)):
            return _fail(f"point not interior to both of {P}, {Q}")
        seen.add(frozenset([frozenset(P), frozenset(Q)]))
    members = [frozenset(P) for P in d.members]
    need = {frozenset([a, b]) for i, a in enumerate(members) for b in members[i + 1:]}
    if not need <= seen:
        return _fail("some pair has no witness")
    return True, "all pairs meet"


def verify_indispensable(cert, d: LvmbDatum):
    idx = frozenset(cert["indices"])
    if idx != indispensable(d) or len(idx) != 2 * d.m:
        return _fail("not 2m indispensable indices")
    return True, "2m indispensable indices"


# -- fan certificates ---------------------------------------------------------------

def verify_injectivity(cert, f: Fan, E: SubspaceBasis):
    s, t = frozenset(cert["sigma"]), frozenset(cert["tau"])
    if s not in f.cones or t not in f.cones:
        return _fail("cones not in the fan")
    x, y, v = _v(cert["x"]), _v(cert["y"]), _v(cert["v"])
    if cone_membership(f.generators(s), x) is None or cone_membership(f.generators(t), y) is None:
        return _fail("points not in their cones")
    if sub(y, x) != v or is_zero(v) or not E.contains(v):
        return _fail("v is not a nonzero element y - x of E")
    return True, "two distinct points with the same image"


def verify_completeness(cert, f: Fan, expected_dim: int):
    maxi = set(f.maximal)
    kind = cert["kind"]
    if kind == "dimension":
        c = frozenset(cert["cone"])
        if c not in maxi or len(c) == expected_dim:
            return _fail("cone is maximal of the right dimension")
        return True, "maximal cone of wrong dimension"
    if kind == "ridge":
        ridge = frozenset(cert["ridge"])
        containing = [c for c in maxi if ridge < c]
        if len(ridge) != expected_dim - 1 or not containing or len(containing) == 2:
            return _fail("ridge is paired")
        if {frozenset(c) for c in cert["cones"]} != set(containing):
            return _fail("listed cones differ")
        return True, "ridge in fewer or more than two maximal cones"
    return _fail(f"unexpected kind {kind}")


def verify_uncovered(direction, projected: Fan):
    x = _v(direction)
    if is_zero(x):
        return _fail("zero direction")
    if any(cone_membership(projected.generators(c), x) is not None for c in projected.maximal):
        return _fail("direction is covered")
    return True, "direction outside every cone"


def verify_overlap(cert, f: Fan):
    s, t = frozenset(cert["sigma"]), frozenset(cert["tau"])
    if s not in f.cones or t not in f.cones:
        return _fail("cones not in the fan")
    x, a, b = _v(cert["x"]), _v(cert["a"]), _v(cert["b"])
    if any(c < 0 for c in a + b):
        return _fail("negative coefficient")
    if lin_comb(a, f.generators(s), f.ambient_dim) != x or lin_comb(b, f.generators(t), f.ambient_dim) != x:
        return _fail("coefficients do not reproduce x")
    sg, tg = sorted(s), sorted(t)
    if not any(c > 0 and g not in t for c, g in zip(a, sg)) and \
            not any(c > 0 and g not in s for c, g in zip(b, tg)):
        return _fail("x lies in the common face")
    return True, "common point outside the shared face"


def verify_shephard(f: Fan, used: Sequence[int], lambdas, vectors) -> tuple:
    if list(used) != f.used_rays():
        return _fail("wrong ray list")
    X = [f.rays[i] for i in used]
    lam, V = _v(lambdas), _m(vectors)
    r = len(X)
    if len(lam) != r or len(V) != r or any(a <= 0 for a in lam):
        return _fail("bad weights")
    scaled = [tuple(a * c for c in x) for a, x in zip(lam, X)]
    if not is_zero(lin_comb([ONE] * r, scaled, f.ambient_dim)):
        return _fail("weights are not a dependence")
    if any(v[-1] != 1 for v in V):
        return _fail("last coordinates must be 1")
    cols = transpose(V)
    if any(not is_zero(lin_comb(col, scaled, f.ambient_dim)) for col in cols):
        return _fail("columns not in the kernel")
    if rank(cols) != r - rank(X):
        return _fail("columns do not span the kernel")
    return True, "Shephard transform verified"


def _complements(f: Fan, used) -> set:
    pos = {ray: k for k, ray in enumerate(used)}
    out = set()
    for c in f.maximal:
        inside = {pos[i] for i in c}
        out.add(frozenset(k for k in range(len(used)) if k not in inside))
    return out


def verify_polytopality(cert, f: Fan):
    if cert["kind"] == "trivial_dimension":
        return (True, "zero-dimensional fan") if f.ambient_dim == 0 else _fail("not R^0")
    ok, why = verify_shephard(f, cert["used_rays"], cert["lambdas"], cert["shephard_vectors"])
    if not ok:
        return ok, why
    members = cert["members"]
    if {frozenset(S) for S in members} != _complements(f, cert["used_rays"]):
        return _fail("members are not the complements of the maximal cones")
    V = _m(cert["shephard_vectors"])
    groups = [[V[k] for k in S] for S in members]
    if cert["kind"] == "relint_point":
        x = _v(cert["point"])
        if all(_positive_in(g, x) for g in groups):
            return True, "common relative-interior point"
        return _fail("point not in some relative interior")
    if cert["kind"] == "relint_separation":
        base, dirs = _v(cert["chart_base"]), _m(cert["chart_directions"])
        if dirs and rank(dirs) != len(dirs):
            return _fail("chart directions dependent")
        charted = []
        for g in groups:
            cg = []
            for p in g:
                c = solve(transpose(dirs), sub(p, base)) if dirs else ()
                if c is None or add(base, lin_comb(c, dirs, len(base))) != p:
                    return _fail("point off the chart")
                cg.append(c)
            charted.append(cg)
        return _separation(charted, _m(cert["functionals"]), Fraction(cert["rho"]))
    return _fail(f"unexpected kind {cert['kind']}")


def verify_support_function(cert, f: Fan):
    """Strict convexity across every wall for the recorded heights."""
    if not cert["ok"]:
        return True, "negative oracle outcome carries no certificate"
    used = cert["used_rays"]
    h = dict(zip(used, _v(cert["heights"])))
    by_ridge: dict = {}
    for s in f.maximal:
        for j in s:
            by_ridge.setdefault(s - {j}, []).append(s)
    for pair in by_ridge.values():
        if len(pair) != 2:
            return _fail("fan not complete")
        rel = relation_across(f, *pair)
        if sum(c * h[i] for i, c in rel.items()) <= 0:
            return _fail("wall not strictly convex")
    return True, "strictly convex heights"


# -- equivalence --------------------------------------------------------------------

def verify_equivalence(cert, d1: LvmbDatum, d2: LvmbDatum):
    kind = cert["kind"]
    if kind == "shape_mismatch":
        return ((d1.m, d1.n) != (d2.m, d2.n)), "sizes differ"
    if kind == "family_mismatch":
        return d1.family != d2.family, "families differ"
    if kind == "affine_map":
        L, c = _m(cert["linear"]), _v(cert["shift"])
        if det(L) == 0:
            return _fail("map is singular")
        if all(add(matvec(L, p), c) == q for p, q in zip(d1.ell, d2.ell)):
            return True, "affine map carries one datum to the other"
        return _fail("map does not carry the points")
    if kind == "affine_mismatch":
        S = cert["basis"]
        L, c = _m(cert["linear"]), _v(cert["shift"])
        if len(S) != 2 * d1.m + 1 or not affinely_independent(d1.points(S)):
            return _fail("basis is not affine")
        if any(add(matvec(L, d1.ell[j]), c) != d2.ell[j] for j in S):
            return _fail("map does not fix the basis images")
        i = cert.get("index")
        if i is None:
            return (det(L) == 0), "the only candidate map is singular"
        if add(matvec(L, d1.ell[i]), c) == d2.ell[i]:
            return _fail("map agrees at the index")
        return True, "the unique candidate map disagrees at the index"
    return _fail(f"unexpected kind {kind}")
