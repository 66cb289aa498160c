"""Linear and Shephard transforms, polytopality of complete fans, fan-side LVM test."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .datum import LvmbDatum, indispensable, require_lvmb, to_toric
from .errors import LvmbError, NotCompleteError
from .exact import dot, is_zero, kernel_basis, rank, solve, transpose, unit, vec
from .fan import Fan, completeness_checks, project_fan, relation_across
from .lp import (
    EQ, GE, LE, Constraint, LinearProgram, RelintVerdict, decide_relint_hulls, lp_solve,
    positive_dependence,
)

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class ShephardFamily:
    """Vectors with last coordinate 1, dual to a positively spanning family.

    ``provenance[i]`` is the index in the source family of ``vectors[i]``;
    ``lambdas`` are the positive weights of the source dependence (empty
    after a reduction, where they are no longer meaningful).
    """

    vectors: tuple
    lambdas: tuple
    provenance: tuple

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(vec(v) for v in self.vectors))
        if any(not v or v[-1] != 1 for v in self.vectors):
            raise LvmbError("Shephard vectors must end in 1")

    @property
    def dim(self) -> int:
        return len(self.vectors[0]) if self.vectors else 0

    def index_of(self, source_index: int) -> int:
        return self.provenance.index(source_index)


def linear_transform(X: Sequence[Sequence]) -> list:
    """Row i of the matrix whose columns are a kernel basis of ``[X_1 ... X_r]``."""
    X = [vec(x) for x in X]
    cols = kernel_basis(transpose(X), len(X))
    return [tuple(k[i] for k in cols) for i in range(len(X))]


def shephard_transform(X: Sequence[Sequence]) -> ShephardFamily:
    """Linear transform of ``lambda_i X_i`` with the all-ones kernel vector last."""
    X = [vec(x) for x in X]
    lam = positive_dependence(X)
    if lam is None:
        raise LvmbError("vectors do not positively span")
    scaled = [tuple(l * a for a in x) for l, x in zip(lam, X)]
    r = len(X)
    basis = kernel_basis(transpose(scaled), r)
    ones = (ONE,) * r
    # write ones in the basis, then swap it in for the first vector it uses
    coeffs = solve(transpose(basis), ones)
    j = next(i for i, c in enumerate(coeffs) if c != 0)
    basis = basis[:j] + basis[j + 1:] + [ones]
    vectors = [tuple(k[i] for k in basis) for i in range(r)]
    return ShephardFamily(tuple(vectors), tuple(lam), tuple(range(r)))


def _require_complete(f: Fan):
    ch = completeness_checks(f)
    if not ch.complete:
        raise NotCompleteError("fan is not complete", ch.certificate())


@dataclass(frozen=True)
class PolytopalityVerdict:
    """Shephard test outcome: the family, index sets of the complements, verdict."""

    polytopal: bool
    family: ShephardFamily | None
    complements: tuple
    relint: RelintVerdict | None

    @property
    def point(self):
        return self.relint.point if self.relint is not None else ()


def shephard_verdict(f: Fan) -> PolytopalityVerdict:
    _require_complete(f)
    if f.ambient_dim == 0:
        return PolytopalityVerdict(True, None, (), None)
    used = f.used_rays()
    fam = shephard_transform([f.rays[i] for i in used])
    pos = {ray: k for k, ray in enumerate(used)}
    complements = []
    for c in f.maximal:
        inside = {pos[i] for i in c}
        complements.append(tuple(k for k in range(len(used)) if k not in inside))
    rv = decide_relint_hulls([[fam.vectors[k] for k in comp] for comp in complements])
    return PolytopalityVerdict(rv.nonempty, fam, tuple(complements), rv)


def is_polytopal(f: Fan):
    """Shephard's criterion: ``(bool, PolytopalityVerdict)``.

    The fan is polytopal iff the relative interiors of
    ``conv{x_i : i not in sigma}`` over all maximal cones share a point.
    """
    v = shephard_verdict(f)
    return v.polytopal, v


def support_function_oracle(f: Fan):
    """Independent polytopality test via strictly convex conewise-linear functions.

    Values ``h`` on the rays define a function linear on each maximal cone.
    Across the wall between ``R + {a}`` and ``R + {b}`` write
    ``x_b = c_a x_a + sum c_j x_j``; strict convexity asks
    ``h_b - c_a h_a - sum c_j h_j > 0``.  Maximizing the common slack
    ``t <= 1`` decides it.  Returns ``(bool, h)`` with h attaining the
    optimum slack.
    """
    _require_complete(f)
    d = f.ambient_dim
    if d == 0:
        return True, ()
    used = f.used_rays()
    pos = {ray: k for k, ray in enumerate(used)}
    nv = len(used) + 1
    maxi = f.maximal
    cons = []
    by_ridge: dict = {}
    for s in maxi:
        for j in s:
            by_ridge.setdefault(s - {j}, []).append(s)
    for ridge in sorted(by_ridge, key=lambda r: sorted(r)):
        s, t = by_ridge[ridge]
        rel = relation_across(f, s, t)
        coeffs = [ZERO] * nv
        for ray, c in rel.items():
            coeffs[pos[ray]] = c
        coeffs[-1] = -ONE
        cons.append(Constraint(tuple(coeffs), GE, ZERO))
    top = [ZERO] * (nv - 1) + [ONE]
    cons.append(Constraint(tuple(top), LE, ONE))
    out = lp_solve(LinearProgram(nv, cons, tuple(top), "max"))
    h = out.point[:-1]
    return out.value > 0, h


def reduce_indispensable(fam: ShephardFamily, idx: int) -> ShephardFamily:
    """Drop vector ``idx`` by projecting along it and rescaling onto a hyperplane.

    The others are projected to ``w_i = v_i - v_idx`` in {last = 0}; an LP
    finds ``u`` with ``u . w_i >= 1`` (strict separation from 0), each
    ``w_i`` is rescaled onto ``{u . w = 1}`` and coordinates are changed
    so that ``u`` reads as the last one.  ``idx`` indexes ``fam.vectors``.
    """
    D = fam.dim
    if D < 2:
        raise LvmbError("nothing left to reduce")
    v0 = fam.vectors[idx]
    rest = [i for i in range(len(fam.vectors)) if i != idx]
    w = [tuple(a - b for a, b in zip(fam.vectors[i], v0))[:-1] for i in rest]
    k = D - 1
    cons = [Constraint(wi, GE, ONE) for wi in w]
    out = lp_solve(LinearProgram(k, cons, (ZERO,) * k, "max"))
    if out.status != "optimal":
        raise LvmbError("vector lies in the convex hull of the others", {"index": idx})
    u = out.point
    if is_zero(u):
        raise LvmbError("degenerate separating functional", {"index": idx})
    p = next(i for i, a in enumerate(u) if a != 0)
    # new coordinates: e_i . w for i != p, then u . w
    rows = [unit(k, i) for i in range(k) if i != p] + [u]
    assert rank(rows) == k
    out_vecs = []
    for wi in w:
        s = dot(u, wi)
        out_vecs.append(tuple(dot(r, wi) / s for r in rows))
    return ShephardFamily(tuple(out_vecs), (), tuple(fam.provenance[i] for i in rest))


def hat_family(d: LvmbDatum) -> ShephardFamily:
    """The vectors ``(ell_i, 1)``: a Shephard transform of the projected rays."""
    return ShephardFamily(tuple(p + (ONE,) for p in d.ell), (), tuple(range(d.n + 1)))


def relint_verdict_over(fam: ShephardFamily, index_family) -> RelintVerdict:
    """Relative-interior intersection over ``conv{fam[i] : i in S}`` for S in the index family.

    Indices refer to the source family (through provenance); indices that
    were reduced away are skipped.
    """
    groups = []
    for S in index_family:
        g = [fam.vectors[fam.index_of(i)] for i in sorted(S) if i in fam.provenance]
        groups.append(g)
    return decide_relint_hulls(groups)


def check_lvm_via_fan(d: LvmbDatum, *, check: bool = True, short_circuit: bool = True):
    """LVM property through polytopality of the projected fan.

    Returns ``(bool, certificate)`` where the certificate is a
    :class:`PolytopalityVerdict` on the projected fan, or the string
    ``"indispensable"`` when the 2m-indispensable shortcut applied.
    """
    if check:
        require_lvmb(d)
    if short_circuit and len(indispensable(d)) == 2 * d.m:
        return True, "indispensable"
    E, delta = to_toric(d, check=check)
    pf = project_fan(delta, E, check=False)
    v = shephard_verdict(pf.base)
    return v.polytopal, v
