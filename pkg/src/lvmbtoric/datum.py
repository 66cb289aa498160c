"""LVMB data: validity conditions, the convex LVM criterion, toric conversion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .errors import InternalInconsistency, LvmbError, NotCompleteError, NotInjectiveError, NotLvmbError
from .exact import (
    SubspaceBasis, affinely_independent, det, kernel_basis, matvec, solve_affine_map, transpose, vec,
    zeros,
)
from .fan import Fan, is_complete_projected, projective_index, subfan_of_projective, support_injective, validate_fan
from .lp import HullsVerdict, decide_open_hulls, positive_dependence


def _members(family) -> list[tuple]:
    return sorted(tuple(sorted(P)) for P in family)


@dataclass(frozen=True)
class LvmbDatum:
    """Points ``ell[0..n]`` of R^{2m} (real parts, then imaginary parts) and
    a family of (2m+1)-subsets of ``{0..n}``.

    Only the shape is enforced here; the LVMB conditions are checked by
    :func:`validate`.
    """

    m: int
    n: int
    ell: tuple
    family: frozenset

    def __post_init__(self):
        object.__setattr__(self, "ell", tuple(vec(p) for p in self.ell))
        object.__setattr__(self, "family", frozenset(frozenset(P) for P in self.family))
        if self.m < 1 or self.n < 2 * self.m:
            raise LvmbError(f"need m >= 1 and n >= 2m, got m={self.m}, n={self.n}")
        if len(self.ell) != self.n + 1:
            raise LvmbError(f"expected {self.n + 1} points, got {len(self.ell)}")
        if any(len(p) != 2 * self.m for p in self.ell):
            raise LvmbError(f"every point must have {2 * self.m} coordinates")
        if not self.family:
            raise LvmbError("family is empty")
        for P in self.family:
            if len(P) != 2 * self.m + 1 or not all(0 <= i <= self.n for i in P):
                raise LvmbError(f"bad family member {sorted(P)}")

    def points(self, P: Iterable[int]) -> list:
        return [self.ell[i] for i in sorted(P)]

    @property
    def members(self) -> list[tuple]:
        """Family members as sorted tuples, in sorted order."""
        return _members(self.family)


def check_generic_position(d: LvmbDatum):
    """Every (2m+1)-subset of ``ell`` is an affine basis: ``(bool, subset)``."""
    for S in combinations(range(d.n + 1), 2 * d.m + 1):
        if not affinely_independent(d.points(S)):
            return False, S
    return True, None


def check_sep(d: LvmbDatum):
    """Substitution condition: ``(True, None)`` or ``(False, (P, i))``."""
    fam = d.family
    for P in d.members:
        ps = frozenset(P)
        for i in range(d.n + 1):
            if i in ps:
                continue
            if not any((ps - {j}) | {i} in fam for j in P):
                return False, (P, i)
    return True, None


@dataclass(frozen=True)
class ImbricationFailure:
    """Open hulls of ``ell_P`` and ``ell_Q`` are disjoint; ``verdict`` separates them."""

    P: tuple
    Q: tuple
    verdict: HullsVerdict


def imbrication_witnesses(d: LvmbDatum):
    """Common interior points for each pair of members, stopping at the first failure.

    Returns ``(True, {(P, Q): point})`` or ``(False, ImbricationFailure)``.
    """
    points = {}
    for P, Q in combinations(d.members, 2):
        v = decide_open_hulls([d.points(P), d.points(Q)])
        if not v.nonempty:
            return False, ImbricationFailure(P, Q, v)
        points[(P, Q)] = v.point
    return True, points


def check_imbrication(d: LvmbDatum, *, assume_generic: bool = False):
    """Pairwise meeting of the open hulls: ``(True, None)`` or ``(False, ImbricationFailure)``."""
    if not assume_generic:
        ok, S = check_generic_position(d)
        if not ok:
            raise LvmbError("imbrication needs generic position", S)
    ok, info = imbrication_witnesses(d)
    return (True, None) if ok else (False, info)


def indispensable(d: LvmbDatum) -> frozenset:
    return frozenset.intersection(*d.family)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of all LVMB checks.

    ``imbrication`` is None when generic position fails, since the open
    hulls are then not all full-dimensional.
    """

    generic_position: bool
    generic_witness: tuple | None
    sep: bool
    sep_counterexample: tuple | None
    imbrication: bool | None
    imbrication_failure: ImbricationFailure | None
    indispensable: frozenset = field(default_factory=frozenset)
    pair_points: dict = field(default_factory=dict)

    @property
    def is_lvmb(self) -> bool:
        return bool(self.generic_position and self.sep and self.imbrication)


def validate(d: LvmbDatum) -> ValidationReport:
    gp, gw = check_generic_position(d)
    sep, sc = check_sep(d)
    imb, fail, points = None, None, {}
    if gp:
        imb, info = imbrication_witnesses(d)
        if imb:
            points = info
        else:
            fail = info
    return ValidationReport(gp, gw, sep, sc, imb, fail, indispensable(d), points)


def require_lvmb(d: LvmbDatum) -> ValidationReport:
    rep = validate(d)
    if not rep.is_lvmb:
        raise NotLvmbError("not an LVMB datum", rep)
    return rep


def check_lvm_bosio(d: LvmbDatum, *, check: bool = True):
    """Whether all open hulls ``conv(ell_P)`` share a point.

    Returns ``(bool, HullsVerdict)``; the verdict carries the common point
    or a separation certificate.
    """
    if check:
        require_lvmb(d)
    v = decide_open_hulls([d.points(P) for P in d.members])
    return v.nonempty, v


# -- toric side -------------------------------------------------------------------

def projective_ray(i: int, n: int) -> tuple:
    """``e_i`` for 1 <= i <= n, and ``e_0 = -(e_1 + ... + e_n)``."""
    if i == 0:
        return (Fraction(-1),) * n
    return tuple(Fraction(int(j == i - 1)) for j in range(n))


def subspace_of(d: LvmbDatum) -> SubspaceBasis:
    """E spanned by X_k, Y_k: coordinates of ``ell_i - ell_0`` for i = 1..n."""
    base = d.ell[0]
    vectors = [tuple(d.ell[i][k] - base[k] for i in range(1, d.n + 1)) for k in range(2 * d.m)]
    return SubspaceBasis(d.n, tuple(vectors))


def fan_of(d: LvmbDatum) -> Fan:
    """Cones spanned by ``{e_i : i not in P}`` for P in the family, with faces."""
    used = sorted(set().union(*(set(range(d.n + 1)) - P for P in d.family)))
    pos = {i: k for k, i in enumerate(used)}
    rays = [projective_ray(i, d.n) for i in used]
    cones = [[pos[i] for i in range(d.n + 1) if i not in P] for P in d.family]
    return Fan.from_cones(d.n, rays, cones)


def raw_toric(d: LvmbDatum):
    """``(E, Delta)`` built from the raw data, without any validity check."""
    return subspace_of(d), fan_of(d)


def to_toric(d: LvmbDatum, *, check: bool = True):
    """The pair ``(E, Delta)`` of an LVMB datum.

    With ``check`` the datum is validated first and the toric properties of
    the result (injectivity on the support, completeness of the image) are
    asserted; a failure there is a bug and raises InternalInconsistency.
    """
    if check:
        require_lvmb(d)
    E, delta = raw_toric(d)
    if check:
        ok, wit = support_injective(delta, E)
        if not ok:
            raise InternalInconsistency("LVMB datum gave a non-injective projection",
                                        {"injectivity": wit})
        ok, cert = is_complete_projected(delta, E, check=False)
        if not ok:
            raise InternalInconsistency("LVMB datum gave an incomplete fan", {"completeness": cert})
    return E, delta


def from_toric(E: SubspaceBasis, delta: Fan, *, check: bool = True) -> LvmbDatum:
    """The LVMB datum of a pair ``(E, Delta)``.

    ``ell_0 = 0`` and ``ell_i`` is row i of the matrix whose columns are the
    basis vectors of E, read as (real parts, imaginary parts).
    """
    n = delta.ambient_dim
    if E.ambient_dim != n:
        raise LvmbError("subspace and fan live in different spaces")
    if E.dim % 2 or E.dim == 0:
        raise LvmbError(f"subspace dimension {E.dim} is not a positive even number")
    m = E.dim // 2
    if not subfan_of_projective(delta):
        bad = next((r for r in delta.rays if projective_index(r, n) is None), None)
        raise LvmbError("not a subfan of the projective space fan",
                        {"ray": bad} if bad is not None else None)
    if check:
        ok, pair = validate_fan(delta)
        if not ok:
            raise LvmbError("cones overlap", {"pair": pair})
        ok, wit = support_injective(delta, E)
        if not ok:
            raise NotInjectiveError("projection is not injective on the support", wit)
        ok, cert = is_complete_projected(delta, E, check=False)
        if not ok:
            raise NotCompleteError("projected fan is not complete", cert)
    idx = [projective_index(r, n) for r in delta.rays]
    family = []
    for c in delta.maximal:
        if len(c) != n - 2 * m:
            raise NotCompleteError("maximal cone of wrong dimension", {"cone": sorted(c)})
        family.append(frozenset(range(n + 1)) - {idx[i] for i in c})
    ell = [zeros(2 * m)] + [tuple(v[i] for v in E.vectors) for i in range(n)]
    return LvmbDatum(m, n, tuple(ell), frozenset(family))


def affine_equivalence(d1: LvmbDatum, d2: LvmbDatum):
    """The invertible affine map carrying each ``ell_i`` of d1 to that of d2.

    Returns ``(L, c)`` or None.  Families must coincide.
    """
    if (d1.m, d1.n) != (d2.m, d2.n) or d1.family != d2.family:
        return None
    S = next((P for P in d1.members if affinely_independent(d1.points(P))), None)
    if S is None:
        return None
    found = solve_affine_map(d1.ell, d2.ell, list(S))
    if found is None or det(found[0]) == 0:
        return None
    return found


def explain_equivalence(d1: LvmbDatum, d2: LvmbDatum):
    """``(bool, info)`` where ``info`` records the map or the reason for failure."""
    if (d1.m, d1.n) != (d2.m, d2.n):
        return False, {"kind": "shape_mismatch"}
    if d1.family != d2.family:
        return False, {"kind": "family_mismatch"}
    S = next(P for P in d1.members if affinely_independent(d1.points(P)))
    pts1 = d1.points(S)
    pts2 = d2.points(S)
    lin, shift = solve_affine_map(pts1, pts2, list(range(len(S))))
    bad = next((i for i in range(d1.n + 1)
                if tuple(a + b for a, b in zip(matvec(lin, d1.ell[i]), shift)) != d2.ell[i]), None)
    if bad is None and det(lin) != 0:
        return True, {"kind": "affine_map", "linear": lin, "shift": shift}
    return False, {"kind": "affine_mismatch", "basis": list(S), "index": bad,
                   "linear": lin, "shift": shift}


def equivalent(d1: LvmbDatum, d2: LvmbDatum, *, check: bool = True) -> bool:
    if check:
        require_lvmb(d1)
        require_lvmb(d2)
    return affine_equivalence(d1, d2) is not None


def toric_pair_of_fan(f: Fan):
    """A pair ``(E, Delta)`` whose projected fan is linearly isomorphic to ``f``.

    ``f`` is complete and simplicial in R^d with rays ``x_0..x_n`` where
    ``n - d`` is even.  With a positive dependence ``lam``, the map
    ``R^n -> R^d`` sending ``e_i`` to ``lam_i x_i`` sends ``e_0`` to
    ``lam_0 x_0``; E is its kernel and Delta copies the cones of ``f``.
    """
    used = f.used_rays()
    X = [f.rays[i] for i in used]
    n, d = len(X) - 1, f.ambient_dim
    if (n - d) % 2 or n - d < 2:
        raise LvmbError(f"need an even positive codimension, got {n - d}")
    lam = positive_dependence(X)
    if lam is None:
        raise LvmbError("rays do not positively span")
    pi = transpose([tuple(lam[i] * a for a in X[i]) for i in range(1, n + 1)])
    E = SubspaceBasis(n, tuple(kernel_basis(pi, n)))
    pos = {ray: k for k, ray in enumerate(used)}
    delta = Fan.from_cones(n, [projective_ray(i, n) for i in range(n + 1)],
                           [[pos[i] for i in c] for c in f.maximal])
    return E, delta
