"""Simplicial rational fans, their projections along a subspace, completeness."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from .errors import InternalInconsistency, LvmbError, NotInjectiveError
from .exact import (
    SubspaceBasis,
    complement_and_projection,
    inverse,
    is_zero,
    lin_comb,
    matvec,
    primitive,
    rank,
    solve,
    sub,
    transpose,
    vec,
)
from .lp import EQ, Constraint, LinearProgram, find_cone_difference_in_subspace, lp_solve


def _key(cone) -> tuple:
    return (len(cone), tuple(sorted(cone)))


@dataclass(frozen=True)
class Fan:
    """A finite simplicial fan.

    ``rays`` is a table of primitive integer vectors (duplicates forbidden);
    ``cones`` is a face-closed set of index sets into it, the empty set being
    the cone ``{0}``.  Use :meth:`from_cones` to build one from generating
    (e.g. maximal) cones.
    """

    ambient_dim: int
    rays: tuple
    cones: frozenset

    def __post_init__(self):
        rays = tuple(vec(r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "cones", frozenset(frozenset(c) for c in self.cones))
        if any(len(r) != self.ambient_dim for r in rays):
            raise LvmbError("ray of wrong dimension")
        if any(primitive(r) != r for r in rays):
            raise LvmbError("rays must be primitive integer vectors")
        if len(set(rays)) != len(rays):
            raise LvmbError("duplicate ray")
        if frozenset() not in self.cones:
            raise LvmbError("fan must contain the zero cone")
        for c in self.cones:
            if any(not 0 <= i < len(rays) for i in c):
                raise LvmbError(f"cone {sorted(c)} refers to a missing ray")
        for c in self.maximal:
            if c and rank([rays[i] for i in c]) != len(c):
                raise LvmbError(f"cone {sorted(c)} is not simplicial")
            for k in range(len(c)):
                for face in combinations(c, k):
                    if frozenset(face) not in self.cones:
                        raise LvmbError(f"face {sorted(face)} of {sorted(c)} missing")

    @classmethod
    def from_cones(cls, ambient_dim: int, rays: Sequence[Sequence],
                   cones: Iterable[Iterable[int]]) -> "Fan":
        """Normalize rays to primitive vectors and close ``cones`` under faces."""
        rays = tuple(primitive(r) for r in rays)
        closed = {frozenset()}
        for c in cones:
            c = tuple(sorted(set(c)))
            for k in range(len(c) + 1):
                closed.update(frozenset(f) for f in combinations(c, k))
        return cls(ambient_dim, rays, frozenset(closed))

    @property
    def maximal(self) -> tuple:
        """Inclusion-maximal cones, in a fixed order."""
        cs = sorted(self.cones, key=_key, reverse=True)
        out = []
        for c in cs:
            if not any(c < m for m in out):
                out.append(c)
        return tuple(sorted(out, key=_key))

    def generators(self, cone) -> list:
        return [self.rays[i] for i in sorted(cone)]

    def used_rays(self) -> list[int]:
        return sorted(set().union(*self.cones))

    def canonical(self) -> tuple:
        """Ray-order independent identity: (ambient_dim, set of cones as ray sets)."""
        return (self.ambient_dim,
                frozenset(frozenset(self.rays[i] for i in c) for c in self.cones))

    def same_as(self, other: "Fan") -> bool:
        return self.canonical() == other.canonical()


@dataclass(frozen=True)
class OverlapWitness:
    """``x = sum a_i sigma_i = sum b_j tau_j`` with a positive weight on a non-shared ray."""

    sigma: frozenset
    tau: frozenset
    x: tuple
    a: tuple
    b: tuple


def validate_fan(f: Fan):
    """Check that every two cones meet along their common face.

    Returns ``(True, None)`` or ``(False, OverlapWitness)`` for an
    overlapping pair of maximal cones.  For each non-shared generator g the
    LP asks for a point of ``sigma ∩ tau`` whose g-coefficient is 1.
    """
    maxi = f.maximal
    for s, t in combinations(maxi, 2):
        sg, tg = sorted(s), sorted(t)
        nv = len(sg) + len(tg)
        base = []
        for c in range(f.ambient_dim):
            coeffs = [f.rays[i][c] for i in sg] + [-f.rays[i][c] for i in tg]
            base.append(Constraint(coeffs, EQ, 0))
        slots = list(enumerate(sg)) + [(len(sg) + j, g) for j, g in enumerate(tg)]
        for pos, g in slots:
            if g in s and g in t:
                continue
            fix = [0] * nv
            fix[pos] = 1
            out = lp_solve(LinearProgram(nv, base + [Constraint(fix, EQ, 1)], [0] * nv,
                                         nonneg=range(nv)))
            if out.status == "optimal":
                a, b = out.point[:len(sg)], out.point[len(sg):]
                x = lin_comb(a, f.generators(s), f.ambient_dim)
                return False, OverlapWitness(s, t, x, a, b)
    return True, None


def projective_index(ray: Sequence, n: int) -> int | None:
    """i if ``ray`` points along e_i (1..n) or along e_0 = -(e_1+...+e_n)."""
    r = primitive(ray)
    if all(x == -1 for x in r):
        return 0
    nz = [i for i, x in enumerate(r) if x != 0]
    if len(nz) == 1 and r[nz[0]] == 1:
        return nz[0] + 1
    return None


def subfan_of_projective(f: Fan) -> bool:
    """Whether every cone of ``f`` is a cone of the fan of P^n."""
    n = f.ambient_dim
    idx = [projective_index(r, n) for r in f.rays]
    if any(i is None for i in idx):
        return False
    # a cone of P^n omits at least one of the n+1 rays
    return all(len(c) <= n for c in f.cones)


@dataclass(frozen=True)
class InjectivityWitness:
    """``x`` in ``sigma``, ``y`` in ``tau``, ``x != y`` and ``v = y - x`` in E."""

    sigma: frozenset
    tau: frozenset
    x: tuple
    y: tuple
    v: tuple


def support_injective(f: Fan, E: SubspaceBasis, *, sweep: bool = False):
    """Whether ``R^n -> R^n/E`` is injective on the support of ``f``.

    Returns ``(True, None)`` or ``(False, InjectivityWitness)``.  Only pairs
    of maximal cones (including a cone with itself) need checking.
    """
    if E.ambient_dim != f.ambient_dim:
        raise LvmbError("subspace and fan live in different spaces")
    maxi = f.maximal
    for s, t in combinations_with_replacement(maxi, 2):
        w = find_cone_difference_in_subspace(f.generators(t), f.generators(s), E, sweep=sweep)
        if w is not None:
            y = lin_comb(w.a, f.generators(t), f.ambient_dim)
            x = lin_comb(w.b, f.generators(s), f.ambient_dim)
            return False, InjectivityWitness(s, t, x, y, w.v)
    return True, None


@dataclass(frozen=True)
class ProjectedFan:
    """Image of a fan in ``R^n / E``, in coordinates of a standard complement.

    Ray ``i`` of ``base`` is the image of ray ``i`` of ``source``, so cones
    keep their index sets; ``provenance`` records this cone bijection.
    """

    base: Fan
    source: Fan
    complement: tuple
    projection: tuple
    provenance: dict

    def __hash__(self):
        return hash((self.base, self.source))


def project_fan(f: Fan, E: SubspaceBasis, *, check: bool = True) -> ProjectedFan:
    if check:
        ok, wit = support_injective(f, E)
        if not ok:
            raise NotInjectiveError("projection is not injective on the support", wit)
    d = f.ambient_dim - E.dim
    if d == 0:
        if f.rays:
            raise NotInjectiveError("rays collapse to the origin of R^0")
        idx, pi = [], ()
        base = Fan(0, (), frozenset([frozenset()]))
    else:
        idx, pi = complement_and_projection(E)
        images = [matvec(pi, r) for r in f.rays]
        if any(is_zero(v) for v in images):
            raise NotInjectiveError("a ray lies in the subspace")
        base = Fan(d, tuple(primitive(v) for v in images), f.cones)
    return ProjectedFan(base, f, tuple(idx), pi, {c: c for c in f.cones})


# -- completeness ---------------------------------------------------------------

def sep_condition_cones(maximal: Iterable, V: Sequence):
    """The swap condition on a set of cones over the ray table ``V``.

    For every cone sigma and every ray index i there must be a generator j of
    sigma with ``sigma - {j} + {i}`` again in ``maximal``.  Returns
    ``(True, None)`` or ``(False, (sigma, i))``.
    """
    maxi = {frozenset(c) for c in maximal}
    for s in sorted(maxi, key=_key):
        for i in range(len(V)):
            if i in s:
                continue
            if not any((s - {j}) | {i} in maxi for j in s):
                return False, (s, i)
    return True, None


def ridge_pairing(maximal: Iterable, dim: int):
    """Every ridge of a ``dim``-dimensional maximal cone lies in exactly two.

    Returns ``(True, None)`` or ``(False, (ridge, containing_cones))``.
    Equivalently: for each cone and each of its generators i there is a ray
    j with ``sigma - {i} + {j}`` a maximal cone.
    """
    maxi = sorted({frozenset(c) for c in maximal}, key=_key)
    if dim == 0:
        return True, None
    counts: dict = {}
    for s in maxi:
        for j in s:
            counts.setdefault(s - {j}, []).append(s)
    for ridge in sorted(counts, key=_key):
        if len(counts[ridge]) != 2:
            return False, (ridge, tuple(counts[ridge]))
    return True, None


@dataclass(frozen=True)
class CompletenessChecks:
    """All sub-checks behind a completeness verdict.

    ``complete`` is decided by the dimension test and ridge pairing.  The
    literal swap condition over the projected ray table is recorded in
    ``sep`` for information only; it is not a valid completeness criterion
    (it rejects the complete pentagon fan in R^2 and accepts a single ray).
    """

    target_dim: int
    dimension_ok: bool
    bad_cone: frozenset | None
    pairing_ok: bool
    pairing_cex: tuple | None
    sep_ok: bool
    sep_cex: tuple | None

    @property
    def complete(self) -> bool:
        return self.dimension_ok and self.pairing_ok

    def certificate(self) -> dict | None:
        if not self.dimension_ok:
            return {"kind": "dimension", "cone": sorted(self.bad_cone),
                    "dim": len(self.bad_cone), "expected": self.target_dim}
        if not self.pairing_ok:
            ridge, cones = self.pairing_cex
            return {"kind": "ridge", "ridge": sorted(ridge),
                    "cones": [sorted(c) for c in cones]}
        return None


def completeness_checks(f: Fan, target_dim: int | None = None) -> CompletenessChecks:
    d = f.ambient_dim if target_dim is None else target_dim
    maxi = f.maximal
    bad = next((c for c in maxi if len(c) != d), None)
    pairing_ok, pairing_cex = ridge_pairing(maxi, d) if bad is None else (False, None)
    sep_ok, sep_cex = sep_condition_cones(maxi, f.rays)
    return CompletenessChecks(d, bad is None, bad, pairing_ok, pairing_cex, sep_ok, sep_cex)


def is_complete(f: Fan):
    """Completeness of ``f`` in its own ambient space: ``(bool, certificate)``."""
    ch = completeness_checks(f)
    return ch.complete, ch.certificate()


def is_complete_projected(f: Fan, E: SubspaceBasis, *, check: bool = True):
    """Completeness of the image of ``f`` in ``R^n/E``: ``(bool, certificate)``.

    Maximal cones must have dimension ``n - dim E`` and every ridge must lie
    in exactly two maximal cones.  Since injectivity makes projection a
    combinatorial isomorphism, both tests run on ``f``'s own index sets.
    """
    if check:
        ok, wit = support_injective(f, E)
        if not ok:
            raise NotInjectiveError("projection is not injective on the support", wit)
    ch = completeness_checks(f, f.ambient_dim - E.dim)
    return ch.complete, ch.certificate()


def cone_membership(gens: Sequence[Sequence], x: Sequence) -> tuple | None:
    """Nonnegative coefficients expressing ``x`` in the simplicial cone, or None."""
    if not gens:
        return () if is_zero(x) else None
    c = solve(transpose(gens), x)
    if c is None or any(a < 0 for a in c):
        return None
    if lin_comb(c, gens, len(x)) != tuple(x):
        return None
    return c


def sample_directions(dim: int, count: int = 1000, bound: int = 1000, seed: int = 0) -> list:
    """Seeded uniform nonzero integer vectors in ``[-bound, bound]^dim``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count and dim > 0:
        v = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(dim))
        if not is_zero(v):
            out.append(v)
    return out


def covering_oracle(pf, samples: Iterable[Sequence]):
    """Whether every sample lies in some cone: ``(True, None)`` or ``(False, v)``.

    Accepts a :class:`ProjectedFan` or a plain :class:`Fan`.
    """
    fan = pf.base if isinstance(pf, ProjectedFan) else pf
    d = fan.ambient_dim
    full = []
    low = []
    for c in fan.maximal:
        g = fan.generators(c)
        if len(g) == d and d > 0:
            full.append(inverse(transpose(g)))
        else:
            low.append(g)
    for v in samples:
        v = vec(v)
        if any(all(a >= 0 for a in matvec(inv, v)) for inv in full):
            continue
        if any(cone_membership(g, v) is not None for g in low):
            continue
        return False, v
    return True, None


def check_projected_completeness(f: Fan, E: SubspaceBasis, samples: int = 1000,
                                 seed: int = 0):
    """Completeness with the sampled covering oracle as a cross-check.

    Raises :class:`InternalInconsistency` if the combinatorial test says
    complete while a sample is uncovered.  Returns ``(bool, certificate)``;
    when incomplete the certificate may also carry an uncovered direction.
    """
    pf = project_fan(f, E)
    ok, cert = is_complete_projected(f, E, check=False)
    covered, hole = covering_oracle(pf, sample_directions(pf.base.ambient_dim, samples, seed=seed))
    if ok and not covered:
        raise InternalInconsistency("ridge pairing says complete but a direction is uncovered",
                                    {"uncovered": hole})
    if not ok and not covered:
        cert = dict(cert, uncovered=list(hole))
    return ok, cert


def relation_across(f: Fan, sigma: frozenset, tau: frozenset) -> dict:
    """Linear relation among the rays of two adjacent full cones.

    ``sigma = R + {a}``, ``tau = R + {b}``; returns ``{ray: coefficient}``
    with ``sum c_i x_i = 0``, normalized so the coefficient of ``b`` is 1.
    """
    (b,) = tau - sigma
    gens = f.generators(sigma)
    coeffs = solve(transpose(gens), f.rays[b])
    rel = {i: -c for i, c in zip(sorted(sigma), coeffs)}
    rel[b] = Fraction(1)
    return rel


def translate(points: Sequence[Sequence], v: Sequence) -> list:
    return [sub(p, v) for p in points]
