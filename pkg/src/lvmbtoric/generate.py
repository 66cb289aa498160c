"""Seeded random LVMB data.

Points are drawn at random, a point ``x0`` interior to their hull is drawn,
and the family is every (2m+1)-subset whose open hull contains ``x0``.
Such a datum is LVM by construction.  Optional flips of the family (sets
of single-element swaps), kept only while the datum stays LVMB, move away
from that case;
optional point jitter keeps the family but may break imbrication.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .datum import LvmbDatum, check_generic_position, projective_ray, subspace_of, validate
from .errors import LvmbError
from .exact import (
    affinely_independent, complement_and_projection, det, kernel_basis, lin_comb, matvec, transpose,
)
from .lp import barycentric_coordinates

MAX_REJECTIONS = 10_000
SWAP_ATTEMPTS = 40


@dataclass(frozen=True)
class GeneratorConfig:
    m: int
    n: int
    seed: int
    coord_bound: int = 100
    denominator_bound: int = 100
    mutations: int = 0
    jitter: int = 0

    def __post_init__(self):
        if self.m < 1 or 2 * self.m > self.n:
            raise LvmbError(f"need 1 <= m and 2m <= n, got m={self.m}, n={self.n}")
        if self.coord_bound < 1 or self.denominator_bound < 1:
            raise LvmbError("bounds must be positive")
        if self.mutations < 0 or self.jitter < 0:
            raise LvmbError("mutations and jitter must be nonnegative")


class _Budget:
    def __init__(self):
        self.left = MAX_REJECTIONS

    def reject(self, what: str):
        self.left -= 1
        if self.left < 0:
            raise LvmbError(f"gave up after {MAX_REJECTIONS} rejections ({what}); widen the bounds")


def _rational(rng: random.Random, cfg: GeneratorConfig) -> Fraction:
    return Fraction(rng.randint(-cfg.coord_bound, cfg.coord_bound),
                    rng.randint(1, cfg.denominator_bound))


def _point(rng, cfg) -> tuple:
    return tuple(_rational(rng, cfg) for _ in range(2 * cfg.m))


def _generic_points(rng, cfg, budget) -> list:
    while True:
        pts = [_point(rng, cfg) for _ in range(cfg.n + 1)]
        if all(affinely_independent([pts[i] for i in S])
               for S in combinations(range(cfg.n + 1), 2 * cfg.m + 1)):
            return pts
        budget.reject("generic position")


def _interior_point(rng, pts, cfg, budget) -> tuple:
    k = 2 * cfg.m
    while True:
        w = [Fraction(rng.randint(1, 100)) for _ in pts]
        s = sum(w)
        x0 = lin_comb([a / s for a in w], pts, k)
        lifted = [p + (Fraction(1),) for p in pts]
        x0l = x0 + (Fraction(1),)
        if all(det([lifted[i] for i in S] + [x0l]) != 0 for S in combinations(range(len(pts)), k)):
            return x0
        budget.reject("x0 on a hyperplane")


def _containing_family(pts, x0, m) -> frozenset:
    fam = []
    for P in combinations(range(len(pts)), 2 * m + 1):
        lam = barycentric_coordinates([pts[i] for i in P], x0)
        if all(a > 0 for a in lam):
            fam.append(frozenset(P))
    return frozenset(fam)


def _flip(rng, d: LvmbDatum) -> LvmbDatum | None:
    """One random flip of the family keeping the datum LVMB, or None.

    Members correspond to maximal cones ``{0..n} - P`` over the projected
    rays.  Two adjacent cones ``R + {a}``, ``R + {b}`` determine a circuit
    Z inside ``R + {a, b}`` with signed parts ``Z+`` (containing a, b) and
    ``Z-``; with ``L = R - Z`` the cones ``L + Z - {z}``, z in Z+, are
    replaced by ``L + Z - {z}``, z in Z-.  Each replaced member differs
    from its successor by a single-element swap.
    """
    dim = d.n - 2 * d.m
    if dim < 2:
        return None
    everything = frozenset(range(d.n + 1))
    _, pi = complement_and_projection(subspace_of(d))
    rays = [matvec(pi, projective_ray(i, d.n)) for i in range(d.n + 1)]
    cones = {everything - P for P in d.family}
    walls = []
    for s in sorted(cones, key=sorted):
        for a in sorted(s):
            ridge = s - {a}
            for t in cones:
                if t != s and ridge < t:
                    (b,) = t - ridge
                    if a < b:
                        walls.append((ridge, a, b))
    rng.shuffle(walls)
    for ridge, a, b in walls[:SWAP_ATTEMPTS]:
        support = sorted(ridge | {a, b})
        (dep,) = kernel_basis(transpose([rays[i] for i in support]), len(support))
        coef = dict(zip(support, dep))
        if coef[a] < 0:
            coef = {i: -c for i, c in coef.items()}
        plus = {i for i, c in coef.items() if c > 0}
        minus = {i for i, c in coef.items() if c < 0}
        if not minus:
            continue
        Z = plus | minus
        link = frozenset(ridge - Z)
        old = {link | (Z - {z}) for z in plus}
        if not old <= cones:
            continue
        new = {link | (Z - {z}) for z in minus}
        family = frozenset(everything - c for c in (cones - old) | new)
        cand = LvmbDatum(d.m, d.n, d.ell, family)
        if validate(cand).is_lvmb:
            return cand
    return None


def _jitter(rng, d: LvmbDatum, cfg, budget) -> LvmbDatum:
    """Redraw one point, keeping generic position and the family."""
    while True:
        i = rng.randrange(d.n + 1)
        ell = list(d.ell)
        ell[i] = _point(rng, cfg)
        cand = LvmbDatum(d.m, d.n, tuple(ell), d.family)
        if check_generic_position(cand)[0]:
            return cand
        budget.reject("jitter")


def generate_datum(cfg: GeneratorConfig) -> LvmbDatum:
    """Deterministic in ``cfg``.

    Without jitter the result is LVMB; with ``mutations == 0`` it is also LVM.
    With ``jitter > 0`` only generic position and SEP are guaranteed.
    """
    rng = random.Random(cfg.seed)
    budget = _Budget()
    pts = _generic_points(rng, cfg, budget)
    x0 = _interior_point(rng, pts, cfg, budget)
    d = LvmbDatum(cfg.m, cfg.n, tuple(pts), _containing_family(pts, x0, cfg.m))
    for _ in range(cfg.mutations):
        nxt = _flip(rng, d)
        if nxt is not None:
            d = nxt
    for _ in range(cfg.jitter):
        d = _jitter(rng, d, cfg, budget)
    return d
