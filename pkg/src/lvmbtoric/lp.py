"""Exact rational linear programming and convex-hull feasibility.

The solver is a dense two-phase tableau simplex over :class:`Fraction` with
Bland's rule, so it always terminates and is reproducible.  On top of it sit
the strict-feasibility routines the LVM criteria need: intersection of open
simplices, of relative interiors of hulls, positive dependences and nonzero
vectors of a cone difference inside a subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    SubspaceBasis,
    affinely_independent,
    dot,
    inverse,
    kernel_basis,
    lin_comb,
    rank,
    rref,
    solve,
    sub,
    transpose,
    vec,
)

ZERO = Fraction(0)
ONE = Fraction(1)

LE, EQ, GE = "<=", "==", ">="


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", vec(self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def holds(self, x: Sequence) -> bool:
        lhs = dot(self.coeffs, x)
        if self.relation == LE:
            return lhs <= self.rhs
        if self.relation == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """Optimize ``objective . x`` subject to ``constraints``.

    Variables are free unless their index is listed in ``nonneg``.
    """

    num_vars: int
    constraints: tuple
    objective: tuple
    sense: str = "max"
    nonneg: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "objective", vec(self.objective))
        object.__setattr__(self, "nonneg", frozenset(self.nonneg))
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        if len(self.objective) != self.num_vars:
            raise ValueError("objective has wrong length")
        for c in self.constraints:
            if len(c.coeffs) != self.num_vars:
                raise ValueError("constraint has wrong length")

    def feasible_point(self, x: Sequence) -> bool:
        return (all(x[j] >= 0 for j in self.nonneg)
                and all(c.holds(x) for c in self.constraints))


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    point: tuple | None = None
    basis: tuple | None = field(default=None, compare=False)


class _Unbounded(Exception):
    pass


def _pivot(t: list, cost: list, r: int, c: int) -> None:
    row = t[r]
    inv = 1 / row[c]
    if inv != 1:
        row = [x * inv for x in row]
        t[r] = row
    nz = [k for k, x in enumerate(row) if x]
    for i, other in enumerate(t):
        if i != r:
            f = other[c]
            if f:
                for k in nz:
                    other[k] -= f * row[k]
    f = cost[c]
    if f:
        for k in nz:
            cost[k] -= f * row[k]


def _run(t: list, basis: list, cost: list, allowed: Sequence[int]) -> None:
    """Minimize with reduced costs in ``cost`` (``cost[-1]`` = -value)."""
    while True:
        enter = next((j for j in allowed if cost[j] < 0), None)
        if enter is None:
            return
        best = None
        for i, row in enumerate(t):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise _Unbounded
        r = best[1]
        _pivot(t, cost, r, enter)
        basis[r] = enter


def lp_solve(lp: LinearProgram) -> LpOutcome:
    """Exact optimum of ``lp`` by two-phase simplex with Bland's rule."""
    # structural columns: nonneg vars once, free vars as a +/- pair
    var_cols = []
    ncol = 0
    for j in range(lp.num_vars):
        if j in lp.nonneg:
            var_cols.append((ncol, None))
            ncol += 1
        else:
            var_cols.append((ncol, ncol + 1))
            ncol += 2
    nstruct = ncol
    n_slack = sum(1 for c in lp.constraints if c.relation != EQ)

    rows = []
    s = nstruct
    for con in lp.constraints:
        row = [ZERO] * (nstruct + n_slack)
        for j, a in enumerate(con.coeffs):
            if a:
                p, m = var_cols[j]
                row[p] = a
                if m is not None:
                    row[m] = -a
        sc = None
        if con.relation == LE:
            row[s] = ONE
            sc = s
            s += 1
        elif con.relation == GE:
            row[s] = -ONE
            sc = s
            s += 1
        b = con.rhs
        if b < 0:
            row = [-x for x in row]
            b = -b
        rows.append((row, b, sc))

    n_art = sum(1 for row, b, sc in rows if sc is None or row[sc] != 1)
    width = nstruct + n_slack + n_art
    t = []
    basis = []
    a_col = nstruct + n_slack
    art_rows = []
    for i, (row, b, sc) in enumerate(rows):
        full = row + [ZERO] * n_art + [b]
        if sc is not None and row[sc] == 1:
            basis.append(sc)
        else:
            full[a_col] = ONE
            basis.append(a_col)
            art_rows.append(i)
            a_col += 1
        t.append(full)

    first_art = nstruct + n_slack
    # phase 1: minimize the sum of artificials
    if n_art:
        cost = [ZERO] * (width + 1)
        for i in art_rows:
            for k, x in enumerate(t[i]):
                if k < first_art or k == width:
                    cost[k] -= x
        _run(t, basis, cost, range(width))
        if cost[-1] != 0:  # -(phase 1 optimum)
            return LpOutcome("infeasible")
        # drive zero-level artificials out, dropping redundant rows
        i = 0
        while i < len(t):
            if basis[i] >= first_art:
                c = next((k for k in range(first_art) if t[i][k] != 0), None)
                if c is None:
                    del t[i]
                    del basis[i]
                    continue
                _pivot(t, [ZERO] * (width + 1), i, c)
                basis[i] = c
            i += 1

    # phase 2
    c_full = [ZERO] * width
    sign = -1 if lp.sense == "max" else 1
    for j, cj in enumerate(lp.objective):
        if cj:
            p, m = var_cols[j]
            c_full[p] = sign * cj
            if m is not None:
                c_full[m] = -sign * cj
    cost = c_full + [ZERO]
    for i, b in enumerate(basis):
        cb = c_full[b]
        if cb:
            for k, x in enumerate(t[i]):
                cost[k] -= cb * x
    try:
        _run(t, basis, cost, range(first_art))
    except _Unbounded:
        return LpOutcome("unbounded")

    col_val = [ZERO] * width
    for i, b in enumerate(basis):
        col_val[b] = t[i][-1]
    x = []
    for p, m in var_cols:
        x.append(col_val[p] - (col_val[m] if m is not None else ZERO))
    x = tuple(x)
    value = dot(lp.objective, x)
    col_to_var = {}
    for j, (p, m) in enumerate(var_cols):
        col_to_var[p] = j
        if m is not None:
            col_to_var[m] = j
    basic_vars = tuple(col_to_var[b] for b in basis if b in col_to_var)
    return LpOutcome("optimal", value, x, basic_vars)


def _feasibility(num_vars: int, constraints, nonneg=()) -> tuple | None:
    out = lp_solve(LinearProgram(num_vars, constraints, (ZERO,) * num_vars, "max", nonneg))
    return out.point if out.status == "optimal" else None


def barycentric_coordinates(pts: Sequence[Sequence], x: Sequence) -> tuple | None:
    """Affine coordinates of ``x`` w.r.t. affinely independent ``pts``.

    None when ``x`` is off the affine hull of ``pts``.
    """
    if not affinely_independent(pts):
        raise ValueError("points are affinely dependent")
    cols = [tuple(p) + (ONE,) for p in pts]
    return solve(transpose(cols), tuple(x) + (ONE,))


# -- open hulls ---------------------------------------------------------------

@dataclass(frozen=True)
class HullsVerdict:
    """Outcome of an intersection-of-open-hulls query.

    Exactly one of ``point`` (a common interior point) and ``functionals``
    (an emptiness certificate) is set.  Each functional ``w_f`` acts on the
    lifted points ``(p, 1)`` of family ``f``; the certificate asserts
    ``w_f(p, 1) >= 0`` on every point of family ``f``, ``sum_f w_f = (0, rho)``
    with ``rho <= 0`` and ``sum_f sum_j w_f(p_j, 1) = 1``.
    """

    nonempty: bool
    point: tuple | None = None
    functionals: tuple | None = None
    rho: Fraction | None = None
    slack: Fraction | None = None

    def __bool__(self):
        return self.nonempty


def _check_families(families) -> int:
    if not families:
        raise ValueError("need at least one family")
    dims = {len(p) for fam in families for p in fam}
    if len(dims) != 1:
        raise ValueError("families live in different dimensions")
    return dims.pop()


def decide_open_hulls(families: Sequence[Sequence[Sequence]]) -> HullsVerdict:
    """Decide whether the interiors of ``conv(F)`` over all families meet.

    Every family must affinely span the ambient space.  Simplicial families
    go through the LP dual of ``max t s.t. every barycentric coordinate of x
    is >= t``; the dual has one row per coordinate and returns either the
    witness (from the optimal basis) or the emptiness certificate.
    """
    families = [[vec(p) for p in fam] for fam in families]
    k = _check_families(families)
    for fam in families:
        if rank([sub(p, fam[0]) for p in fam[1:]] or [(ZERO,) * k]) != k:
            raise ValueError("family does not affinely span the ambient space")
    if k == 0:
        return HullsVerdict(True, point=(), slack=ONE)
    if any(len(fam) != k + 1 for fam in families):
        return _open_hulls_general(families, k)

    # barycentric coordinate functions mu_{f,i}(x) = a . x + b
    inv = [inverse(transpose([p + (ONE,) for p in fam])) for fam in families]
    aff = [row for rows in inv for row in rows]
    nvar = len(aff)
    cons = [Constraint(tuple(row[c] for row in aff), EQ, ZERO) for c in range(k)]
    cons.append(Constraint((ONE,) * nvar, EQ, ONE))
    obj = tuple(row[k] for row in aff)
    out = lp_solve(LinearProgram(nvar, cons, obj, "min", range(nvar)))
    if out.status != "optimal":
        raise ArithmeticError(f"dual hull LP unexpectedly {out.status}")
    t_star = out.value
    if t_star > 0:
        # complementary slackness: basic rows are tight, a_B x - t = -b_B
        tight = list(out.basis)
        m_rows = [aff[j][:k] + (-ONE,) for j in tight]
        sol = solve(m_rows, [-aff[j][k] for j in tight])
        x, t = sol[:k], sol[k]
        if t != t_star or any(dot(r[:k], x) + r[k] < t for r in aff):
            raise ArithmeticError("recovered hull witness is not optimal")
        return HullsVerdict(True, point=x, slack=t_star)
    y = out.point
    functionals = []
    pos = 0
    for rows in inv:
        w = lin_comb(y[pos:pos + k + 1], rows, k + 1)
        functionals.append(w)
        pos += k + 1
    return HullsVerdict(False, functionals=tuple(functionals), rho=t_star, slack=t_star)


def _open_hulls_general(families, k) -> HullsVerdict:
    t, x = _mu_lp(families, k)
    if t is not None and t > 0:
        return HullsVerdict(True, point=x, slack=t)
    return HullsVerdict(False, slack=t)


def _mu_lp(families, k):
    """``max t`` with explicit convex coefficients ``mu >= t`` per family."""
    nvar = k + 1 + sum(len(f) for f in families)
    cons = []
    pos = k + 1
    for fam in families:
        for c in range(k):
            coeffs = [ZERO] * nvar
            coeffs[c] = -ONE
            for j, p in enumerate(fam):
                coeffs[pos + j] = p[c]
            cons.append(Constraint(coeffs, EQ, ZERO))
        coeffs = [ZERO] * nvar
        for j in range(len(fam)):
            coeffs[pos + j] = ONE
        cons.append(Constraint(coeffs, EQ, ONE))
        for j in range(len(fam)):
            coeffs = [ZERO] * nvar
            coeffs[pos + j] = ONE
            coeffs[k] = -ONE
            cons.append(Constraint(coeffs, GE, ZERO))
        pos += len(fam)
    obj = [ZERO] * nvar
    obj[k] = ONE
    cons.append(Constraint(obj, LE, ONE))
    out = lp_solve(LinearProgram(nvar, cons, obj, "max"))
    if out.status != "optimal":
        return None, None
    return out.value, out.point[:k]


def open_hulls_intersection(families: Sequence[Sequence[Sequence]]) -> tuple | None:
    """A point interior to every ``conv(F)``, or None if there is none."""
    return decide_open_hulls(families).point


@dataclass(frozen=True)
class AffineChart:
    """Affine coordinates ``p = base + sum_i c_i * directions[i]``."""

    base: tuple
    directions: tuple

    def coords(self, p: Sequence) -> tuple | None:
        if not self.directions:
            return () if tuple(p) == self.base else None
        return solve(transpose(self.directions), sub(p, self.base))

    def point(self, c: Sequence) -> tuple:
        return tuple(b + x for b, x in zip(self.base, lin_comb(c, self.directions, len(self.base))))


def affine_chart(points: Sequence[Sequence]) -> AffineChart:
    p0 = vec(points[0])
    diffs = [sub(vec(p), p0) for p in points[1:]]
    basis, _ = rref(diffs, len(p0)) if diffs else ((), [])
    return AffineChart(p0, tuple(basis))


@dataclass(frozen=True)
class RelintVerdict:
    """Like :class:`HullsVerdict`, but for relative interiors.

    When every family spans the same affine subspace the query is solved in
    an affine ``chart`` of it; ``chart_points`` then holds each family in
    chart coordinates and ``inner`` is the verdict there.
    """

    nonempty: bool
    point: tuple | None
    chart: AffineChart | None = None
    chart_points: tuple | None = None
    inner: HullsVerdict | None = None

    def __bool__(self):
        return self.nonempty


def decide_relint_hulls(families: Sequence[Sequence[Sequence]]) -> RelintVerdict:
    """Decide whether the relative interiors of ``conv(F)`` meet."""
    families = [[vec(p) for p in fam] for fam in families]
    _check_families(families)
    chart = affine_chart(families[0])
    charted = []
    for fam in families:
        cs = [chart.coords(p) for p in fam]
        if any(c is None for c in cs):
            break
        if len(cs) > 1 and rank([sub(c, cs[0]) for c in cs[1:]]) != len(chart.directions):
            break
        if len(cs) == 1 and chart.directions:
            break
        charted.append(cs)
    else:
        inner = decide_open_hulls(charted)
        pt = chart.point(inner.point) if inner.nonempty else None
        return RelintVerdict(inner.nonempty, pt, chart, tuple(tuple(f) for f in charted), inner)
    return _relint_general(families)


def _relint_general(families) -> RelintVerdict:
    t, x = _mu_lp(families, len(families[0][0]))
    if t is not None and t > 0:
        return RelintVerdict(True, x)
    return RelintVerdict(False, None)


def relint_hulls_intersection(families: Sequence[Sequence[Sequence]]) -> tuple | None:
    return decide_relint_hulls(families).point


# -- cones ----------------------------------------------------------------------

def positive_dependence(X: Sequence[Sequence]) -> tuple | None:
    """Coefficients ``lam >= 1`` with ``sum lam_i X_i = 0``, or None."""
    X = [vec(x) for x in X]
    if not X:
        return ()
    d = len(X[0])
    r = len(X)
    # lam = 1 + mu, mu >= 0, minimize sum(mu)
    cons = []
    for c in range(d):
        cons.append(Constraint(tuple(x[c] for x in X), EQ, -sum(x[c] for x in X)))
    out = lp_solve(LinearProgram(r, cons, (ONE,) * r, "min", range(r)))
    if out.status != "optimal":
        return None
    return tuple(ONE + m for m in out.point)


@dataclass(frozen=True)
class ConeDifferenceWitness:
    """``v = sum a_j pos_j - sum b_i neg_i`` is a nonzero vector of ``E``."""

    v: tuple
    a: tuple
    b: tuple


def find_cone_difference_in_subspace(pos: Sequence[Sequence], neg: Sequence[Sequence],
                                     E: SubspaceBasis, *, sweep: bool = False
                                     ) -> ConeDifferenceWitness | None:
    """Nonzero element of ``E ∩ (cone(pos) - cone(neg))``, with coefficients.

    The fallback (and ``sweep=True``) decision solves one feasibility LP per
    coordinate k and sign s with ``v_k = s``.  When ``pos ∪ neg`` is
    linearly independent a single LP normalized by ``sum a + sum b = 1``
    plus one kernel computation for the shared generators decides it.
    """
    pos = [vec(p) for p in pos]
    neg = [vec(q) for q in neg]
    n = E.ambient_dim
    if not pos and not neg:
        return None
    ann = E.annihilator()
    if not sweep:
        common = [g for g in pos if g in neg]
        pos_only = [g for g in pos if g not in common]
        neg_only = [g for g in neg if g not in common]
        union = pos_only + neg_only + common
        if rank(union) == len(union):
            return _fast_cone_difference(pos, neg, pos_only, neg_only, common, ann, n)
    gens = pos + [tuple(-x for x in q) for q in neg]
    nvar = len(gens)
    base = [Constraint(tuple(dot(w, g) for g in gens), EQ, ZERO) for w in ann]
    for k in range(n):
        if all(g[k] == 0 for g in gens):
            continue
        for s in (ONE, -ONE):
            cons = base + [Constraint(tuple(g[k] for g in gens), EQ, s)]
            pt = _feasibility(nvar, cons, range(nvar))
            if pt is not None:
                v = lin_comb(pt, gens, n)
                return ConeDifferenceWitness(v, pt[:len(pos)], pt[len(pos):])
    return None


def _fast_cone_difference(pos, neg, pos_only, neg_only, common, ann, n):
    n_a, n_b, n_c = len(pos_only), len(neg_only), len(common)
    gens = pos_only + [tuple(-x for x in q) for q in neg_only] + common
    nvar = len(gens)
    if n_a + n_b:
        cons = [Constraint(tuple(dot(w, g) for g in gens), EQ, ZERO) for w in ann]
        cons.append(Constraint((ONE,) * (n_a + n_b) + (ZERO,) * n_c, EQ, ONE))
        pt = _feasibility(nvar, cons, range(n_a + n_b))
        if pt is not None:
            return _assemble(pos, neg, pos_only, neg_only, common, pt, n)
    if n_c:
        # E ∩ span(common): a kernel vector of (ann . g)
        rows = [tuple(dot(w, g) for g in common) for w in ann]
        ker = kernel_basis(rows, n_c)
        if ker:
            pt = (ZERO,) * (n_a + n_b) + ker[0]
            return _assemble(pos, neg, pos_only, neg_only, common, pt, n)
    return None


def _assemble(pos, neg, pos_only, neg_only, common, pt, n):
    n_a, n_b = len(pos_only), len(neg_only)
    a = [ZERO] * len(pos)
    b = [ZERO] * len(neg)
    for g, val in zip(pos_only, pt[:n_a]):
        a[pos.index(g)] = val
    for g, val in zip(neg_only, pt[n_a:n_a + n_b]):
        b[neg.index(g)] = val
    for g, val in zip(common, pt[n_a + n_b:]):
        if val > 0:
            a[pos.index(g)] = val
        else:
            b[neg.index(g)] = -val
    v = sub(lin_comb(a, pos, n), lin_comb(b, neg, n))
    return ConeDifferenceWitness(v, tuple(a), tuple(b))


def cone_subspace_nontrivial(gens_pos: Sequence[Sequence], gens_neg: Sequence[Sequence],
                             E: SubspaceBasis) -> tuple | None:
    """A nonzero ``v in E`` of the form ``sum a pos - sum b neg`` (a, b >= 0)."""
    w = find_cone_difference_in_subspace(gens_pos, gens_neg, E)
    return None if w is None else w.v
