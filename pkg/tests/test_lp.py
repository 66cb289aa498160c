from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from lvmbtoric.exact import SubspaceBasis, add, affinely_independent, lin_comb, matvec, sub, unit
from lvmbtoric.lp import (
    EQ, GE, LE, Constraint, LinearProgram, barycentric_coordinates, cone_subspace_nontrivial,
    decide_open_hulls, decide_relint_hulls, find_cone_difference_in_subspace, lp_solve,
    open_hulls_intersection, positive_dependence,
)
from oracles import float_hull_slack, float_positive_dependence_exists

coord = st.integers(-6, 6).map(F)


def point(k):
    return st.lists(coord, min_size=k, max_size=k).map(tuple)


def simplex(k):
    return st.lists(point(k), min_size=k + 1, max_size=k + 1).filter(affinely_independent)


def interior(fam, x):
    lam = barycentric_coordinates(fam, x)
    return lam is not None and all(c > 0 for c in lam)


# -- lp_solve ------------------------------------------------------------------------

def test_lp_single_bound():
    out = lp_solve(LinearProgram(1, [Constraint((1,), LE, 3)], (1,)))
    assert out.status == "optimal" and out.value == 3 and out.point == (3,)


def test_lp_contradictory():
    cons = [Constraint((1,), LE, 0), Constraint((1,), GE, 1)]
    assert lp_solve(LinearProgram(1, cons, (1,))).status == "infeasible"


def test_lp_unbounded():
    out = lp_solve(LinearProgram(1, [], (1,)))
    assert out.status == "unbounded" and out.value is None and out.point is None


def test_lp_rejects_bad_shapes():
    with pytest.raises(ValueError):
        LinearProgram(2, [Constraint((1,), LE, 0)], (1, 0))
    with pytest.raises(ValueError):
        Constraint((1,), "<", 0)


@given(st.integers(1, 3).flatmap(lambda nv: st.tuples(
    st.just(nv),
    st.lists(st.tuples(st.lists(coord, min_size=nv, max_size=nv),
                       st.sampled_from([LE, GE, EQ]), coord), max_size=5),
    st.lists(coord, min_size=nv, max_size=nv),
    st.sampled_from(["max", "min"]),
    st.booleans())))
def test_lp_resubstitution(args):
    nv, rows, obj, sense, nonneg = args
    cons = [Constraint(tuple(c), r, b) for c, r, b in rows]
    # a box keeps most instances bounded
    for i in range(nv):
        cons.append(Constraint(unit(nv, i), LE, 10))
        cons.append(Constraint(unit(nv, i), GE, -10))
    lp = LinearProgram(nv, cons, tuple(obj), sense, range(nv) if nonneg else ())
    out = lp_solve(lp)
    assert out.status in ("optimal", "infeasible")
    if out.status == "optimal":
        assert lp.feasible_point(out.point)
        assert sum(a * b for a, b in zip(obj, out.point)) == out.value


def test_lp_is_optimal_on_a_vertex_problem():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0; optimum at (8/5, 6/5)
    cons = [Constraint((1, 2), LE, 4), Constraint((3, 1), LE, 6)]
    out = lp_solve(LinearProgram(2, cons, (1, 1), "max", {0, 1}))
    assert out.point == (F(8, 5), F(6, 5)) and out.value == F(14, 5)


# -- barycentric coordinates ---------------------------------------------------------

TRI = [(0, 0), (1, 0), (0, 1)]


def test_barycentric_vertex_and_centroid():
    assert barycentric_coordinates(TRI, (0, 0)) == (1, 0, 0)
    assert barycentric_coordinates(TRI, (F(1, 3), F(1, 3))) == (F(1, 3),) * 3


def test_barycentric_off_hull():
    assert barycentric_coordinates([(0, 0), (1, 0)], (0, 1)) is None


def test_barycentric_dependent_points_rejected():
    with pytest.raises(ValueError):
        barycentric_coordinates([(0, 0), (1, 1), (2, 2)], (0, 0))


@given(simplex(2), st.lists(st.integers(1, 9), min_size=3, max_size=3))
def test_barycentric_recovers_weights(fam, w):
    lam = tuple(F(x, sum(w)) for x in w)
    x = lin_comb(lam, fam, 2)
    assert barycentric_coordinates(fam, x) == lam


# -- open hulls ----------------------------------------------------------------------

def test_open_hulls_single_family():
    x = open_hulls_intersection([TRI])
    assert x is not None and interior(TRI, x)


def test_open_hulls_overlapping_triangles():
    other = [(0, 0), (1, 0), (1, 1)]
    x = open_hulls_intersection([TRI, other])
    assert x is not None and interior(TRI, x) and interior(other, x)
    # the hand-checked witness from the worked example is indeed interior to both
    assert interior(TRI, (F(1, 2), F(1, 4))) and interior(other, (F(1, 2), F(1, 4)))


def test_open_hulls_separated_triangles():
    v = decide_open_hulls([TRI, [(0, 0), (1, 0), (1, -1)]])
    assert not v.nonempty and v.point is None
    assert v.rho <= 0 and len(v.functionals) == 2


def test_open_hulls_rejects_degenerate_family():
    with pytest.raises(ValueError):
        open_hulls_intersection([[(0, 0), (1, 1), (2, 2)]])


def test_open_hulls_zero_dimensional():
    assert open_hulls_intersection([[()], [()]]) == ()


def _check_separation(families, v):
    """Re-check the emptiness certificate by substitution."""
    total = F(0)
    acc = (F(0),) * (len(families[0][0]) + 1)
    for fam, w in zip(families, v.functionals):
        for p in fam:
            val = sum(a * b for a, b in zip(w, tuple(p) + (1,)))
            assert val >= 0
            total += val
        acc = add(acc, w)
    assert acc[:-1] == (0,) * (len(acc) - 1) and acc[-1] == v.rho <= 0
    assert total > 0


@given(st.lists(simplex(2), min_size=1, max_size=4))
def test_open_hulls_against_float_oracle(families):
    v = decide_open_hulls(families)
    slack = float_hull_slack(families)
    if v.nonempty:
        assert all(interior(f, v.point) for f in families)
        assert slack > 0
    else:
        _check_separation(families, v)
        assert slack < 1e-9


@given(st.lists(simplex(2), min_size=2, max_size=3), st.randoms(use_true_random=False))
def test_open_hulls_symmetric(families, rnd):
    shuffled = list(families)
    rnd.shuffle(shuffled)
    assert decide_open_hulls(families).nonempty == decide_open_hulls(shuffled).nonempty


@given(st.lists(simplex(2), min_size=2, max_size=3),
       st.lists(st.lists(coord, min_size=2, max_size=2), min_size=2, max_size=2), point(2))
def test_open_hulls_affine_invariant(families, L, c):
    assume(L[0][0] * L[1][1] - L[0][1] * L[1][0] != 0)
    moved = [[add(matvec(L, p), c) for p in f] for f in families]
    a, b = decide_open_hulls(families), decide_open_hulls(moved)
    assert a.nonempty == b.nonempty
    if b.nonempty:
        assert all(interior(f, b.point) for f in moved)


def test_open_hulls_non_simplicial_families():
    square = [(0, 0), (2, 0), (0, 2), (2, 2)]
    x = open_hulls_intersection([square, TRI])
    assert x is not None and 0 < x[0] and 0 < x[1] and x[0] + x[1] < 1
    far = [(5, 5), (6, 5), (5, 6), (6, 6)]
    assert open_hulls_intersection([square, far]) is None


def test_relint_hulls_in_a_plane_of_r3():
    a = [(0, 0, 1), (1, 0, 1), (0, 1, 1)]
    b = [(0, 0, 1), (1, 0, 1), (1, 1, 1)]
    v = decide_relint_hulls([a, b])
    assert v.nonempty and v.point[2] == 1
    c = [(0, 0, 1), (1, 0, 1), (1, -1, 1)]
    assert not decide_relint_hulls([a, c]).nonempty


def test_relint_hulls_different_planes():
    a = [(0, 0, 0), (2, 0, 0), (0, 2, 0)]
    b = [(1, 1, -1), (0, 0, 1), (1, 0, 1)]
    # b crosses z = 0 along the open segment (1/2,1/2,0)-(1,1/2,0), inside a
    v = decide_relint_hulls([a, b])
    assert v.nonempty and v.point[2] == 0
    assert not decide_relint_hulls([a, [(p[0] + 5, p[1], p[2]) for p in b]]).nonempty


# -- positive dependence -------------------------------------------------------------

def test_positive_dependence_examples():
    assert positive_dependence([(1,), (-1,)]) == (1, 1)
    assert positive_dependence([(1, 0), (0, 1), (-1, -1)]) == (1, 1, 1)
    assert positive_dependence([(1, 0), (0, 1)]) is None


@given(st.lists(point(2), min_size=1, max_size=5))
def test_positive_dependence_against_float_oracle(X):
    assume(all(any(c != 0 for c in x) for x in X))
    lam = positive_dependence(X)
    assert (lam is not None) == float_positive_dependence_exists(X)
    if lam is not None:
        assert all(c >= 1 for c in lam)
        assert lin_comb(lam, X, 2) == (0, 0)


# -- cone differences in a subspace --------------------------------------------------

def test_cone_subspace_examples():
    e2, e3 = unit(3, 1), unit(3, 2)
    E1 = SubspaceBasis(3, ((1, 0, 1), (0, 1, -1)))
    v = cone_subspace_nontrivial([e2], [e3], E1)
    assert v is not None and v[0] == 0 and v[1] == -v[2] and v[1] > 0
    E2 = SubspaceBasis(3, ((1, 0, 1), (0, 1, 1)))
    assert cone_subspace_nontrivial([e2], [e3], E2) is None
    assert cone_subspace_nontrivial([], [], E2) is None


def test_cone_subspace_shared_generator():
    # common generators may appear with either sign
    E = SubspaceBasis(3, ((1, 0, 0),))
    v = cone_subspace_nontrivial([unit(3, 0)], [unit(3, 0)], E)
    assert v is not None and v != (0, 0, 0)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.integers(0, n - 1), max_size=n, unique=True),
    st.lists(st.integers(0, n - 1), max_size=n, unique=True),
    st.lists(st.lists(coord, min_size=n, max_size=n), min_size=1, max_size=n - 1))))
def test_cone_subspace_fast_path_matches_sweep(args):
    n, P, N, basis = args
    try:
        E = SubspaceBasis(n, tuple(tuple(b) for b in basis))
    except ValueError:
        assume(False)
    pos = [unit(n, i) for i in P]
    neg = [unit(n, i) for i in N]
    fast = find_cone_difference_in_subspace(pos, neg, E)
    slow = find_cone_difference_in_subspace(pos, neg, E, sweep=True)
    assert (fast is None) == (slow is None)
    for w in (fast, slow):
        if w is None:
            continue
        assert any(c != 0 for c in w.v) and E.contains(w.v)
        assert all(c >= 0 for c in w.a + w.b)
        assert sub(lin_comb(w.a, pos, n), lin_comb(w.b, neg, n)) == w.v
