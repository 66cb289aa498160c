"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions and
matrices are tuples of row tuples.  Nothing here ever touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]


def to_rational(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or a ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean value {x!r}")
    if isinstance(x, (int, str)):
        return Fraction(x)
    try:
        # gmpy2.mpq and friends expose numerator/denominator
        return Fraction(int(x.numerator), int(x.denominator))
    except AttributeError:
        raise TypeError(f"cannot interpret {x!r} as a rational") from None


def rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vec(xs: Iterable) -> Vector:
    return tuple(to_rational(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def lin_comb(coeffs: Sequence, vectors: Sequence[Sequence], dim: int) -> Vector:
    out = [Fraction(0)] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                out[i] += c * a
    return tuple(out)


def transpose(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not rows:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*rows))


def matvec(rows: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(r, v) for r in rows)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds the nonzero rows only and
    ``pivots`` lists the pivot column of each, ascending.
    """
    a = [list(map(to_rational, r)) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        pr = a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
        pivots.append(c)
        r += 1
    return tuple(tuple(x) for x in a[:r]), pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of ``{v : M v = 0}``.

    One vector per free column of the RREF, in ascending column order, with
    that free coordinate set to 1 and the other free coordinates to 0.
    """
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for a matrix without rows")
        ncols = len(rows[0])
    r, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(r, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """A solution of ``M x = rhs`` (free variables set to 0), or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [tuple(r) + (b,) for r, b in zip(rows, rhs)]
    r, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(r, pivots):
        x[p] = row[-1]
    return tuple(x)


def inverse(rows: Sequence[Sequence]) -> Matrix:
    n = len(rows)
    aug = [tuple(r) + unit(n, i) for i, r in enumerate(rows)]
    r, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(row[n:] for row in r)


def det(rows: Sequence[Sequence]) -> Fraction:
    a = [list(map(to_rational, r)) for r in rows]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def affinely_independent(points: Sequence[Sequence]) -> bool:
    if len(points) <= 1:
        return True
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]]) == len(points) - 1


def primitive(v: Sequence) -> Vector:
    """Positive multiple of ``v`` with coprime integer entries."""
    v = vec(v)
    if is_zero(v):
        raise ValueError("zero vector has no primitive direction")
    den = lcm(*(a.denominator for a in v))
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(Fraction(a // g) for a in ints)


@dataclass(frozen=True)
class SubspaceBasis:
    """An ordered basis of a linear subspace of R^n."""

    ambient_dim: int
    vectors: tuple

    def __post_init__(self):
        vs = tuple(vec(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vs)
        if any(len(v) != self.ambient_dim for v in vs):
            raise ValueError("basis vector of wrong dimension")
        if vs and rank(vs) != len(vs):
            raise ValueError("subspace basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def annihilator(self) -> list[Vector]:
        """Basis of the linear forms vanishing on the subspace."""
        return kernel_basis(self.vectors, self.ambient_dim)

    def contains(self, v: Sequence) -> bool:
        return all(dot(w, v) == 0 for w in self.annihilator())

    def same_span(self, other: "SubspaceBasis") -> bool:
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        return rank(self.vectors + other.vectors) == self.dim


def solve_affine_map(src: Sequence[Sequence], dst: Sequence[Sequence],
                     basis_idx: Sequence[int]):
    """The affine map ``x -> L x + c`` with ``src[j] -> dst[j]`` for all j.

    The map is pinned down by the affine basis ``src[basis_idx]``; returns
    ``(L, c)`` if it also carries every other ``src[i]`` to ``dst[i]``,
    otherwise None.
    """
    if len(src) != len(dst):
        raise ValueError("src and dst differ in length")
    d = len(src[0])
    pts = [src[j] for j in basis_idx]
    if len(pts) != d + 1 or not affinely_independent(pts):
        raise ValueError("basis_idx does not select an affine basis of src")
    # [L | c] S = D with S the columns (src_j, 1)
    s_cols = [tuple(src[j]) + (Fraction(1),) for j in basis_idx]
    s_inv = inverse(transpose(s_cols))
    d_rows = transpose([dst[j] for j in basis_idx])
    lc = matmul(d_rows, s_inv)
    lin = tuple(row[:d] for row in lc)
    shift = tuple(row[d] for row in lc)
    for p, q in zip(src, dst):
        if add(matvec(lin, p), shift) != tuple(q):
            return None
    return lin, shift


def complement_and_projection(E: SubspaceBasis, n: int | None = None):
    """Coordinate complement of ``E`` and the projection onto it along ``E``.

    Returns ``(idx, Pi)``: ``idx`` is the lexicographically first set of
    standard basis indices (0-based) completing ``E`` to a basis of R^n, and
    ``Pi`` is the ``(n - dim E) x n`` matrix with ``Pi x`` the coordinates of
    the projection of ``x`` in those standard vectors.
    """
    n = E.ambient_dim if n is None else n
    if n != E.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if E.dim >= n:
        raise ValueError("subspace has no proper complement")
    # greedy completion is lexicographically first (matroid exchange)
    idx: list[int] = []
    current = list(E.vectors)
    for i in range(n):
        e = unit(n, i)
        if rank(current + [e]) > len(current):
            current.append(e)
            idx.append(i)
        if len(current) == n:
            break
    p_inv = inverse(transpose(current))
    return idx, tuple(p_inv[E.dim:])


def dependent_subsets(points: Sequence[Sequence], size: int):
    """Yield index tuples of affinely dependent ``size``-subsets."""
    for sub_idx in combinations(range(len(points)), size):
        if not affinely_independent([points[i] for i in sub_idx]):
            yield sub_idx
