"""Independent reference computations used only by the tests.

Linear algebra goes through sympy; convex feasibility through scipy's
floating-point LP with a safety margin.  Neither shares code with the
package under test.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy
from scipy.optimize import linprog


def sym(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction)
                          else sympy.Rational(x) for x in r] for r in rows])


def sym_rank(rows, ncols=None):
    if not rows:
        return 0
    return sym(rows).rank()


def sym_nullity(rows, ncols):
    if not rows:
        return ncols
    return len(sym(rows).nullspace())


def float_hull_slack(families):
    """max t s.t. some x has convex coefficients >= t in every family (scipy)."""
    k = len(families[0][0])
    sizes = [len(f) for f in families]
    nv = k + 1 + sum(sizes)
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    pos = k + 1
    for fam in families:
        for c in range(k):
            row = np.zeros(nv)
            row[c] = -1
            for j, p in enumerate(fam):
                row[pos + j] = float(p[c])
            A_eq.append(row)
            b_eq.append(0.0)
        row = np.zeros(nv)
        row[pos:pos + len(fam)] = 1
        A_eq.append(row)
        b_eq.append(1.0)
        for j in range(len(fam)):
            row = np.zeros(nv)
            row[k] = 1
            row[pos + j] = -1
            A_ub.append(row)
            b_ub.append(0.0)
        pos += len(fam)
    obj = np.zeros(nv)
    obj[k] = -1
    bounds = [(None, None)] * (k + 1) + [(None, None)] * sum(sizes)
    bounds[k] = (None, 1)
    res = linprog(obj, A_ub=np.array(A_ub), b_ub=b_ub, A_eq=np.array(A_eq), b_eq=b_eq,
                  bounds=bounds, method="highs")
    return -res.fun if res.status == 0 else None


def float_positive_dependence_exists(X):
    """Is there lam >= 1 with sum lam_i X_i = 0 (scipy)?"""
    r = len(X)
    d = len(X[0])
    A = np.array([[float(x[c]) for x in X] for c in range(d)])
    res = linprog(np.ones(r), A_eq=A, b_eq=np.zeros(d), bounds=[(1, None)] * r, method="highs")
    return res.status == 0


def angle_sorted_complete_fan_r2(rays):
    """Cones between angularly consecutive rays; None if some gap is >= pi."""
    import math
    order = sorted(range(len(rays)), key=lambda i: math.atan2(float(rays[i][1]), float(rays[i][0])))
    cones = []
    for a, b in zip(order, order[1:] + order[:1]):
        x, y = rays[a], rays[b]
        if x[0] * y[1] - x[1] * y[0] <= 0:
            return None
        cones.append((a, b))
    return cones
