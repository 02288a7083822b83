"""Exact rational linear algebra and a vertex-producing feasibility solver.

The simplex routine here is deliberately minimal: phase-I only, dense
tableau, Bland's rule.  Feasibility plus a vertex is all the rest of the
package needs, and a basic feasible solution of the barycentric system is
exactly a set of affinely independent points carrying the target in the
relative interior of their simplex, which is what the constructive
Caratheodory step requires.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Infeasible, NoSolution
from .ratio import ONE, ZERO, Rat, to_rat


def _to_rat_matrix(rows):
    return [[to_rat(v) for v in row] for row in rows]


def mat_vec(matrix, vector):
    return [sum((a * x for a, x in zip(row, vector)), ZERO) for row in matrix]


def solve_exact_linear(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly by Gauss-Jordan elimination.

    Returns one exact solution (free variables pinned to zero when the
    system is underdetermined).  Raises :class:`NoSolution` when the system
    is inconsistent.
    """
    rows = _to_rat_matrix(matrix)
    b = [to_rat(v) for v in rhs]
    if len(rows) != len(b):
        raise ValueError("matrix and rhs sizes differ")
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [rows[i] + [b[i]] for i in range(m)]

    pivot_cols = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * p for a, p in zip(aug[i], aug[r])]
        pivot_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            raise NoSolution("inconsistent linear system")
    x = [ZERO] * n
    for i, c in enumerate(pivot_cols):
        x[c] = aug[i][n]
    return x


def exact_rank(matrix) -> int:
    rows = _to_rat_matrix(matrix)
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(r + 1, m):
            if rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * p for a, p in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r


def _phase1_vertex(rows, rhs):
    """Phase-I simplex with Bland's rule on ``{x >= 0 : A x = b}``.

    Returns ``(values, basis)`` describing a basic feasible solution, or
    ``None`` when the system is infeasible.  ``values`` holds one exact
    entry per column of ``A``; strictly positive entries always sit on
    linearly independent columns.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    T = []
    b = []
    for i in range(m):
        if rhs[i] < 0:
            T.append([-v for v in rows[i]])
            b.append(-rhs[i])
        else:
            T.append(list(rows[i]))
            b.append(rhs[i])
    for i in range(m):
        T[i].extend(ONE if j == i else ZERO for j in range(m))
    ncols = n + m
    basis = list(range(n, n + m))

    # reduced costs for min(sum of artificials): artificial columns start
    # at zero, original column j at minus its column sum
    z = [ZERO] * ncols
    for j in range(n):
        z[j] = -sum((T[i][j] for i in range(m)), ZERO)

    while True:
        in_basis = set(basis)
        enter = next(
            (j for j in range(ncols) if j not in in_basis and z[j] < 0), None
        )
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = b[i] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            raise AssertionError("phase-I objective cannot be unbounded")
        _pivot(T, b, z, basis, leave, enter)

    if any(b[i] != 0 for i in range(m) if basis[i] >= n):
        return None

    # drive zero-valued artificials out of the basis; fully dependent rows
    # are redundant and get dropped
    keep = []
    for i in range(m):
        if basis[i] < n:
            keep.append(i)
            continue
        enter = next(
            (j for j in range(n) if j not in set(basis) and T[i][j] != 0), None
        )
        if enter is not None:
            _pivot(T, b, z, basis, i, enter)
            keep.append(i)
    if len(keep) != m:
        T = [T[i] for i in keep]
        b = [b[i] for i in keep]
        basis = [basis[i] for i in keep]

    values = [ZERO] * n
    for i, j in enumerate(basis):
        if j < n:
            values[j] = b[i]
    return values, [j for j in basis if j < n]


def _pivot(T, b, z, basis, leave, enter):
    m = len(T)
    pv = T[leave][enter]
    T[leave] = [v / pv for v in T[leave]]
    b[leave] = b[leave] / pv
    for i in range(m):
        if i != leave and T[i][enter] != 0:
            f = T[i][enter]
            T[i] = [a - f * p for a, p in zip(T[i], T[leave])]
            b[i] = b[i] - f * b[leave]
    if z[enter] != 0:
        f = z[enter]
        for j in range(len(z)):
            z[j] = z[j] - f * T[leave][j]
    basis[leave] = enter


@dataclass(frozen=True)
class BarycentricSolution:
    """A vertex of ``{mu >= 0, sum mu = 1, sum mu * point = target}``.

    The supported points are affinely independent and every coefficient is
    strictly positive, so the target lies in the relative interior of their
    simplex.
    """

    support_indices: tuple
    coefficients: tuple

    def as_pairs(self, points):
        return [(points[i], c) for i, c in zip(self.support_indices, self.coefficients)]


def barycentric_vertex(points, target) -> BarycentricSolution:
    """Find a basic feasible barycentric representation of ``target``.

    Raises :class:`Infeasible` exactly when ``target`` is outside the convex
    hull of ``points``.  Duplicate points are collapsed onto their first
    occurrence; if the target coincides with an input point, the one-point
    representation is returned directly.
    """
    if not points:
        raise ValueError("points must be nonempty")
    dim = len(points[0])
    pts = [tuple(int(c) for c in p) for p in points]
    if any(len(p) != dim for p in pts):
        raise ValueError("points of mixed dimension")
    tgt = tuple(int(c) for c in target)
    if len(tgt) != dim:
        raise ValueError("target dimension mismatch")

    first_index: dict[tuple, int] = {}
    for i, p in enumerate(pts):
        first_index.setdefault(p, i)
    if tgt in first_index:
        return BarycentricSolution((first_index[tgt],), (ONE,))

    unique = sorted(first_index)
    rows = [[Rat(p[c]) for p in unique] for c in range(dim)]
    rows.append([ONE] * len(unique))
    rhs = [Rat(c) for c in tgt] + [ONE]

    result = _phase1_vertex(rows, rhs)
    if result is None:
        raise Infeasible("target is outside the convex hull of the points")
    values, _ = result
    support = [
        (first_index[unique[j]], values[j])
        for j in range(len(unique))
        if values[j] > 0
    ]
    support.sort()
    return BarycentricSolution(
        tuple(i for i, _ in support), tuple(c for _, c in support)
    )


def lp_feasible(a_ub=None, b_ub=None, a_eq=None, b_eq=None, n_vars=None):
    """Exact feasibility of ``{x >= 0, a_ub x <= b_ub, a_eq x = b_eq}``.

    Returns ``(True, witness)`` with an exact rational witness, or
    ``(False, None)``.
    """
    a_ub = _to_rat_matrix(a_ub or [])
    a_eq = _to_rat_matrix(a_eq or [])
    b_ub = [to_rat(v) for v in (b_ub or [])]
    b_eq = [to_rat(v) for v in (b_eq or [])]
    if len(a_ub) != len(b_ub) or len(a_eq) != len(b_eq):
        raise ValueError("constraint matrix and rhs sizes differ")
    widths = {len(r) for r in a_ub} | {len(r) for r in a_eq}
    if len(widths) > 1:
        raise ValueError("constraint rows of mixed width")
    if n_vars is None:
        if not widths:
            raise ValueError("n_vars required when there are no constraints")
        n_vars = widths.pop()
    elif widths and widths.pop() != n_vars:
        raise ValueError("n_vars does not match constraint width")

    n_slack = len(a_ub)
    rows = []
    rhs = []
    for i, row in enumerate(a_ub):
        slack = [ONE if j == i else ZERO for j in range(n_slack)]
        rows.append(row + slack)
        rhs.append(b_ub[i])
    for i, row in enumerate(a_eq):
        rows.append(row + [ZERO] * n_slack)
        rhs.append(b_eq[i])
    if not rows:
        return True, [ZERO] * n_vars

    result = _phase1_vertex(rows, rhs)
    if result is None:
        return False, None
    values, _ = result
    return True, values[:n_vars]
