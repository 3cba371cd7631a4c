"""Exact rational linear algebra and linear programming.

``simplex`` solves ``min c.x  s.t.  A x = b, x >= 0`` over ``Fraction`` with
a sparse tableau, two phases and Bland's rule (smallest index enters,
ties in the ratio test go to the smallest basic index), which rules out
cycling.  Rows and columns are plain dicts so the sizes met here, a few
hundred rows, stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: list | None = None
    pivots: int = 0


def _pivot(rows, rhs, basis, obj, r, s):
    row = rows[r]
    p = row[s]
    if p != ONE:
        inv = ONE / p
        row = {j: v * inv for j, v in row.items()}
        rows[r] = row
        rhs[r] *= inv
    b_r = rhs[r]
    for i, other in enumerate(rows):
        if i == r:
            continue
        f = other.get(s)
        if f is None:
            continue
        for j, v in row.items():
            nv = other.get(j, ZERO) - f * v
            if nv:
                other[j] = nv
            else:
                other.pop(j, None)
        rhs[i] -= f * b_r
    for d in obj:
        f = d[0].get(s)
        if f is not None:
            red = d[0]
            for j, v in row.items():
                nv = red.get(j, ZERO) - f * v
                if nv:
                    red[j] = nv
                else:
                    red.pop(j, None)
            d[1] -= f * b_r
    basis[r] = s


def _iterate(rows, rhs, basis, obj, allowed, max_pivots):
    """Run Bland's rule on the first objective in ``obj``; returns status, pivots."""
    red = obj[0]
    pivots = 0
    while True:
        entering = None
        for j in sorted(red[0]):
            if red[0][j] < 0 and j < allowed:
                entering = j
                break
        if entering is None:
            return "optimal", pivots
        best = None
        for i, row in enumerate(rows):
            a = row.get(entering)
            if a is not None and a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded", pivots
        _pivot(rows, rhs, basis, obj, best[1], entering)
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex pivot limit exceeded")


def simplex(rows, rhs, cost, nvars, basis=None, max_pivots=200000):
    """Minimize ``cost . x`` subject to ``rows . x = rhs`` and ``x >= 0``.

    ``rows`` is a list of sparse dicts ``{column: coefficient}``; ``cost`` a
    sparse dict.  ``basis`` may name a feasible starting basis, one column per
    row that is a unit vector in that row (then phase one is skipped).
    """
    rows = [{j: Fraction(v) for j, v in row.items() if v} for row in rows]
    rhs = [Fraction(v) for v in rhs]
    cost = {j: Fraction(v) for j, v in cost.items() if v}
    m = len(rows)
    total = 0
    if basis is None:
        for i in range(m):
            if rhs[i] < 0:
                rows[i] = {j: -v for j, v in rows[i].items()}
                rhs[i] = -rhs[i]
        basis = [nvars + i for i in range(m)]
        for i in range(m):
            rows[i][nvars + i] = ONE
        phase1 = {}
        for row in rows:
            for j, v in row.items():
                if j < nvars:
                    phase1[j] = phase1.get(j, ZERO) - v
        phase1 = {j: v for j, v in phase1.items() if v}
        obj = [[phase1, -sum(rhs, ZERO)]]
        status, piv = _iterate(rows, rhs, basis, obj, nvars + m, max_pivots)
        total += piv
        if -obj[0][1] != 0:
            return LPResult("infeasible", pivots=total)
        # drive artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if basis[i] >= nvars:
                cand = [j for j in sorted(rows[i]) if j < nvars]
                if cand:
                    _pivot(rows, rhs, basis, obj, i, cand[0])
                    total += 1
        for i in range(m):
            if basis[i] < nvars:
                keep.append(i)
        rows = [{j: v for j, v in rows[i].items() if j < nvars} for i in keep]
        rhs = [rhs[i] for i in keep]
        basis = [basis[i] for i in keep]
    else:
        basis = list(basis)
    red = dict(cost)
    value = ZERO
    obj = [[red, -value]]
    for i, b in enumerate(basis):
        f = obj[0][0].get(b)
        if f:
            for j, v in rows[i].items():
                nv = obj[0][0].get(j, ZERO) - f * v
                if nv:
                    obj[0][0][j] = nv
                else:
                    obj[0][0].pop(j, None)
            obj[0][1] -= f * rhs[i]
    status, piv = _iterate(rows, rhs, basis, obj, nvars, max_pivots)
    total += piv
    if status == "unbounded":
        return LPResult("unbounded", pivots=total)
    x = [ZERO] * nvars
    for i, b in enumerate(basis):
        x[b] = rhs[i]
    return LPResult("optimal", -obj[0][1], x, total)


def _index_rows(columns, target):
    keys = set(target)
    for col in columns:
        keys.update(col)
    return sorted(keys)


def l1_minimize(columns, target):
    """min over free y of |target + sum_j y_j columns[j]|_1.

    Columns and target are sparse dicts keyed by arbitrary sortable row keys.
    Returns ``(value, y)``.  Encoded with one slack pair per row, so the
    residual slacks give a feasible starting basis.
    """
    keys = _index_rows(columns, target)
    where = {k: i for i, k in enumerate(keys)}
    m, p = len(keys), len(columns)
    # variables: y+ (0..p-1), y- (p..2p-1), r+ (2p..2p+m-1), r- (2p+m..2p+2m-1)
    rows = [dict() for _ in range(m)]
    for j, col in enumerate(columns):
        for k, v in col.items():
            i = where[k]
            rows[i][j] = -v
            rows[i][p + j] = v
    rhs = [Fraction(target.get(k, 0)) for k in keys]
    basis = []
    for i in range(m):
        rows[i][2 * p + i] = ONE
        rows[i][2 * p + m + i] = -ONE
        if rhs[i] < 0:
            rows[i] = {j: -v for j, v in rows[i].items()}
            rhs[i] = -rhs[i]
            basis.append(2 * p + m + i)
        else:
            basis.append(2 * p + i)
    cost = {2 * p + i: ONE for i in range(2 * m)}
    res = simplex(rows, rhs, cost, 2 * p + 2 * m, basis=basis)
    if res.status != "optimal":
        raise RuntimeError(f"l1 minimization returned {res.status}")
    y = [res.x[j] - res.x[p + j] for j in range(p)]
    return res.value, y


def min_l1_solution(columns, target):
    """min |y|_1 subject to sum_j y_j columns[j] = target; None if infeasible."""
    keys = _index_rows(columns, target)
    where = {k: i for i, k in enumerate(keys)}
    p = len(columns)
    rows = [dict() for _ in keys]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[where[k]][j] = v
            rows[where[k]][p + j] = -v
    rhs = [Fraction(target.get(k, 0)) for k in keys]
    res = simplex(rows, rhs, {j: ONE for j in range(2 * p)}, 2 * p)
    if res.status != "optimal":
        return None
    return [res.x[j] - res.x[p + j] for j in range(p)]


def solve_linear(columns, target):
    """Some exact solution y of sum_j y_j columns[j] = target, or None.

    Sparse Gauss-Jordan elimination on the augmented rows.
    """
    keys = _index_rows(columns, target)
    rows = {k: {} for k in keys}
    for j, col in enumerate(columns):
        for k, v in col.items():
            if v:
                rows[k][j] = Fraction(v)
    aug = [(rows[k], Fraction(target.get(k, 0))) for k in keys]
    pivots = []  # (col, row dict, rhs)
    for row, b in aug:
        row = dict(row)
        for col, prow, pb in pivots:
            f = row.get(col)
            if f:
                for j, v in prow.items():
                    nv = row.get(j, ZERO) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                b -= f * pb
        if not row:
            if b != 0:
                return None
            continue
        col = min(row)
        inv = ONE / row[col]
        row = {j: v * inv for j, v in row.items()}
        b *= inv
        for idx, (c2, prow, pb) in enumerate(pivots):
            f = prow.get(col)
            if f:
                for j, v in row.items():
                    nv = prow.get(j, ZERO) - f * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
                pivots[idx] = (c2, prow, pb - f * b)
        pivots.append((col, row, b))
    y = [ZERO] * len(columns)
    for col, _row, b in pivots:
        y[col] = b
    return y


def row_reduce(vectors):
    """Reduced row echelon basis (list of (pivot, tuple)) of the span of ``vectors``."""
    basis = []
    for v in vectors:
        v = [Fraction(x) for x in v]
        for p, row in basis:
            f = v[p]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        nz = [i for i, x in enumerate(v) if x]
        if not nz:
            continue
        p = nz[0]
        inv = ONE / v[p]
        v = [x * inv for x in v]
        new = []
        for q, row in basis:
            f = row[p]
            if f:
                row = [a - f * b for a, b in zip(row, v)]
            new.append((q, row))
        basis = new + [(p, v)]
    return [(p, tuple(row)) for p, row in sorted(basis)]
