"""Exact linear algebra over Fraction or any exact field type.

Rank and nullspace questions here are yes/no algebraic properties, so
everything is decided by exact elimination with exact zero tests; there
are no thresholds.  Rational matrices additionally get a fraction-free
Bareiss determinant (integer arithmetic after clearing denominators).
Entries only need +, -, *, / and == 0, so RationalFunction matrices work
through the same code paths (giving ranks at the generic point).
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def _echelon(rows, ncols):
    """In-place forward elimination; returns list of pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, nrows):
            if rows[i][c] != 0:
                factor = rows[i][c] / pv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def mat_rank(matrix) -> int:
    rows = [list(row) for row in matrix]
    if not rows:
        return 0
    return len(_echelon(rows, len(rows[0])))


def nullspace(matrix, ncols=None):
    """Basis of the right kernel, free variables set to one in turn."""
    rows = [list(row) for row in matrix]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    if not rows:
        basis = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    pivots = _echelon(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            s = 0
            for c in range(pc + 1, ncols):
                if v[c] != 0 and rows[r][c] != 0:
                    s = s + rows[r][c] * v[c]
            if s != 0:
                v[pc] = -s / rows[r][pc]
        basis.append(v)
    return basis


def nullity(matrix, ncols) -> int:
    rows = [list(row) for row in matrix if any(x != 0 for x in row)]
    if not rows:
        return ncols
    return ncols - len(_echelon(rows, ncols))


def solve_particular(matrix, rhs):
    """One exact solution of A x = b (free variables zero), or None."""
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    if not rows:
        return []
    ncols = len(matrix[0])
    pivots = _echelon(rows, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        pc = pivots[r]
        s = rows[r][ncols]
        for c in range(pc + 1, ncols):
            if x[c] != 0 and rows[r][c] != 0:
                s = s - rows[r][c] * x[c]
        x[pc] = s / rows[r][pc]
    return x


def det(matrix):
    """Exact determinant; Bareiss on rational input, division method otherwise."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, (int, Fraction)) for row in matrix for x in row):
        return _det_bareiss(matrix)
    return _det_division(matrix)


def _det_bareiss(matrix):
    n = len(matrix)
    scale = Fraction(1)
    rows = []
    for row in matrix:
        l = 1
        for x in row:
            d = Fraction(x).denominator
            l = l * d // gcd(l, d)
        scale = scale / l
        rows.append([int(Fraction(x) * l) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = None
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    swap = i
                    break
            if swap is None:
                return Fraction(0)
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return sign * scale * rows[n - 1][n - 1]


def _det_division(matrix):
    rows = [list(row) for row in matrix]
    n = len(rows)
    sign = 1
    out = None
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return 0 * rows[0][0]
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            sign = -sign
        pv = rows[c][c]
        out = pv if out is None else out * pv
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                factor = rows[i][c] / pv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[c])]
    return out if sign > 0 else -out


def in_row_span(rows, candidate, ncols) -> bool:
    """Exact membership of ``candidate`` in the row span of ``rows``."""
    base = [list(r) for r in rows if any(x != 0 for x in r)]
    if all(x == 0 for x in candidate):
        return True
    r0 = len(_echelon([list(r) for r in base], ncols)) if base else 0
    r1 = len(_echelon(base + [list(candidate)], ncols))
    return r1 == r0


def mat_mul(a, b):
    if not a or not b:
        return []
    return [[sum(a[i][k] * b[k][j] for k in range(len(b)))
             for j in range(len(b[0]))] for i in range(len(a))]


def row_times_matrix(row, matrix):
    return [sum(row[k] * matrix[k][j] for k in range(len(row)))
            for j in range(len(matrix[0]))]
