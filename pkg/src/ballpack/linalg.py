"""Tiny matrix/vector helpers over arbitrary exact scalars.

Matrices are tuples of row tuples; vectors are flat tuples.  Entries may be
ints, Fractions, QuadScalars, or floats -- anything with ring operators.
Exact Gaussian elimination (with division) backs solve/inverse/rank; float
callers should prefer numpy and only come here for the generic plumbing.
"""

from __future__ import annotations

from typing import Callable, Sequence

Vector = tuple
Matrix = tuple


def vec(entries: Sequence) -> Vector:
    return tuple(entries)


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_pow(a: Matrix, n: int) -> Matrix:
    out = identity(len(a))
    base = a
    while n:
        if n & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        n >>= 1
    return out


def scale(a: Matrix, s) -> Matrix:
    return tuple(tuple(s * x for x in row) for row in a)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def outer(u: Vector, v: Vector) -> Matrix:
    return tuple(tuple(x * y for y in v) for x in u)


def _default_is_zero(x) -> bool:
    return not x


def _exactify(x):
    # int/int division yields float; promote ints so elimination stays exact
    from fractions import Fraction

    return Fraction(x) if isinstance(x, int) else x


def _pick_pivot(rows, col: int, start: int, nrows: int, is_zero: Callable):
    # exact scalars: any nonzero pivot works; floats: take the largest so
    # elimination residues of earlier columns never get promoted to pivots
    cand = [r for r in range(start, nrows) if not is_zero(rows[r][col])]
    if not cand:
        return None
    if any(isinstance(rows[r][col], float) for r in cand):
        return max(cand, key=lambda r: abs(rows[r][col]))
    return cand[0]


def solve(a: Matrix, b: Vector, is_zero: Callable = _default_is_zero) -> Vector:
    """Solve a x = b by Gaussian elimination; raises on singular a."""
    n = len(a)
    rows = [[_exactify(x) for x in r] + [_exactify(bv)] for r, bv in zip(a, b)]
    for col in range(n):
        piv = _pick_pivot(rows, col, col, n, is_zero)
        if piv is None:
            raise ValueError("singular matrix")
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(n):
            if r != col and not is_zero(rows[r][col]):
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


def inverse(a: Matrix, is_zero: Callable = _default_is_zero) -> Matrix:
    n = len(a)
    rows = [
        [_exactify(x) for x in r] + [1 if i == j else 0 for j in range(n)]
        for i, r in enumerate(a)
    ]
    for col in range(n):
        piv = _pick_pivot(rows, col, col, n, is_zero)
        if piv is None:
            raise ValueError("singular matrix")
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(n):
            if r != col and not is_zero(rows[r][col]):
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return tuple(tuple(rows[i][n:]) for i in range(n))


def rank(a: Matrix, is_zero: Callable = _default_is_zero) -> int:
    rows = [[_exactify(x) for x in r] for r in a]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rk = 0
    for col in range(ncols):
        piv = _pick_pivot(rows, col, rk, nrows, is_zero)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        pv = rows[rk][col]
        rows[rk] = [x / pv for x in rows[rk]]
        for r in range(nrows):
            if r != rk and not is_zero(rows[r][col]):
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rk])]
        rk += 1
        if rk == nrows:
            break
    return rk
