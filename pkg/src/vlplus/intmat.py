"""Exact linear algebra over the integers and rationals.

Small dense matrices only; everything returns Python ints or Fractions,
never floats.
"""

from __future__ import annotations

from fractions import Fraction

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def det_int(m: list[list[int]]) -> int:
    """Determinant of an integer matrix, fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_minors(m: list[list[int]]) -> list[int]:
    """Determinants of the leading principal submatrices, sizes 1..n."""
    n = len(m)
    return [det_int([row[: k + 1] for row in m[: k + 1]]) for k in range(n)]


def rational_inverse(m: list[list[int]]) -> list[list[Fraction]]:
    """Inverse of a nonsingular integer matrix, Gauss-Jordan over Fractions."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def snf(m: list[list[int]]) -> tuple[list[int], IntMatrix, IntMatrix]:
    """Smith normal form with transforms.

    Returns (d, u, v) with u*m*v diagonal with entries d, u and v
    unimodular, d nonnegative and d[i] | d[i+1].  Requires a square
    nonsingular input.
    """
    n = len(m)
    a = [row[:] for row in m]
    u = identity(n)
    v = identity(n)

    def row_op(i: int, j: int, q: int) -> None:
        # row i -= q * row j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i: int, j: int, q: int) -> None:
        # col i -= q * col j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def diagonalize() -> None:
        for t in range(n):
            while True:
                piv = None
                for i in range(t, n):
                    for j in range(t, n):
                        if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                            piv = (i, j)
                if piv is None:
                    raise ZeroDivisionError("matrix is singular")
                if piv != (t, t):
                    if piv[0] != t:
                        swap_rows(t, piv[0])
                    if piv[1] != t:
                        swap_cols(t, piv[1])
                clean = True
                for i in range(t + 1, n):
                    q = a[i][t] // a[t][t]
                    if q:
                        row_op(i, t, q)
                    if a[i][t] != 0:
                        clean = False
                for j in range(t + 1, n):
                    q = a[t][j] // a[t][t]
                    if q:
                        col_op(j, t, q)
                    if a[t][j] != 0:
                        clean = False
                if clean:
                    break

    diagonalize()
    # sign fix, then enforce the divisibility chain
    for i in range(n):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    while True:
        bad = None
        for i in range(n - 1):
            for j in range(i + 1, n):
                if a[j][j] % a[i][i] != 0:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad is None:
            break
        i, j = bad
        row_op(i, j, -1)  # row i += row j, reintroduces an off-diagonal entry
        diagonalize()
        for t in range(n):
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
    return [a[i][i] for i in range(n)], u, v


def ldl(gram: list[list[int]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact LDL^T split of a positive definite Gram matrix.

    Returns (d, c) such that  q(x) = sum_i d[i] * (x_i + sum_{j>i} c[i][j] x_j)**2.
    Positive definiteness guarantees all d[i] > 0; no square roots appear.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    c = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise ZeroDivisionError("matrix is not positive definite")
        for j in range(i + 1, n):
            c[i][j] = a[i][j] / d[i]
        for r in range(i + 1, n):
            for s in range(i + 1, n):
                a[r][s] -= d[i] * c[i][r] * c[i][s]
    return d, c


def gf2_nullspace(b: list[list[int]]) -> list[tuple[int, ...]]:
    """Deterministic basis of the null space of a symmetric matrix over GF(2).

    Row-reduces a copy of b and completes the free columns to unit-style
    basis vectors; for b = 0 this yields the standard basis.
    """
    n = len(b)
    a = [[x & 1 for x in row] for row in b]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(n):
            if i != r and a[i][col]:
                a[i] = [(x + y) & 1 for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * n
        vec[f] = 1
        for row_idx, p in enumerate(pivots):
            vec[p] = a[row_idx][f]
        basis.append(tuple(vec))
    return basis
