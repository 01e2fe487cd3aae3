"""Exact linear algebra over the rationals and the integers.

Matrices are tuples of row tuples, entries are ints or fractions.Fraction.
No floating point is used anywhere; every result is exact.  The integer side
provides a Smith normal form with both transformation matrices, which is what
the lattice-quotient computations in this package are built on.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

Matrix = tuple
Vector = tuple


def frac(value) -> Fraction:
    """Coerce an int, Fraction, or 'p/q' string to an exact Fraction."""
    if isinstance(value, bool):
        raise TypeError(f"not an exact rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r} (floats are rejected)")


def mat(rows) -> Matrix:
    """Coerce nested sequences into an immutable Fraction matrix."""
    return tuple(tuple(frac(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((Fraction(0),) * cols for _ in range(rows))


def transpose(m: Matrix, cols: int | None = None) -> Matrix:
    if m:
        cols = len(m[0])
    if cols is None:
        raise ValueError("transpose of an empty matrix needs an explicit column count")
    return tuple(tuple(row[j] for row in m) for j in range(cols))


def mat_vec(m: Matrix, v: Vector) -> Vector:
    return tuple(sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in m)


def mat_mul(a: Matrix, b: Matrix, *, cols: int | None = None) -> Matrix:
    """a @ b.  When b has no rows the column count cannot be inferred."""
    inner = len(b)
    if inner == 0:
        if cols is None:
            if len(a) == 0:
                return ()
            raise ValueError("mat_mul with an empty inner dimension needs cols")
        return zeros(len(a), cols)
    ncols = len(b[0])
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(inner)), Fraction(0)) for j in range(ncols))
        for i in range(len(a))
    )


def first_nonzero(v: Vector) -> int | None:
    for i, x in enumerate(v):
        if x:
            return i
    return None


def lex_sign(v: Vector) -> int:
    """Sign of a vector under lexicographic comparison with zero."""
    i = first_nonzero(v)
    if i is None:
        return 0
    return 1 if v[i] > 0 else -1


def is_integral(x) -> bool:
    return Fraction(x).denominator == 1


def as_int_matrix(m: Matrix) -> tuple:
    out = []
    for row in m:
        new = []
        for x in row:
            f = Fraction(x)
            if f.denominator != 1:
                raise ValueError(f"matrix entry {x} is not an integer")
            new.append(int(f))
        out.append(tuple(new))
    return tuple(out)


def _echelon(rows_list):
    """In-place fraction row reduction; returns pivot column list."""
    pivots = []
    r = 0
    nrows = len(rows_list)
    ncols = len(rows_list[0]) if nrows else 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows_list[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows_list[r], rows_list[pivot_row] = rows_list[pivot_row], rows_list[r]
        pv = rows_list[r][c]
        rows_list[r] = [x / pv for x in rows_list[r]]
        for i in range(nrows):
            if i != r and rows_list[i][c]:
                factor = rows_list[i][c]
                rows_list[i] = [a - factor * b for a, b in zip(rows_list[i], rows_list[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def mat_rank(m: Matrix) -> int:
    rows_list = [[Fraction(x) for x in row] for row in m if row]
    if not rows_list:
        return 0
    return len(_echelon(rows_list))


def mat_inverse(m: Matrix) -> Matrix:
    n = len(m)
    if n == 0:
        return ()
    if any(len(row) != n for row in m):
        raise ValueError("inverse needs a square matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    pivots = _echelon(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in aug)


def solve_rational(a: Matrix, b: Vector) -> Vector | None:
    """One rational solution of a @ x = b, or None when inconsistent."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    if nrows == 0:
        return (Fraction(0),) * ncols
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    r = 0
    pivots = []
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if aug[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c]:
                factor = aug[i][c]
                aug[i] = [p - factor * q for p, q in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if aug[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for row_idx, c in enumerate(pivots):
        x[c] = aug[row_idx][ncols]
    return tuple(x)


def primitive_vector(v: Vector) -> tuple:
    """Scale a nonzero rational vector by a positive rational to a primitive integer vector."""
    fractions = [Fraction(x) for x in v]
    if not any(fractions):
        raise ValueError("zero vector has no primitive form")
    scale = lcm(*(f.denominator for f in fractions)) if len(fractions) > 1 else fractions[0].denominator
    ints = [int(f * scale) for f in fractions]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# Integer normal forms


def _row_op(d, u, i, t, q):
    # row i -= q * row t
    d[i] = [a - q * b for a, b in zip(d[i], d[t])]
    u[i] = [a - q * b for a, b in zip(u[i], u[t])]


def _col_op(d, v, j, t, q):
    # col j -= q * col t
    for row in d:
        row[j] -= q * row[t]
    for row in v:
        row[j] -= q * row[t]


def smith_normal_form(a, rows: int, cols: int):
    """Return (u, d, v) with u @ a @ v == d, u and v unimodular.

    d is diagonal with nonnegative entries, nonzero entries first, and each
    diagonal entry divides the next.
    """
    d = [[int(x) for x in row] for row in a]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                entry = d[i][j]
                if entry and (best is None or abs(entry) < abs(best[2])):
                    best = (i, j, entry)
        if best is None:
            break
        bi, bj, _ = best
        d[t], d[bi] = d[bi], d[t]
        u[t], u[bi] = u[bi], u[t]
        if bj != t:
            for row in d:
                row[t], row[bj] = row[bj], row[t]
            for row in v:
                row[t], row[bj] = row[bj], row[t]
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        while True:
            restart = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    _row_op(d, u, i, t, q)
                    if d[i][t]:
                        # remainder is a smaller positive pivot
                        d[t], d[i] = d[i], d[t]
                        u[t], u[i] = u[i], u[t]
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, cols):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    _col_op(d, v, j, t, q)
                    if d[t][j]:
                        for row in d:
                            row[t], row[j] = row[j], row[t]
                        for row in v:
                            row[t], row[j] = row[j], row[t]
                        restart = True
                        break
            if restart:
                continue
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if d[i][j] % d[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # pull the offending row up so the pivot can shrink to a divisor
            d[t] = [a + b for a, b in zip(d[t], d[offender])]
            u[t] = [a + b for a, b in zip(u[t], u[offender])]
        t += 1
    freeze = lambda m: tuple(tuple(row) for row in m)
    return freeze(u), freeze(d), freeze(v)


def integer_inverse(m) -> tuple:
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    return as_int_matrix(mat_inverse(mat(m)))


def solve_integer(a, b) -> tuple | None:
    """One integer solution of a @ x = b, or None when none exists."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows == 0:
        return (0,) * cols
    u, d, v = smith_normal_form(a, rows, cols)
    y = [sum(u[i][j] * int(b[j]) for j in range(rows)) for i in range(rows)]
    x_v = [0] * cols
    for i in range(rows):
        pivot = d[i][i] if i < cols else 0
        if pivot:
            if y[i] % pivot:
                return None
            x_v[i] = y[i] // pivot
        elif y[i]:
            return None
    return tuple(sum(v[i][j] * x_v[j] for j in range(cols)) for i in range(cols))
