"""Independent oracles shared by the test modules.

Everything here is written directly against the definitions, using plain
integer arithmetic, so it stays independent of the library code paths it is
used to check.
"""

from itertools import product


def lex_nonneg(v):
    for x in v:
        if x:
            return x > 0
    return True


def int_mat_vec(matrix, v):
    return tuple(sum(row[c] * v[c] for c in range(len(v))) for row in matrix)


def brute_order_preserving(matrix, source_f, target_f, source_rank, target_rank, bound):
    """Exhaustive order-preservation check over a coordinate box.

    An element is positive when its functional image is lex-nonnegative; the
    hom preserves order when every positive box element has a positive image.
    """
    for coords in product(range(-bound, bound + 1), repeat=source_rank):
        if lex_nonneg(int_mat_vec(source_f, coords)):
            image = int_mat_vec(matrix, coords)
            if not lex_nonneg(int_mat_vec(target_f, image)):
                return False
    return True


def sugihara_table(size, t_index):
    """Brute-force product table of the finite chain with mirror involution.

    The product of two elements is the one farther from the unit, and ties
    between mirror images resolve to the smaller element.
    """
    mirror = lambda i: size - 1 - i
    assert mirror(t_index) in (t_index, t_index - 1), "unit must sit at the mirror centre"
    table = []
    for i in range(size):
        row = []
        for j in range(size):
            row.append(min(i, j) if i <= mirror(j) else max(i, j))
        table.append(tuple(row))
    return tuple(table)


def int_rank(matrix, rows, cols):
    """Rank over the rationals via fraction-free Gaussian elimination."""
    from fractions import Fraction

    m = [[Fraction(matrix[i][j]) for j in range(cols)] for i in range(rows)]
    rank = 0
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r][c]:
                pivot = r
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][c]
        m[rank] = [x / pv for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank
