"""Exact integer linear algebra: Smith normal form, rank, integer kernel."""

from __future__ import annotations

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(
    matrix: list[list[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (S, U, V) with S = U·M·V, U and V unimodular, S diagonal.

    Diagonal entries are non-negative and each divides the next.
    """
    S = [list(map(int, row)) for row in matrix]
    m = len(S)
    n = len(S[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        # row dst += f * row src
        for k in range(n):
            S[dst][k] += f * S[src][k]
        for k in range(m):
            U[dst][k] += f * U[src][k]

    def add_col(src, dst, f):
        for row in S:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        # find a pivot
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if S[i][t] != 0:
                    if S[i][t] % S[t][t] != 0:
                        # reduce then swap so the smaller remainder becomes pivot
                        q = S[i][t] // S[t][t]
                        add_row(t, i, -q)
                        swap_rows(t, i)
                        dirty = True
                    else:
                        add_row(t, i, -(S[i][t] // S[t][t]))
            for j in range(t + 1, n):
                if S[t][j] != 0:
                    if S[t][j] % S[t][t] != 0:
                        q = S[t][j] // S[t][t]
                        add_col(t, j, -q)
                        swap_cols(t, j)
                        dirty = True
                    else:
                        add_col(t, j, -(S[t][j] // S[t][t]))
            if not dirty and all(S[i][t] == 0 for i in range(t + 1, m)) and all(
                S[t][j] == 0 for j in range(t + 1, n)
            ):
                break
        t += 1

    def fix_sign(i):
        if S[i][i] < 0:
            for k in range(n):
                S[i][k] = -S[i][k]
            for k in range(m):
                U[i][k] = -U[i][k]

    for i in range(min(m, n)):
        fix_sign(i)

    # enforce the divisibility chain d_i | d_{i+1} on the nonzero block;
    # each pass replaces a bad pair (a, b) by (gcd, a*b/gcd), so the
    # product is preserved and the leading entry strictly divides down
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            a, b = S[i][i], S[i + 1][i + 1]
            if b % a == 0:
                continue
            changed = True
            add_col(i + 1, i, 1)
            while S[i + 1][i] != 0:
                q = S[i][i] // S[i + 1][i]
                add_row(i + 1, i, -q)
                swap_rows(i, i + 1)
            add_col(i, i + 1, -(S[i][i + 1] // S[i][i]))
            fix_sign(i)
            fix_sign(i + 1)
    return S, U, V


def integer_rank(matrix: list[list[int]]) -> int:
    """Rank over Z, read off the Smith form diagonal."""
    if not matrix or not matrix[0]:
        return 0
    S, _, _ = smith_normal_form(matrix)
    return sum(1 for i in range(min(len(S), len(S[0]))) if S[i][i] != 0)


def elementary_divisors(matrix: list[list[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    if not matrix or not matrix[0]:
        return []
    S, _, _ = smith_normal_form(matrix)
    return [S[i][i] for i in range(min(len(S), len(S[0]))) if S[i][i] != 0]


def lll_reduce(rows: list[list[int]]) -> list[list[int]]:
    """LLL-reduce independent integer rows (Euclidean norm, same row span)."""
    if not rows:
        return []
    reduced = DomainMatrix([[ZZ(x) for x in row] for row in rows], (len(rows), len(rows[0])), ZZ).lll()
    return [[int(x) for x in row] for row in reduced.to_list()]


def _kernel_of_vector(c: list[int]) -> list[list[int]]:
    """Basis of {x : c·x = 0} in Z^len(c), with entries on the scale of c."""
    k = len(c)
    support = [i for i in range(k) if c[i] != 0]
    if not support:
        return _identity(k)
    # unimodular column reduction of the single row, Euclid on the support
    basis = _identity(k)  # rows are current generators
    c = list(c)
    while True:
        nz = [i for i in range(k) if c[i] != 0]
        if len(nz) == 1:
            pivot = nz[0]
            break
        nz.sort(key=lambda i: abs(c[i]))
        i, j = nz[0], nz[1]
        q = c[j] // c[i]
        c[j] -= q * c[i]
        for t in range(k):
            basis[j][t] -= q * basis[i][t]
    return [basis[i] for i in range(k) if i != pivot]


def integer_kernel(matrix: list[list[int]]) -> list[list[int]]:
    """A basis of {x in Z^n : M x = 0}; the kernel lattice is saturated.

    Rows are imposed one at a time; each step reduces within the current
    kernel, which keeps basis entries near the scale of the input rows.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if n == 0:
        return []
    basis = _identity(n)
    for row in matrix:
        if not basis:
            break
        c = [sum(row[t] * b[t] for t in range(n)) for b in basis]
        if all(x == 0 for x in c):
            continue
        combos = _kernel_of_vector(c)
        basis = [
            [sum(combo[i] * basis[i][t] for i in range(len(basis))) for t in range(n)]
            for combo in combos
        ]
    # Euclid-style elimination can leave a badly skewed basis; reduce it
    return lll_reduce(basis)
