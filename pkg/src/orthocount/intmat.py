"""Exact integer matrix algebra: Bareiss determinants, Hermite and Smith normal
forms, integer kernels and rational inverses.

Everything here works on lists of lists of Python ints, so there is no
overflow anywhere; matrix sizes in this package are tiny (rank <= ~10).
"""

from fractions import Fraction


def copy_mat(M):
    return [row[:] for row in M]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    return [[sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)] for i in range(n)]



def transpose(A):
    return [list(col) for col in zip(*A)]


def det_bareiss(M):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = copy_mat(M)
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def leading_principal_minors(M):
    """[det M[:1,:1], det M[:2,:2], ...] exactly."""
    return [det_bareiss([row[:k] for row in M[:k]]) for k in range(1, len(M) + 1)]


def hnf_columns(M):
    """Column-style Hermite normal form.

    Returns (H, U) with M @ U = H, U unimodular, H lower-triangular-ish with
    pivot columns first and zero columns last.  Rows of M are equations,
    columns are generators.
    """
    A = copy_mat(M)
    rows, cols = len(A), len(A[0])
    U = identity(cols)
    pivot_col = 0
    for r in range(rows):
        # gcd-reduce row r across columns >= pivot_col
        while True:
            nz = [j for j in range(pivot_col, cols) if A[r][j] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(A[r][j]))
            for j in nz:
                if j == j0:
                    continue
                q = A[r][j] // A[r][j0]
                for i in range(rows):
                    A[i][j] -= q * A[i][j0]
                for i in range(cols):
                    U[i][j] -= q * U[i][j0]
        nz = [j for j in range(pivot_col, cols) if A[r][j] != 0]
        if not nz:
            continue
        j0 = nz[0]
        if j0 != pivot_col:
            for i in range(rows):
                A[i][j0], A[i][pivot_col] = A[i][pivot_col], A[i][j0]
            for i in range(cols):
                U[i][j0], U[i][pivot_col] = U[i][pivot_col], U[i][j0]
        if A[r][pivot_col] < 0:
            for i in range(rows):
                A[i][pivot_col] = -A[i][pivot_col]
            for i in range(cols):
                U[i][pivot_col] = -U[i][pivot_col]
        # reduce earlier pivot columns against this one (keeps entries small)
        for j in range(pivot_col):
            if A[r][j] != 0:
                q = A[r][j] // A[r][pivot_col]
                for i in range(rows):
                    A[i][j] -= q * A[i][pivot_col]
                for i in range(cols):
                    U[i][j] -= q * U[i][pivot_col]
        pivot_col += 1
    return A, U


def kernel_basis(M):
    """Integer basis of {x : M x = 0}, as a list of column vectors."""
    H, U = hnf_columns(M)
    cols = len(M[0])
    out = []
    for j in range(cols):
        if all(H[i][j] == 0 for i in range(len(M))):
            out.append([U[i][j] for i in range(cols)])
    return out


def smith_normal_form(M):
    """Elementary divisors d_1 | d_2 | ... of M (nonnegative)."""
    A = copy_mat(M)
    rows, cols = len(A), len(A[0])
    divisors = []
    top = 0
    while top < min(rows, cols):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        A[top], A[bi] = A[bi], A[top]
        for row in A:
            row[top], row[bj] = row[bj], row[top]
        # clear row and column; restart if a remainder shows up
        dirty = False
        for i in range(top + 1, rows):
            if A[i][top] != 0:
                q = A[i][top] // A[top][top]
                for j in range(top, cols):
                    A[i][j] -= q * A[top][j]
                if A[i][top] != 0:
                    dirty = True
        for j in range(top + 1, cols):
            if A[top][j] != 0:
                q = A[top][j] // A[top][top]
                for i in range(top, rows):
                    A[i][j] -= q * A[i][top]
                if A[top][j] != 0:
                    dirty = True
        if dirty:
            continue
        # divisibility sweep: pivot must divide the rest of the block
        piv = abs(A[top][top])
        offender = None
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if A[i][j] % piv != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(top, cols):
                A[top][j] += A[offender][j]
            continue
        divisors.append(piv)
        top += 1
    return divisors


def invert_rational(M):
    """Exact inverse over Q as a matrix of Fractions."""
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[k], A[piv] = A[piv], A[k]
        pv = A[k][k]
        A[k] = [x / pv for x in A[k]]
        for i in range(n):
            if i != k and A[i][k] != 0:
                f = A[i][k]
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    return [row[n:] for row in A]


def solve_integer(M, v):
    """One integer solution x of M x = v, or None."""
    H, U = hnf_columns(M)
    rows = len(M)
    cols = len(M[0])
    x = [Fraction(0)] * cols
    r = list(map(Fraction, v))
    for j in range(cols):
        i = next((i for i in range(rows) if H[i][j] != 0), None)
        if i is None:
            break
        if r[i] % H[i][j] != 0 and r[i].denominator == 1:
            pass
        c = r[i] / H[i][j]
        x[j] = c
        for k in range(rows):
            r[k] -= c * H[k][j]
    if any(r) or any(c.denominator != 1 for c in x):
        return None
    y = [0] * cols
    for i in range(cols):
        y[i] = sum(U[i][j] * int(x[j]) for j in range(cols))
    return y
