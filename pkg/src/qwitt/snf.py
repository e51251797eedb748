"""Exact integer matrix normal forms.

Matrices are lists of rows of Python ints.  The pivoting order is fixed
(smallest absolute value, then lowest row/column index) so that every
normal form, kernel basis and certificate derived from them is reproducible
byte for byte.
"""

from __future__ import annotations


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k = len(a), len(a[0]) if a else 0
    k2, m = len(b), len(b[0]) if b else 0
    assert k == k2
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    oi[j] += c * bt[j]
    return out


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def hstack(a, b):
    if not a:
        return [row[:] for row in b]
    if not b:
        return [row[:] for row in a]
    return [ra + rb for ra, rb in zip(a, b)]


def _pivot(mat, rows, cols, r0, c0):
    best = None
    for j in range(c0, cols):
        for i in range(r0, rows):
            v = mat[i][j]
            if v:
                if best is None or abs(v) < best[0]:
                    best = (abs(v), i, j)
                    if abs(v) == 1:
                        return best[1], best[2]
    if best is None:
        return None
    return best[1], best[2]


def hermite_column(mat):
    """Column-style Hermite form: unimodular column ops only.

    Returns (H, U) with mat @ U = H, H in lower column echelon form with
    positive pivots.  Columns of H span the same lattice as columns of mat.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    h = [row[:] for row in mat]
    u = identity(cols)
    pr = pc = 0
    while pr < rows and pc < cols:
        # find a nonzero entry in row pr at column >= pc; rows advance even
        # when empty so the echelon profile follows the row order.
        nz = [j for j in range(pc, cols) if h[pr][j]]
        if not nz:
            pr += 1
            continue
        while True:
            nz = [j for j in range(pc, cols) if h[pr][j]]
            piv = min(nz, key=lambda j: (abs(h[pr][j]), j))
            if piv != pc:
                for row in h:
                    row[pc], row[piv] = row[piv], row[pc]
                for row in u:
                    row[pc], row[piv] = row[piv], row[pc]
            a = h[pr][pc]
            done = True
            for j in range(pc + 1, cols):
                if h[pr][j]:
                    q = h[pr][j] // a
                    if q:
                        for row in h:
                            row[j] -= q * row[pc]
                        for row in u:
                            row[j] -= q * row[pc]
                    if h[pr][j]:
                        done = False
            if done:
                break
        if h[pr][pc] < 0:
            for row in h:
                row[pc] = -row[pc]
            for row in u:
                row[pc] = -row[pc]
        # reduce columns to the left of the pivot
        a = h[pr][pc]
        for j in range(pc):
            q = h[pr][j] // a
            if q:
                for row in h:
                    row[j] -= q * row[pc]
                for row in u:
                    row[j] -= q * row[pc]
        pr += 1
        pc += 1
    return h, u


def column_lattice_basis(mat):
    """Columns forming a basis of the column lattice (Hermite pivots)."""
    h, _ = hermite_column(mat)
    rows = len(h)
    cols = len(h[0]) if rows else 0
    out = []
    for j in range(cols):
        col = [h[i][j] for i in range(rows)]
        if any(col):
            out.append(col)
    return transpose(out) if out else [[] for _ in range(rows)]


def kernel_basis(mat):
    """Basis of {x : mat @ x = 0} as columns of the returned matrix."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if cols == 0:
        return [[] for _ in range(0)]
    if rows == 0:
        return identity(cols)
    h, u = hermite_column(mat)
    out = []
    for j in range(cols):
        if all(h[i][j] == 0 for i in range(rows)):
            out.append([u[i][j] for i in range(cols)])
    return transpose(out) if out else [[] for _ in range(cols)]


def solve(mat, rhs):
    """One integer solution x of mat @ x = rhs, or None.

    rhs may be a vector or a matrix (solved columnwise; None if any column
    fails).
    """
    vector = rhs and not isinstance(rhs[0], list)
    bcols = [rhs] if vector else transpose(rhs)
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    h, u = hermite_column(mat)
    sols = []
    for b in bcols:
        x = [0] * cols
        r = list(b)
        for j in range(cols):
            # pivot row of column j
            pr = next((i for i in range(rows) if h[i][j]), None)
            if pr is None:
                continue
            q, rem = divmod(r[pr], h[pr][j])
            if rem:
                # try continuing: Hermite echelon means r[pr] must be a
                # multiple of the pivot for solvability
                return None
            if q:
                for i in range(rows):
                    r[i] -= q * h[i][j]
                x[j] = q
        if any(r):
            return None
        sols.append([sum(u[i][j] * x[j] for j in range(cols)) for i in range(cols)])
    if vector:
        return sols[0]
    return transpose(sols)


def smith_invariants(mat):
    """Elementary divisors d1 | d2 | ... (positive, including 1s) of mat."""
    a = [row[:] for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    divisors = []
    r0 = 0
    c0 = 0
    while True:
        p = _pivot(a, rows, cols, r0, c0)
        if p is None:
            break
        pi, pj = p
        a[r0], a[pi] = a[pi], a[r0]
        for row in a:
            row[c0], row[pj] = row[pj], row[c0]
        while True:
            # clear column c0
            again = False
            for i in range(r0 + 1, rows):
                if a[i][c0]:
                    q = a[i][c0] // a[r0][c0]
                    if q:
                        for j in range(c0, cols):
                            a[i][j] -= q * a[r0][j]
                    if a[i][c0]:
                        a[r0], a[i] = a[i], a[r0]
                        again = True
            if again:
                continue
            # clear row r0
            for j in range(c0 + 1, cols):
                if a[r0][j]:
                    q = a[r0][j] // a[r0][c0]
                    if q:
                        for i in range(r0, rows):
                            a[i][j] -= q * a[i][c0]
                    if a[r0][j]:
                        for row in a:
                            row[c0], row[j] = row[j], row[c0]
                        again = True
            if not again:
                break
        piv = abs(a[r0][c0])
        # enforce divisibility of later entries by the pivot
        bad = None
        for i in range(r0 + 1, rows):
            for j in range(c0 + 1, cols):
                if a[i][j] % piv:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for j in range(c0, cols):
                a[r0][j] += a[bad][j]
            continue
        divisors.append(piv)
        r0 += 1
        c0 += 1
    # fix divisibility chain (the loop above guarantees it, but normalize)
    return divisors


def rank(mat):
    return len(smith_invariants(mat))


def smith_with_transforms(mat):
    """(D, U, V) with U @ mat @ V = D diagonal, U and V unimodular.

    D's diagonal entries are nonnegative and each divides the next.
    """
    a = [row[:] for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i1, i2):
        a[i1], a[i2] = a[i2], a[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def swap_cols(j1, j2):
        for row in a:
            row[j1], row[j2] = row[j2], row[j1]
        for row in v:
            row[j1], row[j2] = row[j2], row[j1]

    def add_row(src, dst, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while True:
        p = _pivot(a, rows, cols, t, t)
        if p is None:
            break
        pi, pj = p
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            again = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        again = True
            if again:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        again = True
            if not again:
                break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        piv = a[t][t]
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % piv:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(bad, t, 1)
            continue
        t += 1
        if t >= rows or t >= cols:
            break
    return a, u, v


def invert_unimodular(u):
    """Exact inverse of a unimodular integer matrix."""
    n = len(u)
    sol = solve(u, identity(n))
    assert sol is not None
    return sol
