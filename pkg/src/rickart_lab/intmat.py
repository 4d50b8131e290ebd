"""Exact integer matrix arithmetic: HNF, SNF, kernels, congruence solving.

Everything works on plain Python ints (arbitrary precision, so arithmetic is
exact by construction) and on matrices given as sequences of row sequences.
Row convention throughout: a lattice is the set of integer combinations of the
rows of its basis matrix.
"""

from __future__ import annotations

from collections.abc import Sequence

Row = tuple[int, ...]
Matrix = tuple[Row, ...]


def freeze(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix shape mismatch")
    cols = list(zip(*b)) if b else []
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a
    )


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant via fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _row_op(mat: list[list[int]], i: int, j: int, q: int) -> None:
    # row_i -= q * row_j
    ri, rj = mat[i], mat[j]
    for c in range(len(ri)):
        ri[c] -= q * rj[c]


def _hnf_inplace(mat: list[list[int]], ncols: int, trans: list[list[int]] | None) -> int:
    """Reduce `mat` to row Hermite normal form in place; returns the rank.

    The result is the canonical echelon form: pivots positive, entries above
    each pivot reduced into [0, pivot). When `trans` is given it receives the
    same row operations, so trans_in * original = result.
    """
    m = len(mat)
    r = 0
    for c in range(ncols):
        nz = [i for i in range(r, m) if mat[i][c]]
        if not nz:
            continue
        # Euclidean reduction until a single nonzero entry survives in col c.
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(mat[i][c]))
            i0 = nz[0]
            for i in nz[1:]:
                q = mat[i][c] // mat[i0][c]
                _row_op(mat, i, i0, q)
                if trans is not None:
                    _row_op(trans, i, i0, q)
            nz = [i for i in nz if mat[i][c]]
        i0 = nz[0]
        if i0 != r:
            mat[r], mat[i0] = mat[i0], mat[r]
            if trans is not None:
                trans[r], trans[i0] = trans[i0], trans[r]
        if mat[r][c] < 0:
            for j in range(ncols):
                mat[r][j] = -mat[r][j]
            if trans is not None:
                for j in range(len(trans[r])):
                    trans[r][j] = -trans[r][j]
        for i in range(r):
            q = mat[i][c] // mat[r][c]
            if q:
                _row_op(mat, i, r, q)
                if trans is not None:
                    _row_op(trans, i, r, q)
        r += 1
        if r == m:
            break
    return r


def hnf(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Canonical row HNF basis of the lattice spanned by `rows` (no zero rows)."""
    mat = [list(row) for row in rows]
    rank = _hnf_inplace(mat, ncols, None)
    return freeze(mat[:rank])


def hnf_with_transform(rows: Sequence[Sequence[int]], ncols: int) -> tuple[Matrix, Matrix, int]:
    """Return (H, U, rank) with U unimodular and U * rows = H (zero rows kept)."""
    mat = [list(row) for row in rows]
    trans = [list(row) for row in identity(len(mat))]
    rank = _hnf_inplace(mat, ncols, trans)
    return freeze(mat), freeze(trans), rank


def row_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Canonical basis of {u : u * rows = 0}."""
    _, u, rank = hnf_with_transform(rows, ncols)
    return hnf(u[rank:], len(rows))


def inverse_unimodular(a: Sequence[Sequence[int]]) -> Matrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(a)
    h, u, rank = hnf_with_transform(a, n)
    if rank != n or h[:n] != identity(n):
        raise ValueError("matrix is not unimodular")
    return tuple(u[:n])


def smith_normal_form(
    a: Sequence[Sequence[int]],
) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: returns (U, D, V) with U*a*V = D.

    U and V are unimodular; D is diagonal with d1 | d2 | ... and di >= 0.
    Total on every integer matrix, including empty and non-square ones.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(row) for row in a]
    u = [list(row) for row in identity(m)]
    v = [list(row) for row in identity(n)]

    def col_op(j: int, t: int, q: int) -> None:
        # col_j -= q * col_t
        for i in range(m):
            d[i][j] -= q * d[i][t]
        for i in range(n):
            v[i][j] -= q * v[i][t]

    def col_swap(j: int, t: int) -> None:
        for i in range(m):
            d[i][j], d[i][t] = d[i][t], d[i][j]
        for i in range(n):
            v[i][j], v[i][t] = v[i][t], v[i][j]

    t = 0
    while t < min(m, n):
        # locate a minimal-magnitude nonzero pivot in the trailing block
        pos = None
        best = 0
        for i in range(t, m):
            for j in range(t, n):
                val = abs(d[i][j])
                if val and (pos is None or val < best):
                    pos, best = (i, j), val
        if pos is None:
            break
        i0, j0 = pos
        if i0 != t:
            d[t], d[i0] = d[i0], d[t]
            u[t], u[i0] = u[i0], u[t]
        if j0 != t:
            col_swap(j0, t)

        restart = False
        for i in range(t + 1, m):
            if d[i][t]:
                q = d[i][t] // d[t][t]
                _row_op(d, i, t, q)
                _row_op(u, i, t, q)
                if d[i][t]:
                    restart = True
        if restart:
            continue
        for j in range(t + 1, n):
            if d[t][j]:
                q = d[t][j] // d[t][t]
                col_op(j, t, q)
                if d[t][j]:
                    restart = True
        if restart:
            continue
        # enforce the divisor chain before moving on
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % d[t][t]:
                    _row_op(d, t, i, -1)
                    _row_op(u, t, i, -1)
                    restart = True
                    break
            if restart:
                break
        if restart:
            continue
        if d[t][t] < 0:
            for j in range(n):
                d[t][j] = -d[t][j]
            for j in range(m):
                u[t][j] = -u[t][j]
        t += 1

    return freeze(u), freeze(d), freeze(v)


def solve_row(a: Sequence[Sequence[int]], b: Sequence[int]) -> Row | None:
    """One integer solution x of x * a = b, or None if there is none."""
    m = len(a)
    n = len(a[0]) if m else len(b)
    if len(b) != n:
        raise ValueError("right-hand side has wrong length")
    if m == 0:
        return () if all(x == 0 for x in b) else None
    u, d, v = smith_normal_form(a)
    bv = [sum(b[i] * v[i][j] for i in range(n)) for j in range(n)]
    t = [0] * m
    for j in range(n):
        dj = d[j][j] if j < m else 0
        if dj:
            if bv[j] % dj:
                return None
            t[j] = bv[j] // dj
        elif bv[j]:
            return None
    return tuple(sum(t[i] * u[i][j] for i in range(m)) for j in range(m))


def congruence_kernel(
    bt: Sequence[Sequence[int]], mods: Sequence[int]
) -> Matrix:
    """Generators of {x in Z^k : x * bt == 0 (mod mods componentwise)}.

    `bt` is k x m, `mods` has length m with every modulus >= 1.
    """
    k = len(bt)
    m = len(mods)
    stacked = [list(row) for row in bt]
    for i in range(m):
        row = [0] * m
        row[i] = -mods[i]
        stacked.append(row)
    ker = row_kernel(stacked, m)
    return hnf([row[:k] for row in ker], k)


def congruence_solve(
    bt: Sequence[Sequence[int]], mods: Sequence[int], target: Sequence[int]
) -> Row | None:
    """One x with x * bt == target (mod mods), or None."""
    k = len(bt)
    m = len(mods)
    stacked = [list(row) for row in bt]
    for i in range(m):
        row = [0] * m
        row[i] = -mods[i]
        stacked.append(row)
    sol = solve_row(stacked, target)
    if sol is None:
        return None
    return sol[:k]
