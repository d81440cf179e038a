"""Exact integer linear algebra on plain tuples.

Vectors are tuples of Python ints, matrices are tuples of row tuples, so every
value is immutable, hashable, and arbitrary precision.  No floats anywhere;
rationals appear only transiently as Fractions inside solvers.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DependentGenerators, ZeroVector

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


def vec(xs) -> Vec:
    return tuple(int(x) for x in xs)


def mat(rows) -> Mat:
    return tuple(vec(r) for r in rows)


def zero_vec(d: int) -> Vec:
    return (0,) * d


def is_zero(v) -> bool:
    return all(a == 0 for a in v)


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v, strict=True))


def vadd(u, v) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u, v) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vneg(v) -> Vec:
    return tuple(-a for a in v)


def vscale(k: int, v) -> Vec:
    return tuple(k * a for a in v)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(A) -> Mat:
    return tuple(zip(*A)) if A else ()


def matmul(A, B) -> Mat:
    Bt = transpose(B)
    return tuple(tuple(dot(r, c) for c in Bt) for r in A)


def mat_vec(A, v) -> Vec:
    return tuple(dot(r, v) for r in A)


def vec_mat(v, A) -> Vec:
    return tuple(dot(v, c) for c in transpose(A))


def gcd_vec(v) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive_part(v) -> Vec:
    """v / gcd(coords); spans the same ray.  Raises ZeroVector on v = 0."""
    g = gcd_vec(v)
    if g == 0:
        raise ZeroVector("primitive part of the zero vector is undefined")
    return tuple(a // g for a in v)


def hermite_normal_form(A) -> tuple[Mat, Mat]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U*A, U unimodular, H in row echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    A = mat(A)
    m = len(A)
    if m == 0:
        return (), ()
    n = len(A[0])
    H = [list(r) for r in A]
    U = [list(r) for r in identity(m)]

    def _addmul(dst, src, q):
        H[dst] = [a - q * b for a, b in zip(H[dst], H[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd loop: make H[r][c] the positive gcd of column c below row r
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(H[i][c]), i))
            if i0 != r:
                H[r], H[i0] = H[i0], H[r]
                U[r], U[i0] = U[i0], U[r]
            if H[r][c] < 0:
                H[r] = [-a for a in H[r]]
                U[r] = [-a for a in U[r]]
            clean = True
            for i in range(r + 1, m):
                q = H[i][c] // H[r][c]
                if q:
                    _addmul(i, r, q)
                if H[i][c] != 0:
                    clean = False
            if clean:
                break
        if H[r][c] != 0:
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    _addmul(i, r, q)
            r += 1
    return mat(H), mat(U)


def rank(A) -> int:
    A = mat(A)
    if not A:
        return 0
    H, _ = hermite_normal_form(A)
    return sum(1 for row in H if not is_zero(row))


def smith_normal_form(A) -> tuple[Mat, Mat, Mat]:
    """Smith normal form: returns (D, U, V) with D = U*A*V.

    D is diagonal with nonnegative entries d_i satisfying d_i | d_{i+1};
    U and V are unimodular.
    """
    A = mat(A)
    m = len(A)
    if m == 0:
        return (), (), ()
    n = len(A[0])
    D = [list(r) for r in A]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def row_addmul(dst, src, q):
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_addmul(dst, src, q):
        for row in (D, V):
            for i in range(len(row)):
                row[i][dst] -= q * row[i][src]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for row in (D, V):
            for k in range(len(row)):
                row[k][i], row[k][j] = row[k][j], row[k][i]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m)
                       for j in range(t, n) if D[i][j] != 0]
            if not entries:
                break
            _, i0, j0 = min(entries)
            if i0 != t:
                row_swap(t, i0)
            if j0 != t:
                col_swap(t, j0)
            if D[t][t] < 0:
                D[t] = [-a for a in D[t]]
                U[t] = [-a for a in U[t]]
            for i in range(t + 1, m):
                q = D[i][t] // D[t][t]
                if q:
                    row_addmul(i, t, q)
            for j in range(t + 1, n):
                q = D[t][j] // D[t][t]
                if q:
                    col_addmul(j, t, q)
            if any(D[i][t] for i in range(t + 1, m)) or \
               any(D[t][j] for j in range(t + 1, n)):
                continue
            # divisibility fix: pull in a row holding a non-divisible entry
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t] != 0), None)
            if bad is None:
                break
            row_addmul(t, bad[0], -1)
    return mat(D), mat(U), mat(V)


def diagonal(D) -> Vec:
    return tuple(D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)))


def determinant(A) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    A = mat(A)
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def unimodular_inverse(A) -> Mat:
    """Inverse of a unimodular integer matrix, exact over the integers."""
    A = mat(A)
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = []
    for row in aug:
        vals = row[n:]
        assert all(x.denominator == 1 for x in vals), "matrix is not unimodular"
        out.append(tuple(int(x) for x in vals))
    return tuple(out)


def solve_in_basis(basis, x):
    """Integer coordinates of x in the given row basis, or None.

    basis: k linearly independent rows.  Returns y with y * basis = x when x
    lies in the integer row span, else None (also None when x is only in the
    rational span).
    """
    basis = mat(basis)
    k = len(basis)
    if k == 0:
        return () if is_zero(x) else None
    n = len(basis[0])
    # solve the transposed system with exact fractions
    rows = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(x[i])]
            for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if rows[i][k] != 0:
            return None
    y = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        y[c] = rows[i][k]
    if any(v.denominator != 1 for v in y):
        return None
    return tuple(int(v) for v in y)


def kernel_basis(A) -> Mat:
    """Basis (rows) of the saturated lattice {x : A x = 0}."""
    A = mat(A)
    if not A:
        return ()
    m = len(A)
    n = len(A[0])
    D, _, V = smith_normal_form(A)
    d = diagonal(D)
    cols = [i for i in range(n) if i >= len(d) or d[i] == 0]
    Vt = transpose(V)
    return tuple(Vt[i] for i in cols)


def saturation_basis(vectors) -> Mat:
    """Canonical (HNF) basis of (Q-span of the vectors) intersected with Z^d."""
    vectors = mat(vectors)
    if not vectors:
        return ()
    D, _, V = smith_normal_form(vectors)
    d = diagonal(D)
    Vinv = unimodular_inverse(V)
    rows = tuple(Vinv[i] for i in range(len(d)) if d[i] != 0)
    if not rows:
        return ()
    H, _ = hermite_normal_form(rows)
    return tuple(r for r in H if not is_zero(r))


def complete_to_unimodular(B) -> Mat:
    """Extend the rows of a saturated-lattice basis B to a unimodular matrix."""
    B = mat(B)
    if not B:
        raise ValueError("cannot complete an empty basis without a dimension")
    k = len(B)
    n = len(B[0])
    D, _, V = smith_normal_form(B)
    d = diagonal(D)
    assert all(x == 1 for x in d), "basis rows do not span a saturated lattice"
    Vinv = unimodular_inverse(V)
    P = B + tuple(Vinv[i] for i in range(k, n))
    assert abs(determinant(P)) == 1
    return P


def sublattice_index(generators) -> int:
    """Index of the lattice spanned by the generators inside its saturation.

    Requires the generators to be linearly independent; equals the product of
    the nonzero Smith diagonal entries (the absolute determinant when square).
    """
    G = mat(generators)
    if not G:
        return 1
    D, _, _ = smith_normal_form(G)
    d = diagonal(D)
    if len(d) < len(G) or any(x == 0 for x in d):
        raise DependentGenerators("generators are linearly dependent")
    idx = 1
    for x in d:
        idx *= x
    return idx
