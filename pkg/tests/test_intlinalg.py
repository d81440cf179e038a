import random

import pytest

from toricnash import intlinalg as la
from toricnash.errors import DependentGenerators, ZeroVector


def det2(A):
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def is_hermite(H):
    """Row echelon, positive pivots, entries above each pivot in [0, pivot)."""
    last = -1
    for row in H:
        nz = [j for j, x in enumerate(row) if x != 0]
        if not nz:
            continue
        p = nz[0]
        if p <= last:
            return False
        last = p
    # pivot columns reduced
    pivots = []
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x != 0]
        if nz:
            pivots.append((i, nz[0]))
    for i, p in pivots:
        if H[i][p] <= 0:
            return False
        for k in range(i):
            if not (0 <= H[k][p] < H[i][p]):
                return False
    return True


def test_hnf_hand_example():
    # hand row-reduction: swap, eliminate, reduce above the pivot
    H, U = la.hermite_normal_form([[2, 4], [1, 3]])
    assert H == ((1, 1), (0, 2))
    assert la.matmul(U, ((2, 4), (1, 3))) == H
    assert abs(det2(U)) == 1


def test_hnf_identity_and_zero():
    H, U = la.hermite_normal_form(la.identity(3))
    assert H == la.identity(3)
    assert U == la.identity(3)
    H, _ = la.hermite_normal_form([[0, 0]])
    assert H == ((0, 0),)


def test_hnf_random_properties():
    rng = random.Random(7)
    for _ in range(500):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        A = la.mat([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
        H, U = la.hermite_normal_form(A)
        assert la.matmul(U, A) == H
        assert abs(la.determinant(U)) == 1
        assert is_hermite(H)


def test_snf_examples():
    D, U, V = la.smith_normal_form([[2, 4], [1, 3]])
    assert la.diagonal(D) == (1, 2)
    assert D == la.matmul(la.matmul(U, ((2, 4), (1, 3))), V)
    D, _, _ = la.smith_normal_form([[6, 0], [0, 4]])
    assert la.diagonal(D) == (2, 12)
    D, _, _ = la.smith_normal_form(la.identity(2))
    assert la.diagonal(D) == (1, 1)


def test_snf_random_properties():
    rng = random.Random(11)
    for _ in range(500):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        A = la.mat([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
        D, U, V = la.smith_normal_form(A)
        assert D == la.matmul(la.matmul(U, A), V)
        assert abs(la.determinant(U)) == 1
        assert abs(la.determinant(V)) == 1
        d = la.diagonal(D)
        for i, x in enumerate(d):
            assert x >= 0
            if i + 1 < len(d) and x != 0:
                assert d[i + 1] % x == 0
            if x == 0 and i + 1 < len(d):
                assert d[i + 1] == 0
        # off-diagonal zero
        for i, row in enumerate(D):
            for j, x in enumerate(row):
                if i != j:
                    assert x == 0
        if m == n:
            prod = 1
            for x in d:
                prod *= x
            assert prod == abs(la.determinant(A))


def test_primitive_part():
    assert la.primitive_part((4, 6)) == (2, 3)
    assert la.primitive_part((-2, 0)) == (-1, 0)
    assert la.primitive_part((1, 2, 3)) == (1, 2, 3)
    with pytest.raises(ZeroVector):
        la.primitive_part((0, 0))
    rng = random.Random(3)
    for _ in range(200):
        d = rng.randint(1, 4)
        v = tuple(rng.randint(-9, 9) for _ in range(d))
        if la.is_zero(v):
            continue
        k = rng.randint(1, 9)
        assert la.primitive_part(la.vscale(k, v)) == la.primitive_part(v)


def test_sublattice_index():
    assert la.sublattice_index([(1, 0), (1, 2)]) == 2
    assert la.sublattice_index(la.identity(3)) == 1
    with pytest.raises(DependentGenerators):
        la.sublattice_index([(1, 0), (2, 0)])


def random_unimodular(rng, d, steps=6):
    M = [list(r) for r in la.identity(d)]
    for _ in range(steps):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        M[i] = [a + q * b for a, b in zip(M[i], M[j])]
    return la.mat(M)


def test_sublattice_index_unimodular_invariance():
    rng = random.Random(19)
    for _ in range(200):
        d = rng.randint(2, 4)
        k = rng.randint(1, d)
        while True:
            gens = [tuple(rng.randint(-4, 4) for _ in range(d)) for _ in range(k)]
            if la.rank(gens) == k:
                break
        U = random_unimodular(rng, d)
        moved = [la.mat_vec(U, g) for g in gens]
        assert la.sublattice_index(gens) == la.sublattice_index(moved)


def test_kernel_and_saturation():
    K = la.kernel_basis([(1, 2, 3)])
    assert len(K) == 2
    for row in K:
        assert la.dot(row, (1, 2, 3)) == 0
    B = la.saturation_basis([(2, 0, 2), (0, 4, 4)])
    # saturation of span{(1,0,1),(0,1,1)} is itself (already saturated)
    assert len(B) == 2
    assert la.solve_in_basis(B, (1, 0, 1)) is not None
    assert la.solve_in_basis(B, (0, 1, 1)) is not None


def test_complete_to_unimodular():
    B = la.saturation_basis([(1, 2, 3)])
    P = la.complete_to_unimodular(B)
    assert abs(la.determinant(P)) == 1
    assert P[0] == B[0]


def test_solve_in_basis():
    B = ((1, 0, 1), (0, 1, 1))
    assert la.solve_in_basis(B, (2, 3, 5)) == (2, 3)
    assert la.solve_in_basis(B, (1, 1, 1)) is None  # not in the rational span
    assert la.solve_in_basis(((2, 0),), (1, 0)) is None  # rational, not integral
