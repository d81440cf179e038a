import itertools
import random

import pytest

from toricnash import cones as cg
from toricnash import intlinalg as la
from toricnash.cones import Cone
from toricnash.errors import NonPointed, NotInCone, NotSimplicial

QUADRANT = Cone.from_rays([(1, 0), (0, 1)])
A1 = Cone.from_rays([(1, 0), (1, 2)])
OCTANT = Cone.from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
QUADRIC = Cone.from_rays([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])


def random_pointed_cone(rng, dim, nrays=None, bound=4):
    """Random pointed cone: generators from the nonnegative orthant (pointed),
    then an optional unimodular twist keeps instances varied."""
    nrays = nrays or rng.randint(1, dim + 2)
    rays = []
    while len(rays) < nrays:
        v = tuple(rng.randint(0, bound) for _ in range(dim))
        if not la.is_zero(v):
            rays.append(v)
    return Cone.from_rays(rays, dim)


def random_unimodular(rng, d, steps=5):
    M = [list(r) for r in la.identity(d)]
    for _ in range(steps):
        if d < 2:
            break
        i, j = rng.sample(range(d), 2)
        q = rng.randint(-2, 2)
        M[i] = [a + q * b for a, b in zip(M[i], M[j])]
    return la.mat(M)


def test_dual_quadrant_self_dual():
    assert cg.dual_cone(QUADRANT) == QUADRANT


def test_dual_a1():
    d = cg.dual_cone(A1)
    assert d.rays == ((0, 1), (2, -1))
    # verify pairings on generators: 0,2 and 2,0
    assert [la.dot((0, 1), r) for r in A1.rays] == [0, 2]
    assert [la.dot((2, -1), r) for r in A1.rays] == [2, 0]


def test_dual_zero_cone():
    z = Cone.from_rays([], 2)
    d = cg.dual_cone(z)
    assert not d.is_pointed
    assert len(d.lines) == 2
    assert d.rays == ()


def test_dual_involution_random():
    rng = random.Random(23)
    for _ in range(300):
        dim = rng.randint(1, 4)
        c = random_pointed_cone(rng, dim)
        assert cg.dual_cone(cg.dual_cone(c)) == c


def test_enumerate_faces_counts():
    assert len(cg.enumerate_faces(QUADRANT)) == 4
    assert len(cg.enumerate_faces(OCTANT)) == 8
    assert len(cg.enumerate_faces(A1)) == 4
    half = Cone.from_generators(2, rays=[(1, 0)], lines=[(0, 1)])
    with pytest.raises(NonPointed):
        cg.enumerate_faces(half)


def test_smallest_containing_face():
    assert cg.smallest_containing_face(QUADRANT, (2, 3)).rays == QUADRANT.rays
    assert cg.smallest_containing_face(QUADRANT, (2, 0)).rays == ((1, 0),)
    assert cg.smallest_containing_face(QUADRANT, (0, 0)).rays == ()
    with pytest.raises(NotInCone):
        cg.smallest_containing_face(QUADRANT, (-1, 0))


def test_relint_contains():
    full = cg.smallest_containing_face(QUADRANT, (1, 1))
    assert cg.relint_contains(full, (1, 1))
    assert not cg.relint_contains(full, (1, 0))
    zero = cg.smallest_containing_face(QUADRANT, (0, 0))
    assert cg.relint_contains(zero, (0, 0))
    assert not cg.relint_contains(zero, (1, 0))


def test_face_relint_partition():
    """Every lattice point of the cone lies in exactly one face relint."""
    rng = random.Random(5)
    for _ in range(60):
        dim = rng.randint(2, 3)
        c = random_pointed_cone(rng, dim)
        faces = cg.enumerate_faces(c)
        for pt in itertools.product(range(0, 3), repeat=dim):
            if not c.contains(pt):
                continue
            hits = [f for f in faces if cg.relint_contains(f, pt)]
            assert len(hits) == 1
            assert hits[0] == cg.smallest_containing_face(c, pt)


def test_is_smooth():
    assert cg.is_smooth(QUADRANT)
    assert not cg.is_smooth(A1)
    assert cg.is_smooth(Cone.from_rays([(2, 4)], 2))  # primitive generator (1,2)


def test_multiplicity():
    assert cg.multiplicity(QUADRANT) == 1
    assert cg.multiplicity(A1) == 2
    with pytest.raises(NotSimplicial):
        cg.multiplicity(QUADRIC)


def test_smooth_iff_simplicial_mult_one():
    rng = random.Random(29)
    for _ in range(200):
        c = random_pointed_cone(rng, rng.randint(1, 3))
        smooth = cg.is_smooth(c)
        if c.is_simplicial:
            assert smooth == (cg.multiplicity(c) == 1)
        else:
            assert not smooth


def brute_monoid_points(c, box=6):
    pts = []
    dim = c.ambient_dim
    lo = min(min(r) for r in c.rays) if c.rays else 0
    lo = min(0, lo * box)
    for v in itertools.product(range(lo, box + 1), repeat=dim):
        if not la.is_zero(v) and c.contains(v):
            pts.append(la.vec(v))
    return pts


def brute_hilbert_basis(c, box=6):
    """Independent oracle: irreducible monoid points found by bounded search.

    Only valid when every Hilbert basis element has coordinates within the box;
    used on small cones only.
    """
    pts = set(brute_monoid_points(c, box))
    out = []
    for g in sorted(pts):
        if not any(h != g and c.contains(la.vsub(g, h)) and
                   not la.is_zero(la.vsub(g, h)) for h in pts):
            out.append(g)
    return tuple(out)


def test_hilbert_basis_examples():
    assert set(cg.hilbert_basis(QUADRANT)) == {(1, 0), (0, 1)}
    # frozen from the enumeration oracle:
    assert set(cg.hilbert_basis(A1)) == {(1, 0), (1, 1), (1, 2)}
    assert brute_hilbert_basis(A1) == cg.hilbert_basis(A1)
    c = Cone.from_rays([(1, 0), (1, 3)])
    assert set(cg.hilbert_basis(c)) == {(1, 0), (1, 1), (1, 2), (1, 3)}
    assert brute_hilbert_basis(c) == cg.hilbert_basis(c)


def test_hilbert_basis_quadric():
    assert set(cg.hilbert_basis(QUADRIC)) == set(QUADRIC.rays)


def test_hilbert_basis_properties():
    rng = random.Random(31)
    for _ in range(120):
        dim = rng.randint(2, 3)
        c = random_pointed_cone(rng, dim, bound=3)
        hb = cg.hilbert_basis(c)
        # greedy decomposition of every box point into basis elements
        for pt in brute_monoid_points(c, box=4):
            v = pt
            for _ in range(200):
                if la.is_zero(v):
                    break
                h = next(h for h in hb if c.contains(la.vsub(v, h)))
                v = la.vsub(v, h)
            assert la.is_zero(v)
        # irreducibility by bounded search
        monoid = set(brute_monoid_points(c, box=5))
        for h in hb:
            for x in monoid:
                y = la.vsub(h, x)
                assert la.is_zero(y) or y not in monoid or not c.contains(y) or \
                    x == h or la.is_zero(x)


def test_cone_leq():
    assert cg.cone_leq(QUADRANT, (1, 1), (2, 1))
    assert not cg.cone_leq(QUADRANT, (2, 1), (1, 2))
    assert cg.cone_leq(QUADRANT, (3, 4), (3, 4))


def test_cone_leq_partial_order():
    rng = random.Random(37)
    for _ in range(300):
        dim = rng.randint(2, 3)
        c = random_pointed_cone(rng, dim)
        pts = [tuple(rng.randint(0, 5) for _ in range(dim)) for _ in range(3)]
        pts = [p for p in pts if c.contains(p)]
        for p in pts:
            assert cg.cone_leq(c, p, p)
        if len(pts) >= 2:
            a, b = pts[0], pts[1]
            if cg.cone_leq(c, a, b) and cg.cone_leq(c, b, a):
                assert a == b
        if len(pts) == 3:
            a, b, e = pts
            if cg.cone_leq(c, a, b) and cg.cone_leq(c, b, e):
                assert cg.cone_leq(c, a, e)


def test_positive_functional():
    assert cg.positive_functional(QUADRANT) == (1, 1)
    assert cg.positive_functional(A1) == (1, 0)
    half = Cone.from_generators(2, rays=[(1, 0)], lines=[(0, 1)])
    with pytest.raises(NonPointed):
        cg.positive_functional(half)


def test_positive_functional_box_property():
    rng = random.Random(41)
    for _ in range(150):
        dim = rng.randint(1, 3)
        c = random_pointed_cone(rng, dim)
        ell = cg.positive_functional(c)
        assert la.gcd_vec(ell) == 1
        for pt in itertools.product(range(0, 4), repeat=dim):
            if c.contains(pt) and not la.is_zero(pt):
                assert la.dot(ell, pt) >= 1


def test_level_points():
    assert cg.level_points(QUADRANT, 0) == ((0, 0),)
    assert set(cg.level_points(QUADRANT, 2)) == {(2, 0), (1, 1), (0, 2)}
    assert cg.level_points(A1, 1) == ((1, 0), (1, 1), (1, 2))


def test_nonpointed_rejects():
    half = Cone.from_generators(2, rays=[(1, 0)], lines=[(0, 1)])
    for op in (cg.hilbert_basis, cg.is_smooth, cg.multiplicity, cg.triangulate):
        with pytest.raises(NonPointed):
            op(half)


def test_lower_dimensional_cone():
    ray = Cone.from_rays([(1, 2)], 2)
    assert ray.dim == 1
    assert len(cg.enumerate_faces(ray)) == 2
    assert cg.hilbert_basis(ray) == ((1, 2),)
    c2 = Cone.from_rays([(1, 1, 1), (0, 1, 1)], 3)
    assert c2.dim == 2
    assert cg.is_smooth(c2)
    assert set(cg.hilbert_basis(c2)) == {(1, 1, 1), (0, 1, 1)}


def test_intersect():
    c1 = Cone.from_rays([(1, 0), (1, 2)])
    c2 = Cone.from_rays([(2, 1), (0, 1)])
    i = cg.intersect(c1, c2)
    assert i.rays == ((1, 2), (2, 1))
    j = cg.intersect(QUADRANT, Cone.from_rays([(-1, 0), (0, 1)]))
    assert j.rays == ((0, 1),)


def test_unimodular_invariance_of_hilbert_basis():
    rng = random.Random(43)
    for _ in range(60):
        dim = rng.randint(2, 3)
        c = random_pointed_cone(rng, dim, bound=3)
        U = random_unimodular(rng, dim)
        moved = Cone.from_rays([la.mat_vec(U, r) for r in c.rays], dim)
        hb1 = {la.mat_vec(U, h) for h in cg.hilbert_basis(c)}
        assert hb1 == set(cg.hilbert_basis(moved))
