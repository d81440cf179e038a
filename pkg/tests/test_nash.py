import itertools
import random

import pytest

from toricnash import cones as cg
from toricnash import fans as fs
from toricnash import intlinalg as la
from toricnash import nash
from toricnash import oracle
from toricnash.cones import Cone
from toricnash.errors import (
    EmptyLocus,
    NotInRegion,
    NotProper,
    ValidationError,
    ZeroFunction,
)
from toricnash.locus import (
    face_locus,
    is_minimal_in_region,
    region_contains,
    singular_faces,
)

QUADRANT = Cone.from_rays([(1, 0), (0, 1)])
A1 = Cone.from_rays([(1, 0), (1, 2)])
QUADRIC = Cone.from_rays([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])


def face_of(c, v):
    return cg.smallest_containing_face(c, v)


def quadrant_full_locus():
    return face_locus(QUADRANT, [face_of(QUADRANT, (1, 1))])


def quadrant_xray_locus():
    return face_locus(QUADRANT, [face_of(QUADRANT, (1, 0))])


def an_cone(n):
    return Cone.from_rays([(1, 0), (1, n + 1)])


def random_pointed_cone(rng, dim, bound=4):
    nrays = rng.randint(1, dim + 2)
    rays = []
    while len(rays) < nrays:
        v = tuple(rng.randint(0, bound) for _ in range(dim))
        if not la.is_zero(v):
            rays.append(v)
    return Cone.from_rays(rays, dim)


def random_locus(rng, c):
    faces = [f for f in cg.enumerate_faces(c) if f.rays]
    seed = [rng.choice(faces)] if faces and rng.random() < 0.8 else []
    return face_locus(c, seed)


def random_unimodular(rng, d, steps=5):
    M = [list(r) for r in la.identity(d)]
    for _ in range(steps):
        if d < 2:
            break
        i, j = rng.sample(range(d), 2)
        q = rng.randint(-2, 2)
        M[i] = [a + q * b for a, b in zip(M[i], M[j])]
    return la.mat(M)


# -- singular faces and locus construction -----------------------------------

def test_singular_faces():
    assert {f.rays for f in singular_faces(A1)} == {A1.rays}
    assert singular_faces(QUADRANT) == frozenset()
    assert {f.rays for f in singular_faces(QUADRIC)} == {QUADRIC.rays}


def test_face_locus_closure():
    y = quadrant_xray_locus()
    assert {f.rays for f in y.faces} == {((1, 0),), QUADRANT.rays}
    with pytest.raises(EmptyLocus):
        face_locus(QUADRANT, [])
    y2 = face_locus(A1, [])
    assert {f.rays for f in y2.faces} == {A1.rays}
    with pytest.raises(NotProper):
        face_locus(QUADRANT, [face_of(QUADRANT, (0, 0))])


def test_region_contains():
    y = quadrant_full_locus()
    assert region_contains(y, (1, 1))
    assert not region_contains(y, (1, 0))
    y2 = quadrant_xray_locus()
    assert region_contains(y2, (1, 0))
    assert not region_contains(y2, (0, 1))
    assert not region_contains(y2, (-1, 0))


def test_region_sigma_stability():
    """v in region and s in the cone imply v+s in region."""
    rng = random.Random(101)
    for _ in range(120):
        dim = rng.randint(2, 3)
        c = random_pointed_cone(rng, dim, bound=3)
        try:
            y = random_locus(rng, c)
        except EmptyLocus:
            continue
        pts = [p for k in range(1, 4) for p in cg.level_points(c, k)]
        region = [p for p in pts if region_contains(y, p)]
        for v in region[:6]:
            for s in pts[:6]:
                assert region_contains(y, la.vadd(v, s))


def test_is_minimal_in_region():
    y = quadrant_full_locus()
    assert is_minimal_in_region(y, (1, 1))
    assert not is_minimal_in_region(y, (2, 1))
    y2 = quadrant_xray_locus()
    assert not is_minimal_in_region(y2, (1, 1))
    with pytest.raises(NotInRegion):
        is_minimal_in_region(y, (1, 0))


# -- minimal region points ----------------------------------------------------

def test_minimal_region_points_examples():
    assert nash.minimal_region_points(quadrant_full_locus()) == ((1, 1),)
    assert nash.minimal_region_points(quadrant_xray_locus()) == ((1, 0),)


def test_minimal_region_points_an_family():
    for n in range(1, 6):
        c = an_cone(n)
        y = face_locus(c, [])
        got = nash.minimal_region_points(y)
        assert got == tuple((1, k) for k in range(1, n + 1))
        assert got == oracle.brute_minimal_region_points(y, 20)


def test_minimal_region_points_antichain_and_domination():
    rng = random.Random(103)
    for _ in range(60):
        dim = rng.randint(2, 3)
        c = random_pointed_cone(rng, dim, bound=3)
        try:
            y = random_locus(rng, c)
        except EmptyLocus:
            continue
        minima = nash.minimal_region_points(y)
        for a in minima:
            for b in minima:
                if a != b:
                    assert not cg.cone_leq(c, a, b)
        cap = oracle.default_region_cap(y) + 2
        for v in oracle.region_points_up_to(y, cap):
            assert any(cg.cone_leq(c, m, v) for m in minima)
        assert minima == oracle.brute_minimal_region_points(y, cap)


def test_minimal_region_points_unimodular_equivariance():
    rng = random.Random(107)
    for _ in range(25):
        dim = rng.randint(2, 3)
        c = random_pointed_cone(rng, dim, bound=2)
        try:
            y = random_locus(rng, c)
        except EmptyLocus:
            continue
        U = random_unimodular(rng, dim)
        moved_cone = Cone.from_rays([la.mat_vec(U, r) for r in c.rays], dim)
        moved_faces = []
        for f in y.faces:
            rays = [la.mat_vec(U, r) for r in f.rays]
            moved_faces.append(cg.face_spanned_by(moved_cone, rays))
        moved_locus = face_locus(moved_cone, moved_faces)
        got = set(nash.minimal_region_points(moved_locus))
        want = {la.mat_vec(U, v) for v in nash.minimal_region_points(y)}
        assert got == want


def test_budget_exceeded():
    from toricnash.errors import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        nash.minimal_region_points(quadrant_full_locus(), buffer=50, level_cap=1)


# -- ideals and the bridge property -------------------------------------------

def test_faces_to_ideal_quadrant_full():
    ideal = nash.faces_to_ideal(quadrant_full_locus())
    assert ideal.generators == ((0, 1), (1, 0))


def test_faces_to_ideal_quadrant_xray():
    ideal = nash.faces_to_ideal(quadrant_xray_locus())
    assert ideal.generators == ((1, 0),)


def test_bridge_property():
    """Region membership == all generators pair >= 1 (checked on boxes)."""
    rng = random.Random(109)
    cases = [quadrant_full_locus(), quadrant_xray_locus(), face_locus(A1, []),
             face_locus(QUADRIC, [])]
    for _ in range(30):
        c = random_pointed_cone(rng, rng.randint(2, 3), bound=3)
        try:
            cases.append(random_locus(rng, c))
        except EmptyLocus:
            pass
    for y in cases:
        ideal = nash.faces_to_ideal(y)
        for v in cg.points_up_to_level(y.cone, 8):
            assert region_contains(y, v) == (ideal.min_pairing(v) >= 1)


def test_contact_shadow_of_region():
    """v in region iff v has positive order against the locus ideal."""
    y = face_locus(A1, [])
    ideal = nash.faces_to_ideal(y)
    for v in cg.points_up_to_level(A1, 8):
        in_region = region_contains(y, v)
        assert in_region == (ideal.min_pairing(v) >= 1)


def test_monomial_ideal_validation():
    with pytest.raises(ValidationError):
        nash.MonomialIdeal(QUADRANT, ((0, 0),))
    with pytest.raises(ValidationError):
        nash.MonomialIdeal(QUADRANT, ((-1, 2),))
    with pytest.raises(ValidationError):
        nash.MonomialIdeal(QUADRANT, ())


# -- monomial valuation --------------------------------------------------------

def test_monomial_valuation():
    assert nash.monomial_valuation((1, 1), [(2, 1), (0, 1)]) == 1
    assert nash.monomial_valuation((3, 7), [(0, 0)]) == 0
    assert nash.monomial_valuation((2, 3), [(1, 1)]) == 5
    with pytest.raises(ZeroFunction):
        nash.monomial_valuation((1, 1), [])


# -- contact components ---------------------------------------------------------

def test_contact_components_examples():
    ideal = nash.MonomialIdeal(QUADRANT, ((1, 0), (0, 1)))
    assert nash.contact_components(ideal, 2) == ((2, 2),)
    ideal2 = nash.MonomialIdeal(QUADRANT, ((1, 0),))
    assert nash.contact_components(ideal2, 3) == ((3, 0),)
    with pytest.raises(ValidationError):
        nash.contact_components(ideal, 0)


def test_contact_components_empty_locus():
    ideal = nash.MonomialIdeal(QUADRANT, ((2, 0),))
    assert nash.contact_components(ideal, 3) == ()


def test_contact_components_match_oracle():
    rng = random.Random(113)
    done = 0
    while done < 25:
        dim = rng.randint(2, 3)
        c = random_pointed_cone(rng, dim, bound=3)
        gens = [u for u in (tuple(rng.randint(0, 3) for _ in range(dim))
                            for _ in range(rng.randint(1, 3)))
                if not la.is_zero(u) and all(la.dot(u, r) >= 0 for r in c.rays)]
        if not gens:
            continue
        ideal = nash.MonomialIdeal(c, tuple(gens))
        n = rng.randint(1, 4)
        cap = oracle.default_contact_cap(ideal, n)
        got = nash.contact_components(ideal, n)
        want = oracle.brute_contact_components(ideal, n, cap)
        assert got == want
        done += 1


# -- certification ---------------------------------------------------------------

def test_certify_essential_a1():
    y = face_locus(A1, [])
    report = nash.certify_essential(y, samples=3)
    assert report.minimal_points == ((1, 1),)
    assert report.bijective
    for sub in report.samples:
        assert (1, 1) in sub.refined.rays()
    for cert in report.certificates:
        assert len(cert.witnesses) == len(cg.hilbert_basis(A1))
        for sub in cert.sample_resolutions:
            assert fs.is_locus_resolution(sub, y)


def test_certify_essential_quadrant():
    report = nash.certify_essential(quadrant_full_locus(), samples=3)
    assert report.minimal_points == ((1, 1),)
    assert report.bijective


def test_certify_essential_a2():
    c = Cone.from_rays([(1, 0), (1, 3)])
    y = face_locus(c, [])
    report = nash.certify_essential(y, samples=3)
    assert report.minimal_points == ((1, 1), (1, 2))
    assert report.bijective


def test_certify_essential_quadric():
    y = face_locus(QUADRIC, [])
    report = nash.certify_essential(y, samples=4, seed=1)
    assert report.minimal_points == ((1, 1, 1),)
    assert report.bijective
    for ray, sub in report.avoided:
        assert ray not in sub.refined.rays()
        assert fs.is_locus_resolution(sub, y)


# -- orbit closure order -----------------------------------------------------------

def test_orbit_closure_same_stratum():
    fan = fs.Fan.of_cone(QUADRANT)
    zero = face_of(QUADRANT, (0, 0))
    cmp = nash.orbit_closure_leq(fan, zero, (1, 1), zero, (2, 1))
    assert cmp
    cmp2 = nash.orbit_closure_leq(fan, zero, (2, 1), zero, (1, 2))
    assert not cmp2


def test_orbit_closure_projection():
    fan = fs.Fan.of_cone(QUADRANT)
    zero = face_of(QUADRANT, (0, 0))
    xray = face_of(QUADRANT, (1, 0))
    cmp = nash.orbit_closure_leq(fan, zero, (1, 1), xray, (0, 5))
    assert cmp
    # image of (1,1) is 1, class of (0,5) is 5, 1 <= 5 in the projected ray


def test_orbit_closure_incompatible():
    fan = fs.Fan.of_cone(QUADRANT)
    zero = face_of(QUADRANT, (0, 0))
    xray = face_of(QUADRANT, (1, 0))
    cmp = nash.orbit_closure_leq(fan, xray, (1, 0), zero, (1, 1))
    assert not cmp
    assert "incompatible" in cmp.reason


def test_orbit_closure_reduces_to_cone_order():
    rng = random.Random(127)
    fan = fs.Fan.of_cone(QUADRANT)
    zero = face_of(QUADRANT, (0, 0))
    for _ in range(50):
        v = (rng.randint(0, 4), rng.randint(0, 4))
        w = (rng.randint(0, 4), rng.randint(0, 4))
        got = bool(nash.orbit_closure_leq(fan, zero, v, zero, w))
        assert got == cg.cone_leq(QUADRANT, v, w)


# -- locus input forms ----------------------------------------------------------

def test_locus_from_spec_sing():
    y = nash.locus_from_spec(A1, "sing")
    assert {f.rays for f in y.faces} == {A1.rays}


def test_locus_from_spec_faces():
    # canonical ray order of the quadrant is ((0,1),(1,0)): index 1 is the x-ray
    y = nash.locus_from_spec(QUADRANT, {"faces": [[1]]})
    assert {f.rays for f in y.faces} == {((1, 0),), QUADRANT.rays}
    y2 = nash.locus_from_spec(QUADRANT, {"faces": [[0]]},
                              ray_order=((1, 0), (0, 1)))
    assert {f.rays for f in y2.faces} == {((1, 0),), QUADRANT.rays}
    with pytest.raises(NotProper):
        nash.locus_from_spec(QUADRANT, {"faces": [[]]})
    with pytest.raises(ValidationError):
        nash.locus_from_spec(QUADRANT, {"faces": [[0, 7]]})


def test_locus_from_spec_ideal():
    # the ideal (x) cuts the invariant divisor attached to the ray (1,0)
    y = nash.locus_from_spec(QUADRANT, {"ideal": [[1, 0]]})
    assert {f.rays for f in y.faces} == {((1, 0),), QUADRANT.rays}
    # (xy) vanishes on the union of both invariant divisors
    y2 = nash.locus_from_spec(QUADRANT, {"ideal": [[1, 1]]})
    assert {f.rays for f in y2.faces} == \
        {((1, 0),), ((0, 1),), QUADRANT.rays}
    with pytest.raises(ValidationError):
        nash.locus_from_spec(QUADRANT, {"ideal": [[0, 0]]})
    with pytest.raises(ValidationError):
        # this cone has a singular 2-dimensional face that the ideal misses
        c = Cone.from_rays([(1, 0, 0), (1, 2, 0), (0, 0, 1)])
        nash.locus_from_spec(c, {"ideal": [[0, 0, 1]]})
