"""Nash data of a toric pair: minimal region points, essential-divisor
certificates, monomial valuations, contact-locus components, and the
orbit-closure order on arc classes.

Enumeration is breadth-first by levels of the cone's grading functional.  For
the marked-region minima the default level budget is provably complete: in any
Hilbert-basis decomposition of a region-minimal point every coefficient is at
most one (a repeated summand could be peeled off without leaving the region or
while dropping to a smaller face), so minima live below the sum of the basis
levels.  The analogous bound for contact loci scales with the contact order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import intlinalg as la
from .cones import (
    Cone,
    cone_leq,
    dual_cone,
    enumerate_faces,
    face_spanned_by,
    hilbert_basis,
    monoid_level_points,
    positive_functional,
    smallest_containing_face,
)
from .errors import (
    BudgetExceeded,
    EmptyLocus,
    ValidationError,
    ZeroFunction,
)
from .fans import Fan, Subdivision, avoidance_resolution, make_locus_resolution
from .locus import (
    FaceLocus,
    face_locus,
    is_minimal_in_region,
    region_contains,
    singular_faces,
)

Vec = la.Vec

_DEFAULT_LEVEL_CAP = 10_000


def _base_budget(sigma: Cone) -> int:
    ell = positive_functional(sigma)
    return sum(la.dot(ell, h) for h in hilbert_basis(sigma))


def minimal_region_points(locus: FaceLocus, buffer=None, level_cap=None):
    """All minimal lattice points of the marked region under the cone order.

    Scans grading levels, stopping after `buffer` consecutive levels without a
    new minimal point (default: the complete budget described in the module
    docstring).  A level cap, if given, raises BudgetExceeded when hit.
    """
    sigma = locus.cone
    if buffer is None:
        buffer = max(1, _base_budget(sigma))
    out = []
    misses = 0
    k = 1
    while misses < buffer:
        if level_cap is not None and k > level_cap:
            raise BudgetExceeded(
                f"level cap {level_cap} hit with {len(out)} minima found")
        if k > _DEFAULT_LEVEL_CAP:
            raise BudgetExceeded("default level cap hit")
        new = [v for v in monoid_level_points(sigma, k)
               if region_contains(locus, v) and is_minimal_in_region(locus, v)]
        if new:
            out.extend(new)
            misses = 0
        else:
            misses += 1
        k += 1
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# monomial ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialIdeal:
    """An invariant monomial ideal on the chart of `sigma`, by its exponents."""

    sigma: Cone
    generators: tuple

    def __post_init__(self):
        gens = tuple(sorted(la.vec(u) for u in self.generators))
        object.__setattr__(self, "generators", gens)
        for u in gens:
            if la.is_zero(u):
                raise ValidationError("ideal generators must be nonzero")
            if any(la.dot(u, r) < 0 for r in self.sigma.rays):
                raise ValidationError(
                    f"exponent {u} pairs negatively with a ray; not a monomial")
        if not gens:
            raise ValidationError("ideal needs at least one generator")

    def min_pairing(self, v) -> int:
        return min(la.dot(v, u) for u in self.generators)


def _span_embedding(sigma: Cone):
    """(coords, lift) maps between the ambient lattice and the span lattice."""
    if not sigma.span_equations:
        ident = tuple(tuple(v) for v in la.identity(sigma.ambient_dim))
        return (lambda v: la.vec(v)), (lambda v: la.vec(v))
    B = la.saturation_basis(sigma.rays)
    P = la.complete_to_unimodular(B)
    Pinv = la.unimodular_inverse(P)
    k = len(B)

    def coords(v):
        c = la.vec_mat(v, Pinv)
        assert all(x == 0 for x in c[k:]), "vector is outside the span"
        return c[:k]

    def lift_dual(u):
        # functional on the span lattice, extended by zero on the complement
        return la.vec_mat(la.vec(u) + la.zero_vec(sigma.ambient_dim - k),
                          la.transpose(Pinv))

    return coords, lift_dual


def faces_to_ideal(locus: FaceLocus) -> MonomialIdeal:
    """The invariant ideal cutting out the marked locus.

    Generators are the minimal monomial exponents pairing at least 1 with the
    relative-interior representative of every marked face; they satisfy the
    bridge property: v is in the region iff every generator pairs >= 1 with v.
    """
    sigma = locus.cone
    coords, lift_dual = _span_embedding(sigma)
    inner = Cone.from_rays([coords(r) for r in sigma.rays],
                           sigma.dim if sigma.rays else sigma.ambient_dim)
    dual = dual_cone(inner)
    reps = []
    for f in locus.minimal_faces():
        total = la.zero_vec(inner.ambient_dim)
        for r in f.rays:
            total = la.vadd(total, coords(r))
        reps.append(total)

    def in_ideal(u):
        return all(la.dot(u, rep) >= 1 for rep in reps)

    hb = hilbert_basis(dual)
    budget = max(1, _base_budget(dual))
    gens = []
    misses = 0
    k = 1
    while misses < budget:
        new = []
        for u in monoid_level_points(dual, k):
            if not in_ideal(u):
                continue
            if any(in_ideal(la.vsub(u, h)) and dual.contains(la.vsub(u, h))
                   for h in hb):
                continue
            new.append(u)
        if new:
            gens.extend(new)
            misses = 0
        else:
            misses += 1
        k += 1
    return MonomialIdeal(sigma, tuple(lift_dual(u) for u in gens))


def monomial_valuation(v, exponents) -> int:
    """min <v, u> over the support exponents of a monomial combination."""
    exponents = [la.vec(u) for u in exponents]
    if not exponents:
        raise ZeroFunction("the zero function has no valuation")
    return min(la.dot(la.vec(v), u) for u in exponents)


# ---------------------------------------------------------------------------
# contact loci
# ---------------------------------------------------------------------------

def contact_point_is_minimal(ideal: MonomialIdeal, n: int, v) -> bool:
    """Exact per-point minimality: enumerate the bounded polytope of cone
    points below v and look for another point of the same contact order."""
    sigma = ideal.sigma
    v = la.vec(v)
    ell = positive_functional(sigma)
    for j in range(1, la.dot(ell, v)):
        for u in monoid_level_points(sigma, j):
            if sigma.contains(la.vsub(v, u)) and ideal.min_pairing(u) == n:
                return False
    return True


def contact_components(ideal: MonomialIdeal, n: int, buffer=None, level_cap=None):
    """Minimal lattice points v of {min pairing against the ideal == n}.

    Scanning levels upward, a point is minimal iff it dominates no previously
    found minimal point: any smaller contact point would itself dominate a
    minimal one at a strictly lower level (two distinct comparable points
    cannot share a level).  This is exactly the bounded-polytope test, run
    incrementally.  The default budget scales the base budget by n: in any
    Hilbert-basis decomposition of a minimal contact point every coefficient
    is at most n, a repeated summand beyond that could be peeled off without
    changing the contact order.
    """
    if n < 1:
        raise ValidationError("contact order must be a positive integer")
    sigma = ideal.sigma
    if buffer is None:
        buffer = max(1, n * _base_budget(sigma))

    out = []
    misses = 0
    k = 1
    while misses < buffer:
        if level_cap is not None and k > level_cap:
            raise BudgetExceeded(
                f"level cap {level_cap} hit with {len(out)} components found")
        if k > _DEFAULT_LEVEL_CAP:
            raise BudgetExceeded("default level cap hit")
        new = [v for v in monoid_level_points(sigma, k)
               if ideal.min_pairing(v) == n
               and not any(cone_leq(sigma, m, v) for m in out)]
        if new:
            out.extend(new)
            misses = 0
        else:
            misses += 1
        k += 1
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# essential-divisor certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MinimalityWitness:
    """Why v - h leaves the region, for one Hilbert basis element h."""

    element: Vec
    reason: str           # "outside-cone" | "unmarked-face"
    face_rays: tuple = ()


@dataclass(frozen=True)
class EssentialCertificate:
    point: Vec
    witnesses: tuple
    sample_resolutions: tuple


@dataclass(frozen=True)
class NashPairReport:
    locus: FaceLocus
    minimal_points: tuple
    certificates: tuple
    samples: tuple
    avoided: tuple          # (ray, Subdivision) for sample rays outside the minima
    missing: tuple          # (point, sample index) presence failures, normally empty
    bijective: bool


def _minimality_witnesses(locus: FaceLocus, v):
    sigma = locus.cone
    out = []
    for h in hilbert_basis(sigma):
        down = la.vsub(v, h)
        if not sigma.contains(down):
            out.append(MinimalityWitness(h, "outside-cone"))
        else:
            f = smallest_containing_face(sigma, down)
            assert f not in locus.faces
            out.append(MinimalityWitness(h, "unmarked-face", f.rays))
    return tuple(out)


def _sample_rng(seed: int, index: int):
    if seed == 0 and index == 0:
        return None
    return random.Random(seed * 1_000_003 + index)


def certify_essential(locus: FaceLocus, samples: int = 3, seed: int = 0,
                      buffer=None, level_cap=None) -> NashPairReport:
    """Certify the good-components/essential-divisors bijection on a pair.

    Computes the region minima, builds `samples` seed-varied locus
    resolutions, checks every minimum is a ray of every sample, and builds an
    avoidance resolution for every sample ray interior to the region that is
    not a minimum.  ConstructionFailed propagates with the offending ray.
    """
    if samples < 1:
        raise ValidationError("need at least one sample resolution")
    sigma = locus.cone
    minima = minimal_region_points(locus, buffer=buffer, level_cap=level_cap)
    subs = []
    for i in range(samples):
        subs.append(make_locus_resolution(sigma, locus, rng=_sample_rng(seed, i)))
    missing = []
    for i, sub in enumerate(subs):
        rays = set(sub.refined.rays())
        for w in minima:
            if w not in rays:
                missing.append((w, i))
    to_avoid = sorted({r for sub in subs for r in sub.refined.rays()
                       if r not in minima and region_contains(locus, r)})
    avoided = tuple((r, avoidance_resolution(sigma, locus, r)) for r in to_avoid)
    certs = tuple(
        EssentialCertificate(w, _minimality_witnesses(locus, w), tuple(subs))
        for w in minima)
    return NashPairReport(
        locus=locus,
        minimal_points=minima,
        certificates=certs,
        samples=tuple(subs),
        avoided=avoided,
        missing=tuple(missing),
        bijective=not missing,
    )


# ---------------------------------------------------------------------------
# orbit-closure order on arc classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitComparison:
    """Truthy comparison result carrying the reason and witness cone."""

    holds: bool
    reason: str
    witness: Cone | None = None

    def __bool__(self):
        return self.holds


def _quotient_map(ambient_dim, face_rays):
    """Projection of the ambient lattice by the saturated span of the rays."""
    if not face_rays:
        return lambda v: la.vec(v), ambient_dim
    B = la.saturation_basis(face_rays)
    P = la.complete_to_unimodular(B)
    Pinv = la.unimodular_inverse(P)
    k = len(B)
    return (lambda v: la.vec_mat(v, Pinv)[k:]), ambient_dim - k


def orbit_closure_leq(fan: Fan, tau, v, tau2, v2) -> OrbitComparison:
    """Does the arc-orbit closure of (tau, v) contain the orbit of (tau2, v2)?

    Combinatorial criterion: tau must be a face of tau2, and some fan cone
    containing tau2 must hold both arc classes with the projected order
    satisfied in the quotient by tau2.
    """
    tau_c = tau.as_cone() if hasattr(tau, "as_cone") else tau
    tau2_c = tau2.as_cone() if hasattr(tau2, "as_cone") else tau2
    v = la.vec(v)
    v2 = la.vec(v2)
    all_cones = fan.all_cones()
    if tau_c not in all_cones or tau2_c not in all_cones:
        raise ValidationError("both strata must be cones of the fan")
    if not all(tau2_c.contains(r) for r in tau_c.rays) or \
       set(face_spanned_by(tau2_c, tau_c.rays).rays) != set(tau_c.rays):
        return OrbitComparison(False, "strata are incompatible: "
                               "the first is not a face of the second")
    q1, d1 = _quotient_map(fan.ambient_dim, tau_c.rays)
    q2, d2 = _quotient_map(fan.ambient_dim, tau2_c.rays)
    for gamma in all_cones:
        if not all(gamma.contains(r) for r in tau2_c.rays):
            continue
        if set(face_spanned_by(gamma, tau2_c.rays).rays) != set(tau2_c.rays):
            continue
        g1 = Cone.from_rays([q1(r) for r in gamma.rays], d1)
        g2 = Cone.from_rays([q2(r) for r in gamma.rays], d2)
        if not g1.contains(q1(v)):
            continue
        if not g2.contains(q2(v2)):
            continue
        if g2.contains(la.vsub(q2(v2), q2(v))):
            return OrbitComparison(True, "projected order holds", gamma)
    return OrbitComparison(False, "no fan cone witnesses the projected order")


# ---------------------------------------------------------------------------
# locus input forms
# ---------------------------------------------------------------------------

def locus_from_spec(sigma: Cone, spec, ray_order=None) -> FaceLocus:
    """Build a locus from one of the accepted forms: the string "sing", a list
    of faces given by ray-index subsets (indices into ray_order, defaulting to
    the canonical ray list), or a monomial ideal's exponents."""
    if ray_order is None:
        ray_order = sigma.rays
    if spec == "sing":
        return face_locus(sigma, [])
    if isinstance(spec, dict) and "faces" in spec:
        faces = []
        all_faces = {f.rays: f for f in enumerate_faces(sigma)}
        for idxs in spec["faces"]:
            try:
                rays = tuple(sorted(ray_order[i] for i in idxs))
            except (IndexError, TypeError) as exc:
                raise ValidationError(f"bad ray index list {idxs!r}: {exc}")
            if rays not in all_faces:
                raise ValidationError(
                    f"ray indices {list(idxs)} do not span a face")
            faces.append(all_faces[rays])
        return face_locus(sigma, faces)
    if isinstance(spec, dict) and "ideal" in spec:
        ideal = MonomialIdeal(sigma, tuple(la.vec(u) for u in spec["ideal"]))
        marked = []
        for f in enumerate_faces(sigma):
            if not f.rays:
                continue
            rep = la.zero_vec(sigma.ambient_dim)
            for r in f.rays:
                rep = la.vadd(rep, r)
            if ideal.min_pairing(rep) >= 1:
                marked.append(f)
        if not marked:
            raise EmptyLocus("the ideal vanishes on no orbit closure")
        for f in singular_faces(sigma):
            if f not in marked:
                raise ValidationError(
                    "the ideal's vanishing locus misses a singular face; "
                    "a pair needs the marked set to cover the singular locus")
        return face_locus(sigma, marked)
    raise ValidationError(f"unrecognized locus specification {spec!r}")
