"""Fans, refinements, star subdivisions, smooth resolution, and the locus
resolutions with the ray-avoidance construction.

All subdivision routines are deterministic; an optional random.Random instance
varies the admissible tie-breaks, which is how seed-varied sample resolutions
are produced.  Every construction re-checks its own output instead of trusting
the recipe.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from . import intlinalg as la
from .cones import (
    Cone,
    enumerate_faces,
    face_spanned_by,
    facets,
    hilbert_basis,
    intersect,
    is_smooth,
    monoid_level_points,
    multiplicity,
    parallelepiped_points,
    positive_functional,
)
from .errors import (
    ConstructionFailed,
    ForbiddenBlocksResolution,
    InternalError,
    MinimalPoint,
    NonPointed,
    NotInRegion,
    NotInSupport,
    NotPrimitive,
    SupportMismatch,
    WrongDimension,
)
from .locus import FaceLocus, is_minimal_in_region, marks_cone, reduce_to_minimal, region_contains

Vec = la.Vec

_MAX_RESOLUTION_ROUNDS = 500


class Fan:
    """A finite face-closed fan, stored by its maximal cones.

    Construction normalizes: cones contained in another are dropped, and all
    cones must be pointed.  The face closure is generated on demand.
    """

    __slots__ = ("_dim", "_max", "_all", "_rays", "_key", "_hash")

    def __init__(self, ambient_dim, cones):
        cones = list(cones)
        for c in cones:
            if not isinstance(c, Cone):
                raise TypeError("Fan takes Cone values")
            if not c.is_pointed:
                raise NonPointed("fans contain pointed cones only")
            if c.ambient_dim != ambient_dim:
                raise WrongDimension("cone/fan ambient dimension mismatch")
        keep = []
        for c in cones:
            if any(c is not d and _cone_subset(c, d) and not _cone_subset(d, c)
                   for d in cones):
                continue
            keep.append(c)
        uniq = sorted(set(keep), key=lambda c: c.rays)
        self._dim = ambient_dim
        self._max = tuple(uniq)
        self._all = None
        self._rays = None
        self._key = (ambient_dim, tuple(c._key for c in self._max))
        self._hash = hash(self._key)

    @staticmethod
    def of_cone(c: Cone) -> "Fan":
        return Fan(c.ambient_dim, [c])

    @property
    def ambient_dim(self):
        return self._dim

    @property
    def max_cones(self):
        return self._max

    def all_cones(self):
        """Every cone of the fan (the generated face closure), each once."""
        if self._all is None:
            seen = {}
            for c in self._max:
                for f in enumerate_faces(c):
                    fc = f.as_cone()
                    seen.setdefault(fc._key, fc)
            self._all = tuple(sorted(seen.values(), key=lambda c: (c.dim, c.rays)))
        return self._all

    def rays(self):
        if self._rays is None:
            out = set()
            for c in self._max:
                out.update(c.rays)
            self._rays = tuple(sorted(out))
        return self._rays

    def supports(self, v) -> bool:
        return any(c.contains(v) for c in self._max)

    def __eq__(self, other):
        return isinstance(other, Fan) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Fan({[list(c.rays) for c in self._max]})"


def _cone_subset(c: Cone, d: Cone) -> bool:
    return all(d.contains(r) for r in c.rays)


def _is_face_of_cone(sub: Cone, c: Cone) -> bool:
    """True iff sub equals a face of c."""
    if not all(c.contains(r) for r in sub.rays):
        return False
    return set(face_spanned_by(c, sub.rays).rays) == set(sub.rays)


def validate_fan(f: Fan):
    """Check face-closure compatibility; returns (ok, diagnostics)."""
    problems = []
    cones = f.max_cones
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            meet = intersect(cones[i], cones[j])
            if not meet.is_pointed:
                problems.append(f"cones {i} and {j} overlap in a non-pointed set")
                continue
            if not _is_face_of_cone(meet, cones[i]) or \
               not _is_face_of_cone(meet, cones[j]):
                problems.append(
                    f"cones {i} and {j} meet in {list(meet.rays)}, "
                    "which is not a common face")
    return not problems, problems


@dataclass(frozen=True)
class Subdivision:
    """A refinement of a base fan: same support, every refined cone inside a
    base cone, rays only added."""

    base: Fan
    refined: Fan
    added_rays: tuple

    def is_identity(self):
        return self.base == self.refined

    def validate(self):
        """Exact structural check; returns (ok, diagnostics)."""
        problems = []
        ok, diag = validate_fan(self.refined)
        problems.extend(diag)
        if not set(self.base.rays()) <= set(self.refined.rays()):
            problems.append("base rays are not all rays of the refinement")
        for c in self.refined.max_cones:
            if not any(_cone_subset(c, b) for b in self.base.max_cones):
                problems.append(f"refined cone {list(c.rays)} lies in no base cone")
        problems.extend(_support_equality_problems(self.base, self.refined))
        return not problems, problems


def _support_equality_problems(base: Fan, refined: Fan):
    """Pure-dimensional facet-pairing argument: inside each base cone every
    interior facet of the refinement must be shared by exactly two pieces."""
    problems = []
    for b in base.max_cones:
        members = [c for c in refined.max_cones
                   if _cone_subset(c, b) and c.dim == b.dim]
        if not members:
            problems.append(f"base cone {list(b.rays)} is not covered")
            continue
        if b.dim == 0:
            continue
        counts = {}
        for c in members:
            for fc in facets(c):
                counts[fc.as_cone()] = counts.get(fc.as_cone(), 0) + 1
        for fc, num in counts.items():
            if num == 1:
                if face_spanned_by(b, fc.rays).rays == b.rays and fc.dim == b.dim - 1:
                    problems.append(
                        f"facet {list(fc.rays)} inside {list(b.rays)} is uncovered")
            elif num > 2:
                problems.append(
                    f"facet {list(fc.rays)} is shared by {num} cones")
    return problems


# ---------------------------------------------------------------------------
# star subdivision
# ---------------------------------------------------------------------------

def _star_refine(fan: Fan, v: Vec) -> Fan:
    """Join every cone containing v with its faces avoiding v (pull at v)."""
    new_max = []
    for c in fan.max_cones:
        if not c.contains(v):
            new_max.append(c)
            continue
        for f in enumerate_faces(c):
            if f.as_cone().contains(v):
                continue
            new_max.append(Cone.from_rays(f.rays + (v,), fan.ambient_dim))
    return Fan(fan.ambient_dim, new_max)


def star_subdivide(fan: Fan, v) -> Subdivision:
    """Star subdivision at a primitive lattice point of the support.

    A point already spanning a ray of the fan yields the identity subdivision.
    """
    v = la.vec(v)
    if la.is_zero(v) or la.primitive_part(v) != v:
        raise NotPrimitive(f"{v} is not a primitive lattice vector")
    if not fan.supports(v):
        raise NotInSupport(f"{v} is outside the fan support")
    if v in fan.rays():
        return Subdivision(fan, fan, ())
    refined = _star_refine(fan, v)
    return Subdivision(fan, refined, (v,))


# ---------------------------------------------------------------------------
# two-dimensional minimal regular subdivision
# ---------------------------------------------------------------------------

def minimal_regular_subdivision_2d(c: Cone) -> Subdivision:
    """The unique coarsest smooth subdivision of a two-dimensional cone.

    The added rays are exactly the non-extreme Hilbert basis elements, in
    angular order; consecutive pairs span unimodular cones.
    """
    c._require_pointed()
    if c.dim != 2 or len(c.rays) != 2:
        raise WrongDimension("minimal regular subdivision needs a 2-dimensional cone")
    B = la.saturation_basis(c.rays)
    coords = {h: la.solve_in_basis(B, h) for h in hilbert_basis(c)}

    def cross(a, b):
        return a[0] * b[1] - a[1] * b[0]

    r0 = coords[c.rays[0]]
    r1 = coords[c.rays[1]]
    orient = 1 if cross(r0, r1) > 0 else -1

    ordered = sorted(coords, key=cmp_to_key(
        lambda a, b: -orient * cross(coords[a], coords[b])))
    assert ordered[0] in c.rays and ordered[-1] in c.rays
    pieces = []
    for a, b in zip(ordered, ordered[1:]):
        piece = Cone.from_rays([a, b], c.ambient_dim)
        assert multiplicity(piece) == 1
        pieces.append(piece)
    base = Fan.of_cone(c)
    refined = Fan(c.ambient_dim, pieces)
    added = tuple(h for h in ordered if h not in c.rays)
    return Subdivision(base, refined, added)


# ---------------------------------------------------------------------------
# simplicialization and smooth resolution
# ---------------------------------------------------------------------------

def simplicialize(fan: Fan, rng=None) -> Subdivision:
    """Make every cone simplicial by pulling at existing rays (no new rays)."""
    current = fan
    for _ in range(_MAX_RESOLUTION_ROUNDS):
        bad = sorted((c for c in current.max_cones if not c.is_simplicial),
                     key=lambda c: c.rays)
        if not bad:
            return Subdivision(fan, current, ())
        target = bad[0] if rng is None else rng.choice(bad)
        ray = target.rays[0] if rng is None else rng.choice(sorted(target.rays))
        current = _star_refine(current, ray)
    raise InternalError("simplicialization did not terminate")


def _subdivision_candidates(c: Cone):
    """Candidate star centers for reducing the multiplicity of a simplicial
    cone: nonzero points of the half-open generator parallelepiped (none lie
    on an edge), ordered by grading level then lexicographically."""
    ell = positive_functional(c)
    pts = [p for p in parallelepiped_points(c.rays, c.ambient_dim)
           if not la.is_zero(p)]
    pts.sort(key=lambda p: (la.dot(ell, p), p))
    return pts


def resolve_smooth(fan: Fan, forbidden=(), rng=None) -> Subdivision:
    """Refine until every cone is smooth.

    Loop: simplicialize, then repeatedly star-subdivide a cone of maximal
    multiplicity at an admissible parallelepiped point.  The multiplicity of
    every cone touched strictly decreases, so the loop terminates.  Centers
    whose primitive part is forbidden are skipped; if nothing admissible
    remains (including the interior Hilbert basis fallback), the error says so.
    """
    forbidden = frozenset(la.vec(w) for w in forbidden)
    sub = simplicialize(fan, rng)
    current = sub.refined
    added = []
    for _ in range(_MAX_RESOLUTION_ROUNDS):
        mults = {c: multiplicity(c) for c in current.max_cones}
        worst = max(mults.values(), default=1)
        if worst == 1:
            fan_rays = set(fan.rays())
            return Subdivision(fan, current,
                               tuple(r for r in current.rays() if r not in fan_rays))
        ties = sorted((c for c, m in mults.items() if m == worst),
                      key=lambda c: c.rays)
        target = ties[0] if rng is None else rng.choice(ties)
        cands = [p for p in _subdivision_candidates(target)
                 if la.primitive_part(p) not in forbidden]
        if not cands:
            cands = [h for h in hilbert_basis(target)
                     if target.relint_contains(h) and h not in forbidden]
        if not cands:
            raise ForbiddenBlocksResolution(
                f"every admissible center of {list(target.rays)} is forbidden")
        pick = cands[0] if rng is None else rng.choice(cands)
        center = la.primitive_part(pick)
        added.append(center)
        current = _star_refine(current, center)
    raise InternalError("smooth resolution did not terminate")


# ---------------------------------------------------------------------------
# locus resolutions
# ---------------------------------------------------------------------------

def _locus_offenders(fan: Fan, locus: FaceLocus):
    """Cones violating the divisor condition: the relative interior maps into
    the marked region, but no ray of the cone does."""
    out = []
    for c in fan.all_cones():
        if not c.rays:
            continue
        if not marks_cone(locus, c.rays):
            continue
        if any(marks_cone(locus, (r,)) for r in c.rays):
            continue
        out.append(c)
    return out


def is_locus_resolution(sub: Subdivision, locus: FaceLocus) -> bool:
    """True iff the refinement is smooth and the marked-locus preimage is a
    divisor: every refined cone interior to the region carries a region ray."""
    sigma = locus.cone
    if sub.base != Fan.of_cone(sigma):
        raise SupportMismatch("subdivision base is not the marked cone")
    for c in sub.refined.max_cones:
        if not _cone_subset(c, sigma):
            raise SupportMismatch("refined cone leaves the marked cone")
    if any(not is_smooth(c) for c in sub.refined.max_cones):
        return False
    return not _locus_offenders(sub.refined, locus)


def _relint_point_candidates(c: Cone, forbidden):
    """Relative-interior lattice points of c at the lowest usable grading
    level, primitive parts not forbidden."""
    ell = positive_functional(c)
    bound = la.dot(ell, _ray_sum(c))
    level = 1
    while True:
        pts = [p for p in monoid_level_points(c, level)
               if c.relint_contains(p)
               and la.primitive_part(p) not in forbidden]
        if pts:
            return sorted(pts)
        level += 1
        if level > bound + 10 * (1 + len(forbidden)):
            raise ForbiddenBlocksResolution(
                f"no admissible interior point in {list(c.rays)}")


def _ray_sum(c: Cone) -> Vec:
    total = la.zero_vec(c.ambient_dim)
    for r in c.rays:
        total = la.vadd(total, r)
    return total


def make_locus_resolution(sigma: Cone, locus: FaceLocus, forbidden=(),
                          start: Fan | None = None, rng=None) -> Subdivision:
    """Construct a smooth subdivision whose marked-locus preimage is a divisor.

    Resolve to smooth cones, then repair: while some cone interior to the
    region has no region ray, star-subdivide a maximal offender at its lowest
    admissible interior point and re-resolve.  Each repair adds a ray interior
    to the region.
    """
    if locus.cone != sigma:
        raise SupportMismatch("locus is not attached to the given cone")
    forbidden = frozenset(la.vec(w) for w in forbidden)
    base = Fan.of_cone(sigma)
    current = resolve_smooth(base if start is None else start, forbidden, rng).refined
    for _ in range(_MAX_RESOLUTION_ROUNDS):
        offenders = _locus_offenders(current, locus)
        if not offenders:
            sub = Subdivision(base, current,
                              tuple(r for r in current.rays()
                                    if r not in set(sigma.rays)))
            if not is_locus_resolution(sub, locus):
                raise InternalError("constructed subdivision failed its own check")
            return sub
        top = max(c.dim for c in offenders)
        ties = sorted((c for c in offenders if c.dim == top),
                      key=lambda c: c.rays)
        target = ties[0] if rng is None else rng.choice(ties)
        pts = _relint_point_candidates(target, forbidden)
        pick = pts[0] if rng is None else rng.choice(pts)
        current = _star_refine(current, la.primitive_part(pick))
        current = resolve_smooth(current, forbidden, rng).refined
    raise InternalError("locus resolution did not terminate")


# ---------------------------------------------------------------------------
# avoidance construction
# ---------------------------------------------------------------------------

def _decompositions(sigma: Cone, locus: FaceLocus, w: Vec):
    """Candidate splittings w = n1 + n2 with n1 region-minimal and n2 a
    nonzero cone point, enumerated by increasing grading level of the summand
    drawn from the region."""
    ell = positive_functional(sigma)
    seen = set()
    for level in range(1, la.dot(ell, w)):
        for u in monoid_level_points(sigma, level):
            if not region_contains(locus, u):
                continue
            rest = la.vsub(w, u)
            if la.is_zero(rest) or not sigma.contains(rest):
                continue
            n1 = reduce_to_minimal(locus, u)
            n2 = la.vsub(w, n1)
            if (n1, n2) in seen:
                continue
            seen.add((n1, n2))
            yield n1, n2


def avoidance_resolution(sigma: Cone, locus: FaceLocus, w) -> Subdivision:
    """A locus resolution whose rays avoid the non-minimal region point w.

    Split w = n1 + n2 with n1 region-minimal, take the minimal regular
    subdivision of the two-dimensional cone they span, star-subdivide at the
    rays of the subcone holding w in its relative interior, and complete to a
    locus resolution with w forbidden as a center.  The result is re-checked:
    w must not appear among the rays.
    """
    w = la.vec(w)
    if not region_contains(locus, w):
        raise NotInRegion(f"{w} is not in the marked region")
    if is_minimal_in_region(locus, w):
        raise MinimalPoint(f"{w} is minimal; every resolution contains it")
    failures = []
    for n1, n2 in _decompositions(sigma, locus, w):
        try:
            return _avoid_with(sigma, locus, w, n1, n2)
        except (ConstructionFailed, ForbiddenBlocksResolution, InternalError) as exc:
            failures.append(f"{n1}+{n2}: {exc}")
    raise ConstructionFailed(
        f"all decompositions of {w} exhausted: {failures!r}")


def _avoid_with(sigma: Cone, locus: FaceLocus, w, n1, n2) -> Subdivision:
    fan = Fan.of_cone(sigma)
    span = Cone.from_rays([n1, n2], sigma.ambient_dim)
    if span.dim == 1:
        # collinear splitting (only possible for non-primitive w)
        centers = [la.primitive_part(n1)]
    else:
        sub2 = minimal_regular_subdivision_2d(span)
        holder = next((c for c in sub2.refined.max_cones
                       if c.relint_contains(w)), None)
        if holder is None:
            ray_holder = next((c for c in sub2.refined.all_cones()
                               if c.dim == 1 and c.relint_contains(w)), None)
            if ray_holder is None:
                raise ConstructionFailed(f"{w} not interior to any piece")
            centers = list(ray_holder.rays)
        else:
            centers = list(holder.rays)
    for center in centers:
        fan = star_subdivide(fan, center).refined
    result = make_locus_resolution(sigma, locus, forbidden=(w,), start=fan)
    if w in result.refined.rays():
        raise ConstructionFailed(f"completion re-introduced the ray {w}")
    return result
