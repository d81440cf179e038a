"""Brute-force cross-checks used by the --oracle flag and the test suite.

Each oracle enumerates a bounded level range outright and decides minimality
by pairwise domination, independently of the breadth-first reduction logic in
the main algorithms.  Both sides scan the same level range, so agreement is an
exact equality of sets.
"""

from __future__ import annotations

from . import intlinalg as la
from .cones import Cone, cone_leq, points_up_to_level, positive_functional
from .locus import FaceLocus
from .nash import MonomialIdeal


def _pairwise_minimal(sigma: Cone, points):
    out = []
    for v in points:
        if not any(u != v and cone_leq(sigma, u, v) for u in points):
            out.append(v)
    return tuple(sorted(out))


def region_points_up_to(locus: FaceLocus, cap: int):
    """Region membership decided face by face, not via the reduction test."""
    from .cones import enumerate_faces, relint_contains
    sigma = locus.cone
    marked = list(locus.faces)
    out = []
    for v in points_up_to_level(sigma, cap):
        if any(relint_contains(f, v) for f in marked):
            out.append(v)
    return tuple(out)


def brute_minimal_region_points(locus: FaceLocus, cap: int):
    """Minimal region points with grading level at most cap, by pairwise
    domination over the full enumeration."""
    return _pairwise_minimal(locus.cone, region_points_up_to(locus, cap))


def brute_contact_components(ideal: MonomialIdeal, n: int, cap: int):
    """Minimal points of the order-n contact set with level at most cap."""
    sigma = ideal.sigma
    pts = [v for v in points_up_to_level(sigma, cap)
           if ideal.min_pairing(v) == n]
    return _pairwise_minimal(sigma, pts)


def default_contact_cap(ideal: MonomialIdeal, n: int) -> int:
    """Level bound below which every minimal contact point lives (see the
    budget discussion in the nash module)."""
    from .cones import hilbert_basis
    sigma = ideal.sigma
    ell = positive_functional(sigma)
    return max(1, n * sum(la.dot(ell, h) for h in hilbert_basis(sigma)))


def default_region_cap(locus: FaceLocus) -> int:
    from .cones import hilbert_basis
    ell = positive_functional(locus.cone)
    return max(1, sum(la.dot(ell, h) for h in hilbert_basis(locus.cone)))
