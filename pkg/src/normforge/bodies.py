"""Certified gauges of hull-of-union bodies co(box ∪ r·B).

The gauge of a hull of two symmetric bodies is the infimal convolution of
their gauges.  When the polytope part is an axis-aligned box, the inner
minimization collapses to a one-dimensional convex problem

    phi(t) = t + sqrt( sum_i max(|x_i| - t a_i, 0)^2 / r^2 ),

whose values at rational t have the exact form t + sqrt(rational).  The
minimum is bracketed by exact trisection (comparisons decided by double
squaring) and certified with a Lipschitz bound, so the returned enclosure
is sound at any requested width.

Bodies whose polytope part is not a box are rejected; the constructions in
this package only need the cube.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

from gmpy2 import mpq

from .geometry import PolytopeBall, box_profile
from .rational import CertInterval, cmp_rat_plus_sqrt, sqrt_enclosure

QZERO = mpq(0)
QONE = mpq(1)


@dataclass(frozen=True)
class HullUnionBody:
    """co(polytope ∪ sqrt(r2)·B) with B the Euclidean unit ball."""

    polytope: PolytopeBall
    r2: mpq  # squared Euclidean radius, rational

    def __post_init__(self):
        object.__setattr__(self, "r2", mpq(self.r2))
        if self.r2 <= 0:
            raise ValueError("Euclidean radius must be positive")

    @property
    def dim(self) -> int:
        return self.polytope.dim


def cube_ball_body(dim: int = 3, r2=mpq(2)) -> HullUnionBody:
    """co({+-1}^dim ∪ sqrt(r2)·B); with defaults, the body behind rho_0."""
    import itertools
    gens = [[mpq(s) for s in signs] for signs in itertools.product((1, -1), repeat=dim)]
    return HullUnionBody(PolytopeBall(dim, gens), mpq(r2))


def _clamp_dist_sq(absx: List, a: List, t) -> mpq:
    s = QZERO
    for xi, ai in zip(absx, a):
        d = xi - t * ai
        if d > 0:
            s += d * d
    return s


def gauge_interval(body: HullUnionBody, x: Sequence, eps) -> CertInterval:
    """Enclosure of the gauge of the hull-union body, width <= eps."""
    eps = mpq(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    xs = [mpq(c) for c in x]
    if len(xs) != body.dim:
        raise ValueError("vector of wrong dimension")
    if all(c == 0 for c in xs):
        return CertInterval.point(QZERO)
    a = box_profile(body.polytope)
    if a is None:
        raise NotImplementedError(
            "certified gauge implemented for box ∪ ball bodies only")
    absx = [abs(c) for c in xs]
    r2 = body.r2

    def phi_parts(t):
        # phi(t) = t + sqrt(S), both returned exactly
        return t, _clamp_dist_sq(absx, a, t) / r2

    # minimizer lies in [0, box gauge]; beyond it phi(t) = t is increasing
    hi_t = max(xi / ai for xi, ai in zip(absx, a))
    lo_t = QZERO
    # Lipschitz bound on phi: 1 + sqrt(sum a_i^2 / r2), rounded up
    l_sq = sum(ai * ai for ai in a) / r2
    _, l_hi = sqrt_enclosure(l_sq, QONE)
    lip = 1 + l_hi

    best_t = QZERO
    bt, bs = phi_parts(best_t)
    end_t, end_s = phi_parts(hi_t)
    if cmp_rat_plus_sqrt(end_t, end_s, bt, bs) < 0:
        best_t, bt, bs = hi_t, end_t, end_s

    while lip * (hi_t - lo_t) > eps / 2:
        m1 = lo_t + (hi_t - lo_t) / 3
        m2 = hi_t - (hi_t - lo_t) / 3
        t1, s1 = phi_parts(m1)
        t2, s2 = phi_parts(m2)
        if cmp_rat_plus_sqrt(t1, s1, t2, s2) <= 0:
            hi_t = m2
            cand_t, ct, cs = m1, t1, s1
        else:
            lo_t = m1
            cand_t, ct, cs = m2, t2, s2
        if cmp_rat_plus_sqrt(ct, cs, bt, bs) < 0:
            best_t, bt, bs = cand_t, ct, cs

    # enclose phi(best_t) = bt + sqrt(bs) and subtract the bracket slack
    s_lo, s_hi = sqrt_enclosure(bs, eps / 4)
    upper = bt + s_hi
    lower = bt + s_lo - lip * (hi_t - lo_t)
    if lower < 0:
        lower = QZERO
    return CertInterval(lower, upper)


def gauge_dominates(body: HullUnionBody, x: Sequence, y: Sequence) -> bool:
    """Exact certificate that gauge(x) >= gauge(y).

    Sound (never wrongly claims domination): |x_i| >= |y_i| for every
    coordinate makes the one-dimensional objective of x dominate that of y
    pointwise, hence the same for the minima.  Used as a decisive fallback
    when two enclosures straddle an exact equality.
    """
    if box_profile(body.polytope) is None:
        raise NotImplementedError
    return all(abs(mpq(xi)) >= abs(mpq(yi)) for xi, yi in zip(x, y))
