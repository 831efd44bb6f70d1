"""Certified polytope approximations of ell_2-sums of polytope norms.

The sandwich search needs, for each dimension d, a monotone rational norm
lying between (1 - 2^-(2d+1)) and (1 - 2^-(2d+2)) times the ambient
ell_2(X)-norm.  A counting argument shows no norm that tight can have a
small generator encoding, so exhaustive enumeration cannot reach one in
any dimension above 1.  This module builds one directly:

* block balls (sections of the X-ball) are exact unit balls of their
  norms, certified ratio 1;
* two certified approximations are combined along rational points of the
  unit circle (tan-half-angle parametrization, so the points lie exactly
  on the circle), giving a polytope inside the unit ball of the ell_2-sum
  that contains r * (unit ball) with r^2 = (polygon inradius)^2 * min of
  the child ratios -- all quantities exact rationals;
* the inradius of the rational polygon is computed exactly as the minimal
  squared distance of its edges from the origin.

Monotonicity of the assembled ball in the concatenated coordinate order
holds by construction: the circle point set contains (1,0) and (0,1), the
generator list is closed under sign flips of either component, and block
balls are themselves monotone, so every coordinate projection of a
generator stays in the hull.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from gmpy2 import mpq

from .geometry import PolytopeBall
from .rational import parse_rat, rat_str

QZERO = mpq(0)
QONE = mpq(1)


def circle_points(k: int) -> List[Tuple]:
    """k+1 rational points on the unit circle from (1,0) to (0,1).

    Uses tau = i/k and the point ((1-tau^2)/(1+tau^2), 2 tau/(1+tau^2)),
    which lies exactly on the circle for every rational tau.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    pts = []
    for i in range(k + 1):
        tau = mpq(i, k)
        den = 1 + tau * tau
        pts.append(((1 - tau * tau) / den, 2 * tau / den))
    return pts


def polygon_inradius_sq(quarter_pts: Sequence[Tuple]) -> mpq:
    """Squared inradius of the symmetric polygon spanned by the points.

    quarter_pts runs from (1,0) to (0,1) in angular order; the polygon is
    its closure under both sign flips.  By symmetry the minimal distance
    of an edge from the origin is attained on a first-quadrant edge.
    """
    best = None
    for p, q in zip(quarter_pts, quarter_pts[1:]):
        cross = p[0] * q[1] - p[1] * q[0]
        dx = p[0] - q[0]
        dy = p[1] - q[1]
        d2 = cross * cross / (dx * dx + dy * dy)
        if best is None or d2 < best:
            best = d2
    return best


@dataclass
class BlockApprox:
    """A polytope inside the unit ball of a target norm, with a certificate.

    co(+-gens) contains ratio_sq^(1/2) times the target unit ball, and all
    generators have target norm <= 1.  ``dims`` records the block structure
    for monotonicity bookkeeping.
    """

    dim: int
    gens: List[Tuple]
    ratio_sq: mpq

    @staticmethod
    def exact_ball(ball: PolytopeBall) -> "BlockApprox":
        return BlockApprox(ball.dim, list(ball.generators), QONE)


def min_k_for(target_sq: mpq, k_start: int = 4) -> int:
    """Smallest tried k with polygon inradius^2 >= target_sq (doubling scan)."""
    k = k_start
    while polygon_inradius_sq(circle_points(k)) < target_sq:
        k *= 2
        if k > 1 << 16:
            raise ValueError("circle refinement exploded; target too tight")
    # binary refinement to the least adequate k above k/2
    lo, hi = max(k // 2, 1), k
    while lo < hi:
        mid = (lo + hi) // 2
        if polygon_inradius_sq(circle_points(mid)) >= target_sq:
            hi = mid
        else:
            lo = mid + 1
    return lo


def pair_blocks(left: BlockApprox, right: BlockApprox, k: int) -> BlockApprox:
    """Combine two certified approximations along the rational circle.

    The resulting polytope sits inside the unit ball of the ell_2-sum of
    the two target norms and contains r * (that ball) with
    r^2 = inradius^2(k) * min(left.ratio_sq, right.ratio_sq).
    """
    pts = circle_points(k)
    gens: List[Tuple] = []
    zl = (QZERO,) * left.dim
    zr = (QZERO,) * right.dim
    for u in left.gens:
        gens.append(tuple(u) + zr)
    for v in right.gens:
        gens.append(zl + tuple(v))
    for s, t in pts[1:-1]:
        for u in left.gens:
            su = tuple(s * c for c in u)
            for v in right.gens:
                tv = tuple(t * c for c in v)
                gens.append(su + tv)
                gens.append(su + tuple(-c for c in tv))
    rc2 = polygon_inradius_sq(pts)
    ratio = rc2 * min(left.ratio_sq, right.ratio_sq)
    return BlockApprox(left.dim + right.dim, gens, ratio)


def l2_sum_approx(blocks: Sequence[PolytopeBall], deficit: mpq) -> BlockApprox:
    """Certified approximation of the ell_2-sum of the block norms.

    Guarantees ratio_sq >= 1 - deficit.  Blocks are combined left to right;
    the allowed deficit is split evenly over the len(blocks)-1 pairing
    steps using (1 - x/L)^L >= 1 - x.
    """
    if not blocks:
        raise ValueError("need at least one block")
    if len(blocks) == 1:
        return BlockApprox.exact_ball(blocks[0])
    steps = len(blocks) - 1
    per_step = 1 - deficit / steps
    acc = BlockApprox.exact_ball(blocks[0])
    ks = []
    for b in blocks[1:]:
        # the accumulated ratio already counts earlier steps; each new circle
        # only needs to meet the per-step target
        k = min_k_for(per_step)
        ks.append(k)
        acc = pair_blocks(acc, BlockApprox.exact_ball(b), k)
    acc.ks = ks  # type: ignore[attr-defined]
    return acc


# ---------------------------------------------------------------------------
# reconstruction recipes (used by the structured catalog indices)


def sandwich_recipe(blocks: Sequence[PolytopeBall], ks: Sequence[int], lam) -> dict:
    return {
        "kind": "l2pair",
        "blocks": [b.to_json() for b in blocks],
        "ks": [int(k) for k in ks],
        "lam": rat_str(lam),
    }


def scaled_recipe(ball: PolytopeBall, lam) -> dict:
    return {"kind": "scaled", "ball": ball.to_json(), "lam": rat_str(lam)}


def ball_from_recipe(spec: dict) -> PolytopeBall:
    """Deterministically rebuild a machine-built ball from its recipe."""
    kind = spec.get("kind")
    lam = parse_rat(spec["lam"])
    if kind == "scaled":
        base = PolytopeBall.from_json(spec["ball"], prune=False)
        return base.scaled(lam)
    if kind == "l2pair":
        blocks = [PolytopeBall.from_json(b, prune=False) for b in spec["blocks"]]
        ks = [int(k) for k in spec["ks"]]
        acc = BlockApprox.exact_ball(blocks[0])
        for b, k in zip(blocks[1:], ks):
            acc = pair_blocks(acc, BlockApprox.exact_ball(b), k)
        gens = [tuple(lam * c for c in g) for g in acc.gens]
        return PolytopeBall(acc.dim, gens, prune=False, _skip_checks=True)
    raise ValueError("unknown recipe kind: %r" % kind)
