"""Two-parameter interpolation of a space against a convex body.

Given an exact polytope-normed space X and a bounded symmetric convex
polytope W inside it, the level norms are the gauges of the Minkowski sums

    B_n = 2^n W + 2^-n B_X,        n = 1, 2, ...

and the interpolated norm is the ell_2 aggregate (sum_n ||x||_n^2)^(1/2).
Each level gauge is an exact rational; the infinite sum is enclosed with a
rigorous geometric tail bound derived from 2^n W ⊆ B_n, which gives
||x||_n <= 2^-n gauge_W(x) and hence a per-vector tail certificate.

The projection lemma is verified structurally: coordinate projections that
contract both X and W contract every level ball exactly, and when the
projected bodies PW and PB_X coincide the level norms on the range are
exact constant multiples of the X-norm, so the aggregated norm is a scalar
multiple with a series constant that this module also encloses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from gmpy2 import mpq

from .geometry import PolytopeBall
from .rational import CertInterval
from .spaces import BasisSpace, ExactNormRequired

QZERO = mpq(0)
QONE = mpq(1)

DEFAULT_N_MAX = 24


@dataclass
class InterpolationSpec:
    """The pair (X, W) with cached level balls up to N_max."""

    X: BasisSpace
    W: PolytopeBall
    N_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        bx = self.X.as_polytope()
        if bx is None:
            raise ExactNormRequired("interpolation needs an exact polytope X-norm")
        if self.W.dim != self.X.dim:
            raise ValueError("W must live in X")
        self.BX = bx
        # boundedness certificate: every generator of W has finite X-norm
        self.w_radius = max(bx.gauge(list(g)) for g in self.W.generators)
        self._levels: Dict[int, PolytopeBall] = {}

    def to_json(self) -> dict:
        return {"X": self.X.to_json(), "W": self.W.to_json(), "N_max": self.N_max}

    @staticmethod
    def from_json(obj: dict) -> "InterpolationSpec":
        return InterpolationSpec(BasisSpace.from_json(obj["X"]),
                                 PolytopeBall.from_json(obj["W"]),
                                 int(obj.get("N_max", DEFAULT_N_MAX)))

    def level_ball(self, n: int) -> PolytopeBall:
        if n < 1:
            raise ValueError("level must be positive")
        if n not in self._levels:
            s = mpq(1 << n)
            t = mpq(1, 1 << n)
            self._levels[n] = self.W.minkowski_sum(self.BX, s, t)
        return self._levels[n]


def level_norm(spec: InterpolationSpec, n: int, x: Sequence) -> mpq:
    """Exact gauge of the level-n ball."""
    return spec.level_ball(n).gauge([mpq(c) for c in x])


def partial_sum_sq(spec: InterpolationSpec, x: Sequence, N: int) -> mpq:
    xs = [mpq(c) for c in x]
    total = QZERO
    for n in range(1, N + 1):
        v = level_norm(spec, n, xs)
        total += v * v
    return total


def tail_bound_sq(spec: InterpolationSpec, x: Sequence, N: int) -> mpq:
    """Rigorous bound on the omitted levels: sum_{n>N} ||x||_n^2.

    From 2^n W ⊆ B_n, each omitted term is at most 4^-n gauge_W(x)^2.
    """
    gw = spec.W.gauge([mpq(c) for c in x])
    return gw * gw * mpq(1, 3) / (1 << (2 * N))


def interpolation_norm(spec: InterpolationSpec, x: Sequence, eps) -> CertInterval:
    """Certified enclosure of the aggregated norm, width at most eps."""
    eps = mpq(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    xs = [mpq(c) for c in x]
    if all(c == 0 for c in xs):
        return CertInterval.point(QZERO)
    for N in range(1, spec.N_max + 1):
        partial = partial_sum_sq(spec, xs, N)
        tail = tail_bound_sq(spec, xs, N)
        iv = CertInterval(partial, partial + tail).sqrt(eps / 4)
        if iv.width <= eps:
            return iv
    raise ValueError("N_max too small for the requested width")


def scale_series_constant(eps=mpq(1, 10**12), terms: int = 60) -> CertInterval:
    """Enclosure of (sum_n (2^n + 2^-n)^-2)^(1/2), the identity-projection
    scale of the interpolated norm when W equals the unit ball."""
    partial = QZERO
    for n in range(1, terms + 1):
        d = mpq(1 << n) + mpq(1, 1 << n)
        partial += 1 / (d * d)
    tail = mpq(1, 3) / (1 << (2 * terms))
    return CertInterval(partial, partial + tail).sqrt(eps)


def _positions(proj, dim: int) -> List[int]:
    """Normalize a projection argument: an int k means the first k coordinates,
    a sequence lists the kept coordinate positions (0-based)."""
    if isinstance(proj, int):
        if not 1 <= proj <= dim:
            raise ValueError("projection length out of range")
        return list(range(proj))
    pos = sorted(set(int(i) for i in proj))
    if not pos or pos[0] < 0 or pos[-1] >= dim:
        raise ValueError("projection positions out of range")
    return pos


def _apply_proj(pos: List[int], x: Sequence) -> List[mpq]:
    keep = set(pos)
    return [mpq(c) if i in keep else QZERO for i, c in enumerate(x)]


def projected_ball(ball: PolytopeBall, proj) -> PolytopeBall:
    """Image of the ball under a coordinate projection, as a body in R^|S|."""
    pos = _positions(proj, ball.dim)
    gens = [tuple(g[i] for i in pos) for g in ball.generators]
    return PolytopeBall(len(pos), gens, prune=True)


def projection_contracts(ball: PolytopeBall, proj) -> bool:
    """Exact check that the coordinate projection maps the ball into itself."""
    pos = _positions(proj, ball.dim)
    for g in ball.generators:
        if ball.gauge(_apply_proj(pos, g)) > 1:
            return False
    return True


@dataclass
class ProjectionReport:
    positions: List[int]
    p_contracts_x: bool
    p_contracts_w: bool
    level_contraction_ok: Optional[bool]
    scale_law_applicable: bool
    scale_law_ok: Optional[bool]
    ratio_sq: Optional[mpq] = None
    detail: str = ""


def verify_interpproj(spec: InterpolationSpec, proj,
                      vectors: Sequence[Sequence] = (), N: int = 12) -> ProjectionReport:
    """Verify the projection lemma for a coordinate projection P.

    Checks the preconditions ||P||_X <= 1 and PW ⊆ W, the exact per-level
    contraction ||Px||_n <= ||x||_n on the supplied vectors, and, when
    PW = PB_X (decided by exact polytope equality), the per-level scale law
    ||y||_n (2^n + 2^-n) = ||y||_X for y in the range of P.
    """
    d = spec.X.dim
    pos = _positions(proj, d)
    ok_x = projection_contracts(spec.BX, pos)
    ok_w = all(spec.W.gauge(_apply_proj(pos, g)) <= 1 for g in spec.W.generators)
    report = ProjectionReport(pos, ok_x, ok_w, None, False, None)
    if not (ok_x and ok_w):
        report.detail = "projection preconditions fail"
        return report

    level_ok = True
    for x in vectors:
        xs = [mpq(c) for c in x]
        px = _apply_proj(pos, xs)
        for n in range(1, N + 1):
            if level_norm(spec, n, px) > level_norm(spec, n, xs):
                level_ok = False
    report.level_contraction_ok = level_ok

    pw = projected_ball(spec.W, pos)
    pbx = projected_ball(spec.BX, pos)
    report.scale_law_applicable = pw.gauge_equal(pbx)
    if report.scale_law_applicable:
        law_ok = True
        ratio = QZERO
        for n in range(1, N + 1):
            c = mpq(1 << n) + mpq(1, 1 << n)
            ratio += 1 / (c * c)
        for x in vectors:
            y = _apply_proj(pos, x)
            if all(c == 0 for c in y):
                continue
            xn = spec.BX.gauge(y)
            for n in range(1, N + 1):
                c = mpq(1 << n) + mpq(1, 1 << n)
                if level_norm(spec, n, y) * c != xn:
                    law_ok = False
        report.scale_law_ok = law_ok
        report.ratio_sq = ratio
        report.detail = "projected bodies agree; per-level scale law %s" % (
            "verified" if law_ok else "violated")
    else:
        report.detail = "projected bodies differ; scale law not applicable"
    return report


def scale_ratio_sq(spec: InterpolationSpec, proj, x: Sequence, N: int = 12) -> mpq:
    """Exact rational (sum_{n<=N} ||Px||_n^2) / ||Px||_X^2 for nonzero Px.

    When the scale law applies this value is the same for every vector; the
    ratio test across samples uses it verbatim.
    """
    pos = _positions(proj, spec.X.dim)
    y = _apply_proj(pos, x)
    xn = spec.BX.gauge(y)
    if xn == 0:
        raise ValueError("projected vector must be nonzero")
    return partial_sum_sq(spec, y, N) / (xn * xn)


def build_A(tree) -> InterpolationSpec:
    """Interpolation spec of a finite tree space against its branch hull."""
    from .treespace import phi_ball, tree_e_space
    X = tree_e_space(tree)
    if X.as_polytope() is None:
        raise ExactNormRequired("tree norm ball not extractable as a polytope")
    return InterpolationSpec(X, phi_ball(tree))
