"""Renormings of the frame space: seminorms beta and alpha, the norms
||.||_I and ||.||_II, the three-dimensional norm rho, and segment detectors.

All quantities except rho are exact: beta, alpha and ||.||_I have rational
squares, so every comparison the verification lemmas need is decided by
integer arithmetic.  rho mixes a polytope gauge with a Euclidean one and is
returned as a certified enclosure of any requested width.

Vectors in the image of the block-averaging embedding U are handled in a
separate symbolic calculus (functions suffixed ``_u_image`` taking base
space vectors): the defining cancellations of beta hold for every block
index at once, while any truncation of a nonzero U-image vector picks up
nonzero boundary differences.  Mixing the two calculi would silently turn
exact identities into near-identities, so the API keeps them apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .bodies import HullUnionBody, cube_ball_body, gauge_dominates, gauge_interval
from .catalog import pi_inverse
from .embedding import EmbeddingFrame, slot_list
from .rational import CertInterval, ExactSqrt, as_interval
from .spaces import BasisSpace, register_norm_expr

QZERO = mpq(0)
QONE = mpq(1)

RHO_BODY: HullUnionBody = cube_ball_body(3, mpq(2))
NORM_I_WEIGHT = mpq(1, 1 << 7)


def _weight(idx: int) -> mpq:
    return mpq(1, 1 << (4 * idx))


@dataclass
class RenormFrame:
    """An embedding frame together with the weight table of the renormings."""

    base: EmbeddingFrame
    rho_eps: mpq = mpq(1, 10**9)

    def __post_init__(self):
        self.rho_eps = mpq(self.rho_eps)
        if self.rho_eps <= 0:
            raise ValueError("rho_eps must be positive")
        self.slots = slot_list(self.base.X.dim, self.base.D)
        self.slot_index = {nk: i for i, nk in enumerate(self.slots)}

    @property
    def D(self) -> int:
        return self.base.D

    def coords(self, f: Sequence) -> List:
        if len(f) != self.D:
            raise ValueError("vector must have exactly D coordinates")
        return [mpq(c) for c in f]


def beta_sq(frame: RenormFrame, f: Sequence) -> mpq:
    """Exact square of beta(f) = (sum_k w_(n+1,k) |f(n,k) - 2 f(n+1,k)|^2)^(1/2).

    Coordinates outside the frame vanish for supported vectors, so the
    series is the finite sum below; pairs whose upper neighbour falls
    outside the frame contribute their boundary term in full.
    """
    fs = frame.coords(f)
    total = QZERO
    for i, (n, k) in enumerate(frame.slots):
        up = frame.slot_index.get((n + 1, k))
        diff = fs[i] - 2 * (fs[up] if up is not None else QZERO)
        if diff != 0:
            total += _weight(pi_inverse(n + 1, k)) * diff * diff
    return total


def beta(frame: RenormFrame, f: Sequence) -> ExactSqrt:
    return ExactSqrt(beta_sq(frame, f))


def beta_relations(frame: RenormFrame, f: Sequence) -> List[Tuple[int, int]]:
    """The pairs (n, k) whose difference term of beta is nonzero; exact.

    beta(f) = 0 holds exactly when this list is empty, which is the finite
    form of the vanishing-difference characterization.
    """
    fs = frame.coords(f)
    bad = []
    for i, (n, k) in enumerate(frame.slots):
        up = frame.slot_index.get((n + 1, k))
        if fs[i] - 2 * (fs[up] if up is not None else QZERO) != 0:
            bad.append((n, k))
    return bad


def alpha_sq(frame: RenormFrame, f: Sequence) -> mpq:
    """Exact square of alpha(f) = (sum w_(n,k) |f(n,k)|^2)^(1/2)."""
    fs = frame.coords(f)
    total = QZERO
    for i, (n, k) in enumerate(frame.slots):
        if fs[i] != 0:
            total += _weight(pi_inverse(n, k)) * fs[i] * fs[i]
    return total


def alpha(frame: RenormFrame, f: Sequence) -> ExactSqrt:
    return ExactSqrt(alpha_sq(frame, f))


def norm_I_sq(frame: RenormFrame, f: Sequence) -> mpq:
    fn = frame.base.f_norm(frame.coords(f))
    return fn * fn + NORM_I_WEIGHT * beta_sq(frame, f)


def norm_I(frame: RenormFrame, f: Sequence) -> ExactSqrt:
    """||f||_I with ||f||_I^2 = ||f||^2 + 2^-7 beta(f)^2; exact."""
    return ExactSqrt(norm_I_sq(frame, f))


# ---------------------------------------------------------------------------
# the three-dimensional norm rho


def rho(r, s, t, eps) -> CertInterval:
    """Certified enclosure of rho(r, s, t), width at most eps.

    rho(r, s, t) = (|r| + |s|)/4 + rho0(r, s, t)/2 where rho0 is the gauge
    of co({(+-1,+-1,+-1)} ∪ sqrt(2) B).  Inputs may be rationals, exact
    square roots, or enclosures; rho is 1-Lipschitz for the max metric, so
    input uncertainty widens the result additively.
    """
    eps = mpq(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    ivs = [as_interval(v, eps / 8) for v in (r, s, t)]
    mids = [iv.mid for iv in ivs]
    pad = max(max(iv.hi - m, m - iv.lo) for iv, m in zip(ivs, mids))
    base = gauge_interval(RHO_BODY, mids, eps / 2)
    lo = (abs(mids[0]) + abs(mids[1])) / 4 + base.lo / 2 - pad
    hi = (abs(mids[0]) + abs(mids[1])) / 4 + base.hi / 2 + pad
    if lo < 0:
        lo = QZERO
    return CertInterval(lo, hi)


def rho_dominates(x: Sequence, y: Sequence) -> bool:
    """Exact certificate that rho(x) >= rho(y) (never wrongly affirms).

    Coordinatewise domination |x_i| >= |y_i| makes both the polytope term
    and the Euclidean residual of the gauge larger, and the (|r|+|s|)/4
    part is monotone outright.
    """
    if len(x) != 3 or len(y) != 3:
        raise ValueError("rho lives on R^3")
    return gauge_dominates(RHO_BODY, x, y)


def rho_slope_certificate(r_hi, s, t, r_lo) -> bool:
    """Exact check of rho(r_hi,s,t) >= rho(r_lo,s,t) + (r_hi - r_lo)/4.

    The difference of the two values is (r_hi - r_lo)/4 plus half the
    difference of the gauges, which is nonnegative by domination; requires
    0 <= r_lo <= r_hi.
    """
    r_lo, r_hi = mpq(r_lo), mpq(r_hi)
    if not 0 <= r_lo <= r_hi:
        raise ValueError("need 0 <= r_lo <= r_hi")
    return rho_dominates((r_hi, s, t), (r_lo, s, t))


def norm_II(frame: RenormFrame, f: Sequence, eps=None) -> CertInterval:
    """||f||_II = rho(||f||, ||f||_I, alpha(f)), certified."""
    if eps is None:
        eps = frame.rho_eps
    fs = frame.coords(f)
    fn = frame.base.f_norm(fs)
    ni = ExactSqrt(fn * fn + NORM_I_WEIGHT * beta_sq(frame, fs))
    al = ExactSqrt(alpha_sq(frame, fs))
    return rho(fn, ni, al, eps)


# ---------------------------------------------------------------------------
# the symbolic calculus on the image of U (no truncation)


def u_image_beta_term(n: int) -> mpq:
    """The coefficient f(n,k) - 2 f(n+1,k) of x_k on a U-image vector.

    U x carries x_k / 2^(n-1) at slot (n, k) (up to the global sqrt(3)/2),
    so the coefficient is 2^(1-n) - 2 * 2^(-n) = 0 for every n.
    """
    if n < 1:
        raise ValueError("block index must be positive")
    return mpq(1, 1 << (n - 1)) - 2 * mpq(1, 1 << n)


def beta_u_image_is_zero(x: Sequence, n_max: int = 64) -> bool:
    """beta(U x) = 0 in the untruncated calculus; verified term by term."""
    return all(u_image_beta_term(n) == 0 for n in range(1, n_max + 1))


def alpha_u_image_sq_bounds(X: BasisSpace, x: Sequence, terms: int = 40):
    """Exact rational bracket for alpha(U x)^2.

    alpha(Ux)^2 = (3/4) sum_i w_i (x_{k_i} / 2^(n_i - 1))^2 over the whole
    slot stream; the partial sum over the first ``terms`` slots is exact and
    the omitted tail is at most max_k x_k^2 * 16^-M / 15 * (3/4).
    """
    xs = [mpq(c) for c in x]
    if len(xs) != X.dim:
        raise ValueError("vector must live in the base space")
    slots = slot_list(X.dim, terms)
    partial = QZERO
    last_idx = 0
    for n, k in slots:
        idx = pi_inverse(n, k)
        last_idx = max(last_idx, idx)
        c = xs[k - 1] / (1 << (n - 1))
        partial += _weight(idx) * c * c
    mx = max((c * c for c in xs), default=QZERO)
    tail = mx * mpq(1, 15) / (1 << (4 * last_idx))
    return mpq(3, 4) * partial, mpq(3, 4) * (partial + tail)


def alpha_u_image(X: BasisSpace, x: Sequence, eps) -> CertInterval:
    eps = mpq(eps)
    terms = 8
    while True:
        lo_sq, hi_sq = alpha_u_image_sq_bounds(X, x, terms)
        iv = CertInterval(lo_sq, hi_sq).sqrt(eps / 2)
        if iv.width <= eps:
            return iv
        terms *= 2


def u_image_norms(X: BasisSpace, x: Sequence):
    """(||Ux||, ||Ux||_I) in the untruncated calculus; both equal ||x||_X.

    U is an isometry onto its image and beta vanishes there, so the two
    norms coincide with the base space norm of x.
    """
    val = X.eval_norm(list(x))
    return val, val


def norm_II_u_image(X: BasisSpace, x: Sequence, terms: int = 40):
    """Exact value of ||U x||_II; requires a polytope base norm.

    With r = ||Ux|| = ||Ux||_I = ||x||_X and t = alpha(Ux), the two-sided
    bound (|r|+|s|)/2 <= rho <= max{|r|,|s|,|t|} pins rho(r, r, t) = r as
    soon as t < r, which is certified from the exact tail bracket of
    alpha(Ux)^2.
    """
    xs = [mpq(c) for c in x]
    r = X.eval_norm(xs)
    r = mpq(r)  # polytope norms evaluate to rationals
    if r == 0:
        return QZERO
    _, hi_sq = alpha_u_image_sq_bounds(X, xs, terms)
    if not hi_sq < r * r:
        raise ValueError("alpha tail bracket too loose; raise terms")
    return r


# ---------------------------------------------------------------------------
# segment detectors


@dataclass(frozen=True)
class SegmentReport:
    constant: Optional[bool]       # None = undecided at the requested eps
    conclusion_holds: Optional[bool]
    detail: str


def u_image_pattern(frame: RenormFrame, w: Sequence) -> Optional[List]:
    """The base vector x with w = U x at this truncation, or None."""
    ws = frame.coords(w)
    m = frame.base.X.dim
    nb = frame.base.n_blocks
    x = [QZERO] * m
    for i, (n, k) in enumerate(frame.slots):
        if n == 1 and k <= m:
            x[k - 1] = ws[i]
    if ws == frame.base.operator_U(x) and (any(c != 0 for c in x) or
                                           all(c == 0 for c in ws)):
        return x if nb >= 1 else None
    return None


def segment_detector(frame: RenormFrame, u: Sequence, v: Sequence,
                     which: str = "I", eps=None) -> SegmentReport:
    """Decide constancy of the chosen norm on [u, v] and test the structural
    conclusion that flat segments only arise inside the image of U.

    Norms are convex, so constancy on the segment is equivalent to the
    midpoint value matching both (equal) endpoint values; for ||.||_I this
    is an integer comparison of squares, for ||.||_II an interval test that
    can only refute constancy (or stay undecided at the requested width).
    """
    if which not in ("I", "II"):
        raise ValueError("which must be 'I' or 'II'")
    us = frame.coords(u)
    vs = frame.coords(v)
    if us == vs:
        raise ValueError("segment endpoints must differ")
    mid = [(a + b) / 2 for a, b in zip(us, vs)]

    if which == "I":
        nu = norm_I_sq(frame, us)
        nv = norm_I_sq(frame, vs)
        nm = norm_I_sq(frame, mid)
        if nu == nv == nm:
            x = u_image_pattern(frame, [a - b for a, b in zip(vs, us)])
            return SegmentReport(True, x is not None,
                                 "flat segment; difference %s the truncated U-image"
                                 % ("inside" if x is not None else "outside"))
        return SegmentReport(False, True, "norm not constant on the segment")

    if eps is None:
        eps = frame.rho_eps
    iu = norm_II(frame, us, eps)
    iv = norm_II(frame, vs, eps)
    im = norm_II(frame, mid, eps)
    pairs = ((iu, iv), (im, iu), (im, iv))
    if any(a.hi < b.lo or b.hi < a.lo for a, b in pairs):
        return SegmentReport(False, True, "norm not constant on the segment")
    return SegmentReport(None, None, "undecided, tighten eps")


def segment_detector_u_image(X: BasisSpace, xu: Sequence, xv: Sequence,
                             which: str = "I") -> SegmentReport:
    """Constancy on [U xu, U xv] in the untruncated calculus; exact.

    Both renormings agree with ||.||_X on the image of U, so the segment is
    flat precisely when the base norm is constant on [xu, xv]; the
    structural conclusions (difference in UX for I, both endpoints in UX
    for II) hold by construction and are reported as such.
    """
    if which not in ("I", "II"):
        raise ValueError("which must be 'I' or 'II'")
    a = [mpq(c) for c in xu]
    b = [mpq(c) for c in xv]
    if a == b:
        raise ValueError("segment endpoints must differ")
    if which == "II":
        na, nb_, nm = (norm_II_u_image(X, a), norm_II_u_image(X, b),
                       norm_II_u_image(X, [(p + q) / 2 for p, q in zip(a, b)]))
    else:
        na = mpq(X.eval_norm(a))
        nb_ = mpq(X.eval_norm(b))
        nm = mpq(X.eval_norm([(p + q) / 2 for p, q in zip(a, b)]))
    if na == nb_ == nm:
        return SegmentReport(True, True, "flat segment inside the U-image")
    return SegmentReport(False, True, "norm not constant on the segment")


# ---------------------------------------------------------------------------
# lemma verifiers


def verify_betabound(frame: RenormFrame, f: Sequence, d: int):
    """Check beta(f) <= (2/2^(2d)) ||f|| for f supported past index d; exact."""
    fs = frame.coords(f)
    if any(c != 0 for c in fs[:d]):
        raise ValueError("vector must be supported past index %d" % d)
    b2 = beta_sq(frame, fs)
    fn = frame.base.f_norm(fs)
    bound_sq = (mpq(2) / (1 << (2 * d))) ** 2 * fn * fn
    return b2 <= bound_sq, bound_sq - b2


def verify_alphabound(frame: RenormFrame, f: Sequence):
    """Check the strict bound alpha(f) < ||f|| for nonzero f; exact."""
    fs = frame.coords(f)
    if all(c == 0 for c in fs):
        raise ValueError("vector must be nonzero")
    a2 = alpha_sq(frame, fs)
    fn = frame.base.f_norm(fs)
    return a2 < fn * fn, fn * fn - a2


def verify_norm_I_sandwich(frame: RenormFrame, f: Sequence):
    """||f|| <= ||f||_I <= 2 ||f||, via squares; exact."""
    fs = frame.coords(f)
    fn = frame.base.f_norm(fs)
    n2 = norm_I_sq(frame, fs)
    return fn * fn <= n2 <= 4 * fn * fn


def verify_furthlemma_I(frame: RenormFrame, f: Sequence, d: int):
    """||f||_I >= ||P_d f||_I + 2^-(2d+7) ||f - P_d f||_I, certified.

    The three values are exact square roots; the comparison is decided on a
    certified enclosure tightened until conclusive, and the returned slack
    interval is sound.
    """
    fs = frame.coords(f)
    if not 1 <= d <= frame.D:
        raise ValueError("need 1 <= d <= D")
    head = frame.base.partial_sum(d, fs)
    tail = [a - b for a, b in zip(fs, head)]
    if all(c == 0 for c in tail):
        # the inequality degenerates to an exact equality of squares
        ok = norm_I_sq(frame, fs) >= norm_I_sq(frame, head)
        return ok, CertInterval.point(QZERO)
    lhs = norm_I(frame, fs)
    c = mpq(1, 1 << (2 * d + 7))
    eps = mpq(1, 1 << 40)
    while True:
        li = lhs.enclosure(eps)
        ri = norm_I(frame, head).enclosure(eps) + \
            norm_I(frame, tail).enclosure(eps).scaled(c)
        slack = li - ri
        if slack.lo >= 0:
            return True, slack
        if slack.hi < 0:
            return False, slack
        if eps < mpq(1, 1 << 512):
            return None, slack
        eps = eps * eps


def verify_norm_II_sandwich(frame: RenormFrame, f: Sequence):
    """||f|| <= ||f||_II <= 2 ||f||, decided exactly.

    The enclosure of rho cannot separate the lower bound when beta(f) is
    tiny, so both sides use the exact two-sided bounds of rho instead:
    rho >= (r + s)/2 >= r since ||f||_I >= ||f||, and rho <= max{r, s, t}
    <= 2r since ||f||_I <= 2||f|| and alpha(f) < ||f||.  The two-sided
    bound itself is sound for the implemented gauge: the functional
    (1/2, 1/2, 0) has support exactly 1 on the hull body, giving the lower
    bound by duality, and the cube inside the body gives the upper one.
    """
    fs = frame.coords(f)
    fn = frame.base.f_norm(fs)
    if fn == 0:
        return all(c == 0 for c in fs)
    s_sq = norm_I_sq(frame, fs)
    t_sq = alpha_sq(frame, fs)
    lower_ok = s_sq >= fn * fn
    upper_ok = s_sq <= 4 * fn * fn and t_sq <= 4 * fn * fn
    return lower_ok and upper_ok


def verify_furthlemma_II(frame: RenormFrame, f: Sequence, d: int, eps=None):
    """||f||_II >= ||P_d f||_II + 2^-(2d+7) ||f - P_d f||_II on enclosures.

    Returns (verdict, slack interval); verdict None means the enclosures at
    the requested width do not separate the two sides.
    """
    fs = frame.coords(f)
    if not 1 <= d <= frame.D:
        raise ValueError("need 1 <= d <= D")
    if eps is None:
        eps = frame.rho_eps
    head = frame.base.partial_sum(d, fs)
    tail = [a - b for a, b in zip(fs, head)]
    if all(c == 0 for c in tail):
        return True, CertInterval.point(QZERO)
    c = mpq(1, 1 << (2 * d + 7))
    lhs = norm_II(frame, fs, eps)
    rhs = norm_II(frame, head, eps) + norm_II(frame, tail, eps).scaled(c)
    slack = CertInterval(lhs.lo - rhs.hi, lhs.hi - rhs.lo)
    if slack.lo >= 0:
        return True, slack
    if slack.hi < 0:
        return False, slack
    return None, slack


# ---------------------------------------------------------------------------
# norm expression nodes


class RenormINorm:
    """||.||_I as a norm oracle over a serialized frame."""

    kind = "renorm_I"
    is_exact = True

    def __init__(self, frame: RenormFrame):
        self.frame = frame
        self.dim = frame.D

    def eval(self, x: Sequence):
        return norm_I(self.frame, x)

    def as_polytope(self):
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind, "frame": self.frame.base.to_json()}

    @staticmethod
    def _load(obj):
        return RenormINorm(RenormFrame(EmbeddingFrame.from_json(obj["frame"])))


class RenormIINorm:
    """||.||_II as a certified norm oracle over a serialized frame."""

    kind = "renorm_II"
    is_exact = False

    def __init__(self, frame: RenormFrame):
        self.frame = frame
        self.dim = frame.D

    def eval(self, x: Sequence):
        return norm_II(self.frame, x)

    def as_polytope(self):
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind, "frame": self.frame.base.to_json(),
                "rho_eps": str(self.frame.rho_eps)}

    @staticmethod
    def _load(obj):
        frame = RenormFrame(EmbeddingFrame.from_json(obj["frame"]),
                            mpq(obj.get("rho_eps", mpq(1, 10**9))))
        return RenormIINorm(frame)


register_norm_expr("renorm_I", RenormINorm._load)
register_norm_expr("renorm_II", RenormIINorm._load)
