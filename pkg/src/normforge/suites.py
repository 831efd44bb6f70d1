"""Deterministic verification suites behind the ``verify`` command.

Every suite draws its randomness from the configured seed only, keeps all
report payloads as exact "p/q" strings, and never records wall-clock data,
so reports are byte-identical across runs at a fixed seed.  A suite passes
only when it has zero failed and zero undecided checks.
"""

from __future__ import annotations

import json
import random
import zlib
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import renorming as rn
from .catalog import enumerated_ball
from .embedding import EmbeddingFrame, build_frame, l2x_norm, sandwich_constants, \
    verify_u_isometry
from .interpolation import InterpolationSpec, build_A, interpolation_norm, \
    scale_ratio_sq, scale_series_constant, verify_interpproj
from .rational import CertInterval, ExactSqrt, rat_str
from .spaces import BasisSpace, EuclideanNorm, ell1_space, ellinf_space, \
    polytope_space
from .treespace import FiniteTree, b_norm, b_segment_check, chain, \
    check_level_gain, e_norm, renorm_constants, subtree_projection, verify_b001

QZERO = mpq(0)
QONE = mpq(1)

SUITE_NAMES = [
    "embedding-sandwich", "furthlemma", "betabound", "alphabound", "rho",
    "furthI", "furthII", "segments", "tree-monotone", "tree-equivalence",
    "b001", "interp-contraction", "interp-scale",
]

SUITE_ALIASES = {"rho-properties": "rho"}


@dataclass
class SuiteConfig:
    seed: int = 42
    samples: int = 200
    max_dim: int = 4
    eps: mpq = mpq(1, 10**9)

    def __post_init__(self):
        self.eps = mpq(self.eps)
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    def to_json(self) -> dict:
        return {"seed": self.seed, "samples": self.samples,
                "max_dim": self.max_dim, "eps": rat_str(self.eps)}


def _stringify(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (int,)):
        return v
    if isinstance(v, mpq):
        return rat_str(v)
    if isinstance(v, ExactSqrt):
        return "sqrt(%s)" % rat_str(v.square)
    if isinstance(v, CertInterval):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_stringify(u) for u in v]
    if isinstance(v, dict):
        return {str(k): _stringify(u) for k, u in v.items()}
    return str(v)


class SuiteReport:
    def __init__(self, name: str, config: SuiteConfig):
        self.name = name
        self.config = config
        self.records: List[dict] = []

    def add(self, check: str, verdict: str, **data):
        if verdict not in ("pass", "fail", "undecided"):
            raise ValueError("bad verdict %r" % verdict)
        rec = {"check": check, "verdict": verdict}
        if data:
            rec["data"] = _stringify(data)
        self.records.append(rec)

    def counts(self) -> Dict[str, int]:
        out = {"pass": 0, "fail": 0, "undecided": 0}
        for r in self.records:
            out[r["verdict"]] += 1
        return out

    @property
    def passed(self) -> bool:
        c = self.counts()
        return c["fail"] == 0 and c["undecided"] == 0

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "config": self.config.to_json(),
            "records": self.records,
            "summary": self.counts(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _rng(cfg: SuiteConfig, label: str) -> random.Random:
    return random.Random((cfg.seed << 32) ^ zlib.crc32(label.encode()))


def rand_rat(rng: random.Random, num: int = 12, den: int = 9) -> mpq:
    return mpq(rng.randint(-num, num), rng.randint(1, den))


def rand_vec(rng: random.Random, d: int, nonzero: bool = True) -> List[mpq]:
    while True:
        v = [rand_rat(rng) for _ in range(d)]
        if not nonzero or any(c != 0 for c in v):
            return v


# ---------------------------------------------------------------------------
# fixtures (cached per seed within the process)


_FIXTURES: Dict[Tuple, object] = {}


def _random_normalized_space(rng: random.Random) -> Tuple[int, BasisSpace]:
    """A random normalized monotone 2-dim space from the enumeration."""
    start = rng.randint(1, 30)
    l = start
    while True:
        ball = enumerated_ball(2, l)
        sp = polytope_space(ball, tags=("monotone",))
        if all(sp.eval_norm(sp.basis_vector(i)) == 1 for i in (1, 2)):
            return l, sp
        l += 1


def base_spaces(cfg: SuiteConfig) -> List[Tuple[str, BasisSpace]]:
    key = ("bases", cfg.seed)
    if key not in _FIXTURES:
        rng = _rng(cfg, "base-spaces")
        l, rand2 = _random_normalized_space(rng)
        _FIXTURES[key] = [
            ("dim1", ell1_space(1)),
            ("l1_2", ell1_space(2)),
            ("linf_2", ellinf_space(2)),
            ("rand2_l%d" % l, rand2),
        ]
    return _FIXTURES[key]


def frame_for(cfg: SuiteConfig, name: str, space: BasisSpace) -> EmbeddingFrame:
    D = 2 if space.dim == 1 else max(2, min(4, cfg.max_dim))
    key = ("frame", name, D)
    if key not in _FIXTURES:
        _FIXTURES[key] = build_frame(space, D)
    return _FIXTURES[key]


def renorm_frame_for(cfg: SuiteConfig, name: str, space: BasisSpace) -> rn.RenormFrame:
    key = ("rframe", name, cfg.seed, cfg.max_dim)
    if key not in _FIXTURES:
        _FIXTURES[key] = rn.RenormFrame(frame_for(cfg, name, space), cfg.eps)
    return _FIXTURES[key]


def _renorm_bases(cfg: SuiteConfig) -> List[Tuple[str, BasisSpace]]:
    """The two frames carrying the renorming checks (one of each dimension)."""
    bases = base_spaces(cfg)
    return [bases[0], bases[1]]


def _grow_tree(rng: random.Random, max_nodes: int = 20):
    depth = rng.choice([2, 3, 4])
    labels = ["a", "b", "c"]
    nodes: List[Tuple] = []
    frontier = [()]
    while frontier:
        parent = frontier.pop(0)
        if len(parent) >= depth:
            continue
        k = rng.randint(1, 2)
        for lab in labels[:k]:
            child = parent + (lab,)
            if len(nodes) < max_nodes:
                nodes.append(child)
                frontier.append(child)
    return nodes


def random_trees(cfg: SuiteConfig, count: int = 5):
    key = ("trees", cfg.seed, count)
    if key in _FIXTURES:
        return _FIXTURES[key]
    rng = _rng(cfg, "trees")
    out = []
    for t in range(count):
        nodes = _grow_tree(rng)
        depth = max(len(n) for n in nodes)
        kind = rng.choice(["l1", "l2"])
        if kind == "l1":
            mother = ell1_space(depth)
            spaces = {l: polytope_space(mother.as_polytope().section(l))
                      for l in range(1, depth + 1)}
        else:
            spaces = {l: BasisSpace(l, EuclideanNorm(l))
                      for l in range(1, depth + 1)}
        leaves = [n for n in nodes if not any(len(m) == len(n) + 1 and m[:len(n)] == n
                                              for m in nodes)]
        branch = {leaf: spaces[len(leaf)] for leaf in leaves}
        tree = FiniteTree(nodes, branch)
        constants = renorm_constants(depth)
        out.append(("tree%d_%s" % (t, kind), tree, constants))
    _FIXTURES[key] = out
    return out


def rand_subtree(rng: random.Random, tree: FiniteTree) -> List[Tuple]:
    picked = set()
    for n in tree.nodes:
        if len(n) == 1:
            if rng.random() < mpq(7, 10):
                picked.add(n)
        elif n[:-1] in picked and rng.random() < mpq(7, 10):
            picked.add(n)
    if not picked:
        picked.add(tree.nodes[0])
    return sorted(picked, key=lambda n: (len(n), n))


def rand_tree_vec(rng: random.Random, tree: FiniteTree) -> Dict[Tuple, mpq]:
    v = {}
    for n in tree.nodes:
        if rng.random() < mpq(3, 4):
            c = rand_rat(rng)
            if c != 0:
                v[n] = c
    if not v:
        v[tree.nodes[0]] = QONE
    return v


# ---------------------------------------------------------------------------
# suites


def suite_embedding_sandwich(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("embedding-sandwich", cfg)
    rng = _rng(cfg, "embedding-sandwich")
    for name, X in base_spaces(cfg):
        frame = frame_for(cfg, name, X)
        rep.add("find_ld:%s" % name, "pass",
                l_values=[str(l) if l < 10**6 else "structured(%d digits)" % len(str(l))
                          for l in frame.l_values])
        D = frame.D
        nv = max(8, cfg.samples // (2 * D))
        for d in range(1, D + 1):
            c1, c2 = sandwich_constants(d)
            ball = frame.balls[d - 1]
            vectors = [list(g) for g in ball.generators]
            for _ in range(nv):
                vectors.append(rand_vec(rng, d))
            min_lo = min_hi = None
            bad = 0
            for v in vectors:
                lv = ball.gauge(v)
                l2sq = l2x_norm(X, d, v).square
                lo_slack = lv * lv - c1 * c1 * l2sq
                hi_slack = c2 * c2 * l2sq - lv * lv
                if lo_slack < 0 or hi_slack < 0:
                    bad += 1
                min_lo = lo_slack if min_lo is None else min(min_lo, lo_slack)
                min_hi = hi_slack if min_hi is None else min(min_hi, hi_slack)
            rep.add("sandwich:%s:d%d" % (name, d), "pass" if bad == 0 else "fail",
                    vectors=len(vectors), violations=bad,
                    min_lower_slack_sq=min_lo, min_upper_slack_sq=min_hi)
        # the hull norm window (7/8) l2(X) <= ||.||_F <= l2(X)
        bad = 0
        for _ in range(nv):
            f = rand_vec(rng, D)
            fn = frame.f_norm(f)
            l2sq = frame.l2x(f).square
            if not (mpq(49, 64) * l2sq <= fn * fn <= l2sq):
                bad += 1
        rep.add("hull-window:%s" % name, "pass" if bad == 0 else "fail",
                vectors=nv, violations=bad)
        # operator checks: TU identity, U isometry, T contraction
        bad_tu = bad_u = bad_t = 0
        for _ in range(nv):
            x = rand_vec(rng, X.dim)
            w = frame.operator_U(x)
            tu = frame.operator_T(w)
            want = [mpq(4, 3) * frame.tu_scale() * mpq(c) for c in x]
            if tu != want:
                bad_tu += 1
            ok, _cert = verify_u_isometry(frame, x)
            if not ok:
                bad_u += 1
        for _ in range(nv):
            f = rand_vec(rng, D)
            tsq = frame.t_norm(f).square
            fn = frame.f_norm(f)
            if tsq > fn * fn:
                bad_t += 1
        rep.add("operators:%s" % name,
                "pass" if bad_tu == bad_u == bad_t == 0 else "fail",
                tu_violations=bad_tu, u_isometry_violations=bad_u,
                t_contraction_violations=bad_t, vectors=nv)
    return rep


def suite_furthlemma(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("furthlemma", cfg)
    rng = _rng(cfg, "furthlemma")
    for name, X in _renorm_bases(cfg):
        frame = frame_for(cfg, name, X)
        nv = max(8, cfg.samples // frame.D)
        for n in range(1, frame.D + 1):
            bad = 0
            min_slack = None
            for _ in range(nv):
                f = rand_vec(rng, frame.D)
                ok, slack = frame.verify_furthlemma(f, n)
                if not ok:
                    bad += 1
                min_slack = slack if min_slack is None else min(min_slack, slack)
            rep.add("furthlemma:%s:n%d" % (name, n),
                    "pass" if bad == 0 else "fail",
                    vectors=nv, violations=bad, min_slack=min_slack)
    return rep


def suite_betabound(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("betabound", cfg)
    rng = _rng(cfg, "betabound")
    for name, X in _renorm_bases(cfg):
        rf = renorm_frame_for(cfg, name, X)
        D = rf.D
        for d in range(1, D):
            nv = max(8, cfg.samples // (D - 1))
            bad = 0
            min_slack = None
            for _ in range(nv):
                f = [QZERO] * d + rand_vec(rng, D - d)
                ok, slack = rn.verify_betabound(rf, f, d)
                if not ok:
                    bad += 1
                min_slack = slack if min_slack is None else min(min_slack, slack)
            rep.add("betabound:%s:d%d" % (name, d),
                    "pass" if bad == 0 else "fail",
                    vectors=nv, violations=bad, min_slack_sq=min_slack)
        # the finite vanishing-difference characterization of beta = 0
        bad = 0
        for _ in range(cfg.samples):
            f = rand_vec(rng, D)
            b0 = rn.beta_sq(rf, f) == 0
            rels = rn.beta_relations(rf, f)
            if b0 != (not rels):
                bad += 1
            if b0 and any(c != 0 for c in f):
                bad += 1  # nonzero truncated vectors always have beta > 0
        rep.add("betanull-relations:%s" % name, "pass" if bad == 0 else "fail",
                vectors=cfg.samples, violations=bad)
        rep.add("betanull-u-image:%s" % name,
                "pass" if rn.beta_u_image_is_zero([QONE] * X.dim) else "fail")
    return rep


def suite_alphabound(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("alphabound", cfg)
    rng = _rng(cfg, "alphabound")
    for name, X in _renorm_bases(cfg):
        rf = renorm_frame_for(cfg, name, X)
        bad = 0
        min_slack = None
        for _ in range(cfg.samples):
            f = rand_vec(rng, rf.D)
            ok, slack = rn.verify_alphabound(rf, f)
            if not ok:
                bad += 1
            min_slack = slack if min_slack is None else min(min_slack, slack)
        rep.add("alphabound:%s" % name, "pass" if bad == 0 else "fail",
                vectors=cfg.samples, violations=bad, min_slack_sq=min_slack)
        c = rand_rat(rng)
        anchor = rn.alpha(rf, [c] + [QZERO] * (rf.D - 1))
        rep.add("alpha-anchor:%s" % name,
                "pass" if anchor == abs(c) / 4 else "fail", coefficient=c)
    return rep


def _rho_interval(triple, eps):
    return rn.rho(triple[0], triple[1], triple[2], eps)


def suite_rho(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("rho", cfg)
    rng = _rng(cfg, "rho")
    eps0 = mpq(1, 10**6)
    # anchors
    sqrt2_lo = mpq(1, 2) + mpq(70710678118, 10**11)
    sqrt2_hi = mpq(1, 2) + mpq(70710678119, 10**11)
    for label, triple, lo, hi in [
        ("rho(1,1,1)=1", (QONE, QONE, QONE), QONE, QONE),
        ("rho(1,1,0)=1", (QONE, QONE, QZERO), QONE, QONE),
        ("rho(2,0,0)=1/2+sqrt2/2", (mpq(2), QZERO, QZERO), sqrt2_lo, sqrt2_hi),
    ]:
        iv = _rho_interval(triple, eps0)
        ok = iv.lo <= hi and lo <= iv.hi and iv.width <= eps0
        rep.add("anchor:%s" % label, "pass" if ok else "fail", enclosure=iv)

    n = cfg.samples
    bad1 = bad2 = bad3 = bad4 = und3 = 0
    for _ in range(n):
        r = abs(rand_rat(rng)) + mpq(rng.randint(0, 3))
        s = abs(rand_rat(rng)) + mpq(rng.randint(0, 3))
        t = abs(rand_rat(rng)) + mpq(rng.randint(0, 3))
        # bullet 1: (|r|+|s|)/2 <= rho <= max
        lb = (r + s) / 2
        ub = max(r, s, t)
        iv = _rho_interval((r, s, t), eps0)
        if iv.width > eps0 or iv.hi < lb or iv.lo > ub:
            bad1 += 1
        # bullet 2: coordinatewise monotone on the positive octant
        i = rng.randrange(3)
        delta = abs(rand_rat(rng)) + mpq(1, 4)
        hi_triple = [r, s, t]
        hi_triple[i] += delta
        iv2 = _rho_interval(tuple(hi_triple), eps0)
        proven = iv2.lo >= iv.hi or rn.rho_dominates(hi_triple, (r, s, t))
        if iv2.hi < iv.lo or not proven:
            bad2 += 1
        # bullet 4: the quarter-slope bound in the first coordinate
        if not rn.rho_slope_certificate(r + delta, s, t, r):
            bad4 += 1
    for _ in range(n):
        # bullet 3: strict increase in t when 0 < r < s
        r = abs(rand_rat(rng)) + mpq(1, 8)
        s = r * (1 + abs(rand_rat(rng)) + QONE)
        t = abs(rand_rat(rng)) + mpq(1, 8)
        t2 = t + abs(rand_rat(rng)) + mpq(1, 2)
        eps = eps0
        verdict = None
        while eps >= mpq(1, 10**14):
            a = _rho_interval((r, s, t), eps)
            b = _rho_interval((r, s, t2), eps)
            if a.hi < b.lo:
                verdict = True
                break
            eps = eps / 1000
        if verdict is None:
            und3 += 1
    rep.add("bullet1-two-sided", "pass" if bad1 == 0 else "fail",
            samples=n, violations=bad1)
    rep.add("bullet2-monotone", "pass" if bad2 == 0 else "fail",
            samples=n, violations=bad2)
    rep.add("bullet3-strict-in-t",
            "pass" if bad3 == 0 and und3 == 0 else ("undecided" if bad3 == 0 else "fail"),
            samples=n, violations=bad3, undecided=und3)
    rep.add("bullet4-slope", "pass" if bad4 == 0 else "fail",
            samples=n, violations=bad4)
    return rep


def suite_furthI(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("furthI", cfg)
    rng = _rng(cfg, "furthI")
    for name, X in _renorm_bases(cfg):
        rf = renorm_frame_for(cfg, name, X)
        nv = max(8, cfg.samples // rf.D)
        for d in range(1, rf.D + 1):
            bad = und = 0
            for _ in range(nv):
                f = rand_vec(rng, rf.D)
                ok, _slack = rn.verify_furthlemma_I(rf, f, d)
                if ok is None:
                    und += 1
                elif not ok:
                    bad += 1
            verdict = "pass" if bad == 0 and und == 0 else \
                ("fail" if bad else "undecided")
            rep.add("furthI:%s:d%d" % (name, d), verdict,
                    vectors=nv, violations=bad, undecided=und)
        bad = 0
        for _ in range(nv):
            f = rand_vec(rng, rf.D)
            if not rn.verify_norm_I_sandwich(rf, f):
                bad += 1
        rep.add("normI-sandwich:%s" % name, "pass" if bad == 0 else "fail",
                vectors=nv, violations=bad)
    return rep


def suite_furthII(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("furthII", cfg)
    rng = _rng(cfg, "furthII")
    for name, X in _renorm_bases(cfg):
        rf = renorm_frame_for(cfg, name, X)
        nv = max(8, cfg.samples // rf.D)
        for d in range(1, rf.D + 1):
            bad = und = 0
            for _ in range(nv):
                f = rand_vec(rng, rf.D)
                ok, _slack = rn.verify_furthlemma_II(rf, f, d, cfg.eps)
                if ok is None:
                    und += 1
                elif not ok:
                    bad += 1
            verdict = "pass" if bad == 0 and und == 0 else \
                ("fail" if bad else "undecided")
            rep.add("furthII:%s:d%d" % (name, d), verdict,
                    vectors=nv, violations=bad, undecided=und)
        bad = 0
        for _ in range(nv):
            f = rand_vec(rng, rf.D)
            if not rn.verify_norm_II_sandwich(rf, f):
                bad += 1
        rep.add("normII-sandwich:%s" % name, "pass" if bad == 0 else "fail",
                vectors=nv, violations=bad)
        # the U-image value collapse: ||Ux||_II = ||x||_X
        bad = 0
        for _ in range(8):
            x = rand_vec(rng, X.dim)
            if rn.norm_II_u_image(X, x) != X.eval_norm(x):
                bad += 1
        rep.add("operUII:%s" % name, "pass" if bad == 0 else "fail", vectors=8)
    return rep


def suite_segments(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("segments", cfg)
    rng = _rng(cfg, "segments")
    # constructed flat segments in the U-image calculus (flat-face base norm)
    flat_base = ellinf_space(2)
    for which in ("I", "II"):
        r = rn.segment_detector_u_image(flat_base, [QONE, mpq(-1, 2)],
                                        [QONE, mpq(1, 2)], which)
        ok = r.constant is True and r.conclusion_holds is True
        rep.add("flat-u-image:%s" % which, "pass" if ok else "fail",
                detail=r.detail)
    # constructed flat segment of the quadratic tree norm
    tree = FiniteTree([("a",), ("a", "b")], {("a", "b"): ellinf_space(2)})
    r = b_segment_check(tree, renorm_constants(2),
                        {("a",): QONE, ("a", "b"): mpq(-1, 2)},
                        {("a",): QONE, ("a", "b"): mpq(1, 2)})
    ok = r.constant is True and r.conclusion_holds is True
    rep.add("flat-tree-B", "pass" if ok else "fail", leaf=r.leaf, detail=r.detail)

    # random non-flat segments must never be flagged constant
    for name, X in _renorm_bases(cfg):
        rf = renorm_frame_for(cfg, name, X)
        for which in ("I", "II"):
            bad = und = 0
            nv = max(8, cfg.samples // 2)
            for _ in range(nv):
                u = rand_vec(rng, rf.D)
                v = rand_vec(rng, rf.D)
                if u == v:
                    continue
                r = rn.segment_detector(rf, u, v, which, cfg.eps)
                if r.constant is None:
                    und += 1
                elif r.constant and not r.conclusion_holds:
                    bad += 1
            verdict = "pass" if bad == 0 and und == 0 else \
                ("fail" if bad else "undecided")
            rep.add("random-%s:%s" % (which, name), verdict,
                    vectors=nv, false_constancy=bad, undecided=und)
    trees = random_trees(cfg)
    bad = 0
    nv = cfg.samples
    for i in range(nv):
        tname, tree, consts = trees[i % len(trees)]
        u = rand_tree_vec(rng, tree)
        v = rand_tree_vec(rng, tree)
        if u == v:
            continue
        r = b_segment_check(tree, consts, u, v)
        if r.constant and not r.conclusion_holds:
            bad += 1
    rep.add("random-tree-B", "pass" if bad == 0 else "fail",
            vectors=nv, false_constancy=bad)
    return rep


def suite_tree_monotone(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("tree-monotone", cfg)
    rng = _rng(cfg, "tree-monotone")
    trees = random_trees(cfg)
    per = max(10, cfg.samples // len(trees))
    for tname, tree, consts in trees:
        bad_e = bad_b = 0
        for _ in range(per):
            s = rand_subtree(rng, tree)
            x = rand_tree_vec(rng, tree)
            px = subtree_projection(tree, s, x)
            ev_x = e_norm(tree, x)
            ev_p = e_norm(tree, px) if px else QZERO
            sq_x = ev_x.square if isinstance(ev_x, ExactSqrt) else mpq(ev_x) ** 2
            sq_p = ev_p.square if isinstance(ev_p, ExactSqrt) else mpq(ev_p) ** 2
            if sq_p > sq_x:
                bad_e += 1
            bx = b_norm(tree, consts, x)
            bp = b_norm(tree, consts, px) if px else ExactSqrt(QZERO)
            if bp.square > bx.square:
                bad_b += 1
        rep.add("contraction:%s" % tname,
                "pass" if bad_e == 0 and bad_b == 0 else "fail",
                pairs=per, e_violations=bad_e, b_violations=bad_b)
    return rep


def suite_tree_equivalence(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("tree-equivalence", cfg)
    rng = _rng(cfg, "tree-equivalence")
    trees = random_trees(cfg)
    per = max(10, cfg.samples // len(trees))
    for tname, tree, consts in trees:
        # the level-gain inequality must hold on every branch space
        ok_b001 = all(verify_b001(tree.branch_norms[leaf],
                                  consts[:len(leaf)])[0]
                      for leaf in tree.leaves)
        rep.add("branch-b001:%s" % tname, "pass" if ok_b001 else "fail")
        bad_e = bad_b = 0
        for _ in range(per):
            leaf = tree.leaves[rng.randrange(len(tree.leaves))]
            coeffs = rand_vec(rng, len(leaf))
            x = {p: c for p, c in zip(chain(leaf), coeffs) if c != 0}
            if not x:
                continue
            branch_val = tree.branch_norms[leaf].eval_norm(
                tree.chain_vector(leaf, x))
            bsq = branch_val.square if isinstance(branch_val, ExactSqrt) \
                else mpq(branch_val) ** 2
            ev = e_norm(tree, x)
            esq = ev.square if isinstance(ev, ExactSqrt) else mpq(ev) ** 2
            if esq != bsq:
                bad_e += 1
            if b_norm(tree, consts, x).square != bsq:
                bad_b += 1
        rep.add("chain-fidelity:%s" % tname,
                "pass" if bad_e == 0 and bad_b == 0 else "fail",
                vectors=per, e_mismatch=bad_e, b_mismatch=bad_b)
    return rep


def _level_gain_II_certified(rf: rn.RenormFrame, constants, f, eps):
    """Certified check of the level-gain inequality for the second renorming."""
    fs = rf.coords(f)
    for n in range(1, rf.D + 1):
        cn = constants[n - 1]
        rhs_extra = cn * cn * fs[n - 1] * fs[n - 1]
        if fs[n - 1] == 0:
            continue  # both sides coincide exactly and the extra term vanishes
        cur_eps = eps
        while True:
            cur = rn.norm_II(rf, rf.base.partial_sum(n, fs), cur_eps)
            prev = rn.norm_II(rf, rf.base.partial_sum(n - 1, fs), cur_eps)
            if cur.lo * cur.lo >= prev.hi * prev.hi + rhs_extra:
                break
            if cur.hi * cur.hi < prev.lo * prev.lo + rhs_extra:
                return False, n
            cur_eps = cur_eps / 1000
            if cur_eps < mpq(1, 10**16):
                return None, n
    return True, None


def suite_b001(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("b001", cfg)
    rng = _rng(cfg, "b001")
    ok, slack, _w = verify_b001(BasisSpace(3, EuclideanNorm(3)), [QONE] * 3)
    rep.add("euclid-c1", "pass" if ok else "fail", min_slack_sq=slack)
    ok, slack, _w = verify_b001(ell1_space(3), [QONE] * 3)
    rep.add("ell1-c1", "pass" if ok else "fail", min_slack_sq=slack)
    # negative control: a flat-face norm fails for every positive constant
    ok, slack, wit = check_level_gain(ellinf_space(2), renorm_constants(2),
                                      [QONE, QONE])
    rep.add("ellinf-negative-control", "pass" if not ok and wit == 2 else "fail",
            witness_level=wit, min_slack_sq=slack)
    for name, X in _renorm_bases(cfg):
        rf = renorm_frame_for(cfg, name, X)
        consts = renorm_constants(rf.D)
        space_I = BasisSpace(rf.D, rn.RenormINorm(rf))
        bad = 0
        min_slack = None
        for _ in range(cfg.samples):
            f = rand_vec(rng, rf.D)
            ok, slack, _n = check_level_gain(space_I, consts, f)
            if not ok:
                bad += 1
            min_slack = slack if min_slack is None else min(min_slack, slack)
        rep.add("renormI:%s" % name, "pass" if bad == 0 else "fail",
                vectors=cfg.samples, violations=bad, min_slack_sq=min_slack)
        bad = und = 0
        nv = max(8, cfg.samples // 4)
        for _ in range(nv):
            f = rand_vec(rng, rf.D)
            ok, _n = _level_gain_II_certified(rf, consts, f, cfg.eps)
            if ok is None:
                und += 1
            elif not ok:
                bad += 1
        verdict = "pass" if bad == 0 and und == 0 else \
            ("fail" if bad else "undecided")
        rep.add("renormII:%s" % name, verdict,
                vectors=nv, violations=bad, undecided=und)
    return rep


def _interp_specs(cfg: SuiteConfig):
    key = ("interp", cfg.seed)
    if key in _FIXTURES:
        return _FIXTURES[key]
    one = ell1_space(1)
    spec1 = InterpolationSpec(one, one.as_polytope())
    tree2 = FiniteTree([("a",), ("a", "b"), ("a", "c")],
                       {("a", "b"): ell1_space(2), ("a", "c"): ell1_space(2)})
    tree3 = FiniteTree([("a",), ("b",), ("a", "a"), ("a", "a", "a")],
                       {("a", "a", "a"): ell1_space(3), ("b",): ell1_space(1)})
    out = [("dim1", spec1, None), ("tree2", build_A(tree2), tree2),
           ("tree3", build_A(tree3), tree3)]
    _FIXTURES[key] = out
    return out


def _branch_positions(tree: FiniteTree, leaf) -> List[int]:
    return [tree.index[p] for p in chain(leaf)]


def suite_interp_contraction(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("interp-contraction", cfg)
    rng = _rng(cfg, "interp-contraction")
    for name, spec, tree in _interp_specs(cfg):
        projections = [spec.X.dim]
        if spec.X.dim > 1:
            projections.extend(range(1, spec.X.dim))
        if tree is not None:
            projections.extend(tuple(_branch_positions(tree, leaf))
                               for leaf in tree.leaves)
        nv = max(6, cfg.samples // (4 * max(1, len(projections))))
        for proj in projections:
            vectors = [rand_vec(rng, spec.X.dim) for _ in range(nv)]
            r = verify_interpproj(spec, proj, vectors, N=10)
            ok = r.p_contracts_x and r.p_contracts_w and r.level_contraction_ok
            rep.add("contraction:%s:%s" % (name, r.positions),
                    "pass" if ok else "fail",
                    preconditions=[r.p_contracts_x, r.p_contracts_w],
                    level_ok=r.level_contraction_ok, vectors=nv)
    return rep


def suite_interp_scale(cfg: SuiteConfig) -> SuiteReport:
    rep = SuiteReport("interp-scale", cfg)
    rng = _rng(cfg, "interp-scale")
    oracle = scale_series_constant()
    name, spec1, _tree = _interp_specs(cfg)[0]
    bad = 0
    for _ in range(8):
        x = rand_rat(rng)
        if x == 0:
            continue
        iv = interpolation_norm(spec1, [x], mpq(1, 10**10))
        want = oracle.scaled(abs(x))
        if not iv.overlaps(want):
            bad += 1
    rep.add("dim1-constant", "pass" if bad == 0 else "fail",
            oracle=oracle, violations=bad)
    for name, spec, tree in _interp_specs(cfg):
        if tree is None:
            continue
        for leaf in tree.leaves:
            pos = tuple(_branch_positions(tree, leaf))
            vectors = [rand_vec(rng, spec.X.dim) for _ in range(6)]
            r = verify_interpproj(spec, pos, vectors, N=10)
            ok = r.scale_law_applicable and r.scale_law_ok
            rep.add("branch-scale:%s:%s" % (name, list(pos)),
                    "pass" if ok else "fail", detail=r.detail)
            # exact ratio equality across sample pairs (variance zero)
            ratios = set()
            for _ in range(13):
                x = rand_vec(rng, spec.X.dim)
                y = [c if i in set(pos) else QZERO for i, c in enumerate(x)]
                if all(c == 0 for c in y):
                    continue
                ratios.add(scale_ratio_sq(spec, pos, x, N=10))
            rep.add("branch-ratio-constant:%s:%s" % (name, list(pos)),
                    "pass" if len(ratios) <= 1 else "fail",
                    distinct_ratios=len(ratios))
    return rep


SUITES = {
    "embedding-sandwich": suite_embedding_sandwich,
    "furthlemma": suite_furthlemma,
    "betabound": suite_betabound,
    "alphabound": suite_alphabound,
    "rho": suite_rho,
    "furthI": suite_furthI,
    "furthII": suite_furthII,
    "segments": suite_segments,
    "tree-monotone": suite_tree_monotone,
    "tree-equivalence": suite_tree_equivalence,
    "b001": suite_b001,
    "interp-contraction": suite_interp_contraction,
    "interp-scale": suite_interp_scale,
}


def run_suite(name: str, config: SuiteConfig) -> SuiteReport:
    name = SUITE_ALIASES.get(name, name)
    if name not in SUITES:
        raise KeyError("unknown suite %r; known: %s" % (name, ", ".join(SUITE_NAMES)))
    return SUITES[name](config)


def run_all(config: SuiteConfig) -> List[SuiteReport]:
    return [run_suite(n, config) for n in SUITE_NAMES]
