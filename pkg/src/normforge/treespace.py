"""Finite tree spaces: branch-supremum norms and their quadratic variants.

A tree is a finite set of nonempty label tuples closed under nonempty
initial segments.  Leaves stand in for branches; each carries a normed
space whose dimension is the leaf's length, and spaces of two leaves must
agree (exactly) on the span of the first l coordinates when the leaves
share a length-l prefix.  The tree norm of a finitely supported vector is
the maximum over leaves of the branch norm of the vector's restriction to
the leaf's chain; the quadratic variant adds a weighted ell_2 penalty over
the off-chain coordinates under the square root.

All values have rational squares (branch norms are polytope gauges or
Euclidean), so maxima, attaining leaves, and flat-segment tests are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .geometry import NotANormError, PolytopeBall
from .rational import ExactSqrt, parse_rat, rat_str
from .spaces import BasisSpace, register_norm_expr

QZERO = mpq(0)

Node = Tuple


class CoherenceError(ValueError):
    """Two branch spaces disagree on a shared chain prefix."""


def chain(leaf: Node) -> List[Node]:
    return [leaf[:i] for i in range(1, len(leaf) + 1)]


def common_prefix_len(a: Node, b: Node) -> int:
    l = 0
    for x, y in zip(a, b):
        if x != y:
            break
        l += 1
    return l


class FiniteTree:
    """Immutable finite tree with per-leaf branch spaces.

    ``nodes`` must be closed under nonempty initial segments; the canonical
    coordinate order is (length, node), so partial sums in that order are
    again supported on prefix-closed sets.
    """

    def __init__(self, nodes: Sequence[Node], branch_norms: Dict[Node, BasisSpace]):
        node_set = {tuple(n) for n in nodes}
        if not node_set:
            raise ValueError("tree must be nonempty")
        for n in node_set:
            if len(n) == 0:
                raise ValueError("the empty tuple is not a tree node")
            for i in range(1, len(n)):
                if n[:i] not in node_set:
                    raise ValueError("node set not closed under initial segments: "
                                     "%r lacks %r" % (n, n[:i]))
        self.nodes: Tuple[Node, ...] = tuple(sorted(node_set, key=lambda n: (len(n), n)))
        self.index = {n: i for i, n in enumerate(self.nodes)}
        children = {n: [] for n in self.nodes}
        for n in self.nodes:
            if len(n) > 1:
                children[n[:-1]].append(n)
        self.leaves: Tuple[Node, ...] = tuple(sorted(
            n for n in self.nodes if not children[n]))
        self.branch_norms = {tuple(k): v for k, v in branch_norms.items()}
        for leaf in self.leaves:
            sp = self.branch_norms.get(leaf)
            if sp is None:
                raise ValueError("missing branch space for leaf %r" % (leaf,))
            if sp.dim != len(leaf):
                raise ValueError("branch space dimension disagrees with leaf %r" % (leaf,))
        self._check_coherence()

    def _check_coherence(self):
        for a, b in itertools.combinations(self.leaves, 2):
            l = common_prefix_len(a, b)
            if l >= 1:
                if not self.branch_norms[a].one_equivalent(self.branch_norms[b], l):
                    raise CoherenceError(
                        "branch spaces of %r and %r disagree on their shared "
                        "prefix of length %d" % (a, b, l))

    @property
    def dim(self) -> int:
        return len(self.nodes)

    def check_support(self, x: Dict[Node, mpq]):
        for n in x:
            if tuple(n) not in self.index:
                raise ValueError("vector supported outside the tree at %r" % (n,))

    def vec_from_coords(self, coords: Sequence) -> Dict[Node, mpq]:
        if len(coords) != self.dim:
            raise ValueError("coordinate vector of wrong length")
        return {n: mpq(c) for n, c in zip(self.nodes, coords) if mpq(c) != 0}

    def coords(self, x: Dict[Node, mpq]) -> List[mpq]:
        self.check_support(x)
        out = [QZERO] * self.dim
        for n, c in x.items():
            out[self.index[tuple(n)]] = mpq(c)
        return out

    def chain_vector(self, leaf: Node, x: Dict[Node, mpq]) -> List[mpq]:
        return [mpq(x.get(p, QZERO)) for p in chain(leaf)]

    def is_subtree(self, s) -> bool:
        ss = {tuple(n) for n in s}
        if not ss <= set(self.nodes):
            return False
        return all(n[:i] in ss for n in ss for i in range(1, len(n)))

    def to_json(self) -> dict:
        labels = sorted({str(l) for n in self.nodes for l in n})
        return {
            "labels": labels,
            "nodes": [[str(l) for l in n] for n in self.nodes],
            "branch_norms": {"/".join(str(l) for l in leaf): sp.to_json()
                             for leaf, sp in self.branch_norms.items()},
        }

    @staticmethod
    def from_json(obj: dict) -> "FiniteTree":
        nodes = [tuple(n) for n in obj["nodes"]]
        norms = {tuple(k.split("/")): BasisSpace.from_json(v)
                 for k, v in obj["branch_norms"].items()}
        return FiniteTree(nodes, norms)


# ---------------------------------------------------------------------------
# norm evaluation


def _value_sq(v) -> mpq:
    """Rational square of a norm value (Rat or ExactSqrt)."""
    if isinstance(v, ExactSqrt):
        return v.square
    v = mpq(v)
    return v * v


def e_norm(tree: FiniteTree, x: Dict[Node, mpq]):
    """max over leaves of the branch norm of the chain restriction; exact."""
    tree.check_support(x)
    best = None
    best_sq = None
    for leaf in tree.leaves:
        val = tree.branch_norms[leaf].eval_norm(tree.chain_vector(leaf, x))
        sq = _value_sq(val)
        if best_sq is None or sq > best_sq:
            best, best_sq = val, sq
    return best


def subtree_projection(tree: FiniteTree, s, x: Dict[Node, mpq]) -> Dict[Node, mpq]:
    """Coordinate restriction of x to the subtree s."""
    if not tree.is_subtree(s):
        raise ValueError("not a subtree of this tree")
    ss = {tuple(n) for n in s}
    tree.check_support(x)
    return {n: mpq(c) for n, c in x.items() if tuple(n) in ss and mpq(c) != 0}


def _check_constants(tree: FiniteTree, constants: Sequence) -> List[mpq]:
    cs = [mpq(c) for c in constants]
    depth = max(len(n) for n in tree.nodes)
    if len(cs) < depth:
        raise ValueError("need a constant for every level up to %d" % depth)
    if any(c <= 0 for c in cs):
        raise ValueError("level constants must be positive")
    return cs


def b_norm_sq_at(tree: FiniteTree, constants: Sequence, x: Dict[Node, mpq],
                 leaf: Node) -> mpq:
    cs = _check_constants(tree, constants)
    prefixes = set(chain(leaf))
    val = tree.branch_norms[leaf].eval_norm(tree.chain_vector(leaf, x))
    total = _value_sq(val)
    for n, c in x.items():
        n = tuple(n)
        if n not in prefixes and mpq(c) != 0:
            cl = cs[len(n) - 1]
            total += cl * cl * mpq(c) * mpq(c)
    return total


def b_norm(tree: FiniteTree, constants: Sequence, x: Dict[Node, mpq],
           with_leaf: bool = False):
    """Quadratic branch norm: the chain value plus the off-chain penalty.

    Returns the value (an exact square root), or (value, attaining leaf)
    when ``with_leaf`` is set; among maximizing leaves the lexicographically
    lowest is reported.
    """
    tree.check_support(x)
    best_sq = None
    best_leaf = None
    for leaf in tree.leaves:
        sq = b_norm_sq_at(tree, constants, x, leaf)
        if best_sq is None or sq > best_sq:
            best_sq, best_leaf = sq, leaf
    val = ExactSqrt(best_sq)
    return (val, best_leaf) if with_leaf else val


# ---------------------------------------------------------------------------
# the level-gain inequality for branch spaces


def check_level_gain(space: BasisSpace, constants: Sequence, f: Sequence):
    """||pi_n f||^2 >= ||pi_(n-1) f||^2 + c_n^2 |f_n|^2 for all n; exact.

    Returns (ok, min slack, witness n or None).
    """
    cs = [mpq(c) for c in constants]
    if len(cs) < space.dim:
        raise ValueError("need a constant for every coordinate")
    fs = [mpq(c) for c in f]
    best_slack = None
    witness = None
    ok = True
    for n in range(1, space.dim + 1):
        cur = _value_sq(space.eval_norm(space.partial_sum(n, fs)))
        prev = _value_sq(space.eval_norm(space.partial_sum(n - 1, fs)))
        slack = cur - prev - cs[n - 1] * cs[n - 1] * fs[n - 1] * fs[n - 1]
        if best_slack is None or slack < best_slack:
            best_slack = slack
            if slack < 0:
                ok = False
                witness = n
    return ok, best_slack, witness


def verify_b001(space: BasisSpace, constants: Sequence, extra_vectors=()):
    """Check the level-gain inequality on ball generators and given vectors.

    Returns (ok, min slack, witness vector or None).
    """
    vectors = []
    ball = space.as_polytope()
    if ball is not None:
        vectors.extend(list(g) for g in ball.generators)
    for i in range(1, space.dim + 1):
        vectors.append(space.basis_vector(i))
    vectors.extend([mpq(c) for c in v] for v in extra_vectors)
    min_slack = None
    witness = None
    for v in vectors:
        ok, slack, _ = check_level_gain(space, constants, v)
        if min_slack is None or slack < min_slack:
            min_slack = slack
            if not ok:
                witness = v
    return witness is None, min_slack, witness


def renorm_constants(depth: int) -> List[mpq]:
    """The level constants 7 / 2^(2n+8) used with the quadratic renorming."""
    return [mpq(7, 1 << (2 * n + 8)) for n in range(1, depth + 1)]


# ---------------------------------------------------------------------------
# flat segments of the quadratic norm


@dataclass(frozen=True)
class BSegmentReport:
    constant: Optional[bool]
    conclusion_holds: Optional[bool]
    leaf: Optional[Node]
    detail: str


def b_segment_check(tree: FiniteTree, constants: Sequence,
                    u: Dict[Node, mpq], v: Dict[Node, mpq]) -> BSegmentReport:
    """Decide constancy of the quadratic norm on [u, v]; exact.

    On a flat segment the difference must live on the chain of the
    midpoint's attaining leaf, and the projection of the segment onto that
    chain must again be flat and non-degenerate; both facts are verified.
    """
    tree.check_support(u)
    tree.check_support(v)
    uu = {tuple(n): mpq(c) for n, c in u.items() if mpq(c) != 0}
    vv = {tuple(n): mpq(c) for n, c in v.items() if mpq(c) != 0}
    if uu == vv:
        raise ValueError("segment endpoints must differ")
    mid = dict(uu)
    for n, c in vv.items():
        mid[n] = mid.get(n, QZERO) + c
    mid = {n: c / 2 for n, c in mid.items() if c != 0}

    nu = b_norm(tree, constants, uu)
    nv = b_norm(tree, constants, vv)
    nm, leaf = b_norm(tree, constants, mid, with_leaf=True)
    if not (nu.square == nv.square == nm.square):
        return BSegmentReport(False, True, None, "norm not constant on the segment")

    prefixes = set(chain(leaf))
    support_diff = {n for n in set(uu) | set(vv)
                    if uu.get(n, QZERO) != vv.get(n, QZERO)}
    on_chain = support_diff <= prefixes
    pu = {n: c for n, c in uu.items() if n in prefixes}
    pv = {n: c for n, c in vv.items() if n in prefixes}
    pm = {n: c for n, c in mid.items() if n in prefixes}
    flat = (pu != pv and
            b_norm(tree, constants, pu).square ==
            b_norm(tree, constants, pv).square ==
            b_norm(tree, constants, pm).square)
    ok = on_chain and flat
    return BSegmentReport(True, ok, leaf,
                          "flat segment; difference %s the attaining chain, "
                          "projected segment %s"
                          % ("on" if on_chain else "off",
                             "flat and non-degenerate" if flat else "degenerate"))


# ---------------------------------------------------------------------------
# polytope extraction


def phi_ball(tree: FiniteTree) -> PolytopeBall:
    """co of the union of the branch balls, embedded along their chains."""
    gens = []
    for leaf in tree.leaves:
        ball = tree.branch_norms[leaf].as_polytope()
        if ball is None:
            raise NotANormError("branch space of %r has no polytope ball" % (leaf,))
        positions = [tree.index[p] for p in chain(leaf)]
        for g in ball.generators:
            vec = [QZERO] * tree.dim
            for pos, c in zip(positions, g):
                vec[pos] = c
            gens.append(vec)
    return PolytopeBall(tree.dim, gens, prune=True)


def e_ball(tree: FiniteTree) -> PolytopeBall:
    """Unit ball of the tree norm as a polytope, via lifted branch facets.

    The tree-norm ball is the set of vectors whose every chain restriction
    lies in the corresponding branch ball, i.e. the intersection of the
    lifted branch facet half-spaces; vertices are enumerated exactly.
    """
    normals = []
    for leaf in tree.leaves:
        ball = tree.branch_norms[leaf].as_polytope()
        if ball is None:
            raise NotANormError("branch space of %r has no polytope ball" % (leaf,))
        positions = [tree.index[p] for p in chain(leaf)]
        for u in ball.facets():
            vec = [QZERO] * tree.dim
            for pos, c in zip(positions, u):
                vec[pos] = c
            normals.append(tuple(vec))
    normals = sorted(set(normals))
    verts = PolytopeBall._vertices_from_h(tree.dim, normals)
    return PolytopeBall(tree.dim, verts, prune=True)


# ---------------------------------------------------------------------------
# norm expression nodes and space builders


class TreeENorm:
    """The branch-supremum tree norm as a norm oracle."""

    kind = "tree_E"
    is_exact = True

    def __init__(self, tree: FiniteTree):
        self.tree = tree
        self.dim = tree.dim
        self._ball = None

    def eval(self, x: Sequence):
        return e_norm(self.tree, self.tree.vec_from_coords(x))

    def as_polytope(self) -> Optional[PolytopeBall]:
        if self._ball is None:
            try:
                self._ball = e_ball(self.tree)
            except (NotANormError, ValueError):
                return None
        return self._ball

    def to_json(self) -> dict:
        return {"kind": self.kind, "tree": self.tree.to_json()}

    @staticmethod
    def _load(obj):
        return TreeENorm(FiniteTree.from_json(obj["tree"]))


class TreeBNorm:
    """The quadratic tree norm as a norm oracle."""

    kind = "tree_B"
    is_exact = True

    def __init__(self, tree: FiniteTree, constants: Sequence):
        self.tree = tree
        self.constants = _check_constants(tree, constants)
        self.dim = tree.dim

    def eval(self, x: Sequence):
        return b_norm(self.tree, self.constants, self.tree.vec_from_coords(x))

    def as_polytope(self):
        return None

    def to_json(self) -> dict:
        obj = {"kind": self.kind, "tree": self.tree.to_json()}
        obj["constants"] = [rat_str(c) for c in self.constants]
        return obj

    @staticmethod
    def _load(obj):
        return TreeBNorm(FiniteTree.from_json(obj["tree"]),
                         [parse_rat(c) for c in obj["constants"]])


register_norm_expr("tree_E", TreeENorm._load)
register_norm_expr("tree_B", TreeBNorm._load)


def tree_e_space(tree: FiniteTree) -> BasisSpace:
    return BasisSpace(tree.dim, TreeENorm(tree))


def tree_b_space(tree: FiniteTree, constants: Sequence) -> BasisSpace:
    return BasisSpace(tree.dim, TreeBNorm(tree, constants))
