"""Canonical enumeration of monotone rational norms and index machinery.

The enumeration at dimension d lists generator sets in canonical form
(sign-normalized, redundancy-free, lexicographically sorted) ordered by

* total encoding size (sum over generators and coordinates of
  bitlen(|num|) + bitlen(den), with size(0) = 1), then
* lexicographic order of the set's index tuple in the frozen vector stream,

and keeps exactly the sets that span R^d, are monotone, and equal their own
canonical form.  Since every norm has a unique canonical generator set, the
stream enumerates norms without repetition, and the (d, l) -> ball map is a
frozen, documented bijection onto its range.

Indices above ``STRUCTURED_BASE`` carry machine-built norms: an even offset
encodes the construction recipe itself (JSON bytes as a big integer), so
sandwich-search results at sizes far beyond exhaustive reach still have a
deterministic, self-describing index.  Odd offsets continue the exhaustive
stream.
"""

from __future__ import annotations

import itertools
import json
from typing import Dict, Iterator, List, Sequence, Tuple

from gmpy2 import mpq

from .geometry import NotANormError, PolytopeBall
from .rational import bit_size
from .spaces import BasisSpace, polytope_space

STRUCTURED_BASE = 10**6
DEFAULT_SCAN_BUDGET = 50_000

_QZERO = mpq(0)


class ScanBudgetExceeded(RuntimeError):
    def __init__(self, message, budget, last_index):
        super().__init__(message)
        self.budget = budget
        self.last_index = last_index


# ---------------------------------------------------------------------------
# frozen streams of rationals / vectors / generator sets


import functools


@functools.lru_cache(maxsize=None)
def rationals_of_size(s: int) -> List[mpq]:
    """All canonical rationals of encoding size s, in the frozen order."""
    if s < 1:
        return []
    if s == 1:
        return [_QZERO]
    out = []
    for b in range(1, s):
        a = s - b
        for den in range(1 << (b - 1), 1 << b):
            for num in range(1 << (a - 1), 1 << a):
                q = mpq(num, den)
                if q.numerator == num and q.denominator == den:
                    out.append(q)
                    out.append(-q)
    return out


@functools.lru_cache(maxsize=None)
def vectors_of_size(d: int, s: int) -> List[Tuple]:
    """Sign-normalized d-vectors of total size s, in the frozen order."""
    out = []

    def rec_full(prefix, remaining, budget):
        if remaining == 0:
            if budget == 0 and any(c != 0 for c in prefix):
                out.append(prefix)
            return
        lo = 1
        hi = budget - (remaining - 1)
        for cs in range(lo, hi + 1):
            for q in rationals_of_size(cs):
                rec_full(prefix + (q,), remaining - 1, budget - cs)

    rec_full((), d, s)
    # keep only sign-normalized representatives (first nonzero positive)
    norm = []
    for v in out:
        lead = next((c for c in v if c != 0), None)
        if lead is not None and lead > 0:
            norm.append(v)
    return norm


def _vector_stream(d: int, max_size: int) -> List[Tuple]:
    vecs = []
    for s in range(1, max_size + 1):
        vecs.extend(vectors_of_size(d, s))
    return vecs


def iter_gensets(d: int) -> Iterator[List[Tuple]]:
    """Candidate generator sets by (total size, index-tuple lex), frozen."""
    for total in itertools.count(d + 1):
        vecs = _vector_stream(d, total)
        sizes = [sum(bit_size(c) for c in v) for v in vecs]

        def rec(start: int, budget: int, chosen: List[Tuple]):
            if budget == 0:
                if chosen:
                    yield list(chosen)
                return
            for i in range(start, len(vecs)):
                if sizes[i] > budget:
                    continue
                chosen.append(vecs[i])
                yield from rec(i + 1, budget - sizes[i], chosen)
                chosen.pop()

        yield from rec(0, total, [])


def _is_canonical_monotone(d: int, gens: List[Tuple]):
    """Return the ball when gens is the canonical form of a monotone norm."""
    try:
        ball = PolytopeBall(d, gens, prune=True)
    except NotANormError:
        return None
    if ball.generators != tuple(sorted(gens)):
        return None  # a redundant or non-sorted presentation; skip duplicate
    space = polytope_space(ball)
    ok, _ = space.is_monotone()
    if not ok:
        return None
    return ball


class _Stream:
    __slots__ = ("balls", "gen", "work")

    def __init__(self, d: int):
        self.balls: List[PolytopeBall] = []
        self.gen = iter_gensets(d)
        self.work = 0


_streams: Dict[int, _Stream] = {}


def _stream(d: int) -> _Stream:
    if d not in _streams:
        _streams[d] = _Stream(d)
    return _streams[d]


def enumerated_ball(d: int, l: int, work_budget: int = 2_000_000) -> PolytopeBall:
    """The l-th ball of the exhaustive canonical stream at dimension d."""
    st = _stream(d)
    while len(st.balls) < l:
        if st.work >= work_budget:
            raise ScanBudgetExceeded(
                "enumeration work budget exceeded at dimension %d "
                "(%d candidates tried, %d norms found)" % (d, st.work, len(st.balls)),
                work_budget, len(st.balls))
        gens = next(st.gen)
        st.work += 1
        ball = _is_canonical_monotone(d, gens)
        if ball is not None:
            st.balls.append(ball)
    return st.balls[l - 1]


def rational_norm(d: int, l: int) -> BasisSpace:
    """The l-th monotone rational norm on R^d under the frozen enumeration."""
    if d < 1 or l < 1:
        raise ValueError("need d >= 1 and l >= 1")
    if l <= STRUCTURED_BASE:
        ball = enumerated_ball(d, l)
    else:
        offset = l - STRUCTURED_BASE
        if offset % 2 == 1:
            ball = enumerated_ball(d, STRUCTURED_BASE + (offset + 1) // 2)
        else:
            ball = decode_structured(d, offset // 2)
    return polytope_space(ball, tags=("monotone",))


def encode_structured(spec: dict) -> int:
    """Index of a machine-built norm: canonical JSON bytes as a big integer."""
    data = json.dumps(spec, sort_keys=True, separators=(",", ":")).encode()
    m = int.from_bytes(data, "big")
    return STRUCTURED_BASE + 2 * m


def decode_structured(d: int, m: int) -> PolytopeBall:
    from .l2approx import ball_from_recipe
    data = m.to_bytes((m.bit_length() + 7) // 8, "big")
    spec = json.loads(data.decode())
    ball = ball_from_recipe(spec)
    if ball.dim != d:
        raise ValueError("structured index encodes a norm of another dimension")
    return ball


# ---------------------------------------------------------------------------
# Cantor pairing and the sequence enumeration


def pi(i: int) -> Tuple[int, int]:
    """Diagonal bijection N -> N x N with pi(1) = (1,1), pi(2) = (1,2)."""
    if i < 1:
        raise ValueError("index must be positive")
    j = i - 1
    t = 0
    while (t + 1) * (t + 2) // 2 <= j:
        t += 1
    r = j - t * (t + 1) // 2
    return r + 1, t + 1 - r


def pi_inverse(n: int, k: int) -> int:
    if n < 1 or k < 1:
        raise ValueError("coordinates must be positive")
    dgn = n + k - 1
    return (dgn - 1) * dgn // 2 + n


def _sequences_of_weight(w: int) -> List[Tuple[int, ...]]:
    """Nonempty integer sequences with |eta| + sum(eta) = w, lex sorted."""
    out = []

    def rec(prefix, rem):
        if prefix and rem == 0:
            out.append(tuple(prefix))
        for v in range(1, rem):
            if rem - (v + 1) >= 0:
                prefix.append(v)
                rec(prefix, rem - (v + 1))
                prefix.pop()

    rec([], w)
    out.sort()
    return out


def varpi(i: int) -> Tuple[int, ...]:
    """The i-th nonempty sequence under weight-then-lex order (1-based)."""
    if i < 1:
        raise ValueError("index must be positive")
    seen = 0
    for w in itertools.count(2):
        seqs = _sequences_of_weight(w)
        if seen + len(seqs) >= i:
            return seqs[i - seen - 1]
        seen += len(seqs)


def varpi_inverse(eta: Sequence[int]) -> int:
    eta = tuple(int(v) for v in eta)
    if not eta or any(v < 1 for v in eta):
        raise ValueError("need a nonempty sequence of positive integers")
    w = len(eta) + sum(eta)
    seen = 0
    for ww in range(2, w):
        seen += len(_sequences_of_weight(ww))
    return seen + _sequences_of_weight(w).index(eta) + 1


def delta(phi_prefix: Sequence[int]) -> List[int]:
    """Strictly increasing index list of the prefixes of phi."""
    phi = list(phi_prefix)
    if not phi:
        raise ValueError("prefix must be nonempty")
    return [varpi_inverse(phi[: i + 1]) for i in range(len(phi))]


# ---------------------------------------------------------------------------
# the extension catalog {Z_eta}


_catalog_cache: Dict[Tuple[int, ...], BasisSpace] = {}


def catalog_space(eta: Sequence[int], scan_budget: int = DEFAULT_SCAN_BUDGET) -> BasisSpace:
    """Z_eta: dimension |eta|, each step the eta[-1]-th monotone extension."""
    eta = tuple(int(v) for v in eta)
    if not eta or any(v < 1 for v in eta):
        raise ValueError("need a nonempty sequence of positive integers")
    if eta in _catalog_cache:
        return _catalog_cache[eta]
    if len(eta) == 1:
        space = rational_norm(1, eta[0])
    else:
        parent = catalog_space(eta[:-1], scan_budget)
        d = len(eta)
        want = eta[-1]
        found = 0
        l = 0
        while True:
            l += 1
            if l > scan_budget:
                raise ScanBudgetExceeded(
                    "extension scan budget exceeded for %r" % (eta,), scan_budget, l - 1)
            cand = rational_norm(d, l)
            if cand.one_equivalent(parent, d - 1):
                found += 1
                if found == want:
                    space = cand
                    break
    _catalog_cache[eta] = space
    return space


def find_extension_index(eta: Sequence[int], ball: PolytopeBall,
                         scan_budget: int = DEFAULT_SCAN_BUDGET):
    """Bounded search for the child index j with Z_{eta^j} gauge-equal to ball.

    Returns (j, l) where l is the position in the dimension-(|eta|+1)
    enumeration; raises ScanBudgetExceeded when the bound is hit.
    """
    parent = catalog_space(eta, scan_budget)
    d = len(tuple(eta)) + 1
    if ball.dim != d:
        raise ValueError("extension ball has the wrong dimension")
    found = 0
    for l in range(1, scan_budget + 1):
        cand = rational_norm(d, l)
        if cand.one_equivalent(parent, d - 1):
            found += 1
            if cand.as_polytope().gauge_equal(ball):
                return found, l
    raise ScanBudgetExceeded(
        "no gauge-equal extension found within budget", scan_budget, scan_budget)


def universal_truncation(depth: int, breadth: int, node_cap: int = 128) -> BasisSpace:
    """Finite tree space over {eta : |eta| <= depth, eta_i <= breadth}.

    Branch norms along each maximal chain are the catalog spaces Z_nu; the
    norm is the tree sup-norm evaluated by the treespace module.
    """
    from .treespace import FiniteTree, tree_e_space
    if depth < 1 or breadth < 1:
        raise ValueError("depth and breadth must be positive")
    count = sum(breadth ** k for k in range(1, depth + 1))
    if count > node_cap:
        raise ValueError("tree would have %d nodes, above the cap %d" % (count, node_cap))
    nodes = []
    for k in range(1, depth + 1):
        nodes.extend(itertools.product(range(1, breadth + 1), repeat=k))
    leaves = [n for n in nodes if len(n) == depth]
    branch_norms = {leaf: catalog_space(leaf) for leaf in leaves}
    tree = FiniteTree(nodes, branch_norms)
    return tree_e_space(tree)
