"""Rational polytope unit balls: gauges, hulls, facets, sections.

A ``PolytopeBall`` is the symmetric convex hull co({+-g}) of finitely many
rational generator points spanning R^d.  All predicates are decided exactly
with rational arithmetic; the H-representation (facet normals) is derived on
demand by brute-force hyperplane enumeration, which is fine for the small
dimensions (d <= 8) this package targets, and cached.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from typing import Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .lp import gauge_lp
from .rational import parse_rat, rat_str

QZERO = mpq(0)
QONE = mpq(1)

FACET_SUBSET_CAP = 3_000_000  # max d-subsets tried during facet enumeration


class NotANormError(ValueError):
    """Raised when a generator set does not span its ambient space."""


class DimensionMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# small exact linear algebra helpers


def mat_rank(rows: Sequence[Sequence]) -> int:
    m = [list(map(mpq, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def solve_square(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List]:
    """Solve A u = rhs for square A; None when A is singular."""
    n = len(rows)
    m = [list(map(mpq, rows[i])) + [mpq(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def _sign_normalize(v: Tuple) -> Tuple:
    for c in v:
        if c != 0:
            return v if c > 0 else tuple(-x for x in v)
    return v


def dot(u, v):
    s = QZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


# ---------------------------------------------------------------------------


def _cache_dir() -> Optional[str]:
    return os.environ.get("NORMFORGE_CACHE")


class PolytopeBall:
    """Symmetric convex body co({+-g : g in generators}) in R^dim.

    Generators are stored sign-normalized, deduplicated and lexicographically
    sorted.  With ``prune=True`` (the default) redundant generators are
    removed, yielding the canonical minimal vertex representation; large
    machine-built balls may skip pruning since gauge values do not depend
    on it.
    """

    __slots__ = ("dim", "generators", "pruned", "_facets", "_key")

    def __init__(self, dim: int, generators: Iterable[Sequence], prune: bool = True,
                 _skip_checks: bool = False):
        self.dim = int(dim)
        if self.dim < 1:
            raise NotANormError("dimension must be positive")
        gens = []
        seen = set()
        for g in generators:
            t = tuple(mpq(c) for c in g)
            if len(t) != self.dim:
                raise DimensionMismatch("generator of wrong dimension")
            t = _sign_normalize(t)
            if all(c == 0 for c in t):
                continue
            if t not in seen:
                seen.add(t)
                gens.append(t)
        if not _skip_checks:
            if mat_rank(gens) < self.dim:
                raise NotANormError("generators do not span the space")
        if prune and not _skip_checks:
            gens = self._prune(gens)
        gens.sort()
        self.generators = tuple(gens)
        self.pruned = bool(prune and not _skip_checks)
        self._facets = None
        self._key = None

    @staticmethod
    def _prune(gens: List[Tuple]) -> List[Tuple]:
        kept = list(gens)
        i = 0
        while i < len(kept):
            others = kept[:i] + kept[i + 1:]
            if len(others) >= 1:
                val, _ = gauge_lp(others, kept[i])
                if val is not None and val <= 1:
                    kept.pop(i)
                    continue
            i += 1
        return kept

    # -- basic predicates ---------------------------------------------------

    def _check_dim(self, x: Sequence):
        if len(x) != self.dim:
            raise DimensionMismatch("vector of wrong dimension")

    def gauge(self, x: Sequence) -> mpq:
        """Exact Minkowski gauge min{t >= 0 : x in t * ball}."""
        self._check_dim(x)
        xs = [mpq(c) for c in x]
        if all(c == 0 for c in xs):
            return QZERO
        val, _ = gauge_lp(list(self.generators), xs)
        if val is None:
            raise NotANormError("vector outside the span of the generators")
        return val

    def contains(self, x: Sequence) -> bool:
        return self.gauge(x) <= 1

    def support(self, u: Sequence) -> mpq:
        """Support function h(u) = max over signed generators of u.g."""
        self._check_dim(u)
        return max(abs(dot(u, g)) for g in self.generators)

    # -- canonical form -----------------------------------------------------

    def canonical(self) -> "PolytopeBall":
        if self.pruned:
            return self
        return PolytopeBall(self.dim, self.generators, prune=True)

    def canonical_key(self) -> Tuple:
        if self._key is None:
            self._key = self.canonical().generators
        return self._key

    def gauge_equal(self, other: "PolytopeBall") -> bool:
        """Exact equality of the represented bodies."""
        if self.dim != other.dim:
            return False
        return self.canonical_key() == other.canonical_key()

    # -- constructions ------------------------------------------------------

    def scaled(self, c) -> "PolytopeBall":
        c = mpq(c)
        if c <= 0:
            raise ValueError("scale must be positive")
        return PolytopeBall(self.dim, [tuple(c * v for v in g) for g in self.generators],
                            prune=self.pruned)

    def minkowski_sum(self, other: "PolytopeBall", s, t) -> "PolytopeBall":
        """Generator form of s*self + t*other, redundancy-pruned."""
        if self.dim != other.dim:
            raise DimensionMismatch("minkowski_sum needs equal dimensions")
        s, t = mpq(s), mpq(t)
        if s < 0 or t < 0 or (s == 0 and t == 0):
            raise ValueError("scales must be nonnegative, not both zero")
        if s == 0:
            return other.scaled(t)
        if t == 0:
            return self.scaled(s)
        gens = []
        for g in self.generators:
            for h in other.generators:
                gens.append(tuple(s * a + t * b for a, b in zip(g, h)))
                gens.append(tuple(s * a - t * b for a, b in zip(g, h)))
        return PolytopeBall(self.dim, gens, prune=True)

    def hull_union(self, other: "PolytopeBall") -> "PolytopeBall":
        """co(self union other): just the concatenated generator lists."""
        if self.dim != other.dim:
            raise DimensionMismatch
        prune = self.pruned and other.pruned and (len(self.generators) + len(other.generators) < 64)
        return PolytopeBall(self.dim, list(self.generators) + list(other.generators),
                            prune=prune)

    # -- H-representation ---------------------------------------------------

    def facets(self) -> Tuple[Tuple, ...]:
        """Facet normals u (one per +-pair): ball = {x : |u.x| <= 1 for all u}."""
        if self._facets is not None:
            return self._facets
        cached = self._facets_from_cache()
        if cached is not None:
            self._facets = cached
            return cached
        d = self.dim
        if d == 1:
            m = max(abs(g[0]) for g in self.generators)
            self._facets = ((QONE / m,),)
            self._store_facets(self._facets)
            return self._facets
        signed = []
        for g in self.generators:
            signed.append(g)
            signed.append(tuple(-c for c in g))
        n = len(signed)
        total = 1
        for i in range(d):
            total = total * (n - i) // (i + 1)
        if total > FACET_SUBSET_CAP:
            raise ValueError("facet enumeration too large (%d subsets)" % total)
        found = {}
        for subset in itertools.combinations(range(n), d):
            rows = [signed[i] for i in subset]
            u = solve_square(rows, [QONE] * d)
            if u is None:
                continue
            u = _sign_normalize(tuple(u))
            if u in found:
                continue
            if all(abs(dot(u, g)) <= 1 for g in self.generators):
                found[u] = True
        self._facets = tuple(sorted(found.keys()))
        self._store_facets(self._facets)
        return self._facets

    def _cache_path(self) -> Optional[str]:
        root = _cache_dir()
        if not root:
            return None
        digest = hashlib.sha256(
            json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()
        return os.path.join(root, "facets-%s.json" % digest)

    def _facets_from_cache(self):
        path = self._cache_path()
        if not path or not os.path.exists(path):
            return None
        try:
            with open(path) as fh:
                data = json.load(fh)
            return tuple(tuple(parse_rat(c) for c in u) for u in data)
        except (ValueError, OSError):
            return None

    def _store_facets(self, facets):
        path = self._cache_path()
        if not path:
            return
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump([[rat_str(c) for c in u] for u in facets], fh)
        os.replace(tmp, path)

    # -- sections -----------------------------------------------------------

    def section(self, k: int) -> "PolytopeBall":
        """The slice ball ∩ (R^k x {0}) re-embedded in R^k, exactly."""
        if not 1 <= k <= self.dim:
            raise ValueError("section index out of range")
        if k == self.dim:
            return self.canonical()
        normals = []
        for u in self.facets():
            head = u[:k]
            if any(c != 0 for c in head):
                normals.append(head)
        if k == 1:
            m = max(abs(u[0]) for u in normals)
            return PolytopeBall(1, [(QONE / m,)])
        verts = self._vertices_from_h(k, normals)
        return PolytopeBall(k, verts, prune=True)

    @staticmethod
    def _vertices_from_h(k: int, normals: List[Tuple]) -> List[Tuple]:
        signed = []
        for u in normals:
            signed.append(u)
            signed.append(tuple(-c for c in u))
        verts = set()
        for subset in itertools.combinations(range(len(signed)), k):
            rows = [signed[i] for i in subset]
            v = solve_square(rows, [QONE] * k)
            if v is None:
                continue
            if all(dot(u, v) <= 1 for u in signed):
                verts.add(_sign_normalize(tuple(v)))
        if not verts:
            raise NotANormError("section produced no vertices")
        return list(verts)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "generators": [[rat_str(c) for c in g] for g in self.generators],
        }

    @staticmethod
    def from_json(obj: dict, prune: bool = True) -> "PolytopeBall":
        gens = [[parse_rat(c) for c in g] for g in obj["generators"]]
        return PolytopeBall(int(obj["dim"]), gens, prune=prune)

    def __eq__(self, other):
        return isinstance(other, PolytopeBall) and self.gauge_equal(other)

    def __hash__(self):
        return hash((self.dim, self.canonical_key()))

    def __repr__(self):
        return "PolytopeBall(dim=%d, %d generators)" % (self.dim, len(self.generators))


def box_profile(ball: PolytopeBall):
    """If the ball is an axis-aligned box, return its half-widths, else None.

    Detects generator sets of the form all sign patterns of a positive
    vector a (the box [-a1,a1] x ... x [-ad,ad]); used by the fast path of
    the certified hull-of-union gauge.
    """
    d = ball.dim
    gens = ball.canonical().generators
    a = [max(abs(g[i]) for g in gens) for i in range(d)]
    if any(v == 0 for v in a):
        return None
    expected = set()
    for signs in itertools.product((1, -1), repeat=d):
        expected.add(_sign_normalize(tuple(mpq(s) * a[i] for i, s in enumerate(signs))))
    if set(gens) == expected:
        return a
    return None
