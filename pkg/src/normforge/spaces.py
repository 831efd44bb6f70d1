"""Finite-dimensional normed spaces with a distinguished ordered basis.

A ``BasisSpace`` couples a dimension with a gauge oracle (``NormExpr``).
The basis is the standard coordinate basis after identification of the
space with R^d.  Monotonicity and 1-equivalence are decided exactly for
norms that can be expressed as polytope balls; richer constructions
(renormings, tree norms, interpolation norms) register themselves as
additional ``NormExpr`` node kinds.
"""

from __future__ import annotations

from typing import Optional, Sequence

from gmpy2 import mpq

from .geometry import DimensionMismatch, PolytopeBall
from .rational import ExactSqrt, parse_rat, rat_str

QZERO = mpq(0)

# node kind -> deserializer, populated here and by the construction modules
NORM_EXPR_REGISTRY = {}


def register_norm_expr(kind: str, loader):
    NORM_EXPR_REGISTRY[kind] = loader


def norm_expr_from_json(obj: dict):
    kind = obj.get("kind")
    if kind not in NORM_EXPR_REGISTRY:
        raise ValueError("unknown norm expression kind: %r" % kind)
    return NORM_EXPR_REGISTRY[kind](obj)


class PolytopeNorm:
    """Gauge of a rational polytope ball; the exact workhorse node."""

    kind = "polytope"
    is_exact = True

    def __init__(self, ball: PolytopeBall):
        self.ball = ball
        self.dim = ball.dim

    def eval(self, x: Sequence):
        return self.ball.gauge(x)

    def as_polytope(self) -> Optional[PolytopeBall]:
        return self.ball

    def to_json(self) -> dict:
        return {"kind": self.kind, "ball": self.ball.to_json()}

    @staticmethod
    def _load(obj):
        return PolytopeNorm(PolytopeBall.from_json(obj["ball"]))


class EuclideanNorm:
    """The Euclidean norm; values are exact square roots of rationals."""

    kind = "euclidean"
    is_exact = True

    def __init__(self, dim: int):
        self.dim = int(dim)

    def eval(self, x: Sequence):
        s = QZERO
        for c in x:
            c = mpq(c)
            s += c * c
        return ExactSqrt(s)

    def as_polytope(self):
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind, "dim": self.dim}

    @staticmethod
    def _load(obj):
        return EuclideanNorm(int(obj["dim"]))


register_norm_expr("polytope", PolytopeNorm._load)
register_norm_expr("euclidean", EuclideanNorm._load)


class ExactNormRequired(ValueError):
    """A decision procedure needs an exact (polytope) norm but got none."""


class BasisSpace:
    """R^d with a norm oracle and the standard basis e_1..e_d."""

    def __init__(self, dim: int, norm, tags: Sequence[str] = ()):
        if norm.dim != dim:
            raise DimensionMismatch("norm oracle dimension disagrees with space")
        self.dim = int(dim)
        self.norm = norm
        self.tags = tuple(tags)

    # -- evaluation ---------------------------------------------------------

    def eval_norm(self, x: Sequence):
        if len(x) != self.dim:
            raise DimensionMismatch("vector of wrong dimension")
        return self.norm.eval([mpq(c) for c in x])

    def partial_sum(self, n: int, x: Sequence):
        if not 0 <= n <= self.dim:
            raise ValueError("partial sum index out of range")
        if len(x) != self.dim:
            raise DimensionMismatch("vector of wrong dimension")
        return [mpq(c) if i < n else QZERO for i, c in enumerate(x)]

    @staticmethod
    def coordinate_functional(i: int, x: Sequence):
        if not 1 <= i <= len(x):
            raise ValueError("coordinate index out of range")
        return mpq(x[i - 1])

    def basis_vector(self, i: int):
        return [mpq(1) if j == i - 1 else QZERO for j in range(self.dim)]

    # -- exact decision procedures ------------------------------------------

    def as_polytope(self) -> Optional[PolytopeBall]:
        getter = getattr(self.norm, "as_polytope", None)
        return getter() if getter else None

    def is_monotone(self):
        """Decide ||P_n|| <= 1 for all n; returns (verdict, witness|None)."""
        ball = self.as_polytope()
        if ball is None:
            raise ExactNormRequired("exact norm required for monotonicity decision")
        for n in range(1, self.dim):
            for g in ball.generators:
                p = list(g[:n]) + [QZERO] * (self.dim - n)
                if ball.gauge(p) > 1:
                    return False, list(g)
        return True, None

    def one_equivalent(self, other: "BasisSpace", k: int) -> bool:
        """Exact norm agreement on span(e_1..e_k), by section equality."""
        if k < 1 or k > min(self.dim, other.dim):
            raise ValueError("equivalence length out of range")
        a = self.as_polytope()
        b = other.as_polytope()
        if a is not None and b is not None:
            return a.section(k).gauge_equal(b.section(k))
        ae = isinstance(self.norm, EuclideanNorm)
        be = isinstance(other.norm, EuclideanNorm)
        if ae and be:
            return True
        if k == 1 and (ae or be):
            ball = a if a is not None else b
            if ball is not None:
                return ball.section(1).generators == ((mpq(1),),)
            return True
        if ae or be:
            return False
        if self.norm.to_json() == other.norm.to_json():
            return True
        raise ExactNormRequired("exact norms required for 1-equivalence decision")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"dim": self.dim, "norm": self.norm.to_json(), "tags": list(self.tags)}

    @staticmethod
    def from_json(obj: dict) -> "BasisSpace":
        return BasisSpace(int(obj["dim"]), norm_expr_from_json(obj["norm"]),
                          obj.get("tags", []))

    def __repr__(self):
        return "BasisSpace(dim=%d, norm=%s)" % (self.dim, self.norm.kind)


def polytope_space(ball: PolytopeBall, tags=()) -> BasisSpace:
    return BasisSpace(ball.dim, PolytopeNorm(ball), tags)


def ell1_space(dim: int) -> BasisSpace:
    gens = []
    for i in range(dim):
        gens.append([mpq(1) if j == i else QZERO for j in range(dim)])
    return polytope_space(PolytopeBall(dim, gens), tags=("monotone", "normalized"))


def ellinf_space(dim: int) -> BasisSpace:
    import itertools
    gens = []
    for signs in itertools.product((1, -1), repeat=dim):
        gens.append([mpq(s) for s in signs])
    return polytope_space(PolytopeBall(dim, gens), tags=("monotone", "normalized"))
