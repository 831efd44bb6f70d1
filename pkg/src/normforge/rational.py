"""Exact rational scalars, exact square roots, and certified intervals.

Three value layers are used throughout the package:

* ``Rat`` (an alias for ``gmpy2.mpq``): exact rational arithmetic, used on
  every path where the spec promises exactness.
* ``ExactSqrt``: the exact nonnegative real sqrt(q) for a rational q >= 0,
  closed under multiplication by nonnegative rationals and under exact
  comparison (including against rationals and against other square roots).
  Norm values of Euclidean and quadratic-renorming type are of this shape,
  so strict comparisons in those proofs never need interval arithmetic.
* ``CertInterval``: a rational-endpoint enclosure for values with no exact
  finite representation (gauges of mixed polytope/Euclidean bodies).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import gmpy2
from gmpy2 import mpq, mpz

Rat = mpq

QZERO = mpq(0)
QONE = mpq(1)


def parse_rat(s: Union[str, int]) -> Rat:
    """Parse a rational from a "p/q" or "p" string (or an int)."""
    if isinstance(s, int):
        return mpq(s)
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return mpq(int(num), int(den))
    return mpq(int(s))


def rat_str(q) -> str:
    """Canonical "p/q" string (plain "p" when the denominator is 1)."""
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%s/%s" % (q.numerator, q.denominator)


def bit_size(q: Rat) -> int:
    """Encoding size of a rational: bit length of |num| plus bit length of den.

    size(0) = 1.  This is the measure that orders the catalog enumeration.
    """
    n = abs(int(mpq(q).numerator))
    d = int(mpq(q).denominator)
    if n == 0:
        return 1
    return n.bit_length() + d.bit_length()


def sqrt_enclosure(q: Rat, eps: Rat) -> tuple:
    """Rational lo <= sqrt(q) <= hi with hi - lo <= eps, for q >= 0."""
    q = mpq(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return QZERO, QZERO
    eps = mpq(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    # sqrt(p/d) = isqrt(p*d*M^2) / (d*M) up to 1/(d*M); choose M so the gap
    # 1/(d*M) is below eps.
    p = mpz(q.numerator)
    d = mpz(q.denominator)
    m = (mpz(eps.denominator) // (mpz(eps.numerator) * d)) + 1
    s = gmpy2.isqrt(p * d * m * m)
    den = d * m
    lo = mpq(s, den)
    hi = mpq(s + 1, den)
    if lo * lo == q:
        hi = lo
    return lo, hi


def _cmp_sqrt(a: Rat, b: Rat) -> int:
    """Sign of sqrt(a) - sqrt(b) for rationals a, b >= 0."""
    if a == b:
        return 0
    return 1 if a > b else -1


def cmp_rat_plus_sqrt(a1: Rat, s1: Rat, a2: Rat, s2: Rat) -> int:
    """Exact sign of (a1 + sqrt(s1)) - (a2 + sqrt(s2)), s1, s2 >= 0 rational.

    Used by the certified convex minimizer, where objective values have the
    form t + sqrt(S(t)) at rational t.
    """
    d = mpq(a1) - mpq(a2)
    s1 = mpq(s1)
    s2 = mpq(s2)
    # sign of d + sqrt(s1) - sqrt(s2)
    if d == 0:
        return _cmp_sqrt(s1, s2)
    # compare sqrt(s1) against sqrt(s2) - d
    if d > 0:
        # rhs = sqrt(s2) - d; if rhs < 0 the total is positive
        if d * d > s2:
            return 1
        # both sides nonneg: compare s1 vs (sqrt(s2) - d)^2 = s2 + d^2 - 2 d sqrt(s2)
        k = s1 - s2 - d * d
        # sign of k + 2 d sqrt(s2)
        if k >= 0:
            if k == 0 and s2 == 0:
                return 0
            return 1
        # k < 0: sign of 2 d sqrt(s2) - |k|
        c = _cmp_sqrt(4 * d * d * s2, k * k)
        return c
    # d < 0: sign of (sqrt(s1) + d) - sqrt(s2); mirror of the case above
    return -cmp_rat_plus_sqrt(a2, s2, a1, s1)


def sqrt_leq(a: Rat, b: Rat, c: Rat, d: Rat) -> bool:
    """Decide sqrt(a) <= sqrt(b) + c*sqrt(d) exactly (all inputs >= 0)."""
    a, b, c, d = mpq(a), mpq(b), mpq(c), mpq(d)
    e = c * c * d
    k = a - b - e
    if k <= 0:
        return True
    return k * k <= 4 * b * e


def sqrt_geq(a: Rat, b: Rat, c: Rat, d: Rat) -> bool:
    """Decide sqrt(a) >= sqrt(b) + c*sqrt(d) exactly (all inputs >= 0)."""
    a, b, c, d = mpq(a), mpq(b), mpq(c), mpq(d)
    e = c * c * d
    k = a - b - e
    if k < 0:
        return False
    return k * k >= 4 * b * e


class ExactSqrt:
    """The exact real number sqrt(square) for a rational square >= 0.

    Supports multiplication by nonnegative rationals, exact comparisons
    against rationals and other ExactSqrt values, and conversion to a
    CertInterval of any requested width.
    """

    __slots__ = ("square",)

    def __init__(self, square):
        square = mpq(square)
        if square < 0:
            raise ValueError("negative radicand")
        self.square = square

    @staticmethod
    def of_rat(q) -> "ExactSqrt":
        """Embed a nonnegative rational q as sqrt(q^2)."""
        q = mpq(q)
        if q < 0:
            raise ValueError("of_rat needs a nonnegative rational")
        return ExactSqrt(q * q)

    def is_zero(self) -> bool:
        return self.square == 0

    def exact_rat(self):
        """Return the value as a Rat if the square is a perfect square, else None."""
        p = mpz(self.square.numerator)
        d = mpz(self.square.denominator)
        sp = gmpy2.isqrt(p)
        sd = gmpy2.isqrt(d)
        if sp * sp == p and sd * sd == d:
            return mpq(sp, sd)
        return None

    def scaled(self, c) -> "ExactSqrt":
        c = mpq(c)
        if c < 0:
            raise ValueError("scale must be nonnegative")
        return ExactSqrt(c * c * self.square)

    def enclosure(self, eps) -> "CertInterval":
        lo, hi = sqrt_enclosure(self.square, eps)
        return CertInterval(lo, hi)

    def _sq(self, other) -> Rat:
        if isinstance(other, ExactSqrt):
            return other.square
        q = mpq(other)
        if q < 0:
            # all ExactSqrt values are >= 0
            return None
        return q * q

    def __eq__(self, other):
        s = self._sq(other)
        return s is not None and self.square == s

    def __lt__(self, other):
        s = self._sq(other)
        if s is None:
            return False
        return self.square < s

    def __le__(self, other):
        s = self._sq(other)
        if s is None:
            return False
        return self.square <= s

    def __gt__(self, other):
        s = self._sq(other)
        if s is None:
            return True
        return self.square > s

    def __ge__(self, other):
        s = self._sq(other)
        if s is None:
            return True
        return self.square >= s

    def __hash__(self):
        r = self.exact_rat()
        if r is not None:
            return hash(r)
        return hash(("sqrt", self.square))

    def __float__(self):
        lo, hi = sqrt_enclosure(self.square, mpq(1, 10**15))
        return float(lo)

    def __repr__(self):
        r = self.exact_rat()
        if r is not None:
            return "ExactSqrt(=%s)" % rat_str(r)
        return "ExactSqrt(sqrt(%s))" % rat_str(self.square)


@dataclass(frozen=True)
class CertInterval:
    """A guaranteed enclosure [lo, hi] with exact rational endpoints."""

    lo: Rat
    hi: Rat

    def __post_init__(self):
        object.__setattr__(self, "lo", mpq(self.lo))
        object.__setattr__(self, "hi", mpq(self.hi))
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @staticmethod
    def point(q) -> "CertInterval":
        q = mpq(q)
        return CertInterval(q, q)

    @property
    def width(self) -> Rat:
        return self.hi - self.lo

    @property
    def mid(self) -> Rat:
        return (self.lo + self.hi) / 2

    def contains_value(self, q) -> bool:
        q = mpq(q)
        return self.lo <= q <= self.hi

    def intersect(self, other: "CertInterval") -> "CertInterval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint enclosures: inconsistent certificates")
        return CertInterval(lo, hi)

    def overlaps(self, other: "CertInterval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def __add__(self, other):
        other = as_interval(other)
        return CertInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_interval(other)
        return CertInterval(self.lo - other.hi, self.hi - other.lo)

    def scaled(self, c) -> "CertInterval":
        c = mpq(c)
        if c >= 0:
            return CertInterval(c * self.lo, c * self.hi)
        return CertInterval(c * self.hi, c * self.lo)

    def sqrt(self, eps) -> "CertInterval":
        """Enclosure of the square root of this (nonnegative) interval."""
        lo = max(self.lo, QZERO)
        l1, _ = sqrt_enclosure(lo, eps)
        _, h1 = sqrt_enclosure(max(self.hi, QZERO), eps)
        return CertInterval(l1, h1)

    # Exact verdicts against a rational threshold.  "None" means the
    # interval straddles the threshold and the comparison is undecided.
    def decide_le(self, q):
        q = mpq(q)
        if self.hi <= q:
            return True
        if self.lo > q:
            return False
        return None

    def decide_ge(self, q):
        q = mpq(q)
        if self.lo >= q:
            return True
        if self.hi < q:
            return False
        return None

    def to_json(self) -> dict:
        return {"lo": rat_str(self.lo), "hi": rat_str(self.hi)}

    @staticmethod
    def from_json(obj: dict) -> "CertInterval":
        return CertInterval(parse_rat(obj["lo"]), parse_rat(obj["hi"]))

    def __repr__(self):
        return "CertInterval[%s, %s]" % (rat_str(self.lo), rat_str(self.hi))


Value = Union[Rat, ExactSqrt, CertInterval]


def as_interval(v, eps=mpq(1, 10**12)) -> CertInterval:
    """Coerce a Rat / ExactSqrt / CertInterval to an enclosure."""
    if isinstance(v, CertInterval):
        return v
    if isinstance(v, ExactSqrt):
        return v.enclosure(eps)
    return CertInterval.point(mpq(v))


def value_float(v) -> float:
    """Float approximation of any value kind, for reporting only."""
    if isinstance(v, CertInterval):
        return float(mpq(v.mid))
    if isinstance(v, ExactSqrt):
        return float(v)
    return float(mpq(v))


def value_le(a, b) -> Union[bool, None]:
    """Compare two values a <= b; exact when both are Rat/ExactSqrt.

    Returns None when interval endpoints cannot decide.
    """
    if isinstance(a, CertInterval) or isinstance(b, CertInterval):
        ia, ib = as_interval(a), as_interval(b)
        if ia.hi <= ib.lo:
            return True
        if ia.lo > ib.hi:
            return False
        return None
    if isinstance(a, ExactSqrt) or isinstance(b, ExactSqrt):
        a = a if isinstance(a, ExactSqrt) else ExactSqrt.of_rat(max(mpq(a), QZERO))
        return a <= b if isinstance(b, ExactSqrt) else a <= mpq(b)
    return mpq(a) <= mpq(b)
