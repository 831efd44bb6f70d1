"""Exact scalar layer: square-root enclosures, comparisons, intervals."""

import math

import pytest
from gmpy2 import isqrt, mpq
from hypothesis import given, settings, strategies as st

from normforge.rational import (CertInterval, ExactSqrt, as_interval,
                                cmp_rat_plus_sqrt, parse_rat, rat_str,
                                sqrt_enclosure)

rats = st.builds(mpq, st.integers(-10**6, 10**6), st.integers(1, 10**4))
pos_rats = rats.map(abs).filter(lambda q: q > 0)


def test_parse_rat_round_trip():
    for s in ("3/7", "-12", "0", "1000000007/3"):
        assert rat_str(parse_rat(s)) == s


def test_parse_rat_rejects_garbage():
    with pytest.raises(ValueError):
        parse_rat("1.5")


@settings(max_examples=40, deadline=None)
@given(pos_rats)
def test_sqrt_enclosure_contains_root(q):
    eps = mpq(1, 10**9)
    lo, hi = sqrt_enclosure(q, eps)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= eps
    assert lo >= 0


def test_sqrt_enclosure_integer_oracle():
    # independent oracle: integer square root of n * 10^18
    for n in (2, 3, 5, 7, 10, 12345):
        root = isqrt(n * 10**18)
        lo, hi = sqrt_enclosure(mpq(n), mpq(1, 10**6))
        assert lo <= mpq(root + 1, 10**9)
        assert hi >= mpq(root, 10**9)


@settings(max_examples=40, deadline=None)
@given(rats, pos_rats, rats, pos_rats)
def test_cmp_rat_plus_sqrt_matches_float_oracle(a1, s1, a2, s2):
    got = cmp_rat_plus_sqrt(a1, s1, a2, s2)
    approx = (float(a1) + math.sqrt(float(s1))) - (float(a2) + math.sqrt(float(s2)))
    if abs(approx) > 1e-6:
        assert got == (1 if approx > 0 else -1)


def test_cmp_rat_plus_sqrt_exact_tie():
    # 1 + sqrt(4) == 3 + sqrt(0)
    assert cmp_rat_plus_sqrt(mpq(1), mpq(4), mpq(3), mpq(0)) == 0


class TestExactSqrt:
    def test_ordering(self):
        assert ExactSqrt(mpq(2)) > mpq(7, 5)
        assert ExactSqrt(mpq(2)) < mpq(3, 2)
        assert ExactSqrt(mpq(4)) == mpq(2)

    def test_scaled(self):
        v = ExactSqrt(mpq(2)).scaled(mpq(3))
        assert v.square == 18

    def test_enclosure(self):
        iv = ExactSqrt(mpq(2)).enclosure(mpq(1, 10**12))
        assert iv.lo * iv.lo <= 2 <= iv.hi * iv.hi
        assert iv.width <= mpq(1, 10**12)

    def test_exact_rat(self):
        assert ExactSqrt(mpq(9, 4)).exact_rat() == mpq(3, 2)
        assert ExactSqrt(mpq(2)).exact_rat() is None


class TestCertInterval:
    def test_reversed_endpoints_rejected(self):
        with pytest.raises(ValueError):
            CertInterval(mpq(1), mpq(0))

    def test_arithmetic(self):
        a = CertInterval(mpq(1), mpq(2))
        b = CertInterval(mpq(3), mpq(5))
        s = a + b
        assert (s.lo, s.hi) == (4, 7)
        d = b - a
        assert (d.lo, d.hi) == (1, 4)

    def test_decide_tri_state(self):
        iv = CertInterval(mpq(1), mpq(2))
        assert iv.decide_le(mpq(3)) is True
        assert iv.decide_le(mpq(0)) is False
        assert iv.decide_le(mpq(3, 2)) is None

    def test_sqrt(self):
        iv = CertInterval(mpq(2), mpq(2)).sqrt(mpq(1, 10**6))
        assert iv.lo * iv.lo <= 2 <= iv.hi * iv.hi

    def test_as_interval_coercions(self):
        assert as_interval(mpq(3)).lo == 3
        iv = as_interval(ExactSqrt(mpq(2)), mpq(1, 10**6))
        assert iv.width <= mpq(1, 10**6)
        assert as_interval(iv) is iv
