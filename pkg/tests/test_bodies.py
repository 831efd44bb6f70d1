"""Mixed polytope/Euclidean hull bodies and their certified gauges."""

import pytest
from gmpy2 import mpq

from normforge.bodies import (HullUnionBody, cube_ball_body, gauge_dominates,
                              gauge_interval)

BODY = cube_ball_body(3, mpq(2))  # co(cube corners U sqrt(2) ball)
EPS = mpq(1, 10**8)


def _check(x, target_lo, target_hi):
    iv = gauge_interval(BODY, [mpq(c) for c in x], EPS)
    assert iv.width <= EPS
    assert iv.hi >= target_lo and iv.lo <= target_hi


def test_gauge_zero():
    iv = gauge_interval(BODY, [mpq(0)] * 3, EPS)
    assert iv.lo == 0 and iv.hi <= EPS


def test_corner_gauge_is_one():
    _check([1, 1, 1], mpq(1), mpq(1))


def test_axis_gauge_is_sqrt_half():
    # (1,0,0) is best reached through the ball: gauge = 1/sqrt(2)
    _check([1, 0, 0], mpq(70710678118, 10**11), mpq(70710678119, 10**11))


def test_mixed_point():
    # (2,0,0): twice the axis gauge
    _check([2, 0, 0], mpq(141421356237, 10**11), mpq(141421356238, 10**11))


def test_gauge_between_cube_and_scaled_cube():
    # the body contains the cube and sits inside sqrt(3)/sqrt(2) cube-ish
    for x in ([mpq(1), mpq(1, 2), mpq(-1, 3)], [mpq(2), mpq(-1), mpq(1)]):
        iv = gauge_interval(BODY, x, EPS)
        cube = max(abs(c) for c in x)
        assert iv.hi <= cube + EPS
        # Euclidean through-the-ball bound: gauge >= |x|_2 / sqrt(3*2) >= cube/sqrt(6)
        assert 6 * (iv.hi + EPS) ** 2 >= cube * cube


def test_gauge_dominates():
    assert gauge_dominates(BODY, [mpq(2), mpq(1), mpq(1)], [mpq(1), mpq(1), mpq(1)])
    assert gauge_dominates(BODY, [mpq(-2), mpq(1), mpq(0)], [mpq(2), mpq(-1), mpq(0)])
    assert not gauge_dominates(BODY, [mpq(1), mpq(0), mpq(0)], [mpq(0), mpq(2), mpq(0)])


def test_requires_positive_eps():
    with pytest.raises(ValueError):
        gauge_interval(BODY, [mpq(1)] * 3, mpq(0))
