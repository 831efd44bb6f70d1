"""Polytope balls: gauges, facets, sections, Minkowski sums, canonical form."""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from normforge.geometry import NotANormError, PolytopeBall, box_profile

small_rats = st.builds(mpq, st.integers(-20, 20), st.integers(1, 8))
vec2 = st.tuples(small_rats, small_rats)

CROSS2 = PolytopeBall(2, [(mpq(1), mpq(0)), (mpq(0), mpq(1))])
CUBE2 = PolytopeBall(2, [(mpq(1), mpq(1)), (mpq(1), mpq(-1))])


def l1(x):
    return sum(abs(mpq(c)) for c in x)


def linf(x):
    return max(abs(mpq(c)) for c in x)


@settings(max_examples=50, deadline=None)
@given(vec2)
def test_cross_polytope_gauge_is_l1(v):
    assert CROSS2.gauge(list(v)) == l1(v)


@settings(max_examples=50, deadline=None)
@given(vec2)
def test_cube_gauge_is_linf(v):
    assert CUBE2.gauge(list(v)) == linf(v)


@settings(max_examples=30, deadline=None)
@given(vec2, vec2)
def test_gauge_triangle_inequality(u, v):
    s = [a + b for a, b in zip(u, v)]
    assert CROSS2.gauge(s) <= CROSS2.gauge(list(u)) + CROSS2.gauge(list(v))


@settings(max_examples=30, deadline=None)
@given(vec2, small_rats)
def test_gauge_homogeneity(v, c):
    scaled = [c * a for a in v]
    assert CROSS2.gauge(scaled) == abs(c) * CROSS2.gauge(list(v))


def test_degenerate_generators_rejected():
    with pytest.raises(NotANormError):
        PolytopeBall(2, [(mpq(1), mpq(1))])


def test_canonical_key_invariant_under_presentation():
    a = PolytopeBall(2, [(mpq(0), mpq(1)), (mpq(1), mpq(0))])
    b = PolytopeBall(2, [(mpq(1), mpq(0)), (mpq(0), mpq(-1)),
                         (mpq(1, 2), mpq(0))])  # redundant + sign-flipped
    assert a.canonical_key() == b.canonical_key()
    assert a == b


def test_support_function():
    assert CROSS2.support([mpq(3), mpq(-4)]) == 4
    assert CUBE2.support([mpq(3), mpq(-4)]) == 7


def test_facets_recover_gauge():
    for ball in (CROSS2, CUBE2):
        for v in ([mpq(1), mpq(2)], [mpq(-3), mpq(1)], [mpq(1, 2), mpq(1, 3)]):
            via_facets = max(abs(sum(u * c for u, c in zip(f, v)))
                             for f in ball.facets())
            assert via_facets == ball.gauge(v)


def test_section_of_l1_is_l1():
    cross3 = PolytopeBall(3, [(mpq(1), mpq(0), mpq(0)),
                              (mpq(0), mpq(1), mpq(0)),
                              (mpq(0), mpq(0), mpq(1))])
    assert cross3.section(2).gauge_equal(CROSS2)


def test_minkowski_sum_scaling():
    double = CROSS2.minkowski_sum(CROSS2, mpq(1), mpq(1))
    assert double.gauge([mpq(1), mpq(1)]) == mpq(1)  # (1,1) has l1-norm 2


def test_minkowski_sum_mixed():
    # cube + cross: gauge at (1, 0) should be 1/2 (reachable as (1,0)+(0,0)...
    # actually (2,0) = (1,1)+(1,-1) scaled; check against support duality)
    s = CUBE2.minkowski_sum(CROSS2, mpq(1), mpq(1))
    for u in s.facets():
        assert s.support(list(u)) == 1
    # support of a Minkowski sum is the sum of supports
    for u in ([mpq(1), mpq(0)], [mpq(1), mpq(1)], [mpq(2), mpq(-1)]):
        assert s.support(u) == CUBE2.support(u) + CROSS2.support(u)


def test_hull_union():
    h = CROSS2.hull_union(CUBE2)
    assert h.gauge([mpq(1), mpq(1)]) == 1  # the cube corner survives
    assert h.gauge([mpq(1), mpq(0)]) == 1


def test_scaled():
    half = CROSS2.scaled(mpq(1, 2))
    assert half.gauge([mpq(1), mpq(0)]) == 2


def test_box_profile():
    prof = box_profile(CUBE2)
    assert prof is not None
    assert list(prof) == [mpq(1), mpq(1)]
    assert box_profile(CROSS2) is None


def test_json_round_trip():
    again = PolytopeBall.from_json(CUBE2.to_json())
    assert again == CUBE2
