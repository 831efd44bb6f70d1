"""Basis spaces: evaluation, monotonicity, equivalence, serialization."""

import pytest
from gmpy2 import mpq

from normforge.spaces import (BasisSpace, EuclideanNorm, ell1_space,
                              ellinf_space, polytope_space)
from normforge.geometry import PolytopeBall


def test_ell1_eval():
    sp = ell1_space(3)
    assert sp.eval_norm([mpq(1), mpq(-2), mpq(1, 2)]) == mpq(7, 2)


def test_ellinf_eval():
    sp = ellinf_space(2)
    assert sp.eval_norm([mpq(1), mpq(-2)]) == 2


def test_euclidean_eval_exact_square():
    sp = BasisSpace(2, EuclideanNorm(2))
    v = sp.eval_norm([mpq(3), mpq(4)])
    assert v.square == 25


def test_basis_vectors_one_based():
    sp = ell1_space(2)
    assert sp.basis_vector(1) == [mpq(1), mpq(0)]
    assert sp.basis_vector(2) == [mpq(0), mpq(1)]


def test_partial_sum():
    sp = ell1_space(3)
    assert sp.partial_sum(2, [mpq(1), mpq(2), mpq(3)]) == [mpq(1), mpq(2), mpq(0)]


def test_monotone_positive():
    for sp in (ell1_space(2), ellinf_space(3)):
        ok, _cert = sp.is_monotone()
        assert ok


def test_monotone_needs_exact_norm():
    from normforge.spaces import ExactNormRequired
    with pytest.raises(ExactNormRequired):
        BasisSpace(2, EuclideanNorm(2)).is_monotone()


def test_monotone_negative_with_certificate():
    # ball co{+-(1,1)} is degenerate; use a genuinely non-monotone norm:
    # co{+-(2,1), +-(0,1)} contains (2,1) but the projection (2,0) escapes.
    ball = PolytopeBall(2, [(mpq(2), mpq(1)), (mpq(0), mpq(1))])
    ok, cert = polytope_space(ball).is_monotone()
    assert not ok
    assert cert is not None


def test_one_equivalent():
    a = ell1_space(3)
    b = ell1_space(2)
    assert a.one_equivalent(b, 2)
    assert not a.one_equivalent(ellinf_space(2), 2)


def test_coordinate_functional():
    assert BasisSpace.coordinate_functional(2, [mpq(5), mpq(7)]) == 7


def test_json_round_trip_polytope():
    sp = ell1_space(2)
    again = BasisSpace.from_json(sp.to_json())
    assert again.as_polytope().gauge_equal(sp.as_polytope())


def test_json_round_trip_euclidean():
    sp = BasisSpace(3, EuclideanNorm(3))
    again = BasisSpace.from_json(sp.to_json())
    assert again.eval_norm([mpq(1), mpq(2), mpq(2)]).square == 9


def test_dimension_checked():
    with pytest.raises(ValueError):
        ell1_space(2).eval_norm([mpq(1)])
