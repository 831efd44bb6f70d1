"""Canonical enumeration, pairing functions, and the extension catalog."""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from normforge.catalog import (STRUCTURED_BASE, ScanBudgetExceeded,
                               catalog_space, delta, encode_structured,
                               enumerated_ball, pi, pi_inverse, rational_norm,
                               rationals_of_size, varpi, varpi_inverse)
from normforge.spaces import polytope_space


def test_pi_initial_values():
    assert pi(1) == (1, 1)
    assert pi(2) == (1, 2)
    assert pi(3) == (2, 1)
    assert pi(4) == (1, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10**6))
def test_pi_round_trip(i):
    n, k = pi(i)
    assert pi_inverse(n, k) == i


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_varpi_round_trip(eta):
    assert varpi(varpi_inverse(eta)) == tuple(eta)


def test_varpi_weight_ordering():
    weights = [len(varpi(i)) + sum(varpi(i)) for i in range(1, 60)]
    assert weights == sorted(weights)


def test_delta_strictly_increasing_prefix_indices():
    idx = delta([2, 1, 3])
    assert idx == sorted(idx)
    assert len(set(idx)) == 3
    assert varpi(idx[0]) == (2,)
    assert varpi(idx[2]) == (2, 1, 3)


def test_rationals_of_size_frozen_prefix():
    assert rationals_of_size(1) == [mpq(0)]
    assert rationals_of_size(2) == [mpq(1), mpq(-1)]


def test_enumerated_ball_dim1_frozen_prefix():
    vals = [enumerated_ball(1, l).generators[0][0] for l in range(1, 4)]
    assert vals == [mpq(1), mpq(2), mpq(3)]


def test_enumerated_ball_deduped_and_monotone():
    keys = set()
    for l in range(1, 13):
        ball = enumerated_ball(2, l)
        assert ball.canonical_key() not in keys
        keys.add(ball.canonical_key())
        ok, _ = polytope_space(ball).is_monotone()
        assert ok


def test_enumeration_is_deterministic():
    a = enumerated_ball(2, 7)
    b = enumerated_ball(2, 7)
    assert a.canonical_key() == b.canonical_key()


def test_scan_budget_raises():
    with pytest.raises(ScanBudgetExceeded):
        enumerated_ball(4, 10**6, work_budget=10)


def test_structured_indices_round_trip():
    from normforge.embedding import build_sandwich_ball
    from normforge.spaces import ell1_space
    ball, recipe, _cert = build_sandwich_ball(ell1_space(2), 2)
    l = encode_structured(recipe)
    assert l > STRUCTURED_BASE and (l - STRUCTURED_BASE) % 2 == 0
    sp = rational_norm(2, l)
    assert sp.as_polytope().gauge_equal(ball)


def test_rational_norm_small_indices_match_enumeration():
    for l in (1, 2, 5):
        assert rational_norm(1, l).as_polytope().gauge_equal(enumerated_ball(1, l))


def test_catalog_space_extension_property():
    z1 = catalog_space([1])
    z = catalog_space([1, 2])
    assert z.dim == 2
    assert z.one_equivalent(z1, 1)
