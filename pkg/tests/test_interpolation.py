"""Two-parameter interpolation: level norms, tail bounds, projections."""

import math

import pytest
from gmpy2 import mpq

from normforge.interpolation import (InterpolationSpec, build_A,
                                     interpolation_norm, level_norm,
                                     partial_sum_sq, projected_ball,
                                     projection_contracts, scale_ratio_sq,
                                     scale_series_constant, tail_bound_sq,
                                     verify_interpproj)
from normforge.spaces import ell1_space
from normforge.treespace import FiniteTree


def spec1():
    one = ell1_space(1)
    return InterpolationSpec(one, one.as_polytope())


def tree_spec():
    t = FiniteTree([("a",), ("a", "b"), ("a", "c")],
                   {("a", "b"): ell1_space(2), ("a", "c"): ell1_space(2)})
    return t, build_A(t)


def test_level_norm_dimension_one():
    s = spec1()
    for n in (1, 2, 5):
        c = mpq(1 << n) + mpq(1, 1 << n)
        assert level_norm(s, n, [mpq(3)]) == 3 / c


def test_tail_bound_dominates_true_tail():
    s = spec1()
    x = [mpq(2)]
    # true omitted terms: sum_{n>N} (2 / (2^n + 2^-n))^2 < tail_bound
    N = 6
    bound = tail_bound_sq(s, x, N)
    true_tail = sum((2.0 / (2.0**n + 2.0**-n)) ** 2 for n in range(N + 1, 60))
    assert float(bound) >= true_tail


def test_interpolation_norm_encloses_series():
    s = spec1()
    iv = interpolation_norm(s, [mpq(1)], mpq(1, 10**9))
    target = math.sqrt(sum((2.0**n + 2.0**-n) ** -2 for n in range(1, 200)))
    assert float(iv.lo) - 1e-9 <= target <= float(iv.hi) + 1e-9


def test_interpolation_norm_zero():
    iv = interpolation_norm(spec1(), [mpq(0)], mpq(1, 10**6))
    assert iv.lo == iv.hi == 0


def test_scale_series_constant_against_independent_sum():
    # independent float oracle for (sum (2^n+2^-n)^-2)^(1/2)
    oracle = math.sqrt(sum((2.0**n + 2.0**-n) ** -2 for n in range(1, 200)))
    iv = scale_series_constant()
    assert abs(float(iv.mid) - oracle) < 1e-9
    assert iv.width <= mpq(1, 10**12)


def test_projection_contracts():
    _t, spec = tree_spec()
    assert projection_contracts(spec.BX, 1)
    assert projection_contracts(spec.W, [0, 1])


def test_projected_ball_of_branch_is_branch_ball():
    t, spec = tree_spec()
    pos = [t.index[p] for p in (("a",), ("a", "b"))]
    pw = projected_ball(spec.W, pos)
    pbx = projected_ball(spec.BX, pos)
    assert pw.gauge_equal(pbx)
    assert pw.gauge_equal(ell1_space(2).as_polytope())


def test_verify_interpproj_scale_law():
    t, spec = tree_spec()
    pos = [t.index[p] for p in (("a",), ("a", "b"))]
    vecs = [[mpq(1), mpq(2), mpq(-1)], [mpq(1, 2), mpq(0), mpq(3)]]
    rep = verify_interpproj(spec, pos, vecs)
    assert rep.p_contracts_x and rep.p_contracts_w
    assert rep.level_contraction_ok
    assert rep.scale_law_applicable and rep.scale_law_ok
    # the exact ratio is the same for every vector in the range
    r1 = scale_ratio_sq(spec, pos, [mpq(1), mpq(2), mpq(-1)])
    r2 = scale_ratio_sq(spec, pos, [mpq(-5), mpq(1, 3), mpq(7)])
    assert r1 == r2 == rep.ratio_sq


def test_partial_sum_monotone_in_levels():
    s = spec1()
    x = [mpq(1)]
    assert partial_sum_sq(s, x, 3) <= partial_sum_sq(s, x, 6)


def test_scale_ratio_rejects_zero_projection():
    t, spec = tree_spec()
    with pytest.raises(ValueError):
        scale_ratio_sq(spec, [0], [mpq(0), mpq(1), mpq(1)])


def test_spec_json_round_trip():
    s = spec1()
    again = InterpolationSpec.from_json(s.to_json())
    assert level_norm(again, 3, [mpq(1)]) == level_norm(s, 3, [mpq(1)])


def test_spec_requires_polytope_base():
    from normforge.spaces import BasisSpace, EuclideanNorm
    from normforge.spaces import ExactNormRequired
    with pytest.raises(ExactNormRequired):
        InterpolationSpec(BasisSpace(2, EuclideanNorm(2)),
                          ell1_space(2).as_polytope())
