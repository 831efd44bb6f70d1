"""Exact simplex solver: optimality, infeasibility, unboundedness, gauges."""

from gmpy2 import mpq

from normforge.lp import LPStatus, gauge_lp, solve_eq_lp


def test_small_lp_optimal():
    # min x + y  s.t.  x + 2y = 4
    res = solve_eq_lp(1, 2, [(mpq(1),), (mpq(2),)], [mpq(4)])
    assert res.status == LPStatus.OPTIMAL
    assert res.objective == 2
    assert res.solution == {1: mpq(2)}


def test_negative_rhs_handled():
    # x1 - x2 = -3 with x >= 0 has optimum x2 = 3
    res = solve_eq_lp(1, 2, [(mpq(1),), (mpq(-1),)], [mpq(-3)])
    assert res.status == LPStatus.OPTIMAL
    assert res.objective == 3


def test_infeasible():
    res = solve_eq_lp(1, 1, [(mpq(1),)], [mpq(-1)])
    assert res.status == LPStatus.INFEASIBLE


def test_unbounded():
    # min -x  s.t.  x - y = 0: push x = y -> infinity
    res = solve_eq_lp(1, 2, [(mpq(1),), (mpq(-1),)], [mpq(0)],
                      cost_vec=lambda j: mpq(-1) if j == 0 else mpq(0))
    assert res.status == LPStatus.UNBOUNDED


def test_duals_certify_objective():
    res = solve_eq_lp(2, 3,
                      [(mpq(1), mpq(0)), (mpq(0), mpq(1)), (mpq(1), mpq(1))],
                      [mpq(2), mpq(3)])
    assert res.status == LPStatus.OPTIMAL
    # strong duality: y.b equals the optimum
    assert sum(y * b for y, b in zip(res.duals, [mpq(2), mpq(3)])) == res.objective


def test_gauge_lp_matches_l1():
    gens = [(mpq(1), mpq(0)), (mpq(0), mpq(1))]
    val, combo = gauge_lp(gens, [mpq(3), mpq(-4)])
    assert val == 7
    # the certificate reassembles the point
    x = [mpq(0), mpq(0)]
    for i, c in combo.items():
        for k in range(2):
            x[k] += c * gens[i][k]
    assert x == [mpq(3), mpq(-4)]


def test_gauge_lp_outside_span():
    val, combo = gauge_lp([(mpq(1), mpq(0))], [mpq(0), mpq(1)])
    assert val is None and combo is None


def test_column_callback_form():
    cols = [(mpq(1),), (mpq(2),)]
    res = solve_eq_lp(1, 2, lambda j: cols[j], [mpq(4)])
    assert res.objective == 2
