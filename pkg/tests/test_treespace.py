"""Finite trees: coherence, the sup and quadratic norms, level gains."""

import pytest
from gmpy2 import mpq

from normforge.spaces import BasisSpace, EuclideanNorm, ell1_space, ellinf_space
from normforge.treespace import (CoherenceError, FiniteTree, b_norm,
                                 b_segment_check, chain, check_level_gain,
                                 e_ball, e_norm, phi_ball, renorm_constants,
                                 subtree_projection, tree_e_space, verify_b001)

A, B = ("a",), ("b",)
AB = ("a", "b")


def two_leaf_tree(space2=None):
    sp2 = space2 or ell1_space(2)
    return FiniteTree([A, B, AB], {B: ell1_space(1), AB: sp2})


def test_prefix_closure_enforced():
    with pytest.raises(ValueError):
        FiniteTree([AB], {AB: ell1_space(2)})


def test_coherence_enforced():
    # two depth-2 leaves whose branch spaces disagree on the shared level-1 part
    from normforge.geometry import PolytopeBall
    from normforge.spaces import polytope_space
    stretched = polytope_space(PolytopeBall(2, [(mpq(2), mpq(0)), (mpq(0), mpq(1))]))
    with pytest.raises(CoherenceError):
        FiniteTree([A, AB, ("a", "c")],
                   {AB: ell1_space(2), ("a", "c"): stretched})


def test_chain():
    assert chain(("x", "y", "z")) == [("x",), ("x", "y"), ("x", "y", "z")]


def test_e_norm_is_branch_max():
    t = two_leaf_tree()
    x = {A: mpq(1), B: mpq(3), AB: mpq(1)}
    # branch a/b gives |1| + |1| = 2; branch b gives 3
    assert e_norm(t, x) == 3


def test_e_norm_chain_fidelity():
    t = two_leaf_tree()
    x = {A: mpq(1), AB: mpq(-2)}
    assert e_norm(t, x) == 3  # the l1 branch value


def test_b_norm_off_chain_penalty():
    t = two_leaf_tree()
    cs = [mpq(1, 2), mpq(1, 4)]
    x = {B: mpq(1), AB: mpq(2)}
    # attaining leaf a/b: branch value 2, off-chain penalty (1/2)^2 * 1
    val = b_norm(t, cs, x)
    assert val.square == 4 + mpq(1, 4)
    _v, leaf = b_norm(t, cs, x, with_leaf=True)
    assert leaf == AB


def test_subtree_projection_contracts():
    t = two_leaf_tree()
    cs = renorm_constants(2)
    x = {A: mpq(1), B: mpq(-1), AB: mpq(2)}
    px = subtree_projection(t, [A], x)
    assert px == {A: mpq(1)}
    assert e_norm(t, px) <= e_norm(t, x)
    assert b_norm(t, cs, px).square <= b_norm(t, cs, x).square


def test_subtree_validation():
    t = two_leaf_tree()
    with pytest.raises(ValueError):
        subtree_projection(t, [AB], {})  # not prefix-closed


def test_check_level_gain_euclid_equality():
    sp = BasisSpace(3, EuclideanNorm(3))
    ok, slack, wit = check_level_gain(sp, [mpq(1)] * 3, [mpq(1), mpq(-2), mpq(3)])
    assert ok and slack == 0 and wit is None


def test_check_level_gain_flat_norm_fails():
    ok, _slack, wit = check_level_gain(ellinf_space(2), renorm_constants(2),
                                       [mpq(1), mpq(1)])
    assert not ok and wit == 2


def test_verify_b001():
    ok, slack, _w = verify_b001(ell1_space(3), [mpq(1)] * 3)
    assert ok and slack >= 0
    ok2, _s, wit = verify_b001(ellinf_space(2), renorm_constants(2),
                               extra_vectors=[[mpq(1), mpq(1)]])
    assert not ok2 and wit is not None


def test_renorm_constants():
    cs = renorm_constants(3)
    assert cs == [mpq(7, 1 << 10), mpq(7, 1 << 12), mpq(7, 1 << 14)]


def test_b_segment_flat_with_conclusion():
    t = FiniteTree([A, AB], {AB: ellinf_space(2)})
    r = b_segment_check(t, renorm_constants(2),
                        {A: mpq(1), AB: mpq(-1, 2)}, {A: mpq(1), AB: mpq(1, 2)})
    assert r.constant is True and r.conclusion_holds is True
    assert r.leaf == AB


def test_b_segment_nonflat():
    t = two_leaf_tree()
    r = b_segment_check(t, renorm_constants(2),
                        {A: mpq(1)}, {A: mpq(2)})
    assert r.constant is False and r.conclusion_holds is True


def test_phi_and_e_balls():
    t = two_leaf_tree()
    phi = phi_ball(t)
    # the chain-embedded l1(2) generator at a/b keeps gauge 1
    v = [mpq(0)] * t.dim
    v[t.index[A]] = mpq(1)
    assert phi.gauge(v) == 1
    ball = e_ball(t)
    x = [mpq(0)] * t.dim
    x[t.index[B]] = mpq(2)
    assert ball.gauge(x) == 2


def test_e_ball_matches_e_norm():
    t = two_leaf_tree()
    sp = tree_e_space(t)
    ball = sp.as_polytope()
    for coords in ([mpq(1), mpq(0), mpq(1)], [mpq(1), mpq(-2), mpq(1, 2)]):
        x = t.vec_from_coords(coords)
        assert ball.gauge(coords) == e_norm(t, x)


def test_tree_json_round_trip():
    t = two_leaf_tree()
    again = FiniteTree.from_json(t.to_json())
    assert again.nodes == t.nodes
    x = {A: mpq(1), AB: mpq(2)}
    assert e_norm(again, x) == e_norm(t, x)
