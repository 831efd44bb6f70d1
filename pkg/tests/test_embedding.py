"""Embedding frames: slot layout, sandwich search, hull norm, T and U."""

import pytest
from gmpy2 import mpq

from normforge.embedding import (blocks_contiguous, build_sandwich_ball,
                                 find_ld, l2x_norm, sandwich_constants,
                                 sandwich_holds, slot_list, split_blocks,
                                 verify_u_isometry)
from normforge.spaces import ell1_space, ellinf_space
from normforge.suites import SuiteConfig, base_spaces, frame_for

CFG = SuiteConfig()


def _frame(name="l1_2"):
    for n, X in base_spaces(CFG):
        if n == name:
            return frame_for(CFG, n, X)
    raise KeyError(name)


def test_slot_list_diagonal_order():
    assert slot_list(2, 4) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert slot_list(1, 3) == [(1, 1), (2, 1), (3, 1)]


def test_blocks_contiguous():
    assert blocks_contiguous(2, 4)
    assert blocks_contiguous(1, 5)
    assert not blocks_contiguous(3, 6)  # (1,1),(1,2),(2,1),(1,3),(2,2),(3,1)


def test_split_blocks():
    blocks = split_blocks(2, 4, [mpq(1), mpq(2), mpq(3), mpq(4)])
    assert blocks == [[mpq(1), mpq(2)], [mpq(3), mpq(4)]]


def test_sandwich_constants():
    c1, c2 = sandwich_constants(1)
    assert (c1, c2) == (mpq(7, 8), mpq(15, 16))
    assert all(sandwich_constants(d)[0] < sandwich_constants(d)[1] < 1
               for d in range(1, 5))


def test_find_ld_dimension_one_least_index():
    l, space = find_ld(ell1_space(1), 1)
    assert l == 165  # first enumerated singleton {g} with 7/8 <= 1/g <= 15/16
    g = space.as_polytope().generators[0][0]
    assert mpq(7, 8) <= 1 / g <= mpq(15, 16)
    # least: no earlier index satisfies the sandwich
    from normforge.catalog import enumerated_ball
    for ll in range(1, l):
        gg = enumerated_ball(1, ll).generators[0][0]
        assert not (mpq(7, 8) <= 1 / gg <= mpq(15, 16))


def test_find_ld_requires_normalized_monotone_base():
    from normforge.geometry import PolytopeBall
    from normforge.spaces import polytope_space
    ball = PolytopeBall(2, [(mpq(2), mpq(0)), (mpq(0), mpq(1))])
    with pytest.raises(ValueError):
        find_ld(polytope_space(ball, tags=("monotone",)), 1)


def test_machine_ball_meets_sandwich_exactly():
    X = ell1_space(2)
    for d in (2, 3):
        ball, _recipe, cert = build_sandwich_ball(X, d)
        c1, c2 = sandwich_constants(d)
        assert cert["ratio_sq"] >= (c1 / c2) ** 2
        if d == 2:  # single complete block: the full-ball check is affordable
            assert sandwich_holds(X, d, ball)


def test_l2x_norm_blocks():
    X = ell1_space(2)
    v = l2x_norm(X, 4, [mpq(3), mpq(0), mpq(0), mpq(4)])
    assert v.square == 25


def test_frame_tu_identity():
    frame = _frame()
    x = [mpq(3), mpq(-5, 7)]
    w = frame.operator_U(x)
    back = frame.operator_T(w)
    scale = frame.tu_scale()
    # T and U each carry a hidden sqrt(3)/2; the composite picks up 4/3
    assert back == [mpq(4, 3) * scale * c for c in x]
    assert scale == 1 - mpq(1, 1 << (2 * frame.n_blocks))


def test_u_isometry_certificate():
    frame = _frame()
    ok, cert = verify_u_isometry(frame, [mpq(1), mpq(2)])
    assert ok
    assert cert["lower_sq"] <= cert["value_sq"] <= cert["upper_sq"]


def test_t_contraction():
    frame = _frame()
    for f in ([mpq(1), mpq(0), mpq(0), mpq(0)], [mpq(1), mpq(-2), mpq(3), mpq(1, 2)]):
        tsq = frame.t_norm(f).square
        fn = frame.f_norm(f)
        assert tsq <= fn * fn


def test_furthlemma_exact():
    frame = _frame()
    f = [mpq(1), mpq(-1), mpq(2), mpq(1, 3)]
    for n in range(1, 5):
        ok, slack = frame.verify_furthlemma(f, n)
        assert ok and slack >= 0


def test_level_norm_support_check():
    frame = _frame()
    with pytest.raises(ValueError):
        frame.level_norm(1, [mpq(1), mpq(1), mpq(0), mpq(0)])


def test_frame_json_round_trip():
    frame = _frame()
    from normforge.embedding import EmbeddingFrame
    again = EmbeddingFrame.from_json(frame.to_json())
    f = [mpq(1), mpq(2), mpq(-1), mpq(1, 2)]
    assert again.f_norm(f) == frame.f_norm(f)


def test_hull_window():
    # (7/8) ||f||_l2(X) <= ||f||_F <= ||f||_l2(X)
    frame = _frame()
    for f in ([mpq(1), mpq(0), mpq(0), mpq(0)], [mpq(2), mpq(-1), mpq(1), mpq(3)]):
        fn = frame.f_norm(f)
        l2sq = frame.l2x(f).square
        assert mpq(49, 64) * l2sq <= fn * fn <= l2sq
