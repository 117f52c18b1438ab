from fractions import Fraction

import pytest

from dmlbench.recseq import (
    LinRec,
    UnsupportedInstance,
    degeneracy_report,
    evaluate,
    from_recurrence,
    is_nondegenerate,
    nondegenerate_split,
    substitute_progression,
)
from oracles import companion_unroll


def test_eval_examples():
    assert evaluate(LinRec((((1,), 2),)), 10) == 1024
    assert evaluate(LinRec((((0, 1), 1),)), 7) == 7
    assert evaluate(LinRec((((1,), 2), ((1,), -2))), 4) == 32


def test_nondegeneracy_examples():
    assert is_nondegenerate(LinRec((((1,), 2), ((1,), 3))))
    rep = degeneracy_report(LinRec((((1,), 2), ((1,), -2))))
    assert not rep.nondegenerate and rep.ratio_root_of_unity
    rep = degeneracy_report(LinRec((((0, 1), -1),)))
    assert not rep.nondegenerate and not rep.unit_roots_equal_one


def test_split_plus_minus_two():
    u = LinRec((((1,), 2), ((1,), -2)))
    (pe, even), (po, odd) = nondegenerate_split(u)
    assert pe == (2, 0) and even.terms == (((Fraction(2),), 4),)
    assert po == (2, 1) and odd.terms == ()


def test_split_identity_when_nondegenerate():
    u = LinRec((((1,), 2), ((0, 1), 3)))
    assert nondegenerate_split(u) == [((1, 0), u)]


def test_split_alternating_polynomial():
    u = LinRec((((0, 1), -1),))
    (pe, even), (po, odd) = nondegenerate_split(u)
    assert even.terms == (((0, 2), 1),)
    assert odd.terms == (((-1, -2), 1),)
    for k in range(20):
        assert evaluate(even, k) == 2 * k and evaluate(odd, k) == -(2 * k + 1)


def test_substitute_progression_general():
    u = LinRec((((1, 1), 3), ((2,), -5)))
    v = substitute_progression(u, 3, 2)
    for k in range(15):
        assert evaluate(v, k) == evaluate(u, 3 * k + 2)


def test_construction_validation():
    with pytest.raises(ValueError):
        LinRec((((1,), 2), ((3,), 2)))
    with pytest.raises(ValueError):
        LinRec((((1,), 0),))
    with pytest.raises(ValueError):
        LinRec((((), 2),))
    with pytest.raises(UnsupportedInstance):
        LinRec((((1,), Fraction(1, 2)),))


def test_from_terms_merges_and_drops():
    u = LinRec.from_terms([((1,), 2), ((-1,), 2), ((0, 1), 3)])
    assert u.terms == (((0, 1), 3),)


def test_from_recurrence_fibonacci_like():
    # u_{n+2} = 5 u_{n+1} - 6 u_n, roots 2 and 3
    u = from_recurrence([5, -6], [1, 4])
    seq = companion_unroll([5, -6], [1, 4], 30)
    assert [evaluate(u, n) for n in range(31)] == seq
    with pytest.raises(UnsupportedInstance):
        from_recurrence([1, 1], [0, 1])  # golden ratio roots


def test_json_round_trip():
    u = LinRec((((Fraction(1, 2), 3), -2), ((1,), 5)))
    assert LinRec.from_json(u.to_json()) == u
    assert u.to_json()["terms"][0]["q_coeffs"] == ["1/2", "3/1"] or u.to_json()["terms"][1]["q_coeffs"] == ["1/2", "3/1"]
