import pytest

from dmlbench.mullat import (
    NotDependent,
    common_base,
    factor_rational,
    g_sigma,
    hermite_rows,
    integer_kernel,
    relations_lattice,
)
from oracles import brute_relations


def test_factor_rational():
    assert factor_rational(-12) == (-1, {2: 2, 3: 1})
    assert factor_rational("9/8") == (1, {3: 2, 2: -3})
    with pytest.raises(ValueError):
        factor_rational(0)


def test_integer_kernel_simple():
    ker = integer_kernel([[2, -3]], 2)
    assert hermite_rows(ker) == [[3, 2]]
    assert hermite_rows(integer_kernel([[1, 1, 1]], 3)) == hermite_rows([[1, -1, 0], [0, 1, -1]])


def test_relations_examples():
    assert relations_lattice([2, 3]).rank == 0
    assert relations_lattice([4, 8]).basis == ((3, -2),)
    assert relations_lattice([-2, 2]).basis == ((2, -2),)


def test_g_sigma_examples():
    assert g_sigma([2, 3], [(5, 1)]).trivial
    assert g_sigma([2, 3], [(2, 1), (3, 2)]).trivial
    assert g_sigma([1], [(3, 1)]).basis == ((1, 0),)
    assert g_sigma([4], [(8, 1)]).basis == ((3, 2),)


def test_g_sigma_brute_cross_check_for_examples():
    for mus, pairs in [([2, 3], [(5, 1)]), ([1], [(3, 1)]), ([4], [(8, 1)]), ([-2], [(4, 1), (-8, 1)])]:
        lat = g_sigma(mus, pairs)
        found = brute_relations(mus, pairs, 8)
        assert all(f in lat.lattice for f in found)
        if lat.trivial:
            assert found == [tuple([0] * (1 + len(pairs)))]


def test_case1_lattice_is_z_times_zero():
    for m1 in range(1, 5):
        pairs = [(lam, a) for lam, a in [(2, 1), (3, 2), (-5, 1), (7, 3)][:m1]]
        assert g_sigma([1], pairs).basis == (tuple([1] + [0] * m1),)


def test_grouped_unknowns():
    # one unknown carrying two terms: 4^f0 = 8^f1 = (-8)^f1 needs f1 even
    lat = g_sigma([4], [(8, 1), (-8, 1)], groups=[0, 0])
    assert lat.lattice.dim == 2
    assert lat.basis == ((3, 2),)
    # with 2 and -2 the sign forces the doubled relation
    lat = g_sigma([4], [(2, 1), (-2, 1)], groups=[0, 0])
    assert lat.basis == ((1, 2),)
    lat = g_sigma([8], [(2, 1), (-2, 1)], groups=[0, 0])
    assert lat.basis == ((2, 6),)


def test_common_base_examples():
    cb = common_base(9, [(27, 1)])
    assert (cb.lam, cb.b, cb.E) == (3, 2, 1)
    assert (cb.pairs[0].zeta, cb.pairs[0].b_i, cb.pairs[0].B_i) == (1, 3, 3)
    cb = common_base(4, [(-8, 1)])
    assert (cb.lam, cb.b, cb.E) == (2, 2, 2)
    assert (cb.pairs[0].zeta, cb.pairs[0].b_i, cb.pairs[0].B_i) == (-1, 3, 6)
    with pytest.raises(NotDependent):
        common_base(2, [(3, 1)])


def test_common_base_smallest_base():
    cb = common_base(64, [(16, 1)])
    assert cb.lam == 2 and cb.b == 6 and cb.pairs[0].b_i == 4
    cb = common_base(36, [(6, 1)])
    assert cb.lam == 6


def test_common_base_rejects_bad_mu():
    with pytest.raises(ValueError):
        common_base(1, [(2, 1)])
    with pytest.raises(ValueError):
        common_base(-4, [(2, 1)])


def test_json():
    assert relations_lattice([4, 8]).to_json() == {"basis": [[3, -2]]}
    assert common_base(4, [(-8, 1)]).to_json() == {
        "lambda": 2,
        "b": 2,
        "pairs": [{"zeta": -1, "b_i": 3, "B_i": 6}],
        "E": 2,
    }
