"""Randomized invariants of multiplicative relation lattices."""

from fractions import Fraction
from itertools import product

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dmlbench.mullat import common_base, g_sigma, relations_lattice
from oracles import relation_holds

N = 1000
BOUND = 8

small_ints = st.sampled_from([1, 2, 3, 4, 6, 8, 9, 12, 16, 27, -2, -3, -4, -8, -9])
lams = st.sampled_from([2, 3, 4, 8, 9, 16, 27, -2, -3, -4, -8, -27, 6, 12, 36])


@st.composite
def sigma_instances(draw):
    mus = draw(st.lists(small_ints, min_size=1, max_size=2, unique=True))
    pairs = draw(st.lists(st.tuples(lams, st.integers(1, 3)), min_size=0, max_size=2))
    return mus, pairs


@settings(max_examples=N)
@given(st.lists(st.fractions(min_value=-30, max_value=30, max_denominator=10).filter(bool), min_size=1, max_size=4))
def test_relations_basis_satisfies_identity(xs):
    lat = relations_lattice(xs)
    for v in lat.basis:
        prod_ = Fraction(1)
        for x, e in zip(xs, v):
            prod_ *= Fraction(x) ** e
        assert prod_ == 1


@settings(max_examples=N)
@given(sigma_instances())
def test_g_sigma_against_bounded_search(inst):
    mus, pairs = inst
    lat = g_sigma(mus, pairs)
    for v in lat.basis:
        assert relation_holds(mus, pairs, v)
    for f in product(range(-BOUND, BOUND + 1), repeat=1 + len(pairs)):
        assert relation_holds(mus, pairs, f) == (f in lat.lattice)


@settings(max_examples=N)
@given(st.lists(st.sampled_from([2, 3, 5, 7, 6, 10, -2, -3, -5, 12, 15]), min_size=2, max_size=3, unique=True), st.lists(st.tuples(lams, st.integers(1, 3)), min_size=1, max_size=2))
def test_independent_roots_force_trivial_lattice(mus, pairs):
    assume(relations_lattice(mus).rank == 0)
    assert g_sigma(mus, pairs).trivial


@settings(max_examples=N)
@given(st.sampled_from([2, 3]), st.integers(1, 6), st.lists(st.tuples(st.integers(1, 4), st.booleans(), st.integers(1, 3)), min_size=1, max_size=3))
def test_common_base_round_trip(base, bexp, raw_pairs):
    mu = base**bexp
    pairs = [((-1 if neg else 1) * base**e, a) for e, neg, a in raw_pairs]
    cb = common_base(mu, pairs)
    assert cb.lam**cb.b == mu
    for (lam_j, a), pb in zip(pairs, cb.pairs):
        assert pb.zeta * cb.lam**pb.b_i == lam_j**a
        assert pb.zeta**cb.E == 1
        assert pb.B_i == cb.E * pb.b_i
