import math
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmlbench.structure import (
    PForm,
    certify_bound,
    count_nonzero_digits,
    decompose,
    pform_generate,
    pform_match,
    pform_witnesses,
)
from dmlbench.torus import frobenius_instance, parse_instance
from oracles import digit_scan

POW2_4096 = [2**k for k in range(13)]


def test_decompose_full_range():
    dec = decompose(list(range(101)), 100)
    assert dec.progressions == [(1, 0, 0)] and dec.sparse == []


def test_decompose_powers_of_two():
    dec = decompose(POW2_4096, 4096, a_max=64, window_fraction=Fraction(1, 2))
    assert dec.progressions == [] and dec.sparse == POW2_4096


def test_decompose_evens_plus_powers_of_three():
    M = 10**4
    S = sorted(set(range(0, M + 1, 2)) | {3**k for k in range(9)})
    dec = decompose(S, M)
    assert dec.progressions == [(2, 0, 0)]
    # every power of 3 is odd, so all of them stay in the sparse part
    assert dec.sparse == sorted(set(S) - set(range(0, M + 1, 2))) == [1, 3, 9, 27, 81, 243, 729, 2187, 6561]


def test_decompose_onset_and_validation():
    S = [1, 5] + list(range(40, 101, 3))
    dec = decompose(S, 100)
    assert dec.progressions == [(3, 1, 40)] and dec.sparse == [1, 5]
    with pytest.raises(ValueError):
        decompose([3, 2], 10)
    with pytest.raises(ValueError):
        decompose([0, 11], 10)
    with pytest.raises(ValueError):
        decompose([], 10, window_fraction=1)


@settings(max_examples=300)
@given(st.sets(st.integers(0, 300)), st.sampled_from([(2, 0), (3, 1), (5, 2), (1, 0), None]))
def test_decompose_is_partition_and_idempotent(base, prog):
    M = 300
    S = set(base)
    if prog:
        a, b = prog
        S |= set(range(b, M + 1, a))
    S = sorted(S)
    dec = decompose(S, M)
    assert dec.members() == S
    covered = [set(range(n0, M + 1, a)) for a, _, n0 in dec.progressions]
    for i in range(len(covered)):
        for j in range(i + 1, len(covered)):
            assert not covered[i] & covered[j]
        assert not covered[i] & set(dec.sparse)
    again = decompose(dec.sparse, M)
    assert again.progressions == [] and again.sparse == dec.sparse


def test_certify_examples():
    cert = certify_bound(POW2_4096, 1, [16, 256, 4096])
    assert cert.counts == [5, 9, 13] and cert.verdict == "consistent"
    assert certify_bound(range(4097), 1, [16, 256, 4096]).verdict == "inconsistent"
    empty = certify_bound([], 1, [16, 256, 4096])
    assert empty.A_min == [0.0, 0.0, 0.0] and empty.verdict == "consistent"


def test_certify_preconditions():
    with pytest.raises(ValueError):
        certify_bound([], -1, [16, 256, 4096])
    with pytest.raises(ValueError):
        certify_bound([], 1, [16, 256])
    with pytest.raises(ValueError):
        certify_bound([], 1, [16, 17, 18])
    with pytest.raises(ValueError):
        certify_bound([], 1, [256, 16, 4096])


@settings(max_examples=200)
@given(st.sets(st.integers(1, 5000), max_size=200), st.integers(0, 3), st.integers(2, 5))
def test_certify_amin_monotone_and_scale_free(S, d, scale):
    cps = [10, 100, 1000, 5000]
    cert = certify_bound(S, d, cps)
    assert all(a <= b for a, b in zip(cert.A_min, cert.A_min[1:]))
    # recompute the running maximum directly from the definition
    best, want = 0.0, []
    for M in cps:
        best = max(best, sum(1 for x in S if x <= M) / (1 + math.log(M)) ** d)
        want.append(best)
    assert cert.A_min == pytest.approx(want)
    # the verdict is invariant under blowing each element up into a block of scale consecutive integers
    blown = certify_bound([x * scale + i for x in S for i in range(scale)], d, [c * scale + scale - 1 for c in cps])
    assert [c * scale for c in cert.counts] == blown.counts


def test_certify_csv():
    text = certify_bound(POW2_4096, 1, [64, 256, 1024, 4096]).to_csv()
    lines = text.splitlines()
    assert lines[0] == "M,count,ratio,A_min"
    assert lines[1].startswith("64,7,")


def test_pform_generate_examples():
    assert pform_generate(PForm(1, (1,), (1,), 2), 100) == [1, 2, 4, 8, 16, 32, 64]
    assert pform_generate(PForm(2, (1, 1), (1, 1), 2), 20) == [2, 3, 4, 5, 6, 8, 9, 10, 12, 16, 17, 18, 20]
    assert pform_generate(PForm(1, (3,), (2,), 3), 300) == [3, 27, 243]


def test_pform_rejects_non_integer_values():
    with pytest.raises(ArithmeticError):
        pform_generate(PForm(1, (Fraction(1, 2),), (1,), 2), 10)


@settings(max_examples=200)
@given(st.integers(1, 3), st.sampled_from([2, 3, 5]), st.data())
def test_pform_witnesses_verify(m, p, data):
    c = data.draw(st.lists(st.integers(1, 4), min_size=m, max_size=m))
    a = data.draw(st.lists(st.integers(0, 2), min_size=m, max_size=m))
    f = PForm(m, c, a, p)
    wit = pform_witnesses(f, 500)
    vals = list(wit)
    assert vals == sorted(set(vals)) and all(v <= 500 for v in vals)
    for v, ks in wit.items():
        assert f.value(ks) == v


def test_pform_match_examples():
    f = PForm(1, (1,), (1,), 2)
    assert pform_match(POW2_4096, f, 4096) == (True, [])
    assert pform_match(POW2_4096 + [5], f, 4096) == (False, [5])
    ns = parse_instance(frobenius_instance(4096)).run().ns
    assert pform_match(decompose(ns, 4096).sparse, f, 4096) == (True, [])


def test_digit_examples():
    assert count_nonzero_digits(2, 1, 1024, True) == 11
    assert count_nonzero_digits(2, 2, 63, True) == 15 == comb(6, 2)
    assert count_nonzero_digits(3, 1, 80, False) == digit_scan(3, 1, 80, False) == 8
    with pytest.raises(ValueError):
        count_nonzero_digits(2, 0, 10)


@settings(max_examples=300)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 4), st.integers(0, 10**5), st.booleans())
def test_digits_against_scan(p, m, M, ones):
    M = M if M <= 3000 else M // 40  # keep the scan oracle fast
    assert count_nonzero_digits(p, m, M, ones) == digit_scan(p, m, M, ones)


def test_digits_full_range_equivalence_sample():
    for M in (10**5, 99999, 65536):
        for p, m, ones in ((2, 3, True), (3, 2, False), (5, 2, True)):
            assert count_nonzero_digits(p, m, M, ones) == digit_scan(p, m, M, ones)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_digits_full_blocks_are_binomial(p):
    for L in range(1, 12):
        for m in range(1, 5):
            assert count_nonzero_digits(p, m, p**L - 1, True) == comb(L, m)
