"""Small embedded oracle-equivalence suite behind ``dmlbench selftest``."""

from __future__ import annotations

import itertools
import random

from .mullat import g_sigma, g_sigma_relation_holds
from .polyexp import PolyExpEquation, solve_bounded, solve_digit_partition
from .recseq import LinRec, evaluate, to_recurrence
from .structure import brute_count_nonzero_digits, count_nonzero_digits
from .torus import frobenius_instance, parse_instance


def _frobenius():
    want = [2**k for k in range(9)]
    exact = parse_instance(frobenius_instance(256)).run()
    mc = parse_instance(frobenius_instance(256, "montecarlo")).run()
    return exact.ns == want and mc.ns == want


def _digits():
    rng = random.Random(1)
    for _ in range(50):
        p, m, M = rng.choice([2, 3, 5]), rng.randint(1, 3), rng.randint(1, 2000)
        ones = rng.random() < 0.5
        if count_nonzero_digits(p, m, M, ones) != brute_count_nonzero_digits(p, m, M, ones):
            return False
    return True


def _digit_partition():
    rng = random.Random(2)
    n_seq = LinRec((((0, 1), 1),))
    for _ in range(10):
        q = rng.randint(5, 16)
        cs = [1]
        while 2 * (sum(cs) + 1) < q and len(cs) < 3 and rng.random() < 0.6:
            cs.append(rng.randint(1, max(1, (q - 1) // 2 - sum(cs))))
        if 2 * sum(cs) >= q:
            cs = [1]
        eq = PolyExpEquation.simple(n_seq, [(c, q, 1) for c in cs])
        a = solve_digit_partition(n_seq, q, cs, 500, 16).ns
        b = solve_bounded(eq, 500, 16).ns
        if a != b:
            return False
    return True


def _lattice():
    rng = random.Random(3)
    for _ in range(20):
        mus = [rng.choice([1, 2, 4, 8, -2, 3, 9])]
        pairs = [(rng.choice([2, -2, 4, 3, -8]), rng.randint(1, 2)) for _ in range(rng.randint(1, 2))]
        lat = g_sigma(mus, pairs)
        for f in itertools.product(range(-4, 5), repeat=1 + len(pairs)):
            if g_sigma_relation_holds(mus, pairs, None, f) != (f in lat.lattice):
                return False
    return True


def _recurrence():
    rng = random.Random(4)
    for _ in range(20):
        roots = rng.sample([-3, -2, 1, 2, 3, 5], rng.randint(1, 3))
        u = LinRec.from_terms([(tuple(rng.randint(-3, 3) or 1 for _ in range(rng.randint(1, 2))), r) for r in roots])
        coeffs, init = to_recurrence(u)
        seq = list(init)
        while len(seq) < 30:
            seq.append(sum(c * x for c, x in zip(coeffs, reversed(seq[-len(coeffs):]))))
        if any(seq[n] != evaluate(u, n) for n in range(30)):
            return False
    return True


CHECKS = [
    ("frobenius return set (exact and Monte Carlo)", _frobenius),
    ("digit DP against brute force", _digits),
    ("digit partition against bounded search", _digit_partition),
    ("relation lattice against exhaustive search", _lattice),
    ("closed form against recurrence unrolling", _recurrence),
]


def run_selftest(verbose=False) -> bool:
    ok = True
    for name, fn in CHECKS:
        passed = bool(fn())
        ok &= passed
        if verbose:
            print(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
