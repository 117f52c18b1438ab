"""Seeded generators for randomized solver instances."""

import random

from dmlbench.polyexp import PolyExpEquation
from dmlbench.recseq import LinRec

N_SEQ = LinRec((((0, 1), 1),))
N2_SEQ = LinRec((((0, 0, 1), 1),))
POW2_PLUS_N = LinRec((((0, 1), 1), ((1,), 2)))
U_FAMILIES = {"n": N_SEQ, "n^2": N2_SEQ, "2^n+n": POW2_PLUS_N}


def digit_instance(rng: random.Random):
    q = rng.randint(5, 16)
    m = rng.randint(1, 3)
    while True:
        cs = [rng.randint(1, max(1, (q - 1) // 2)) for _ in range(m)]
        if 2 * sum(cs) < q:
            break
        m = max(1, m - 1) if rng.random() < 0.3 else m
    name = rng.choice(sorted(U_FAMILIES))
    return name, U_FAMILIES[name], q, cs


def case1_instance(rng: random.Random):
    """Q(n) = sum of c * lam^(a k_i) with a unit root on the left."""
    deg = rng.randint(1, 2)
    q = [rng.randint(-3, 3) for _ in range(deg)] + [rng.choice([1, 2, 3])]
    lam = rng.choice([2, 3, -2, 5])
    m = rng.randint(1, 2)
    terms = [(rng.choice([1, 1, 2, -1, 3]), rng.choice([lam, lam, 2, 3]), rng.randint(1, 2)) for _ in range(m)]
    return PolyExpEquation.simple(LinRec(((tuple(q), 1),)), terms)


def case2_instance(rng: random.Random):
    """Q(n) mu^n against powers sharing a base with mu, optionally plus a constant term."""
    base = rng.choice([2, 3])
    mu = rng.choice([base, base**2, -base])
    q = (rng.randint(0, 2), rng.choice([1, 2])) if rng.random() < 0.7 else (rng.choice([1, 3]),) + (0, 1)
    lhs = [(q, mu)]
    if rng.random() < 0.3:
        lhs.append(((rng.choice([1, -1, 2]),), 1))
    m = rng.randint(1, 2)
    terms = []
    for _ in range(m):
        lam = rng.choice([base, -base, base**2, base**3])
        terms.append((rng.choice([1, 1, 2, -1]), lam, rng.randint(1, 2)))
    return PolyExpEquation.simple(LinRec.from_terms(lhs), terms)
