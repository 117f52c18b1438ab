"""Independent reference implementations used to check the library.

Nothing here imports the solver code under test; each oracle is the most
direct brute-force formulation available.
"""

from fractions import Fraction
from itertools import product


# --- F_2[t] as Python ints (bit i = coefficient of t^i) ---------------------


def clmul(a, b):
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def frobenius_orbit_oracle(M):
    """n <= M with (1+t)^n == 1 + t^n over F_2, by carry-less multiplication."""
    ns = []
    y = 1
    for n in range(M + 1):
        if y == 1 ^ (1 << n):
            ns.append(n)
        y = clmul(y, 0b11)
    return ns


# --- polynomials over F_p as coefficient lists ------------------------------


def poly_mod(a, m, p):
    a = list(a)
    while len(a) >= len(m):
        c = a[-1] * pow(m[-1], -1, p) % p
        shift = len(a) - len(m)
        for i, x in enumerate(m):
            a[shift + i] = (a[shift + i] - c * x) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def monic_polys(p, d):
    for lower in product(range(p), repeat=d):
        yield list(lower) + [1]


def irreducible_by_trial_division(m, p):
    d = len(m) - 1
    for k in range(1, d // 2 + 1):
        for f in monic_polys(p, k):
            if not poly_mod(m, f, p):
                return False
    return True


def has_root(m, p):
    return any(sum(c * pow(x, i, p) for i, c in enumerate(m)) % p == 0 for x in range(p))


# --- recurrences -------------------------------------------------------------


def companion_unroll(coeffs, initial, n_max):
    """u_{n+k} = sum_j coeffs[j] u_{n+k-1-j}, iterated as a companion-matrix product."""
    k = len(coeffs)
    state = [Fraction(x) for x in initial]  # (u_n, ..., u_{n+k-1})
    out = []
    for _ in range(n_max + 1):
        out.append(state[0])
        nxt = sum((c * state[k - 1 - j] for j, c in enumerate(coeffs)), Fraction(0))
        state = state[1:] + [nxt]
    return out


def closed_form(terms, n):
    total = Fraction(0)
    for q, mu in terms:
        total += sum((Fraction(c) * n**i for i, c in enumerate(q)), Fraction(0)) * Fraction(mu) ** n
    return total


# --- multiplicative relations ------------------------------------------------


def relation_holds(mus, pairs, f):
    """mu^f0 == lam^(a f_i) for every mu and every pair, in exact rationals."""
    for mu in mus:
        left = Fraction(mu) ** f[0]
        for i, (lam, a) in enumerate(pairs):
            if left != Fraction(lam) ** (a * f[i + 1]):
                return False
    return True


def brute_relations(mus, pairs, bound):
    return [f for f in product(range(-bound, bound + 1), repeat=1 + len(pairs)) if relation_holds(mus, pairs, f)]


# --- polynomial-exponential equations ----------------------------------------


def brute_equation(u, rhs, M, K_max):
    """{n <= M : u(n) = sum c lam^(a k_i)} by full enumeration over k in [0, K_max]^m.

    ``u`` is a callable; ``rhs`` is a list of (c, lam, a), one unknown each.
    """
    sums = set()
    for ks in product(range(K_max + 1), repeat=len(rhs)):
        sums.add(sum((Fraction(c) * Fraction(lam) ** (a * k) for (c, lam, a), k in zip(rhs, ks)), Fraction(0)))
    return [n for n in range(M + 1) if u(n) in sums]


def brute_reduced(Q, ds, lam, g_lo, g_hi, M):
    """{n <= M : Q(n) = sum d_i lam^g_i} with g_i in [g_lo, g_hi]."""
    vals = set()
    for gs in product(range(g_lo, g_hi + 1), repeat=len(ds)):
        vals.add(sum((Fraction(d) * Fraction(lam) ** g for d, g in zip(ds, gs)), Fraction(0)))
    return [n for n in range(M + 1) if Q(n) in vals]


# --- digits ------------------------------------------------------------------


def digit_scan(p, m, M, ones_only):
    count = 0
    for n in range(1, M + 1):
        digits = []
        x = n
        while x:
            x, r = divmod(x, p)
            digits.append(r)
        nz = [d for d in digits if d]
        if len(nz) == m and (not ones_only or all(d == 1 for d in nz)):
            count += 1
    return count
