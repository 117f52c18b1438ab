"""Linear recurrence sequences in exponential-polynomial form.

A sequence is stored as ``sum_r Q_r(n) * mu_r**n`` with rational polynomials
``Q_r`` and pairwise distinct nonzero integer roots ``mu_r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import divisors


class UnsupportedInstance(ValueError):
    """The recurrence is outside the integer-root scope of this module."""


# ---------------------------------------------------------------------------
# rational polynomials as little-endian tuples of Fractions


def qpoly(coeffs) -> tuple[Fraction, ...]:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def qpoly_eval(q, n):
    acc = Fraction(0)
    for c in reversed(q):
        acc = acc * n + c
    return acc


def qpoly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, x in enumerate(b):
        r[i] += x
    return qpoly(r)


def qpoly_mul(a, b):
    if not a or not b:
        return ()
    r = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            r[i + j] += x * y
    return qpoly(r)


def qpoly_scale(a, s):
    return qpoly(x * s for x in a)


def qpoly_compose_linear(q, L, b):
    """Q(L*k + b) as a polynomial in k."""
    acc = ()
    lin = qpoly((b, L))
    for c in reversed(q):
        acc = qpoly_add(qpoly_mul(acc, lin), (c,))
    return acc


def qpoly_degree(q):
    return len(q) - 1


def parse_fraction(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).strip())


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinRec:
    """Sum of Q_r(n) * mu_r**n; ``terms`` is a tuple of (Q, mu) pairs."""

    terms: tuple

    def __post_init__(self):
        seen = set()
        norm = []
        for q, mu in self.terms:
            q = qpoly(q)
            if not isinstance(mu, int) or isinstance(mu, bool):
                if isinstance(mu, Fraction) and mu.denominator == 1:
                    mu = int(mu)
                else:
                    raise UnsupportedInstance(f"characteristic root {mu!r} is not an integer")
            if mu == 0:
                raise ValueError("characteristic roots must be nonzero")
            if mu in seen:
                raise ValueError(f"repeated characteristic root {mu}")
            if not q:
                raise ValueError(f"zero polynomial attached to root {mu}")
            seen.add(mu)
            norm.append((q, mu))
        object.__setattr__(self, "terms", tuple(norm))

    @classmethod
    def from_terms(cls, terms):
        """Build from (Q, mu) pairs, merging equal roots and dropping zero parts."""
        acc = {}
        for q, mu in terms:
            acc[mu] = qpoly_add(acc.get(mu, ()), qpoly(q))
        return cls(tuple((q, mu) for mu, q in sorted(acc.items(), key=lambda kv: (abs(kv[0]), kv[0])) if q))

    @property
    def roots(self):
        return tuple(mu for _, mu in self.terms)

    def __call__(self, n):
        return evaluate(self, n)

    def is_integer_valued_at(self, n):
        return evaluate(self, n).denominator == 1

    def to_json(self):
        return {
            "terms": [
                {"q_coeffs": [fraction_str(c) for c in q], "mu": mu} for q, mu in self.terms
            ]
        }

    @classmethod
    def from_json(cls, obj):
        return cls.from_terms(
            ([parse_fraction(c) for c in t["q_coeffs"]], int(t["mu"])) for t in obj["terms"]
        )


def evaluate(u: LinRec, n: int) -> Fraction:
    total = Fraction(0)
    for q, mu in u.terms:
        total += qpoly_eval(q, n) * Fraction(mu) ** n
    return total


@dataclass(frozen=True)
class DegeneracyReport:
    nondegenerate: bool
    ratio_root_of_unity: bool
    unit_roots_equal_one: bool


def degeneracy_report(u: LinRec) -> DegeneracyReport:
    roots = u.roots
    abs_seen = set()
    bad_ratio = False
    for mu in roots:
        # distinct integers with equal |mu| have ratio -1
        if abs(mu) in abs_seen:
            bad_ratio = True
        abs_seen.add(abs(mu))
    unit_ok = all(mu == 1 for mu in roots if abs(mu) == 1)
    return DegeneracyReport(not bad_ratio and unit_ok, bad_ratio, unit_ok)


def is_nondegenerate(u: LinRec) -> bool:
    """No ratio of distinct roots is a root of unity, and any unit root is 1."""
    return degeneracy_report(u).nondegenerate


def substitute_progression(u: LinRec, L: int, b: int) -> LinRec:
    """The sequence k -> u(L*k + b), rewritten symbolically."""
    parts = []
    for q, mu in u.terms:
        qk = qpoly_scale(qpoly_compose_linear(q, L, b), Fraction(mu) ** b)
        parts.append((qk, mu**L))
    return LinRec.from_terms(parts)


def nondegenerate_split(u: LinRec):
    """Split u along residues mod L (L in {1, 2}) into non-degenerate pieces.

    Returns a list of ((L, b), v) with v(k) = u(L*k + b).
    """
    if is_nondegenerate(u):
        return [((1, 0), u)]
    # rational roots of unity are +-1, so squaring every root suffices
    return [((2, b), substitute_progression(u, 2, b)) for b in (0, 1)]


# ---------------------------------------------------------------------------
# recurrence-coefficient form


def _int_poly_eval(coeffs_high_first, x):
    acc = 0
    for c in coeffs_high_first:
        acc = acc * x + c
    return acc


def from_recurrence(coeffs, initial) -> LinRec:
    """Closed form of u_{n+k} = c_1 u_{n+k-1} + ... + c_k u_n.

    Only characteristic polynomials with k distinct nonzero integer roots are
    supported; roots are found by divisor search on the constant term.
    """
    coeffs = [int(c) for c in coeffs]
    k = len(coeffs)
    if len(initial) != k:
        raise ValueError("need exactly k initial terms")
    if k == 0:
        return LinRec(())
    if coeffs[-1] == 0:
        raise UnsupportedInstance("zero characteristic root")
    char = [1] + [-c for c in coeffs]
    const = abs(char[-1])
    roots = []
    for dv in divisors(const):
        for r in (dv, -dv):
            if _int_poly_eval(char, r) == 0:
                roots.append(r)
    if len(roots) != k:
        raise UnsupportedInstance("characteristic polynomial does not split into distinct integer roots")
    # solve the Vandermonde system sum_r w_r * r**n = initial[n]
    mat = [[Fraction(r) ** n for r in roots] + [Fraction(initial[n])] for n in range(k)]
    w = _solve(mat)
    return LinRec.from_terms(((w_r,), r) for w_r, r in zip(w, roots))


def to_recurrence(u: LinRec):
    """Coefficients (c_1..c_k) of a recurrence annihilating u, plus k initial terms."""
    char = [Fraction(1)]
    for q, mu in u.terms:
        for _ in range(len(q)):
            char = [a - mu * b for a, b in zip(char + [Fraction(0)], [Fraction(0)] + char)]
    k = len(char) - 1
    coeffs = [-c for c in char[1:]]
    return [int(c) for c in coeffs], [evaluate(u, n) for n in range(k)]


def _solve(aug):
    n = len(aug)
    aug = [row[:] for row in aug]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]

