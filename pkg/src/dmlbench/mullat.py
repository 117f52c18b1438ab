"""Multiplicative relation lattices among nonzero rationals.

Everything reduces to integer linear algebra on prime-exponent vectors: a
product ``prod x_i**e_i`` equals 1 iff every prime valuation cancels and the
number of negative factors is even.  The parity condition is linearized with
one slack variable per sign row, and kernels are taken over ZZ by column
Hermite reduction, so no floating point is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import factorint


class NotDependent(ValueError):
    """Raised by :func:`common_base` when the relation lattice is trivial."""


def factor_rational(x) -> tuple[int, dict[int, int]]:
    """(sign, {prime: valuation}) of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no factorization")
    sign = -1 if x < 0 else 1
    vals = dict(factorint(abs(x.numerator))) if abs(x.numerator) > 1 else {}
    if x.denominator > 1:
        for q, e in factorint(x.denominator).items():
            vals[q] = vals.get(q, 0) - e
    return sign, vals


# ---------------------------------------------------------------------------
# integer linear algebra


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def integer_kernel(rows, ncols):
    """Basis (list of vectors) of {x in ZZ^ncols : A x = 0}.

    Column operations on ``[A; I]`` bring A into column echelon form; the
    identity-part columns sitting under zero A-columns span the kernel.
    """
    r = len(rows)
    cols = [[rows[i][j] for i in range(r)] + [int(k == j) for k in range(ncols)] for j in range(ncols)]
    pivot_col = 0
    for i in range(r):
        # gcd-combine column entries in row i over the columns not yet pivoted
        for j in range(pivot_col + 1, ncols):
            a, b = cols[pivot_col][i], cols[j][i]
            if b == 0:
                continue
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            ci, cj = cols[pivot_col], cols[j]
            cols[pivot_col] = [s * x + t * y for x, y in zip(ci, cj)]
            cols[j] = [-bg * x + ag * y for x, y in zip(ci, cj)]
        if pivot_col < ncols and cols[pivot_col][i] != 0:
            pivot_col += 1
        if pivot_col == ncols:
            break
    return [c[r:] for c in cols[pivot_col:]]


def hermite_rows(vectors):
    """Row Hermite normal form of the lattice spanned by ``vectors`` (zero rows dropped)."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    n = len(rows[0])
    out = []
    col = 0
    while rows and col < n:
        nz = [i for i, v in enumerate(rows) if v[col] != 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(rows[i][col]))
            piv = rows[nz[0]]
            for i in nz[1:]:
                q = rows[i][col] // piv[col]
                rows[i] = [x - q * y for x, y in zip(rows[i], piv)]
            nz = [i for i in nz if rows[i][col] != 0]
        piv = rows.pop(nz[0])
        if piv[col] < 0:
            piv = [-x for x in piv]
        for k, prev in enumerate(out):
            q = prev[col] // piv[col]
            if q:
                out[k] = [x - q * y for x, y in zip(prev, piv)]
        out.append(piv)
        rows = [v for v in rows if any(v)]
        col += 1
    return out


def _rank(vectors):
    return len(hermite_rows(vectors))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentLattice:
    """Sublattice of ZZ^dim given by a row-HNF basis."""

    dim: int
    basis: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def rank(self):
        return len(self.basis)

    @property
    def trivial(self):
        return not self.basis

    def __contains__(self, vec):
        v = list(vec)
        if len(v) != self.dim:
            return False
        for row in self.basis:
            col = next(j for j, x in enumerate(row) if x)
            if v[col] % row[col]:
                return False
            q = v[col] // row[col]
            v = [x - q * y for x, y in zip(v, row)]
        return not any(v)

    def to_json(self):
        return {"basis": [list(b) for b in self.basis]}


def _lattice(vectors, dim):
    return ExponentLattice(dim, tuple(tuple(r) for r in hermite_rows(vectors)))


def _relations_from_rows(prime_rows, sign_rows, dim):
    """Kernel of the prime rows intersected with the even-parity conditions."""
    ns = len(sign_rows)
    width = dim + ns
    rows = [list(r) + [0] * ns for r in prime_rows]
    for k, srow in enumerate(sign_rows):
        slack = [0] * ns
        slack[k] = -2
        rows.append(list(srow) + slack)
    rows = [r for r in rows if any(r)]
    kern = integer_kernel(rows, width)
    # the slack coordinates are determined by the others, so projecting keeps a basis
    return _lattice([v[:dim] for v in kern], dim)


def relations_lattice(xs) -> ExponentLattice:
    """All e in ZZ^k with prod xs[i]**e[i] == 1."""
    facs = [factor_rational(x) for x in xs]
    primes = sorted({q for _, v in facs for q in v})
    prime_rows = [[v.get(q, 0) for _, v in facs] for q in primes]
    sign_row = [1 if s < 0 else 0 for s, _ in facs]
    return _relations_from_rows(prime_rows, [sign_row] if any(sign_row) else [], len(xs))


def satisfies(xs, e) -> bool:
    prod = Fraction(1)
    for x, k in zip(xs, e):
        prod *= Fraction(x) ** k
    return prod == 1


@dataclass(frozen=True)
class SigmaLattice:
    lattice: ExponentLattice
    mus: tuple
    pairs: tuple
    groups: tuple

    @property
    def trivial(self):
        return self.lattice.trivial

    @property
    def basis(self):
        return self.lattice.basis

    @property
    def rank(self):
        return self.lattice.rank

    def relation_holds(self, f) -> bool:
        return g_sigma_relation_holds(self.mus, self.pairs, self.groups, f)

    def to_json(self):
        return {**self.lattice.to_json(), "trivial": self.trivial}


def _default_groups(pairs, groups):
    if groups is None:
        return tuple(range(len(pairs)))
    if len(groups) != len(pairs):
        raise ValueError("one unknown index per pair required")
    return tuple(groups)


def g_sigma(mus, pairs, groups=None) -> SigmaLattice:
    """Lattice of (f_0, f_1..f_m1) with mu**f_0 == lam**(a*f_i) for every mu and pair.

    ``pairs`` are (lam, a); ``groups[k]`` names the unknown index i (0-based)
    that pair k belongs to, defaulting to one unknown per pair.
    """
    pairs = tuple((int(lam), int(a)) for lam, a in pairs)
    groups = _default_groups(pairs, groups)
    for lam, a in pairs:
        if abs(lam) <= 1:
            raise ValueError(f"|lambda| must exceed 1, got {lam}")
        if a < 1:
            raise ValueError(f"a must be positive, got {a}")
    m1 = len(set(groups))
    index = {g: k + 1 for k, g in enumerate(sorted(set(groups)))}
    dim = 1 + m1
    prime_rows, sign_rows = [], []
    for mu in mus:
        smu, vmu = factor_rational(mu)
        for (lam, a), g in zip(pairs, groups):
            slam, vlam = factor_rational(lam)
            col = index[g]
            for q in sorted(set(vmu) | set(vlam)):
                row = [0] * dim
                row[0] = vmu.get(q, 0)
                row[col] = -a * vlam.get(q, 0)
                prime_rows.append(row)
            srow = [0] * dim
            srow[0] = 1 if smu < 0 else 0
            srow[col] = (a if slam < 0 else 0) % 2
            if any(srow):
                sign_rows.append(srow)
    if not mus:
        lat = ExponentLattice(dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))
    else:
        lat = _relations_from_rows(prime_rows, sign_rows, dim)
    return SigmaLattice(lat, tuple(mus), pairs, groups)


def g_sigma_relation_holds(mus, pairs, groups, f) -> bool:
    groups = _default_groups(pairs, groups)
    index = {g: k + 1 for k, g in enumerate(sorted(set(groups)))}
    for mu in mus:
        lhs = Fraction(mu) ** f[0]
        for (lam, a), g in zip(pairs, groups):
            if lhs != Fraction(lam) ** (a * f[index[g]]):
                return False
    return True


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairBase:
    zeta: int
    b_i: int
    B_i: int


@dataclass(frozen=True)
class CommonBase:
    """mu = lam**b and lam_j**a_i = zeta * lam**b_i, zeta in {+1, -1}."""

    lam: int
    b: int
    pairs: tuple[PairBase, ...]
    E: int

    def to_json(self):
        return {
            "lambda": self.lam,
            "b": self.b,
            "pairs": [{"zeta": p.zeta, "b_i": p.b_i, "B_i": p.B_i} for p in self.pairs],
            "E": self.E,
        }


def _primitive_root_of(values):
    """Smallest integer lam > 1 with every value a positive power of lam, with those powers."""
    vecs = [factorint(v) for v in values]
    primes = sorted({q for v in vecs for q in v})
    ref = vecs[0]
    base_vec = {q: ref.get(q, 0) for q in primes}
    gb = 0
    for e in base_vec.values():
        gb = gcd(gb, e)
    prim = {q: e // gb for q, e in base_vec.items()}
    lam = 1
    for q, e in prim.items():
        lam *= q**e
    powers = []
    for v in vecs:
        ks = {v.get(q, 0) // prim[q] for q in primes if prim[q]}
        k = ks.pop()
        if ks or any(v.get(q, 0) != k * prim[q] for q in primes):
            raise NotDependent("values are not powers of a common base")
        powers.append(k)
    return lam, powers


def common_base(mu: int, pairs, groups=None) -> CommonBase:
    """Common base for mu and the lam_j**a_i (Case 2 of the reduction).

    Requires mu >= 2; a negative root must first be removed by splitting n by
    parity, since mu = lam**b with lam > 1 forces mu > 0.
    """
    mu = int(mu)
    if abs(mu) <= 1:
        raise ValueError("mu must not be 0 or +-1")
    if mu < 0:
        raise ValueError("negative mu has no real common base; refine n mod 2 first")
    pairs = tuple((int(lam), int(a)) for lam, a in pairs)
    sig = g_sigma((mu,), pairs, groups)
    if sig.trivial:
        raise NotDependent(f"{mu} is multiplicatively independent of the given lambda powers")
    values = [mu] + [abs(lam) ** a for lam, a in pairs]
    lam, powers = _primitive_root_of(values)
    b = powers[0]
    zetas = [(-1 if lam_j < 0 and a % 2 else 1) for lam_j, a in pairs]
    E = 2 if any(z == -1 for z in zetas) else 1
    out = tuple(PairBase(z, k, E * k) for z, k in zip(zetas, powers[1:]))
    return CommonBase(lam, b, out, E)
