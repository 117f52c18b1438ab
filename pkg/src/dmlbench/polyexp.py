"""Polynomial-exponential equations  sum_r Q_r(n) mu_r^n = sum_t c_t lam_t^(a_t k_i(t)).

Solvers:

* :func:`solve_digit_partition` -- the carry-free case u_n = sum c_i q^k_i;
* :func:`solve_bounded` -- brute force with a meet-in-the-middle table;
* :func:`laurent_reduce` + :func:`solve_reduced` -- the subsum reduction to
  equations Q(n) = sum d_i lam^g_i with a logarithmic exponent bound.

Right-hand-side terms are stored flat; ``RhsTerm.unknown`` says which k_i a
term is driven by, so one unknown may instantiate several (c, lam) terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm

from .mullat import CommonBase, NotDependent, SigmaLattice, common_base, g_sigma
from .recseq import (
    LinRec,
    evaluate,
    fraction_str,
    is_nondegenerate,
    nondegenerate_split,
    parse_fraction,
    qpoly,
    qpoly_compose_linear,
    qpoly_eval,
    qpoly_scale,
)

DEFAULT_WORK_BUDGET = 5 * 10**7

CLASSIFICATIONS = ("finite", "case1", "case2", "mixed", "progressions")


class BudgetExceeded(RuntimeError):
    """The requested enumeration exceeds the configured work budget."""


class DegenerateEquation(ValueError):
    pass


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class RhsTerm:
    c: Fraction
    lam: int
    a: int
    unknown: int

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c == 0:
            raise ValueError("RHS coefficient must be nonzero")
        if abs(self.lam) <= 1:
            raise ValueError(f"|lambda| must exceed 1, got {self.lam}")
        if self.a < 1:
            raise ValueError(f"a must be a positive integer, got {self.a}")

    @property
    def base(self):
        return self.lam**self.a


@dataclass(frozen=True)
class PolyExpEquation:
    lhs: LinRec
    rhs: tuple[RhsTerm, ...]
    dim_v: int | None = None

    def __post_init__(self):
        rhs = tuple(self.rhs)
        if not rhs:
            raise ValueError("at least one RHS term is required")
        object.__setattr__(self, "rhs", rhs)

    @classmethod
    def simple(cls, lhs, terms, dim_v=None):
        """Terms given as (c, lam, a), each with its own unknown."""
        return cls(lhs, tuple(RhsTerm(c, lam, a, i) for i, (c, lam, a) in enumerate(terms)), dim_v)

    @property
    def unknowns(self):
        return tuple(sorted({t.unknown for t in self.rhs}))

    @property
    def m(self):
        return len(self.unknowns)

    def rhs_value(self, ks) -> Fraction:
        pos = {u: i for i, u in enumerate(self.unknowns)}
        return sum((t.c * Fraction(t.base) ** ks[pos[t.unknown]] for t in self.rhs), Fraction(0))

    def holds(self, n, ks) -> bool:
        return evaluate(self.lhs, n) == self.rhs_value(ks)

    def to_json(self):
        return {
            "lhs": self.lhs.to_json(),
            "rhs": [
                {"c": fraction_str(t.c), "lambda": t.lam, "a": t.a, "unknown": t.unknown}
                for t in self.rhs
            ],
            "meta": {"dimV": self.dim_v},
        }

    @classmethod
    def from_json(cls, obj):
        terms = []
        for i, t in enumerate(obj["rhs"]):
            terms.append(RhsTerm(parse_fraction(t["c"]), int(t["lambda"]), int(t["a"]), int(t.get("unknown", i))))
        dim_v = (obj.get("meta") or {}).get("dimV")
        return cls(LinRec.from_json(obj["lhs"]), tuple(terms), dim_v)


@dataclass
class SolutionSet:
    """One lexicographically smallest witness per n, each verified on insert."""

    complete_up_to: tuple
    classification: str | None = None
    check: object = field(default=None, repr=False)
    _best: dict = field(default_factory=dict, repr=False)

    def add(self, n, ks):
        ks = tuple(ks)
        if self.check is not None and not self.check(n, ks):
            raise AssertionError(f"rejected non-solution n={n}, k={ks}")
        old = self._best.get(n)
        if old is None or ks < old:
            self._best[n] = ks

    @property
    def solutions(self):
        return sorted(self._best.items())

    @property
    def ns(self):
        return sorted(self._best)

    def __len__(self):
        return len(self._best)

    def __contains__(self, n):
        return n in self._best

    def witness(self, n):
        return self._best[n]

    def to_json(self):
        return {
            "solutions": [{"n": n, "k": list(k)} for n, k in self.solutions],
            "complete_up_to": list(self.complete_up_to),
            "classification": self.classification,
        }


# ---------------------------------------------------------------------------
# carry-free digit solver


def _int_value(u, n):
    v = evaluate(u, n)
    if v.denominator != 1:
        raise ValueError(f"u({n}) = {v} is not an integer")
    return v.numerator


def _digits(v, q):
    out = []
    while v:
        v, r = divmod(v, q)
        out.append(r)
    return out


def _cover(digits, cs, K_max):
    """Lexicographically smallest k with sum cs[i] q^k[i] matching the digit vector."""
    spots = [(pos, d) for pos, d in enumerate(digits) if d]
    if len(spots) > len(cs):
        return None
    if K_max is not None and spots and spots[-1][0] > K_max:
        return None
    need = {pos: d for pos, d in spots}
    order = sorted(need)
    ks = [0] * len(cs)
    remaining = sum(need.values())
    if remaining != sum(cs):
        return None

    def place(i):
        if i == len(cs):
            return all(v == 0 for v in need.values())
        # indices still to place must be able to fill what is left
        for pos in order:
            if need[pos] >= cs[i]:
                need[pos] -= cs[i]
                ks[i] = pos
                if place(i + 1):
                    return True
                need[pos] += cs[i]
        return False

    return tuple(ks) if place(0) else None


def solve_digit_partition(u: LinRec, q: int, cs, M: int, K_max: int | None = None) -> SolutionSet:
    """All n <= M with u_n = sum c_i q^k_i, assuming sum c_i < q/2 (no carries).

    ``K_max`` optionally caps every k_i, matching :func:`solve_bounded`.
    """
    cs = tuple(int(c) for c in cs)
    if q < 2:
        raise ValueError("q must be >= 2")
    if not cs or any(c <= 0 for c in cs):
        raise ValueError("coefficients must be positive integers")
    if 2 * sum(cs) >= q:
        raise ValueError("requires sum(c_i) < q/2")
    eq = PolyExpEquation.simple(u, [(c, q, 1) for c in cs])
    out = SolutionSet((M, K_max), classify(eq), check=eq.holds)
    ceiling = None if K_max is None else sum(cs) * q**K_max
    for n in range(M + 1):
        v = _int_value(u, n)
        if v <= 0 or (ceiling is not None and v > ceiling):
            continue
        ks = _cover(_digits(v, q), cs, K_max)
        if ks is not None:
            out.add(n, ks)
    return out


# ---------------------------------------------------------------------------
# bounded brute force


def _unknown_tables(eq, K_max):
    """Per unknown: values sum_t c_t base_t^k for k = 0..K_max."""
    tables = []
    for u in eq.unknowns:
        terms = [(t.c, t.base) for t in eq.rhs if t.unknown == u]
        col = []
        pows = [1] * len(terms)
        for _ in range(K_max + 1):
            col.append(sum((c * p for (c, _), p in zip(terms, pows)), Fraction(0)))
            pows = [p * b for p, (_, b) in zip(pows, terms)]
        tables.append(col)
    return tables


def solve_bounded(eq: PolyExpEquation, M: int, K_max: int, budget: int = DEFAULT_WORK_BUDGET) -> SolutionSet:
    """Every n <= M with a solution k in [0, K_max]^m, by exhaustive search.

    The first ceil(m/2) unknowns (all of them when m <= 2) are tabulated by
    value; the rest are enumerated per n and pruned by the size of u_n.
    """
    m = eq.m
    h = m if m <= 2 else (m + 1) // 2
    width = K_max + 1
    work = width**h + (M + 1) * width ** (m - h)
    if work > budget:
        raise BudgetExceeded(f"estimated work {work} exceeds budget {budget}")
    tables = _unknown_tables(eq, K_max)
    left_tab, right_tab = tables[:h], tables[h:]
    left = {}
    for ks in product(range(width), repeat=h):
        v = sum((left_tab[i][k] for i, k in enumerate(ks)), Fraction(0))
        left.setdefault(v, ks)
    maxabs = [max(abs(x) for x in col) for col in tables]
    total_max = sum(maxabs)
    out = SolutionSet((M, K_max), classify(eq), check=eq.holds)
    for n in range(M + 1):
        v = evaluate(eq.lhs, n)
        if abs(v) > total_max:
            continue
        ranges = []
        for j, col in enumerate(right_tab):
            cap = abs(v) + total_max - maxabs[h + j]
            ranges.append([k for k in range(width) if abs(col[k]) <= cap])
        best = None
        for rk in product(*ranges):
            rest = v - sum((right_tab[j][k] for j, k in enumerate(rk)), Fraction(0))
            lk = left.get(rest)
            if lk is not None:
                cand = lk + rk
                if best is None or cand < best:
                    best = cand
        if best is not None:
            out.add(n, best)
    return out


# ---------------------------------------------------------------------------
# subsum reduction


@dataclass(frozen=True)
class ReducedTerm:
    d: Fraction
    base: int
    unknown: int
    B: int = 1
    residue: int = 0


@dataclass(frozen=True)
class ReducedEquation:
    """Q(k) = sum_t d_t * base_t^g_{unknown(t)} with n = L*k + beta.

    In Case 2 every base equals ``lam`` and g_i = B_i*K_i - b*k where
    k_i = E*K_i + residue_i; ``free_unknowns`` had all their terms cancel in
    this residue class and take k_i = residue_i.
    """

    Q: tuple
    terms: tuple[ReducedTerm, ...]
    case: str = "case1"
    lam: int | None = None
    b: int = 0
    allow_negative_exponents: bool = False
    residue_class: tuple = (1, ())
    progression: tuple = (1, 0)
    free_unknowns: tuple = ()
    unknowns: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "Q", qpoly(self.Q))
        terms = tuple(ReducedTerm(Fraction(t.d), t.base, t.unknown, t.B, t.residue) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        if not self.unknowns:
            object.__setattr__(self, "unknowns", tuple(sorted({t.unknown for t in terms} | set(self.free_unknowns))))

    @property
    def active_unknowns(self):
        return tuple(sorted({t.unknown for t in self.terms}))

    def rhs_value(self, gs) -> Fraction:
        pos = {u: i for i, u in enumerate(self.active_unknowns)}
        return sum((t.d * Fraction(t.base) ** gs[pos[t.unknown]] for t in self.terms), Fraction(0))

    def to_json(self):
        return {
            "case": self.case,
            "Q": [fraction_str(c) for c in self.Q],
            "terms": [
                {"d": fraction_str(t.d), "base": t.base, "unknown": t.unknown, "B": t.B, "residue": t.residue}
                for t in self.terms
            ],
            "lambda": self.lam,
            "b": self.b,
            "allow_negative_exponents": self.allow_negative_exponents,
            "residue_class": {"E": self.residue_class[0], "residues": list(self.residue_class[1])},
            "progression": list(self.progression),
            "free_unknowns": list(self.free_unknowns),
        }


@dataclass(frozen=True)
class Branch:
    sigma1: tuple
    sigma2: tuple
    kind: str
    reason: str
    lattice: SigmaLattice | None = None
    base: CommonBase | None = None
    reduced: tuple = ()

    def to_json(self):
        return {
            "sigma1": list(self.sigma1),
            "sigma2": list(self.sigma2),
            "kind": self.kind,
            "reason": self.reason,
            "lattice": self.lattice.to_json() if self.lattice is not None else None,
            "common_base": self.base.to_json() if self.base is not None else None,
            "reduced": [r.to_json() for r in self.reduced],
        }


def _subsets(items):
    items = list(items)
    for mask in range(1 << len(items)):
        yield tuple(x for i, x in enumerate(items) if mask >> i & 1)


def _case2_equations(q, mu, terms, progression):
    """Reduced equations for Q(k) mu^k = sum c lam^(a k_i) with mu >= 2."""
    pairs = [(t.lam, t.a) for t in terms]
    groups = [t.unknown for t in terms]
    cb = common_base(mu, pairs, groups)
    unknowns = sorted(set(groups))
    per_unknown_b = {}
    for t, pb in zip(terms, cb.pairs):
        if per_unknown_b.setdefault(t.unknown, pb.b_i) != pb.b_i:
            raise NotDependent("terms of one unknown have different common-base exponents")
    eqs = []
    for residues in product(range(cb.E), repeat=len(unknowns)):
        rho = dict(zip(unknowns, residues))
        red_terms, free = [], []
        for u in unknowns:
            d = Fraction(0)
            for t, pb in zip(terms, cb.pairs):
                if t.unknown == u:
                    d += t.c * pb.zeta ** rho[u] * Fraction(cb.lam) ** (pb.b_i * rho[u])
            if d:
                red_terms.append(ReducedTerm(d, cb.lam, u, cb.E * per_unknown_b[u], rho[u]))
            else:
                free.append(u)
        eqs.append(
            ReducedEquation(
                q,
                tuple(red_terms),
                "case2",
                cb.lam,
                cb.b,
                True,
                (cb.E, residues),
                progression,
                tuple(free),
                tuple(unknowns),
            )
        )
    return cb, tuple(eqs)


def laurent_reduce(eq: PolyExpEquation) -> list[Branch]:
    """Enumerate the subsums containing a designated non-constant root and classify each."""
    lhs = eq.lhs
    if not is_nondegenerate(lhs):
        raise DegenerateEquation("left-hand side is degenerate; run nondegenerate_split first")
    nonconst = [r for r, (q, _) in enumerate(lhs.terms) if len(q) > 1]
    if not nonconst:
        return [
            Branch(
                tuple(range(len(lhs.terms))),
                tuple(range(len(eq.rhs))),
                "progressions",
                "all polynomial coefficients constant: solution set is a finite union of arithmetic progressions",
            )
        ]
    r0 = nonconst[0]
    q0, mu0 = lhs.terms[r0]
    others = [r for r in range(len(lhs.terms)) if r != r0]
    branches = []
    for extra in _subsets(others):
        sigma1 = tuple(sorted((r0,) + extra))
        for sigma2 in _subsets(range(len(eq.rhs))):
            terms = [eq.rhs[i] for i in sigma2]
            if len(sigma1) >= 2:
                if sigma2:
                    lat = g_sigma([lhs.terms[r][1] for r in sigma1], [(t.lam, t.a) for t in terms], [t.unknown for t in terms])
                    reason = "two or more characteristic roots in the subsum force a trivial relation group"
                else:
                    lat = None
                    reason = "vanishing non-degenerate left subsum has finitely many zeros"
                branches.append(Branch(sigma1, sigma2, "finite", reason, lat))
                continue
            if not sigma2:
                branches.append(Branch(sigma1, sigma2, "finite", "Q(n) mu^n = 0 with Q non-constant"))
                continue
            lat = g_sigma([mu0], [(t.lam, t.a) for t in terms], [t.unknown for t in terms])
            if lat.trivial:
                branches.append(Branch(sigma1, sigma2, "finite", "relation group is trivial", lat))
                continue
            if mu0 == 1:
                red = ReducedEquation(
                    q0,
                    tuple(ReducedTerm(t.c, t.base, t.unknown) for t in terms),
                    "case1",
                )
                branches.append(Branch(sigma1, sigma2, "case1", "unit root: exponents grow logarithmically", lat, None, (red,)))
                continue
            if mu0 > 0:
                cb, eqs = _case2_equations(q0, mu0, terms, (1, 0))
            else:
                # a negative root is handled along the two parity classes of n
                eqs = ()
                cb = None
                for beta in (0, 1):
                    qk = qpoly_scale(qpoly_compose_linear(q0, 2, beta), Fraction(mu0) ** beta)
                    cb, part = _case2_equations(qk, mu0 * mu0, terms, (2, beta))
                    eqs += part
            branches.append(Branch(sigma1, sigma2, "case2", "common base: divide by lam^(b n)", lat, cb, eqs))
    return branches


def classification_of(branches) -> str:
    kinds = {b.kind for b in branches}
    if "progressions" in kinds:
        return "progressions"
    reduced = kinds & {"case1", "case2"}
    if not reduced:
        return "finite"
    structural_finite = any(
        b.kind == "finite" and len(b.sigma1) == 1 and b.sigma2 for b in branches
    )
    if len(reduced) == 2 or structural_finite:
        return "mixed"
    return reduced.pop()


def classify(eq: PolyExpEquation) -> str:
    kinds = set()
    for _, v in nondegenerate_split(eq.lhs):
        if not v.terms:
            continue
        kinds.add(classification_of(laurent_reduce(PolyExpEquation(v, eq.rhs, eq.dim_v))))
    if not kinds:
        return "finite"
    return kinds.pop() if len(kinds) == 1 else "mixed"


# ---------------------------------------------------------------------------
# reduced-equation solver


class PolyInverter:
    """Find all k in [0, kmax] with P(k) = w for an integer polynomial P."""

    def __init__(self, coeffs, kmax):
        self.coeffs = tuple(int(c) for c in coeffs)
        self.kmax = kmax
        deriv = [i * c for i, c in enumerate(self.coeffs)][1:]
        while deriv and deriv[-1] == 0:
            deriv.pop()
        if len(deriv) <= 1:
            n0 = 0
        else:
            # Cauchy bound on the real roots of P'
            lead = abs(deriv[-1])
            n0 = 1 + max(Fraction(abs(c), lead) for c in deriv[:-1])
            n0 = math.floor(n0) + 1
        self.head_end = min(n0, kmax + 1)
        self.head = {}
        for k in range(self.head_end):
            self.head.setdefault(self(k), []).append(k)
        self.increasing = self.coeffs[-1] > 0
        vals = list(self.head)
        if self.head_end <= kmax:
            vals += [self(self.head_end), self(kmax)]
        self.lo, self.hi = (min(vals), max(vals)) if vals else (0, -1)

    def __call__(self, k):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc

    def solve(self, w):
        if w < self.lo or w > self.hi:
            return []
        out = list(self.head.get(w, ()))
        lo, hi = self.head_end, self.kmax
        if lo > hi:
            return out
        sign = 1 if self.increasing else -1
        while lo < hi:
            mid = (lo + hi) // 2
            if sign * self(mid) < sign * w:
                lo = mid + 1
            else:
                hi = mid
        if self(lo) == w:
            out.append(lo)
        return out


def _height(x: Fraction):
    return max(abs(x.numerator), x.denominator)


def exponent_bound(req: ReducedEquation, kmax: int):
    """Instance-derived bound G with |g_i| <= G for every relevant solution, plus its derivation."""
    m1 = max(len(req.active_unknowns), 1)
    deg = len(req.Q) - 1
    hd = max((_height(t.d) for t in req.terms), default=1)
    hq = max(_height(c) for c in req.Q)
    den = lcm(*(t.d.denominator for t in req.terms), *(c.denominator for c in req.Q))
    size = m1 * hd * hq * (deg + 1) * (kmax + 1) ** deg * den
    base = min((abs(t.base) for t in req.terms), default=2)
    g0 = 0
    while base**g0 < size:
        g0 += 1
    G = g0 + 2
    return G, {
        "G": G,
        "size": size,
        "log_base": base,
        "formula": "ceil(log_base(m1 * H(d) * H(Q) * (deg Q + 1) * (k_max + 1)^deg Q * den)) + 2",
    }


def fit_log_envelope(points):
    """Smallest (A, B), A >= 0, with y <= A*x + B for all points, minimizing the max gap."""
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        return 0.0, 0.0
    xs = {x for x, _ in pts}
    if len(xs) == 1:
        return 0.0, max(y for _, y in pts)
    from scipy.optimize import linprog

    # variables (A, B, t): minimize t
    A_ub, b_ub = [], []
    for x, y in pts:
        A_ub.append([-x, -1.0, 0.0])
        b_ub.append(-y)
        A_ub.append([x, 1.0, -1.0])
        b_ub.append(y)
    res = linprog([0.0, 0.0, 1.0], A_ub=A_ub, b_ub=b_ub, bounds=[(0, None), (None, None), (0, None)], method="highs")
    if not res.success:
        raise RuntimeError(f"envelope fit failed: {res.message}")
    A, B = float(res.x[0]), float(res.x[1])
    # lift B so the envelope holds despite solver tolerance
    B += max(0.0, max(y - (A * x + B) for x, y in pts))
    return A, B


@dataclass
class ReducedSolutions:
    equation: ReducedEquation
    pairs: list
    solutions: SolutionSet
    bound: dict
    fitted: tuple

    def to_json(self):
        return {
            "equation": self.equation.to_json(),
            **self.solutions.to_json(),
            "exponent_bound": self.bound,
            "fitted_constants": {"A_hat": self.fitted[0], "B_hat": self.fitted[1]},
        }


def solve_reduced(req: ReducedEquation, M: int) -> ReducedSolutions:
    """All (n, g) with n <= M solving Q(k) = sum d lam^g, n = L*k + beta, |g_i| <= G(M)."""
    if len(req.Q) <= 1:
        raise ValueError("constant Q is a finiteness case handled upstream")
    L, beta = req.progression
    kmax = (M - beta) // L if M >= beta else -1
    unknowns = req.active_unknowns
    G, report = exponent_bound(req, max(kmax, 0))
    lo = -G if req.allow_negative_exponents else 0
    g_range = range(lo, G + 1)
    # scale to integers: S * Q(k) = sum S*d*base^g
    shift = G if req.allow_negative_exponents else 0
    S = lcm(*(t.d.denominator for t in req.terms), *(c.denominator for c in req.Q))
    scale = S * (max(abs(t.base) for t in req.terms) ** shift if shift else 1)
    if shift and len({abs(t.base) for t in req.terms}) > 1:
        scale = S
        for b in {abs(t.base) for t in req.terms}:
            scale *= b**shift
    P = [int(c * scale) for c in req.Q]
    inv = PolyInverter(P, kmax) if kmax >= 0 else None
    cols = []
    for u in unknowns:
        ts = [t for t in req.terms if t.unknown == u]
        col = []
        for g in g_range:
            val = Fraction(0)
            for t in ts:
                val += t.d * Fraction(t.base) ** g
            w = val * scale
            col.append(w.numerator if w.denominator == 1 else None)
        cols.append(col)
    sols = SolutionSet((M, G), req.case, check=lambda n, gs: _reduced_holds(req, n, gs))
    pairs = []
    if inv is not None and unknowns:
        for idx in product(range(len(g_range)), repeat=len(unknowns)):
            w = 0
            for col, i in zip(cols, idx):
                x = col[i]
                if x is None:
                    break
                w += x
            else:
                for k in inv.solve(w):
                    gs = tuple(g_range[i] for i in idx)
                    n = L * k + beta
                    sols.add(n, gs)
                    pairs.append((n, gs))
    pairs.sort()
    growth = [(math.log(n), max(abs(g) for g in gs)) for n, gs in pairs if n >= 2]
    return ReducedSolutions(req, pairs, sols, report, fit_log_envelope(growth))


def _reduced_holds(req, n, gs):
    L, beta = req.progression
    k, r = divmod(n - beta, L)
    return r == 0 and qpoly_eval(req.Q, k) == req.rhs_value(gs)


def lift_reduced(req: ReducedEquation, n: int, gs) -> tuple | None:
    """Exponents k_i of the subsum equation behind (n, g), or None if g does not lift."""
    L, beta = req.progression
    k = (n - beta) // L
    gmap = dict(zip(req.active_unknowns, gs))
    out = {}
    if req.case == "case1":
        for u in req.active_unknowns:
            if gmap[u] < 0:
                return None
            out[u] = gmap[u]
    else:
        E, residues = req.residue_class
        rho = dict(zip(req.unknowns, residues))
        Bs = {t.unknown: t.B for t in req.terms}
        for u in req.active_unknowns:
            num = gmap[u] + req.b * k
            if num < 0 or num % Bs[u]:
                return None
            out[u] = E * (num // Bs[u]) + rho[u]
        for u in req.free_unknowns:
            out[u] = rho[u]
    return out


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class BranchResult:
    branch: Branch
    solved: list
    lifted: dict

    def to_json(self):
        return {
            **self.branch.to_json(),
            "solutions": [r.to_json() for r in self.solved],
            "lifted_ns": sorted(self.lifted),
        }


@dataclass
class PipelineResult:
    equation: PolyExpEquation
    M: int
    branches: list
    progression: tuple = (1, 0)

    @property
    def covered_ns(self):
        """n values solving some branch's subsum equation.

        Every solution of the full equation shows up here apart from finitely
        many exceptions; the converse fails when the complementary terms do not
        vanish on their own.
        """
        out = set()
        for br in self.branches:
            out.update(br.lifted)
        return sorted(out)

    @property
    def classification(self):
        return classification_of([b.branch for b in self.branches])

    def growth_points(self):
        pts = []
        for br in self.branches:
            for r in br.solved:
                pts += [(n, max(abs(g) for g in gs)) for n, gs in r.pairs if n >= 2]
        return pts

    def to_json(self):
        return {
            "M": self.M,
            "classification": self.classification,
            "covered_ns": self.covered_ns,
            "branches": [b.to_json() for b in self.branches],
        }


def reduce_and_solve(eq: PolyExpEquation, M: int) -> PipelineResult:
    """Run every reduced branch up to M and lift the solutions to the subsum equations."""
    results = []
    lhs = eq.lhs
    for br in laurent_reduce(eq):
        solved, lifted = [], {}
        if br.kind in ("case1", "case2"):
            terms = [eq.rhs[i] for i in br.sigma2]
            for req in br.reduced:
                rs = solve_reduced(req, M)
                solved.append(rs)
                for n, gs in rs.pairs:
                    ks = lift_reduced(req, n, gs)
                    if ks is None:
                        continue
                    left = sum((qpoly_eval(lhs.terms[r][0], n) * Fraction(lhs.terms[r][1]) ** n for r in br.sigma1), Fraction(0))
                    right = sum((t.c * Fraction(t.base) ** ks[t.unknown] for t in terms), Fraction(0))
                    if left == right:
                        lifted.setdefault(n, ks)
        results.append(BranchResult(br, solved, lifted))
    return PipelineResult(eq, M, results)


# ---------------------------------------------------------------------------


def count_profile(solutions, checkpoints, d: int):
    """(M, count, count / (1 + ln M)^d) for each checkpoint M."""
    ns = sorted(solutions.ns if hasattr(solutions, "ns") else solutions)
    if list(checkpoints) != sorted(checkpoints):
        raise ValueError("checkpoints must be ascending")
    from bisect import bisect_right

    out = []
    for M in checkpoints:
        c = bisect_right(ns, M)
        out.append((M, c, c / (1 + math.log(M)) ** d))
    return out
