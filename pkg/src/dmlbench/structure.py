"""Structure of return sets: progressions, sparse residue, counting bounds, p-forms, digits."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb


@dataclass
class ReturnSetDecomposition:
    M: int
    progressions: list  # (a, b, onset)
    singletons: list
    sparse: list
    provenance: dict = field(default_factory=dict)

    def members(self):
        """Reassemble the decomposed set on [0, M]."""
        out = set(self.singletons) | set(self.sparse)
        for a, b, n0 in self.progressions:
            out.update(range(n0, self.M + 1, a))
        return sorted(out)

    def to_json(self):
        return {
            "M": self.M,
            "progressions": [{"a": a, "b": b, "onset": n0} for a, b, n0 in self.progressions],
            "singletons": list(self.singletons),
            "sparse": list(self.sparse),
            "provenance": self.provenance,
        }


def _check_set(S, M):
    S = list(S)
    if any(x >= y for x, y in zip(S, S[1:])):
        raise ValueError("input set must be sorted and duplicate-free")
    if S and (S[0] < 0 or S[-1] > M):
        raise ValueError("input set must lie in [0, M]")
    return S


def decompose(S, M: int, a_max: int = 64, window_fraction=Fraction(1, 2), min_members: int = 3) -> ReturnSetDecomposition:
    """Greedy windowed detection of arithmetic progressions inside S.

    (a, b) is accepted when every n = b mod a in [window_fraction*M, M] is
    still unassigned in S and there are at least ``min_members`` of them.
    """
    S = _check_set(S, M)
    wf = Fraction(window_fraction)
    if a_max < 1:
        raise ValueError("a_max must be >= 1")
    if not 0 < wf < 1:
        raise ValueError("window_fraction must lie in (0, 1)")
    lo = math.ceil(wf * M)
    remaining = set(S)
    progs = []
    for a in range(1, a_max + 1):
        for b in range(a):
            start = lo + (b - lo) % a
            window = range(start, M + 1, a)
            if len(window) < min_members or any(n not in remaining for n in window):
                continue
            n0 = start
            while n0 - a >= 0 and n0 - a in remaining:
                n0 -= a
            progs.append((a, b, n0))
            remaining.difference_update(range(n0, M + 1, a))
    return ReturnSetDecomposition(
        M,
        progs,
        [],
        sorted(remaining),
        {"a_max": a_max, "window_fraction": f"{wf.numerator}/{wf.denominator}", "min_members": min_members},
    )


# ---------------------------------------------------------------------------
# counting bound


@dataclass
class BoundCertificate:
    d: int
    checkpoints: list
    counts: list
    ratios: list
    A_min: list
    growth: float
    growth_tolerance: float
    verdict: str

    def rows(self):
        return list(zip(self.checkpoints, self.counts, self.ratios, self.A_min))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["M", "count", "ratio", "A_min"])
        for M, c, r, a in self.rows():
            w.writerow([M, c, repr(r), repr(a)])
        return buf.getvalue()

    def to_json(self):
        return {
            "d": self.d,
            "profile": [{"M": M, "count": c, "ratio": r, "A_min": a} for M, c, r, a in self.rows()],
            "growth": self.growth,
            "growth_tolerance": self.growth_tolerance,
            "verdict": self.verdict,
        }


def certify_bound(sparse, d: int, checkpoints, growth_tolerance: float = 2.0) -> BoundCertificate:
    """A_min(M) = max over checkpoints M' <= M of count(M') / (1 + ln M')^d, plus a verdict."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    cps = list(checkpoints)
    if cps != sorted(cps) or len(set(cps)) != len(cps):
        raise ValueError("checkpoints must be strictly ascending")
    if len(cps) < 3:
        raise ValueError("need at least 3 checkpoints")
    if cps[0] < 1 or math.log(cps[-1] / cps[0]) < 2:
        raise ValueError("checkpoints must span at least two natural-log orders of magnitude")
    from bisect import bisect_right

    sparse = sorted(sparse)
    counts, ratios, amin = [], [], []
    best = 0.0
    for M in cps:
        c = bisect_right(sparse, M)
        r = c / (1 + math.log(M)) ** d
        best = max(best, r)
        counts.append(c)
        ratios.append(r)
        amin.append(best)
    if amin[0] > 0:
        growth = amin[-1] / amin[0]
    else:
        growth = 1.0 if amin[-1] == 0 else math.inf
    verdict = "consistent" if growth <= growth_tolerance else "inconsistent"
    return BoundCertificate(d, cps, counts, ratios, amin, growth, growth_tolerance, verdict)


# ---------------------------------------------------------------------------
# p-forms


@dataclass(frozen=True)
class PForm:
    """Values sum_j c_j * p^(a_j * k_j) over k_j >= 0."""

    m: int
    c: tuple
    a: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if self.m < 1 or len(self.c) != self.m or len(self.a) != self.m:
            raise ValueError("c and a must both have length m >= 1")
        if any(x <= 0 for x in self.c):
            raise ValueError("only positive coefficients are supported")
        if any(x < 0 for x in self.a):
            raise ValueError("exponents a_j must be nonnegative")
        if self.p < 2:
            raise ValueError("p must be >= 2")

    def value(self, ks) -> Fraction:
        return sum((c * Fraction(self.p) ** (a * k) for c, a, k in zip(self.c, self.a, ks)), Fraction(0))


def pform_witnesses(f: PForm, M: int) -> dict:
    """{value: lexicographically smallest k} for all values <= M."""
    terms = []
    for c, a in zip(f.c, f.a):
        col = []
        k = 0
        while True:
            v = c * f.p ** (a * k)
            if v > M:
                break
            col.append((v, k))
            if a == 0:
                break
            k += 1
        terms.append(col)
    partial = {Fraction(0): ()}
    for col in terms:
        nxt = {}
        for s, ks in partial.items():
            for v, k in col:
                t = s + v
                if t <= M:
                    w = ks + (k,)
                    if t not in nxt or w < nxt[t]:
                        nxt[t] = w
        partial = nxt
    out = {}
    for v, ks in partial.items():
        if v.denominator != 1:
            raise ArithmeticError(f"p-form produced the non-integer value {v}")
        out[int(v)] = ks
    return dict(sorted(out.items()))


def pform_generate(f: PForm, M: int) -> list:
    return list(pform_witnesses(f, M))


def pform_match(sparse, f: PForm, M: int):
    """(matched, symmetric difference) between sparse and the p-form on [0, M]."""
    got = {n for n in sparse if 0 <= n <= M}
    want = set(pform_generate(f, M))
    diff = sorted(got ^ want)
    return not diff, diff


# ---------------------------------------------------------------------------
# digit combinatorics


def count_nonzero_digits(p: int, m: int, M: int, ones_only: bool = True) -> int:
    """#{1 <= n <= M : n has exactly m nonzero base-p digits (all equal to 1 if ones_only)}."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if M < 1:
        return 0
    digits = []
    x = M
    while x:
        x, r = divmod(x, p)
        digits.append(r)
    digits.reverse()
    choices = 1 if ones_only else p - 1
    total = 0
    used = 0  # nonzero digits fixed so far on the tight prefix
    for i, dgt in enumerate(digits):
        rest = len(digits) - i - 1
        # put a smaller digit here and leave the suffix free
        for smaller in range(dgt):
            nz = 1 if smaller else 0
            if smaller and ones_only and smaller != 1:
                continue
            need = m - used - nz
            if 0 <= need <= rest:
                total += comb(rest, need) * choices**need
        if dgt:
            if ones_only and dgt != 1:
                return total
            used += 1
            if used > m:
                return total
    if used == m:
        total += 1
    return total


def brute_count_nonzero_digits(p, m, M, ones_only=True):
    total = 0
    for n in range(1, M + 1):
        nz = 0
        ok = True
        x = n
        while x:
            x, r = divmod(x, p)
            if r:
                nz += 1
                if ones_only and r != 1:
                    ok = False
        total += ok and nz == m
    return total
