"""Self-maps of the torus G_m^N over F_q(t) and their return sets.

A map is x_i -> beta_i * prod_j x_j^A[i][j].  Points come in three flavours:

* ``monomial``    coordinates c * t^e with c in F_q and e a (big) integer;
* ``general``     coordinates in F_p(t);
* ``specialized`` coordinates in a finite field after substituting t -> tau.

Monomial orbits only grow exponents, so they are exact and cheap.  General
orbits grow dense degrees, so exact mode is guarded by a cost budget and a
Monte Carlo mode evaluates at random points of a large extension field.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from sympy import Matrix

from .ffield import ExtElement, ExtField, Poly, RationalFunction, make_extension

DEFAULT_BUDGET = 2**22
# the whole exact scan costs about sum_n deg_n, so it gets its own ceiling
DEFAULT_SCAN_BUDGET = 2**28
MC_TARGET_BITS = 20
MC_MAX_DEGREE = 256
KINDS = ("monomial", "general", "specialized")


class ResourceError(RuntimeError):
    """Exact computation would exceed the configured budget."""


class BadSpecialization(ArithmeticError):
    """A denominator or a torus coordinate vanished at the chosen tau."""


class RepresentationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coordinates


@dataclass(frozen=True)
class MonomialCoord:
    c: ExtElement
    e: int

    def __post_init__(self):
        if not self.c:
            raise ValueError("monomial coordinate needs a nonzero constant")

    def __mul__(self, other):
        return MonomialCoord(self.c * other.c, self.e + other.e)

    def __pow__(self, k):
        return MonomialCoord(self.c**k, self.e * k)

    def to_json(self):
        return {"c": self.c.to_json(), "e": self.e}


def monomial_to_general(x: MonomialCoord) -> RationalFunction:
    if len(x.c.coeffs) > 1:
        raise RepresentationError("constant outside the prime field has no F_p(t) form")
    p = x.c.p
    c = x.c.coeffs[0]
    if x.e >= 0:
        return RationalFunction(Poly.monomial(x.e, p, c), _reduced=True)
    return RationalFunction(Poly.const(c, p), Poly.monomial(-x.e, p))


def general_to_monomial(r: RationalFunction, fq: ExtField) -> MonomialCoord | None:
    """c*t^e form of r, or None when r is not a monomial."""
    num, den = r.num.coeffs, r.den.coeffs
    if sum(1 for x in num if x) != 1 or sum(1 for x in den if x) != 1:
        return None
    e_num = len(num) - 1
    e_den = len(den) - 1
    return MonomialCoord(fq(num[-1]), e_num - e_den)


def _ratfun_pow(x: RationalFunction, k: int) -> RationalFunction:
    if k == 1:
        return x
    return x**k


@dataclass(frozen=True)
class TorusPoint:
    kind: str
    coords: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown representation {self.kind!r}")
        object.__setattr__(self, "coords", tuple(self.coords))
        for x in self.coords:
            if self.kind == "monomial" and not isinstance(x, MonomialCoord):
                raise RepresentationError("monomial point needs MonomialCoord entries")
            if self.kind == "general":
                if not isinstance(x, RationalFunction):
                    raise RepresentationError("general point needs RationalFunction entries")
                if x.is_zero():
                    raise ValueError("torus coordinates must be nonzero")
            if self.kind == "specialized":
                if not isinstance(x, ExtElement):
                    raise RepresentationError("specialized point needs field elements")
                if not x:
                    raise BadSpecialization("coordinate vanished under specialization")

    @property
    def N(self):
        return len(self.coords)

    @classmethod
    def identity(cls, N, kind, fq: ExtField, p=None):
        if kind == "monomial":
            return cls(kind, [MonomialCoord(fq.one(), 0)] * N)
        if kind == "general":
            return cls(kind, [RationalFunction.const(1, p or fq.p)] * N)
        return cls(kind, [fq.one()] * N)

    def __mul__(self, other):
        if self.kind != other.kind or self.N != other.N:
            raise RepresentationError("points must share representation and dimension")
        return TorusPoint(self.kind, [a * b for a, b in zip(self.coords, other.coords)])

    def to_kind(self, kind, fq: ExtField | None = None):
        if kind == self.kind:
            return self
        if self.kind == "monomial" and kind == "general":
            return TorusPoint(kind, [monomial_to_general(x) for x in self.coords])
        if self.kind == "general" and kind == "monomial":
            out = [general_to_monomial(x, fq) for x in self.coords]
            if any(x is None for x in out):
                raise RepresentationError("point is not monomial")
            return TorusPoint(kind, out)
        raise RepresentationError(f"cannot convert {self.kind} to {kind}; use specialize")

    def to_json(self):
        return {"kind": self.kind, "coords": [x.to_json() for x in self.coords]}


@dataclass(frozen=True)
class TorusMap:
    A: tuple
    beta: TorusPoint

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        object.__setattr__(self, "A", A)
        N = len(A)
        if any(len(row) != N for row in A):
            raise ValueError("A must be square")
        if self.beta.N != N:
            raise ValueError("translation has the wrong dimension")
        if Matrix(A).det() == 0:
            raise ValueError("det(A) = 0: the endomorphism is not dominant")

    @property
    def N(self):
        return len(self.A)


def apply_map(phi: TorusMap, P: TorusPoint) -> TorusPoint:
    if P.N != phi.N:
        raise ValueError("dimension mismatch")
    beta = phi.beta if phi.beta.kind == P.kind else phi.beta.to_kind(P.kind)
    out = []
    if P.kind == "monomial":
        for row, b in zip(phi.A, beta.coords):
            e = b.e + sum(a * x.e for a, x in zip(row, P.coords))
            c = b.c
            for a, x in zip(row, P.coords):
                if a:
                    c = c * (x.c if a == 1 else x.c**a)
            out.append(MonomialCoord(c, e))
    elif P.kind == "general":
        for row, b in zip(phi.A, beta.coords):
            acc = b
            for a, x in zip(row, P.coords):
                if a:
                    acc = acc * _ratfun_pow(x, a)
            out.append(acc)
    else:
        for row, b in zip(phi.A, beta.coords):
            acc = b
            for a, x in zip(row, P.coords):
                if a:
                    acc = acc * (x if a == 1 else x**a)
            out.append(acc)
    for x in out:
        assert (x.c if isinstance(x, MonomialCoord) else x), "map produced a zero coordinate"
    return TorusPoint(P.kind, out)


def orbit(phi: TorusMap, alpha: TorusPoint, n: int):
    """[alpha, phi(alpha), ..., phi^n(alpha)]."""
    pts = [alpha]
    for _ in range(n):
        pts.append(apply_map(phi, pts[-1]))
    return pts


# ---------------------------------------------------------------------------
# subvarieties


@dataclass(frozen=True)
class LaurentVariety:
    """Common zero set of Laurent polynomials; each polynomial is a tuple of (coeff, exponents)."""

    N: int
    polys: tuple
    dim_hint: int = 0

    def __post_init__(self):
        polys = tuple(tuple((c, tuple(int(e) for e in exps)) for c, exps in poly) for poly in self.polys)
        object.__setattr__(self, "polys", polys)
        if not 0 <= self.dim_hint <= self.N:
            raise ValueError("dim_hint must lie in [0, N]")
        for poly in polys:
            if not any(_coeff_nonzero(c) for c, _ in poly):
                raise ValueError("defining Laurent polynomial is zero")
            for _, exps in poly:
                if len(exps) != self.N:
                    raise ValueError("exponent vector has the wrong length")

    def max_abs_exponents(self):
        out = [0] * self.N
        for poly in self.polys:
            for _, exps in poly:
                out = [max(a, abs(e)) for a, e in zip(out, exps)]
        return out

    def coeff_height(self):
        return sum(_coeff_height(c) for poly in self.polys for c, _ in poly)


def _coeff_nonzero(c):
    if isinstance(c, MonomialCoord):
        return True
    return bool(c)


def _coeff_height(c):
    if isinstance(c, RationalFunction):
        return c.height
    if isinstance(c, MonomialCoord):
        return abs(c.e)
    return 0


def _coeff_to_general(c, p):
    if isinstance(c, RationalFunction):
        return c
    if isinstance(c, MonomialCoord):
        return monomial_to_general(c)
    raise RepresentationError("specialized coefficient in an exact membership test")


def _on_variety_sparse(V, P):
    """Exact membership for a monomial point; each polynomial becomes a sparse sum in t."""
    fq = P.coords[0].c.field
    for poly in V.polys:
        parts = []
        for coeff, exps in poly:
            gamma = fq.one()
            s = 0
            for e, x in zip(exps, P.coords):
                if e:
                    gamma = gamma * x.c**e
                    s += e * x.e
            if isinstance(coeff, MonomialCoord):
                parts.append((Poly.const(1, fq.p), Poly.const(1, fq.p), gamma * coeff.c, s + coeff.e))
            else:
                parts.append((coeff.num, coeff.den, gamma, s))
        # multiply through by the lcm of the coefficient denominators
        L = Poly.const(1, fq.p)
        for _, den, _, _ in parts:
            L = (L * den) // L.gcd(den)
        acc = {}
        for num, den, gamma, s in parts:
            poly_k = num * (L // den)
            for i, a in enumerate(poly_k.coeffs):
                if a:
                    acc[s + i] = acc.get(s + i, fq.zero()) + gamma * a
        if any(acc.values()):
            return False
    return True


def on_variety(V: LaurentVariety, P: TorusPoint) -> bool:
    if V.N != P.N:
        raise ValueError("dimension mismatch")
    if P.kind == "monomial":
        return _on_variety_sparse(V, P)
    for poly in V.polys:
        if P.kind == "general":
            p = P.coords[0].p
            total = RationalFunction.const(0, p)
            for coeff, exps in poly:
                term = _coeff_to_general(coeff, p)
                for e, x in zip(exps, P.coords):
                    if e:
                        term = term * _ratfun_pow(x, e)
                total = total + term
            if not total.is_zero():
                return False
        else:
            fld = P.coords[0].field
            total = fld.zero()
            for coeff, exps in poly:
                if not isinstance(coeff, ExtElement):
                    raise RepresentationError("specialize the variety before testing a specialized point")
                term = coeff
                for e, x in zip(exps, P.coords):
                    if e:
                        term = term * (x if e == 1 else x**e)
                total = total + term
            if total:
                return False
    return True


# ---------------------------------------------------------------------------
# specialization t -> tau


def _spec_scalar(x, tau: ExtElement):
    if isinstance(x, RationalFunction):
        d = x.den(tau)
        if not d:
            raise BadSpecialization("denominator vanishes at tau")
        n = x.num(tau)
        return n if x.den.is_one() else n / d
    if isinstance(x, MonomialCoord):
        if len(x.c.coeffs) > 1:
            raise RepresentationError("constants outside F_p cannot be specialized into an unrelated extension")
        c = x.c.coeffs[0] if x.c.coeffs else 0
        return tau.field(c) * tau**x.e
    if isinstance(x, Poly):
        return x(tau)
    if isinstance(x, int):
        return tau.field(x)
    raise TypeError(f"cannot specialize {type(x).__name__}")


def specialize(obj, tau: ExtElement):
    """Substitute t -> tau in a scalar, point, map or variety."""
    if not tau:
        raise BadSpecialization("tau = 0 kills every power of t")
    if isinstance(obj, TorusPoint):
        if obj.kind == "specialized":
            return obj
        return TorusPoint("specialized", [_spec_scalar(x, tau) for x in obj.coords])
    if isinstance(obj, TorusMap):
        return TorusMap(obj.A, specialize(obj.beta, tau))
    if isinstance(obj, LaurentVariety):
        polys = [[(_spec_scalar(c, tau), exps) for c, exps in poly] for poly in obj.polys]
        return _SpecializedVariety(obj.N, polys, obj.dim_hint)
    return _spec_scalar(obj, tau)


class _SpecializedVariety(LaurentVariety):
    """Specialized coefficients may vanish; only the point coordinates must stay nonzero."""

    def __post_init__(self):
        polys = tuple(tuple((c, tuple(exps)) for c, exps in poly) for poly in self.polys)
        object.__setattr__(self, "polys", polys)


# ---------------------------------------------------------------------------
# return sets


@dataclass
class ReturnSetResult:
    ns: list
    mode: str
    representation: str
    error_bound: float = 0.0
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"ns": self.ns, "mode": self.mode, "error_bound": self.error_bound, **self.details}


def _coord_heights(P: TorusPoint):
    if P.kind == "monomial":
        return [abs(x.e) for x in P.coords]
    return [x.height for x in P.coords]


def projected_heights(phi: TorusMap, alpha: TorusPoint, M: int, cap: int):
    """Upper bound on the coordinate heights of phi^M(alpha), saturating at ``cap``.

    Uses h_i' <= sum_j |A_ij| h_j + h(beta_i) coordinatewise.
    """
    hb = _coord_heights(phi.beta)
    h = _coord_heights(alpha)
    for _ in range(M):
        h = [b + sum(abs(a) * x for a, x in zip(row, h)) for row, b in zip(phi.A, hb)]
        if max(h) > cap:
            return cap + 1
    return max(h, default=0)


def membership_degree(V: LaurentVariety, height: int) -> int:
    """Degree of the cleared numerator of a defining polynomial at a point of the given height."""
    return 2 * height * sum(V.max_abs_exponents()) + V.coeff_height()


def choose_representation(phi: TorusMap, alpha: TorusPoint, fq: ExtField | None = None):
    if alpha.kind == "monomial" and phi.beta.kind == "monomial":
        return "monomial"
    if fq is not None:
        try:
            alpha.to_kind("monomial", fq)
            phi.beta.to_kind("monomial", fq)
            return "monomial"
        except RepresentationError:
            pass
    return "general"


def _exact(phi, alpha, V, M, budget, fq, scan_budget=DEFAULT_SCAN_BUDGET):
    rep = choose_representation(phi, alpha, fq)
    if rep == "monomial":
        P = alpha.to_kind("monomial", fq)
        beta = phi.beta.to_kind("monomial", fq)
    else:
        P = alpha.to_kind("general")
        beta = phi.beta.to_kind("general")
        cap = budget
        H = projected_heights(phi, P, M, cap)
        cost = membership_degree(V, H) if H <= cap else budget + 1
        if cost > budget:
            raise ResourceError(
                f"exact general-mode membership would need ~{cost} coefficient operations "
                f"(budget {budget}); use montecarlo mode"
            )
        scan = (M + 1) * cost // 2
        if scan > scan_budget:
            raise ResourceError(
                f"exact general-mode scan would need ~{scan} coefficient operations "
                f"(scan budget {scan_budget}); use montecarlo mode"
            )
    phi = TorusMap(phi.A, beta)
    ns = []
    for n in range(M + 1):
        if on_variety(V, P):
            ns.append(n)
        if n < M:
            P = apply_map(phi, P)
    return ReturnSetResult(ns, "exact", rep, 0.0, {"representation": rep})


def mc_field_degree(p: int, degree: int, bits: int = MC_TARGET_BITS) -> int:
    """Smallest D with degree / p^D <= 2^-bits."""
    D = 1
    while p**D < max(degree, 1) * 2**bits:
        D += 1
    return D


def _montecarlo(phi, alpha, V, M, seed, trials, budget):
    p = _characteristic(alpha, phi)
    H = projected_heights(phi, alpha, M, 10**30)
    deg = membership_degree(V, H)
    D = mc_field_degree(p, deg)
    if D > MC_MAX_DEGREE:
        raise ResourceError(f"Monte Carlo would need F_{{{p}^{D}}}; degree bound {deg} is too large")
    F = make_extension(p, D, seed)
    rng = random.Random(f"mc:{seed}:{p}:{D}")
    survivors = None
    taus = []
    for _ in range(trials):
        for _attempt in range(64):
            tau = F([rng.randrange(p) for _ in range(D)])
            try:
                a_s = specialize(alpha, tau)
                phi_s = specialize(phi, tau)
                V_s = specialize(V, tau)
                break
            except BadSpecialization:
                continue
        else:
            raise ResourceError("could not find a good specialization point")
        taus.append(tau.to_json())
        hits = set()
        P = a_s
        for n in range(M + 1):
            if survivors is None or n in survivors:
                if on_variety(V_s, P):
                    hits.add(n)
            if n < M:
                P = apply_map(phi_s, P)
        survivors = hits if survivors is None else survivors & hits
    per_trial = deg / p**D
    return ReturnSetResult(
        sorted(survivors),
        "montecarlo",
        "specialized",
        per_trial,
        {
            "field": F.descriptor(),
            "degree_bound": deg,
            "trials": trials,
            "per_trial_bound": per_trial,
            "combined_bound": per_trial**trials,
            "log2_per_trial_bound": math.log2(deg) - D * math.log2(p) if deg else float("-inf"),
            "taus": taus,
        },
    )


def _characteristic(alpha, phi):
    x = alpha.coords[0]
    if isinstance(x, MonomialCoord):
        return x.c.p
    return x.p


def compute_return_set(
    phi: TorusMap,
    alpha: TorusPoint,
    V: LaurentVariety,
    M: int,
    mode: str = "exact",
    *,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    trials: int = 3,
    fq: ExtField | None = None,
) -> ReturnSetResult:
    """{0 <= n <= M : phi^n(alpha) in V}, exactly or with one-sided Monte Carlo error."""
    if M < 0:
        raise ValueError("M must be nonnegative")
    if not (phi.N == alpha.N == V.N):
        raise ValueError("dimension mismatch")
    if mode == "exact":
        return _exact(phi, alpha, V, M, budget, fq)
    if mode == "montecarlo":
        return _montecarlo(phi, alpha, V, M, seed, trials, budget)
    if mode == "auto":
        try:
            return _exact(phi, alpha, V, M, budget, fq)
        except ResourceError:
            return _montecarlo(phi, alpha, V, M, seed, trials, budget)
    raise ValueError(f"unknown mode {mode!r}")


def return_set(phi, alpha, V, M, mode="exact", **kw) -> list:
    return compute_return_set(phi, alpha, V, M, mode, **kw).ns


# ---------------------------------------------------------------------------
# JSON instances


def parse_coord(obj, p: int, fq: ExtField):
    """{"num": [...], "den": [...]} -> RationalFunction, {"c": ..., "e": int} -> MonomialCoord."""
    if isinstance(obj, int):
        return RationalFunction.const(obj, p)
    if isinstance(obj, list):
        return RationalFunction(Poly(obj, p))
    if "e" in obj:
        c = obj.get("c", 1)
        return MonomialCoord(fq(c if isinstance(c, list) else [c]), int(obj["e"]))
    return RationalFunction(Poly(obj["num"], p), Poly(obj.get("den", [1]), p))


def _point_from_coords(coords, fq):
    if all(isinstance(x, MonomialCoord) for x in coords):
        return TorusPoint("monomial", coords)
    conv = []
    for x in coords:
        conv.append(monomial_to_general(x) if isinstance(x, MonomialCoord) else x)
    return TorusPoint("general", conv)


@dataclass
class TorusInstance:
    phi: TorusMap
    alpha: TorusPoint
    V: LaurentVariety
    M: int
    mode: str
    fq: ExtField
    seed: int = 0

    def run(self, mode=None, seed=None, budget=DEFAULT_BUDGET):
        return compute_return_set(
            self.phi,
            self.alpha,
            self.V,
            self.M,
            mode or self.mode,
            seed=self.seed if seed is None else seed,
            budget=budget,
            fq=self.fq,
        )


def parse_instance(obj) -> TorusInstance:
    p = int(obj["p"])
    fq = make_extension(p, int(obj.get("ext_degree", 1)), int(obj.get("ext_seed", 0)))
    N = int(obj["N"])
    beta = _point_from_coords([parse_coord(c, p, fq) for c in obj["beta"]], fq)
    alpha = _point_from_coords([parse_coord(c, p, fq) for c in obj["alpha"]], fq)
    if beta.kind != alpha.kind:
        beta, alpha = beta.to_kind("general"), alpha.to_kind("general")
    var = obj["variety"]
    polys = [[(parse_coord(t["coeff"], p, fq), t["exponents"]) for t in poly] for poly in var["polys"]]
    V = LaurentVariety(N, polys, int(var.get("dim", 0)))
    phi = TorusMap(obj["A"], beta)
    return TorusInstance(phi, alpha, V, int(obj["M"]), obj.get("mode", "exact"), fq, int(obj.get("seed", 0)))


def frobenius_instance(M: int = 4096, mode: str = "exact") -> dict:
    """K = F_2(t), (x, y) -> (t x, (1+t) y), alpha = (1, 1), V: y - x - 1 = 0."""
    return {
        "p": 2,
        "ext_degree": 1,
        "N": 2,
        "A": [[1, 0], [0, 1]],
        "beta": [{"num": [0, 1]}, {"num": [1, 1]}],
        "alpha": [{"num": [1]}, {"num": [1]}],
        "variety": {
            "polys": [
                [
                    {"coeff": {"num": [1]}, "exponents": [0, 1]},
                    {"coeff": {"num": [1]}, "exponents": [1, 0]},
                    {"coeff": {"num": [1]}, "exponents": [0, 0]},
                ]
            ],
            "dim": 1,
        },
        "M": M,
        "mode": mode,
    }
