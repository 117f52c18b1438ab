"""Exact arithmetic over F_p, F_p[t], F_p(t) and the extensions F_{p^d}.

Polynomials are dense, little-endian tuples of residues in ``[0, p)``; the
zero polynomial is the empty tuple.  Long products go through
``numpy.convolve`` when the coefficient sums cannot overflow int64.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np
from sympy import isprime, primefactors

_NUMPY_CUTOFF = 48
_INT64_SAFE = 1 << 62


class FieldError(ValueError):
    """Invalid field construction or arithmetic (e.g. division by zero)."""


# ---------------------------------------------------------------------------
# coefficient-tuple kernels


def _trim(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def _as_array(c):
    return np.fromiter(c, dtype=np.int64, count=len(c))


def _np_ok(p, length):
    return (p - 1) * (p - 1) * length < _INT64_SAFE


def _padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    if len(a) >= _NUMPY_CUTOFF and p < _INT64_SAFE:
        r = _as_array(a)
        r[: len(b)] += _as_array(b)
        r %= p
        nz = np.flatnonzero(r)
        return tuple(r[: nz[-1] + 1].tolist()) if nz.size else ()
    r = list(a)
    for i, x in enumerate(b):
        r[i] = (r[i] + x) % p
    return _trim(r)


def _pneg(a, p):
    return tuple((p - x) % p for x in a)


def _psub(a, b, p):
    return _padd(a, _pneg(b, p), p)


def _pscale(a, s, p):
    s %= p
    if not s:
        return ()
    return tuple(x * s % p for x in a)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    if len(a) < len(b):
        a, b = b, a
    if len(a) >= _NUMPY_CUTOFF and _np_ok(p, len(b)):
        r = np.convolve(_as_array(a), _as_array(b)) % p
        return tuple(r.tolist())
    r = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y:
            for i, x in enumerate(a):
                r[i + j] += x * y
    return tuple(x % p for x in r)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    inv_lead = pow(b[-1], -1, p)
    r = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k] * inv_lead % p
        if c:
            q[k - db] = c
            off = k - db
            for i in range(db + 1):
                r[off + i] = (r[off + i] - c * b[i]) % p
    return _trim(q), _trim(r[:db])


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pmonic(a, p):
    if not a or a[-1] == 1:
        return a
    return _pscale(a, pow(a[-1], -1, p), p)


def _pgcd(a, b, p):
    """Monic gcd."""
    if len(a) == 1 or len(b) == 1:
        return (1,)
    while b:
        a, b = b, _pmod(a, b, p)
        if len(b) == 1:
            return (1,)
    return _pmonic(a, p)


def _pxgcd(a, b, p):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    if not r0:
        return (), (), ()
    inv = pow(r0[-1], -1, p)
    return _pscale(r0, inv, p), _pscale(s0, inv, p), _pscale(t0, inv, p)


def _ppow(a, e, p):
    result = (1,)
    while e:
        if e & 1:
            result = _pmul(result, a, p)
        e >>= 1
        if e:
            a = _pmul(a, a, p)
    return result


def _ppowmod(a, e, m, p):
    result = (1,)
    a = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, a, p), m, p)
        e >>= 1
        if e:
            a = _pmod(_pmul(a, a, p), m, p)
    return result


# ---------------------------------------------------------------------------
# F_p and F_p[t]


class PrimeField:
    __slots__ = ("p",)

    def __init__(self, p):
        p = int(p)
        if p < 2 or not isprime(p):
            raise FieldError(f"characteristic must be prime, got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class Poly:
    """Element of F_p[t]."""

    __slots__ = ("p", "coeffs")

    def __init__(self, coeffs, p, *, _raw=False):
        self.p = p
        self.coeffs = tuple(coeffs) if _raw else _trim([int(c) % p for c in coeffs])

    @classmethod
    def _wrap(cls, coeffs, p):
        return cls(coeffs, p, _raw=True)

    @classmethod
    def t(cls, p):
        return cls._wrap((0, 1), p)

    @classmethod
    def const(cls, c, p):
        return cls((c,), p)

    @classmethod
    def monomial(cls, e, p, c=1):
        return cls([0] * e + [c], p)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (1,)

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def _check(self, other):
        if isinstance(other, int):
            return Poly((other,), self.p)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.p != self.p:
            raise FieldError("characteristic mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Poly._wrap(_padd(self.coeffs, other.coeffs, self.p), self.p)

    __radd__ = __add__

    def __neg__(self):
        return Poly._wrap(_pneg(self.coeffs, self.p), self.p)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Poly._wrap(_psub(self.coeffs, other.coeffs, self.p), self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Poly._wrap(_pmul(self.coeffs, other.coeffs, self.p), self.p)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise FieldError("negative power of a polynomial")
        return Poly._wrap(_ppow(self.coeffs, e, self.p), self.p)

    def __divmod__(self, other):
        other = self._check(other)
        q, r = _pdivmod(self.coeffs, other.coeffs, self.p)
        return Poly._wrap(q, self.p), Poly._wrap(r, self.p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other):
        return Poly._wrap(_pgcd(self.coeffs, other.coeffs, self.p), self.p)

    def monic(self):
        return Poly._wrap(_pmonic(self.coeffs, self.p), self.p)

    def __call__(self, x):
        """Horner evaluation at an element of F_p or an ExtElement."""
        if isinstance(x, int):
            acc = 0
            for c in reversed(self.coeffs):
                acc = (acc * x + c) % self.p
            return acc
        acc = x.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == _trim([other % self.p])
        return isinstance(other, Poly) and other.p == self.p and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def to_json(self):
        return list(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def is_irreducible(m: Poly) -> bool:
    """Rabin's irreducibility test over F_p."""
    p, d = m.p, m.degree
    if d < 1:
        return False
    if d == 1:
        return True
    mc = _pmonic(m.coeffs, p)
    t = (0, 1)

    def frob_iter(k):
        x = t
        for _ in range(k):
            x = _ppowmod(x, p, mc, p)
        return x

    for r in primefactors(d):
        h = _psub(frob_iter(d // r), t, p)
        if _pgcd(mc, h, p) != (1,):
            return False
    return _psub(frob_iter(d), t, p) == ()


# ---------------------------------------------------------------------------
# F_p(t)


class RationalFunction:
    """Element of F_p(t) kept as num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        if isinstance(num, int):
            raise TypeError("use RationalFunction.const for integers")
        p = num.p
        if den is None:
            den = Poly._wrap((1,), p)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly._wrap((1,), p)
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num // g, den // g
                lead = den.lead()
                if lead != 1:
                    inv = pow(lead, -1, p)
                    num = Poly._wrap(_pscale(num.coeffs, inv, p), p)
                    den = Poly._wrap(_pscale(den.coeffs, inv, p), p)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c, p):
        return cls(Poly((c,), p), _reduced=True)

    @classmethod
    def t(cls, p):
        return cls(Poly.t(p), _reduced=True)

    @classmethod
    def from_poly(cls, poly):
        return cls(poly, _reduced=True)

    @property
    def p(self):
        return self.num.p

    @property
    def height(self):
        """max(deg num, deg den); the degree in t of the function as a map P^1 -> P^1."""
        return max(self.num.degree, self.den.degree, 0)

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.p != self.p:
                raise FieldError("characteristic mismatch")
            return other
        if isinstance(other, int):
            return RationalFunction.const(other, self.p)
        if isinstance(other, Poly):
            return RationalFunction.from_poly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            if self.den.is_one():
                return RationalFunction(self.num + other.num, self.den, _reduced=True)
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalFunction.const(0, self.p)
        # cross-cancel keeps the product reduced without a full gcd
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1, d2 = (self.num, other.den) if g1.is_one() else (self.num // g1, other.den // g1)
        n2, d1 = (other.num, self.den) if g2.is_one() else (other.num // g2, self.den // g2)
        num, den = n1 * n2, d1 * d2
        lead = den.lead()
        if lead != 1:
            inv = pow(lead, -1, self.p)
            num = Poly._wrap(_pscale(num.coeffs, inv, self.p), self.p)
            den = Poly._wrap(_pscale(den.coeffs, inv, self.p), self.p)
        return RationalFunction(num, den, _reduced=True)

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        num, den = self.num ** e, self.den ** e
        return RationalFunction(num, den, _reduced=True)

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = self._coerce(other)
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self):
        if self.den.is_one():
            return f"({self.num!r})"
        return f"({self.num!r})/({self.den!r})"


def ratfun_arith(a: RationalFunction, b: RationalFunction | None, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# F_{p^d}


class ExtField:
    """F_p[t]/(modulus) with an irreducible monic modulus of degree d."""

    __slots__ = ("base", "degree", "modulus", "_reduce", "_np")

    def __init__(self, p, modulus):
        base = p if isinstance(p, PrimeField) else PrimeField(p)
        if not isinstance(modulus, Poly):
            modulus = Poly(modulus, base.p)
        if modulus.degree < 1:
            raise FieldError("modulus must have positive degree")
        self.base = base
        self.modulus = modulus.monic()
        self.degree = self.modulus.degree
        self._np = _np_ok(base.p, 2 * self.degree)
        self._reduce = _reduction_matrix(base.p, self.modulus.coeffs) if self._np else None

    @property
    def p(self):
        return self.base.p

    @property
    def order(self):
        return self.p ** self.degree

    def __call__(self, coeffs):
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        c = _trim([int(x) % self.p for x in coeffs])
        if len(c) > self.degree:
            c = _pmod(c, self.modulus.coeffs, self.p)
        return ExtElement(self, c)

    def zero(self):
        return ExtElement(self, ())

    def one(self):
        return ExtElement(self, (1,))

    def gen(self):
        """Class of t; a root of the modulus."""
        return self((0, 1))

    def __eq__(self, other):
        return isinstance(other, ExtField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Fq", self.modulus))

    def descriptor(self):
        return {"p": self.p, "d": self.degree, "modulus": self.modulus.to_json()}

    def __repr__(self):
        return f"ExtField(p={self.p}, d={self.degree}, modulus={self.modulus!r})"

    def _mul(self, a, b):
        if not a or not b:
            return ()
        p, d = self.p, self.degree
        if self._np and d > 4:
            prod = np.convolve(_as_array(a), _as_array(b)) % p
            if prod.size > d:
                low = np.zeros(d, dtype=np.int64)
                low[: min(d, prod.size)] = prod[:d]
                high = prod[d:]
                low += self._reduce[:, : high.size] @ high
                prod = low % p
            nz = np.flatnonzero(prod)
            return tuple(prod[: nz[-1] + 1].tolist()) if nz.size else ()
        return _pmod(_pmul(a, b, p), self.modulus.coeffs, p)


@lru_cache(maxsize=64)
def _reduction_matrix(p, modulus):
    """Column k holds t^(d+k) mod modulus, for k < d - 1."""
    d = len(modulus) - 1
    cols = []
    x = _pmod((0,) * d + (1,), modulus, p)
    for _ in range(max(d - 1, 1)):
        col = list(x) + [0] * (d - len(x))
        cols.append(col)
        x = _pmod(_pmul(x, (0, 1), p), modulus, p)
    return np.array(cols, dtype=np.int64).T.copy()


class ExtElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    @property
    def p(self):
        return self.field.p

    def is_zero(self):
        return not self.coeffs

    def _other(self, other):
        if isinstance(other, ExtElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldError("elements of different fields")
            return other.coeffs
        if isinstance(other, int):
            return _trim([other % self.p])
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ExtElement(self.field, _padd(self.coeffs, o, self.p))

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.field, _pneg(self.coeffs, self.p))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ExtElement(self.field, _psub(self.coeffs, o, self.p))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return ExtElement(self.field, _pscale(self.coeffs, other, self.p))
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ExtElement(self.field, self.field._mul(self.coeffs, o))

    __rmul__ = __mul__

    def inv(self):
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in F_q")
        g, s, _ = _pxgcd(self.coeffs, self.field.modulus.coeffs, self.p)
        if g != (1,):
            raise FieldError("modulus is not irreducible")
        return ExtElement(self.field, _pmod(s, self.field.modulus.coeffs, self.p))

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        if not self.coeffs:
            return self.field.one() if e == 0 else self
        q1 = self.field.order - 1
        e %= q1
        result = (1,)
        base = self.coeffs
        mul = self.field._mul
        while e:
            if e & 1:
                result = mul(result, base)
            e >>= 1
            if e:
                base = mul(base, base)
        return ExtElement(self.field, result)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == _trim([other % self.p])
        return (
            isinstance(other, ExtElement)
            and other.coeffs == self.coeffs
            and (other.field is self.field or other.field == self.field)
        )

    def __hash__(self):
        return hash((self.field.modulus, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def to_json(self):
        return list(self.coeffs)

    def __repr__(self):
        return f"[{Poly._wrap(self.coeffs, self.p)!r}]"


def make_extension(p: int, d: int, seed: int = 0) -> ExtField:
    """Build F_{p^d}; the modulus is the first irreducible among seeded random monic candidates.

    For d = 1 the modulus is ``t`` itself.
    """
    field = PrimeField(p)
    if d < 1:
        raise FieldError("extension degree must be >= 1")
    if d == 1:
        return ExtField(field, Poly.t(p))
    rng = random.Random(f"ext:{p}:{d}:{seed}")
    while True:
        lower = [rng.randrange(p) for _ in range(d)]
        if lower[0] == 0:
            continue
        cand = Poly._wrap(tuple(lower) + (1,), p)
        if is_irreducible(cand):
            return ExtField(field, cand)


def frobenius(x, e: int):
    """x^(p^e) by repeated squaring."""
    if e < 0:
        raise ValueError("Frobenius exponent must be nonnegative")
    if isinstance(x, ExtElement):
        # x^(p^d) = x, so only e mod d matters
        e %= x.field.degree
    return x ** (x.p ** e)


@lru_cache(maxsize=256)
def count_irreducibles(p: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree d over F_p (Gauss's formula)."""
    from sympy import divisors, mobius

    return sum(int(mobius(k)) * p ** (d // k) for k in divisors(d)) // d
