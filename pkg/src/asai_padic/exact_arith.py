"""Exact arithmetic: rationals, cyclotomic numbers, p-adic elements at fixed
precision, roots of unity stored by exponent, and Laurent polynomials /
rational functions in the variable X = q^{-s}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import InvalidInput, NotAUnit, PoleAtS, UnsupportedOrder

Rational = Fraction

DEFAULT_PRECISION = 40

Number = Union[int, Fraction, "CyclotomicElement"]


def binom(n: int, k: int) -> int:
    if k < 0 or k > n or n < 0:
        return 0
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# dense polynomials over Q, lowest degree first


def _trim(a: List) -> List:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence, b: Sequence) -> List:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _psub(a: Sequence, b: Sequence) -> List:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _pdivmod(a: Sequence, b: Sequence) -> Tuple[List, List]:
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in a]
    _trim(r)
    lead = Fraction(b[-1])
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        c = r[-1] / lead
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] -= c * y
        r.pop()
        _trim(r)
    return _trim(q), r


def _preduce_monic(a: Sequence, m: Sequence[int]) -> List:
    """Remainder of a modulo the monic integer polynomial m."""
    r = list(a)
    d = len(m) - 1
    for k in range(len(r) - 1, d - 1, -1):
        c = r[k]
        if c == 0:
            continue
        for i in range(d):
            r[k - d + i] -= c * m[i]
        r[k] = 0
    r = r[:d] + [0] * max(0, d - len(r))
    return r


def _pxgcd(a: Sequence, b: Sequence) -> Tuple[List, List, List]:
    """Return (g, s, t) with s*a + t*b = g over Q, g monic."""
    r0, r1 = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    lead = r0[-1]
    return [x / lead for x in r0], [x / lead for x in s0], [x / lead for x in t0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> Tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise InvalidInput("cyclotomic order must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _pdivmod(num, cyclotomic_polynomial(d))
            assert not rem
    return tuple(int(c) for c in num)


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


# ---------------------------------------------------------------------------
# roots of unity


@dataclass(frozen=True)
class RootOfUnity:
    """The root of unity exp(2 pi i exponent / order), kept in lowest terms."""

    order: int
    exponent: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise InvalidInput("root of unity order must be positive")
        e = self.exponent % self.order
        g = math.gcd(e, self.order)
        object.__setattr__(self, "order", self.order // g)
        object.__setattr__(self, "exponent", e // g)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        m = self.order * other.order // math.gcd(self.order, other.order)
        return RootOfUnity(m, self.exponent * (m // self.order) + other.exponent * (m // other.order))

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exponent * k)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exponent)

    def __complex__(self) -> complex:
        return cmath.exp(2j * math.pi * self.exponent / self.order)

    def to_cyclotomic(self) -> "CyclotomicElement":
        return CyclotomicElement.root(self.order, self.exponent)

    def is_one(self) -> bool:
        return self.order == 1


# ---------------------------------------------------------------------------
# cyclotomic numbers


class CyclotomicElement:
    """Element of Q(zeta_M), stored in the power basis 1, zeta, ..., zeta^(phi(M)-1)
    with zeta = exp(2 pi i / M)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = ()):
        m = cyclotomic_polynomial(order)
        red = _preduce_monic([Fraction(c) for c in coeffs], m)
        self.order = order
        self.coeffs = tuple(Fraction(c) for c in red)

    # constructors
    @classmethod
    def rational(cls, x) -> "CyclotomicElement":
        return cls(1, [Fraction(x)])

    @classmethod
    def root(cls, m: int, e: int = 1) -> "CyclotomicElement":
        z = RootOfUnity(m, e)
        c = [0] * (z.exponent + 1)
        c[z.exponent] = 1
        return cls(z.order, c)

    @classmethod
    def coerce(cls, x) -> "CyclotomicElement":
        if isinstance(x, CyclotomicElement):
            return x
        if isinstance(x, RootOfUnity):
            return x.to_cyclotomic()
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to a cyclotomic number")

    @classmethod
    def sqrt_prime(cls, p: int) -> "CyclotomicElement":
        return _sqrt_odd_prime(p)

    # structure
    def lift(self, m: int) -> "CyclotomicElement":
        if m == self.order:
            return self
        if m % self.order:
            raise InvalidInput("target order must be a multiple of the current order")
        step = m // self.order
        c = [Fraction(0)] * (step * len(self.coeffs) or 1)
        for k, x in enumerate(self.coeffs):
            c[k * step] = x
        return CyclotomicElement(m, c)

    def _common(self, other) -> Tuple["CyclotomicElement", "CyclotomicElement"]:
        other = CyclotomicElement.coerce(other)
        m = self.order * other.order // math.gcd(self.order, other.order)
        return self.lift(m), other.lift(m)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InvalidInput("element is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # arithmetic
    def __add__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) + other
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CyclotomicElement(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) - other
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CyclotomicElement(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.order, [x * other for x in self.coeffs])
        if isinstance(other, (float, complex)):
            return complex(self) * other
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CyclotomicElement(a.order, _pmul(a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.is_rational():
            return CyclotomicElement.rational(1 / self.coeffs[0])
        g, s, _ = _pxgcd(list(self.coeffs), cyclotomic_polynomial(self.order))
        assert len(g) == 1
        return CyclotomicElement(self.order, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.order, [x / other for x in self.coeffs])
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return self * CyclotomicElement.coerce(other).inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return CyclotomicElement.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicElement.rational(1).lift(self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "CyclotomicElement":
        m = self.order
        c = [Fraction(0)] * m
        for k, x in enumerate(self.coeffs):
            c[(-k) % m] += x
        return CyclotomicElement(m, c)

    def galois(self, a: int) -> "CyclotomicElement":
        """Apply zeta -> zeta^a (a coprime to the order)."""
        m = self.order
        if math.gcd(a, m) != 1:
            raise InvalidInput("Galois exponent must be coprime to the order")
        c = [Fraction(0)] * m
        for k, x in enumerate(self.coeffs):
            c[(a * k) % m] += x
        return CyclotomicElement(m, c)

    def __eq__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return a.coeffs == b.coeffs

    __hash__ = None

    def __complex__(self) -> complex:
        z = cmath.exp(2j * math.pi / self.order)
        acc = 0j
        for x in reversed(self.coeffs):
            acc = acc * z + float(x)
        return acc

    def __repr__(self):
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return f"Cyc[{self.order}](" + (" + ".join(terms) or "0") + ")"


@lru_cache(maxsize=None)
def _sqrt_odd_prime(p: int) -> CyclotomicElement:
    """Positive square root of an odd prime p inside Q(zeta_{4p}), built from
    the quadratic Gauss sum."""
    if p < 3 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise InvalidInput("sqrt_prime expects an odd prime")
    g = CyclotomicElement.rational(0)
    for a in range(1, p):
        leg = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
        g = g + CyclotomicElement.root(p, a) * leg
    if p % 4 == 3:
        g = g * CyclotomicElement.root(4, -1)
    g = g.lift(4 * p)
    if complex(g).real < 0:
        g = -g
    assert g * g == CyclotomicElement.rational(p)
    return g


def cyc(x) -> CyclotomicElement:
    return CyclotomicElement.coerce(x)


def sqrt_rational_power(q: int) -> CyclotomicElement:
    """Exact positive square root of a prime power q = p^k."""
    p = _smallest_prime_factor(q)
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    if q != 1:
        raise InvalidInput("expected a prime power")
    out = CyclotomicElement.rational(p ** (k // 2))
    if k % 2:
        out = out * _sqrt_odd_prime(p)
    return out


def _smallest_prime_factor(n: int) -> int:
    for d in range(2, int(n ** 0.5) + 1):
        if n % d == 0:
            return d
    return n


# ---------------------------------------------------------------------------
# p-adic numbers in an unramified extension, at fixed precision


def _is_prime(n: int) -> bool:
    return n >= 2 and _smallest_prime_factor(n) == n


def _prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _modpoly_mul(a, b, m, mod):
    return [c % mod for c in _preduce_monic(_pmul(a, b), m)]


def _modpoly_pow(a, e, m, mod):
    out = [1] + [0] * (len(m) - 2)
    base = list(a)
    while e:
        if e & 1:
            out = _modpoly_mul(out, base, m, mod)
        base = _modpoly_mul(base, base, m, mod)
        e >>= 1
    return out


@lru_cache(maxsize=None)
def _defining_polynomial(p: int, f: int) -> Tuple[int, ...]:
    """Monic degree-f polynomial over Z whose reduction mod p has a root
    generating F_{p^f}^x (so the reduction is irreducible)."""
    if f == 1:
        return (0, 1)
    order = p ** f - 1
    primes = _prime_factors(order)
    t = [0, 1] + [0] * (f - 2)
    for idx in range(p ** f):
        low = [(idx // p ** i) % p for i in range(f)]
        m = tuple(low) + (1,)
        if m[0] == 0:
            continue
        if _modpoly_pow(t, order, m, p)[: f] != [1] + [0] * (f - 1):
            continue
        if all(_modpoly_pow(t, order // ell, m, p) != [1] + [0] * (f - 1) for ell in primes):
            return m
    raise InvalidInput("no primitive polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class PadicContext:
    """Z_{p^f} / p^N: unramified extension of degree f at precision N."""

    p: int
    N: int = DEFAULT_PRECISION
    f: int = 1

    def __post_init__(self):
        if not _is_prime(self.p) or self.p == 2:
            raise InvalidInput("p must be an odd prime")
        if self.N < 1 or self.f < 1:
            raise InvalidInput("precision and residue degree must be positive")

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @property
    def residue_size(self) -> int:
        return self.p ** self.f

    @property
    def defining_polynomial(self) -> Tuple[int, ...]:
        return _defining_polynomial(self.p, self.f)

    def element(self, value) -> "PadicElement":
        return PadicElement.from_value(self, value)

    def zero(self) -> "PadicElement":
        return PadicElement(self, (0,) * self.f)

    def one(self) -> "PadicElement":
        return self.element(1)

    @property
    def primitive_root_of_unity(self) -> "PadicElement":
        """Teichmuller lift of the fixed generator of the residue field units.

        This fixes the identification of exp(2 pi i / (p^f - 1)) with a p-adic
        number used by every embedding."""
        return _primitive_teichmuller(self)


@lru_cache(maxsize=None)
def _primitive_teichmuller(ctx: PadicContext) -> "PadicElement":
    if ctx.f == 1:
        g = primitive_root(ctx.p)
        return teichmuller(g, ctx.p, ctx.N)
    t = PadicElement(ctx, (0, 1) + (0,) * (ctx.f - 2))
    return t.teichmuller()


class PadicElement:
    """Element of Z_{p^f} modulo p^N, in the basis 1, t, ..., t^{f-1}."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PadicContext, coeffs: Sequence[int]):
        if len(coeffs) != ctx.f:
            raise InvalidInput("coefficient vector has the wrong length")
        mod = ctx.modulus
        self.ctx = ctx
        self.coeffs = tuple(int(c) % mod for c in coeffs)

    @classmethod
    def from_value(cls, ctx: PadicContext, value) -> "PadicElement":
        if isinstance(value, PadicElement):
            if value.ctx != ctx:
                raise InvalidInput("mismatched p-adic contexts")
            return value
        if isinstance(value, int):
            return cls(ctx, (value,) + (0,) * (ctx.f - 1))
        if isinstance(value, Fraction):
            if value.denominator % ctx.p == 0:
                raise InvalidInput("rational with p in the denominator is not p-integral")
            num = cls(ctx, (value.numerator,) + (0,) * (ctx.f - 1))
            den = cls(ctx, (value.denominator,) + (0,) * (ctx.f - 1))
            return num / den
        if isinstance(value, RootOfUnity):
            return embed_root_of_unity(value, "padic", ctx)
        raise InvalidInput(f"cannot build a p-adic element from {type(value).__name__}")

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def value(self) -> int:
        """Residue representative (only meaningful for f = 1)."""
        if self.ctx.f != 1:
            raise InvalidInput("value is a vector when f > 1; use coeffs")
        return self.coeffs[0]

    def _coerce(self, other) -> "PadicElement":
        if isinstance(other, PadicElement):
            if other.ctx != self.ctx:
                raise InvalidInput("mismatched p-adic contexts")
            return other
        return PadicElement.from_value(self.ctx, other)

    def __add__(self, other):
        o = self._coerce(other)
        return PadicElement(self.ctx, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return PadicElement(self.ctx, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return PadicElement(self.ctx, [-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        if self.ctx.f == 1:
            return PadicElement(self.ctx, (self.coeffs[0] * o.coeffs[0],))
        prod = _modpoly_mul(self.coeffs, o.coeffs, self.ctx.defining_polynomial, self.ctx.modulus)
        return PadicElement(self.ctx, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if self.ctx.f == 1:
            return PadicElement(self.ctx, (pow(self.coeffs[0], k, self.ctx.modulus),))
        return PadicElement(
            self.ctx, _modpoly_pow(self.coeffs, k, self.ctx.defining_polynomial, self.ctx.modulus)
        )

    def is_unit(self) -> bool:
        return any(c % self.ctx.p for c in self.coeffs)

    def valuation(self) -> int:
        """p-adic valuation; returns N for the zero element."""
        v = self.ctx.N
        for c in self.coeffs:
            if c:
                k = 0
                while c % self.ctx.p == 0:
                    c //= self.ctx.p
                    k += 1
                v = min(v, k)
        return v

    def inverse(self) -> "PadicElement":
        if not self.is_unit():
            raise NotAUnit("element is not a p-adic unit")
        ctx = self.ctx
        if ctx.f == 1:
            return PadicElement(ctx, (pow(self.coeffs[0], -1, ctx.modulus),))
        # inverse mod p, then Newton lifting b <- b(2 - ab)
        m = ctx.defining_polynomial
        p = ctx.p
        b = _fp_poly_inverse(self.coeffs, m, p)
        b = PadicElement(ctx, b)
        prec = 1
        while prec < ctx.N:
            b = b * (2 - self * b)
            prec *= 2
        return b

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def teichmuller(self) -> "PadicElement":
        """Teichmuller representative of the residue class (x -> x^{p^f} iterated)."""
        if not self.is_unit():
            raise InvalidInput("Teichmuller lift needs a unit")
        x = self
        q = self.ctx.residue_size
        for _ in range(self.ctx.N):
            x = x ** q
        return x

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except InvalidInput:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def digits(self) -> List[List[int]]:
        """Base-p digits of every coordinate, least significant first."""
        out = []
        for c in self.coeffs:
            d = []
            for _ in range(self.ctx.N):
                c, r = divmod(c, self.ctx.p)
                d.append(r)
            out.append(d)
        return out

    def __repr__(self):
        if self.ctx.f == 1:
            return f"Padic({self.coeffs[0]} mod {self.ctx.p}^{self.ctx.N})"
        return f"Padic({list(self.coeffs)} mod {self.ctx.p}^{self.ctx.N}, f={self.ctx.f})"


def _fp_poly_inverse(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    """Inverse of a modulo (m, p) by the extended Euclidean algorithm over F_p."""

    def norm(u):
        u = [x % p for x in u]
        while u and u[-1] == 0:
            u.pop()
        return u

    def divmod_p(u, v):
        u = list(u)
        inv = pow(v[-1], -1, p)
        q = [0] * max(len(u) - len(v) + 1, 0)
        while len(u) >= len(v):
            c = u[-1] * inv % p
            k = len(u) - len(v)
            q[k] = c
            for i, y in enumerate(v):
                u[k + i] = (u[k + i] - c * y) % p
            u = norm(u)
        return q, u

    r0, r1 = norm(m), norm(a)
    s0, s1 = [], [1]
    while r1:
        q, r = divmod_p(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, norm(_psub(s0, _pmul(q, s1)))
    if len(r0) != 1:
        raise NotAUnit("element is not invertible modulo p")
    inv = pow(r0[0], -1, p)
    out = [x * inv % p for x in s0]
    return out + [0] * (len(m) - 1 - len(out))


@lru_cache(maxsize=None)
def primitive_root(n: int) -> int:
    """Smallest generator of (Z/n)^x for n = p^k, p odd."""
    p = _smallest_prime_factor(n)
    phi = n // p * (p - 1)
    primes = _prime_factors(phi)
    for g in range(2, n):
        if math.gcd(g, n) == 1 and all(pow(g, phi // ell, n) != 1 for ell in primes):
            return g
    if n in (2, 3):
        return n - 1
    raise InvalidInput("group is not cyclic")  # pragma: no cover


def teichmuller(a: int, p: int, N: int = DEFAULT_PRECISION) -> PadicElement:
    """Teichmuller lift of a mod p, by Newton iteration on x^{p-1} - 1."""
    ctx = PadicContext(p, N)
    if a % p == 0:
        raise InvalidInput("Teichmuller lift of a non-unit")
    mod = p ** N
    x = a % p
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        m = p ** prec
        fx = (pow(x, p - 1, m) - 1) % m
        dfx = (p - 1) * pow(x, p - 2, m) % m
        x = (x - fx * pow(dfx, -1, m)) % m
    return PadicElement(ctx, (x % mod,))


def embed_root_of_unity(z: RootOfUnity, target: str = "complex", ctx: Optional[PadicContext] = None):
    """Image of z under the complex embedding or the fixed p-adic identification."""
    if target == "complex":
        return complex(z)
    if target != "padic":
        raise InvalidInput(f"unknown target {target!r}")
    if ctx is None:
        raise InvalidInput("p-adic target needs a PadicContext")
    big = ctx.residue_size - 1
    if big % z.order:
        # p-power roots of unity generate ramified extensions
        raise UnsupportedOrder(
            f"order {z.order} does not divide {big}; not realizable in the unramified extension",
            order=z.order,
        )
    return ctx.primitive_root_of_unity ** (z.exponent * (big // z.order))


# ---------------------------------------------------------------------------
# Laurent polynomials and rational functions


class LaurentPoly:
    """Finite sum c_k X^k, k in Z, with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[int, Number]] = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not _is_zero(v)}

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, k: int = 1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def one_minus(cls, c, k: int = 1) -> "LaurentPoly":
        """1 - c X^k."""
        if k == 0:
            return cls({0: 1 - c})
        return cls({0: 1, k: -c})

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out: Dict[int, Number] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = k1 + k2
                out[k] = out[k] + v1 * v2 if k in out else v1 * v2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise InvalidInput("negative power of a Laurent polynomial")
        out = LaurentPoly.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (self - _as_laurent(other)).is_zero()

    __hash__ = None

    def substitute(self, x):
        """Evaluate at an exact or numeric value of the variable."""
        acc = 0
        for k, v in self.terms.items():
            acc = acc + v * (x ** k if k >= 0 else 1 / (x ** (-k)))
        return acc

    def evaluate(self, x: complex) -> complex:
        return sum(complex(v) * x ** k for k, v in self.terms.items())

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: v * k for k, v in self.terms.items() if k != 0})

    def scale_variable(self, c) -> "LaurentPoly":
        """P(cX) for an exact nonzero c."""
        return LaurentPoly({k: v * (c ** k if k >= 0 else 1 / c ** (-k)) for k, v in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({v})*X^{k}" for k, v in sorted(self.terms.items()))


def _is_zero(v) -> bool:
    if isinstance(v, CyclotomicElement):
        return v.is_zero()
    return v == 0


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.constant(x)


class RationalFunctionInQs:
    """numerator(X) / denominator(X) with X = q^{-s}."""

    __slots__ = ("numerator", "denominator", "q")

    def __init__(self, numerator, denominator=None, q: int = 1):
        self.numerator = _as_laurent(numerator)
        self.denominator = _as_laurent(1 if denominator is None else denominator)
        if self.denominator.is_zero():
            raise InvalidInput("zero denominator")
        self.q = q

    @classmethod
    def euler_factor(cls, roots: Iterable, q: int) -> "RationalFunctionInQs":
        """1 / prod (1 - a X) over the given parameters a."""
        den = LaurentPoly.constant(1)
        for a in roots:
            den = den * LaurentPoly.one_minus(a)
        return cls(1, den, q)

    def _check(self, other):
        if isinstance(other, RationalFunctionInQs) and other.q != self.q:
            raise InvalidInput("rational functions in different bases")

    def __mul__(self, other):
        if not isinstance(other, RationalFunctionInQs):
            return RationalFunctionInQs(self.numerator * other, self.denominator, self.q)
        self._check(other)
        return RationalFunctionInQs(
            self.numerator * other.numerator, self.denominator * other.denominator, self.q
        )

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunctionInQs":
        if self.numerator.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunctionInQs(self.denominator, self.numerator, self.q)

    def __truediv__(self, other):
        if not isinstance(other, RationalFunctionInQs):
            return RationalFunctionInQs(self.numerator, self.denominator * other, self.q)
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, RationalFunctionInQs):
            other = RationalFunctionInQs(other, 1, self.q)
        return self.numerator * other.denominator == other.numerator * self.denominator

    __hash__ = None

    def at_X(self, x: complex, rel_tol: float = 1e-10) -> complex:
        return _eval_ratio(self.numerator, self.denominator, x, rel_tol)

    def __call__(self, s: complex) -> complex:
        return eval_rational_function(self, s)

    def __repr__(self):
        return f"({self.numerator}) / ({self.denominator}) [X = {self.q}^-s]"


def _vanishing_order(p: LaurentPoly, x: complex, scale: float, tol: float) -> int:
    k = 0
    cur = p
    while not cur.is_zero() and abs(cur.evaluate(x)) <= tol * scale:
        cur = cur.derivative()
        k += 1
    return k


def _eval_ratio(num: LaurentPoly, den: LaurentPoly, x: complex, tol: float) -> complex:
    scale = 1.0 + sum(abs(complex(v)) * abs(x) ** k for k, v in den.terms.items())
    kd = _vanishing_order(den, x, scale, tol)
    if kd == 0:
        return num.evaluate(x) / den.evaluate(x)
    nscale = 1.0 + sum(abs(complex(v)) * abs(x) ** k for k, v in num.terms.items())
    kn = _vanishing_order(num, x, nscale, tol) if not num.is_zero() else kd
    if kd > kn:
        raise PoleAtS(f"pole of order {kd - kn}", multiplicity=kd - kn)
    if kn > kd:
        return 0j
    for _ in range(kd):
        num, den = num.derivative(), den.derivative()
    return num.evaluate(x) / den.evaluate(x)


def eval_rational_function(f: RationalFunctionInQs, s: complex, rel_tol: float = 1e-10) -> complex:
    """Evaluate f at q^{-s}; raises PoleAtS carrying the pole order."""
    x = complex(f.q) ** (-complex(s))
    return _eval_ratio(f.numerator, f.denominator, x, rel_tol)
