"""Homogeneous polynomials, the pairing [.,.]_n, the determinant polynomials
P_{-2}, P_0, P_2 with their dual-basis coordinates v_i(j), the contraction
Upsilon^alpha, and the constants C(alpha, i).

Powers of sqrt(-1) are carried as exponents mod 4 so binomial data stays in
exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

from .errors import InternalConsistency, InvalidInput
from .exact_arith import CyclotomicElement, binom

Monomial = Tuple[int, ...]

I4 = CyclotomicElement.root(4, 1)


class HomogeneousPoly:
    """Sparse polynomial in named variables with exact coefficients."""

    __slots__ = ("variables", "coeffs")

    def __init__(self, variables: Sequence[str], coeffs: Optional[Mapping[Monomial, object]] = None):
        self.variables = tuple(variables)
        out = {}
        for mono, c in (coeffs or {}).items():
            if len(mono) != len(self.variables):
                raise InvalidInput("monomial length does not match the variables")
            if not _zero(c):
                out[tuple(mono)] = c
        self.coeffs: Dict[Monomial, object] = out

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Mapping[str, int], c=1) -> "HomogeneousPoly":
        mono = tuple(exps.get(v, 0) for v in variables)
        return cls(variables, {mono: Fraction(c) if isinstance(c, int) else c})

    @classmethod
    def linear(cls, variables: Sequence[str], combo: Mapping[str, object]) -> "HomogeneousPoly":
        out = {}
        for v, c in combo.items():
            mono = tuple(1 if w == v else 0 for w in variables)
            out[mono] = Fraction(c) if isinstance(c, int) else c
        return cls(variables, out)

    def _same(self, other: "HomogeneousPoly"):
        if self.variables != other.variables:
            raise InvalidInput("polynomials in different variables")

    def __add__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        self._same(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return HomogeneousPoly(self.variables, out)

    def __neg__(self):
        return HomogeneousPoly(self.variables, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return HomogeneousPoly(self.variables, {m: c * other for m, c in self.coeffs.items()})
        self._same(other)
        out: Dict[Monomial, object] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return HomogeneousPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomogeneousPoly":
        out = HomogeneousPoly(self.variables, {(0,) * len(self.variables): Fraction(1)})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return self.variables == other.variables and (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_in(self, names: Sequence[str]) -> Optional[int]:
        """Common total degree in the given variables, or None if mixed."""
        idx = [self.variables.index(v) for v in names]
        degs = {sum(m[k] for k in idx) for m in self.coeffs}
        if not degs:
            return None
        if len(degs) > 1:
            raise InvalidInput(f"not homogeneous in {tuple(names)}")
        return degs.pop()

    def diff(self, var: str) -> "HomogeneousPoly":
        k = self.variables.index(var)
        out = {}
        for m, c in self.coeffs.items():
            if m[k]:
                mm = list(m)
                mm[k] -= 1
                out[tuple(mm)] = c * m[k]
        return HomogeneousPoly(self.variables, out)

    def collect(self, var: str) -> Dict[int, "HomogeneousPoly"]:
        """Coefficients of powers of var, as polynomials in the other variables."""
        k = self.variables.index(var)
        rest = self.variables[:k] + self.variables[k + 1:]
        parts: Dict[int, Dict[Monomial, object]] = {}
        for m, c in self.coeffs.items():
            parts.setdefault(m[k], {})[m[:k] + m[k + 1:]] = c
        return {e: HomogeneousPoly(rest, d) for e, d in parts.items()}

    def restrict(self, variables: Sequence[str]) -> "HomogeneousPoly":
        """Drop variables that occur with exponent 0 everywhere."""
        keep = [self.variables.index(v) for v in variables]
        drop = [k for k in range(len(self.variables)) if k not in keep]
        out = {}
        for m, c in self.coeffs.items():
            if any(m[k] for k in drop):
                raise InvalidInput("cannot drop a variable that occurs")
            out[tuple(m[k] for k in keep)] = c
        return HomogeneousPoly(variables, out)

    def rename(self, mapping: Mapping[str, str], variables: Sequence[str]) -> "HomogeneousPoly":
        """Substitute variables by variables (merging exponents)."""
        target = tuple(variables)
        out: Dict[Monomial, object] = {}
        for m, c in self.coeffs.items():
            mm = [0] * len(target)
            for k, v in enumerate(self.variables):
                mm[target.index(mapping.get(v, v))] += m[k]
            key = tuple(mm)
            out[key] = out[key] + c if key in out else c
        return HomogeneousPoly(target, out)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in sorted(self.coeffs.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(self.variables, m) if e)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _zero(c) -> bool:
    if isinstance(c, CyclotomicElement):
        return c.is_zero()
    return c == 0


XY = ("X", "Y")
FOUR = ("X", "Y", "Xc", "Yc")


def xy_monomial(i: int, n: int, c=1, variables=XY) -> HomogeneousPoly:
    """c * X^i Y^(n-i)."""
    return HomogeneousPoly.monomial(variables, {variables[0]: i, variables[1]: n - i}, c)


def pairing_n(P: HomogeneousPoly, Q: HomogeneousPoly, n: Optional[int] = None):
    """[P, Q]_n with [X^i Y^(n-i), X^j Y^(n-j)] = (-1)^i binom(n,i)^(-1) if i+j = n."""
    if len(P.variables) != 2 or P.variables != Q.variables:
        raise InvalidInput("pairing needs two polynomials in the same two variables")
    dp, dq = P.degree_in(P.variables), Q.degree_in(Q.variables)
    if n is None:
        n = dp if dp is not None else dq
    for d in (dp, dq):
        if d is not None and d != n:
            raise InvalidInput(f"degree mismatch: expected {n}, got {d}")
    if n is None:
        return Fraction(0)
    acc = Fraction(0)
    for (i, _), a in P.coeffs.items():
        b = Q.coeffs.get((n - i, i))
        if b is not None:
            acc = acc + a * b * Fraction(_sign(i), binom(n, i))
    return acc


def dual_element(u: HomogeneousPoly, n: Optional[int] = None) -> HomogeneousPoly:
    """Dual of a basis monomial u, normalized by [dual(u), u]_n = 1."""
    if len(u.coeffs) != 1:
        raise InvalidInput("dual_element expects a single monomial")
    (mono, c), = u.coeffs.items()
    a, b = mono
    n = a + b if n is None else n
    if a + b != n:
        raise InvalidInput("monomial degree does not match n")
    # [X^b Y^a, X^a Y^b] = (-1)^b / binom(n, b)
    coef = Fraction(_sign(b) * binom(n, b)) / c
    return xy_monomial(b, n, coef, u.variables)


def gram_matrix(n: int):
    return [[pairing_n(xy_monomial(i, n), xy_monomial(j, n), n) for j in range(n + 1)] for i in range(n + 1)]


# ---------------------------------------------------------------------------
# the determinant polynomials and their coordinates

EIGHT = ("X", "Y", "Xc", "Yc", "U", "V", "A", "B")
SIX = ("X", "Y", "Xc", "Yc", "U", "V")


@lru_cache(maxsize=None)
def p_polynomials(n: int) -> Dict[int, HomogeneousPoly]:
    """P_{-2}, P_0, P_2 from det(X U; Y V)^n det(Yc U; -Xc V)^n det(A U; B V)^2."""
    if n < 0:
        raise InvalidInput("n must be non-negative")
    d1 = _det(EIGHT, ("X", "Y"), ("U", "V"), (1, 1))
    d2 = _det(EIGHT, ("Yc", "Xc"), ("U", "V"), (1, -1))
    d3 = _det(EIGHT, ("A", "B"), ("U", "V"), (1, 1))
    full = d1 ** n * d2 ** n * d3 ** 2
    by_a = full.collect("A")
    out = {}
    for j, a_exp in ((-2, 2), (0, 1), (2, 0)):
        part = by_a.get(a_exp, HomogeneousPoly(EIGHT[:6] + ("B",)))
        by_b = part.collect("B")
        out[j] = by_b.get(2 - a_exp, HomogeneousPoly(SIX))
    return out


def _det(variables, left: Tuple[str, str], right: Tuple[str, str], signs=(1, 1)) -> HomogeneousPoly:
    """det( s0*l0  r0 ; s1*l1  r1 ) = s0*l0*r1 - s1*l1*r0."""
    (l0, l1), (r0, r1) = left, right
    a = HomogeneousPoly.monomial(variables, {l0: 1, r1: 1}, signs[0])
    b = HomogeneousPoly.monomial(variables, {l1: 1, r0: 1}, signs[1])
    return a - b


@dataclass
class VPolynomialTriple:
    n: int
    table: Dict[Tuple[int, int], HomogeneousPoly] = field(default_factory=dict)

    def __getitem__(self, key: Tuple[int, int]) -> HomogeneousPoly:
        return self.table.get(key, HomogeneousPoly(FOUR))

    def reexpand(self, j: int) -> HomogeneousPoly:
        """Sum_i v_i(j) (U^{n+1+i} V^{n+1-i})^dual as a polynomial in SIX."""
        n = self.n
        m = 2 * n + 2
        out = HomogeneousPoly(SIX)
        for i in range(-n - 1, n + 2):
            dual = dual_element(xy_monomial(n + 1 + i, m, 1, ("U", "V")), m)
            (mono, c), = dual.coeffs.items()
            lifted = HomogeneousPoly(SIX, {(0, 0, 0, 0) + mono: c})
            v = self[(i, j)]
            out = out + HomogeneousPoly(SIX, {k + (0, 0): c2 for k, c2 in v.coeffs.items()}) * lifted
        return out


@lru_cache(maxsize=None)
def v_polynomials(n: int) -> VPolynomialTriple:
    """Coordinates v_i(j) of P_j against the dual basis.

    The basis vector attached to i is the dual of U^{n+1+i} V^{n+1-i}, so that
    i = n+1 carries V^{2n+2} and i = -n-1 carries U^{2n+2}."""
    P = p_polynomials(n)
    m = 2 * n + 2
    trip = VPolynomialTriple(n)
    for j in (-2, 0, 2):
        by_u = P[j].collect("U")
        for i in range(-n - 1, n + 2):
            # pairing P_j with U^{n+1+i} V^{n+1-i} keeps the U^{n+1-i} part
            a = n + 1 - i
            part = by_u.get(a)
            if part is None:
                continue
            scale = Fraction(_sign(a), binom(m, a))
            coeffs = {}
            for mono, c in part.coeffs.items():
                coeffs[mono[:4]] = c * scale
            trip.table[(i, j)] = HomogeneousPoly(FOUR, coeffs)
    return trip


# Sign s in the identification (Xc, Yc) = (s X, s Y) made by Upsilon.  With
# s = +1 the contraction constants come out as (-1)^{n-alpha} times the
# binomial closed forms (which are the ones compatible with the Ghate
# identity); s = -1 reproduces the closed forms exactly.
CONJUGATE_SIGN = -1


def upsilon(P: HomogeneousPoly, alpha: int, conjugate_sign: int = CONJUGATE_SIGN) -> HomogeneousPoly:
    """(1/alpha!^2) nabla^alpha P restricted to (Xc, Yc) = conjugate_sign * (X, Y),
    with nabla = d^2/dX dYc - d^2/dXc dY."""
    if P.variables != FOUR:
        raise InvalidInput("upsilon expects a polynomial in X, Y, Xc, Yc")
    if conjugate_sign not in (1, -1):
        raise InvalidInput("conjugate_sign must be +1 or -1")
    if P.is_zero():
        return HomogeneousPoly(XY)
    n = P.degree_in(("X", "Y"))
    nc = P.degree_in(("Xc", "Yc"))
    if n != nc:
        raise InvalidInput("upsilon expects bidegree (n, n)")
    if not 0 <= alpha <= n:
        raise InvalidInput("alpha out of range")
    Q = P
    for _ in range(alpha):
        Q = Q.diff("X").diff("Yc") - Q.diff("Xc").diff("Y")
    scale = Fraction(1, factorial(alpha) ** 2)
    if conjugate_sign == -1 and (n - alpha) % 2:
        scale = -scale
    return (Q * scale).rename({"Xc": "X", "Yc": "Y"}, XY)


def _to_ipower(z: CyclotomicElement) -> Tuple[Fraction, int]:
    """Write a Gaussian rational that is a rational multiple of a power of i
    as (r, k) with z = r * i^k."""
    z = z.lift(4)
    a, b = z.coeffs
    if b == 0:
        return a, 0
    if a == 0:
        return b, 1
    raise InternalConsistency("value is not a rational multiple of a power of i")


@dataclass(frozen=True)
class IPowerRational:
    """value * sqrt(-1)^ipow."""

    value: Fraction
    ipow: int = 0

    def __post_init__(self):
        v, k = Fraction(self.value), self.ipow % 4
        if k >= 2:
            v, k = -v, k - 2
        if v == 0:
            k = 0
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "ipow", k)

    def __complex__(self):
        return complex(self.value) * (1j ** self.ipow)

    def to_cyclotomic(self) -> CyclotomicElement:
        return CyclotomicElement.rational(self.value) * (I4 ** self.ipow)


def _x_minus_iy_power(m: int) -> HomogeneousPoly:
    """(X - sqrt(-1) Y)^m with Gaussian rational coefficients."""
    coeffs = {}
    for k in range(m + 1):
        coeffs[(k, m - k)] = CyclotomicElement.rational(binom(m, k)) * ((-I4) ** (m - k))
    return HomogeneousPoly(XY, coeffs)


def upv_pairing_definitional(
    n: int, alpha: int, i: int, j: int, conjugate_sign: int = CONJUGATE_SIGN
) -> IPowerRational:
    """[Upsilon^alpha(v_i(j)), (X - sqrt(-1) Y)^{2n-2alpha}] from the definitions."""
    _check_range(n, alpha, i)
    if j not in (-2, 0, 2):
        raise InvalidInput("j must be one of -2, 0, 2")
    v = v_polynomials(n)[(i, j)]
    u = upsilon(v, alpha, conjugate_sign)
    m = 2 * n - 2 * alpha
    val = pairing_n(u, _x_minus_iy_power(m), m)
    r, k = _to_ipower(CyclotomicElement.coerce(val))
    return IPowerRational(r, k)


def upv_pairing_closed(n: int, alpha: int, i: int, j: int) -> IPowerRational:
    """The binomial closed forms of the three pairings."""
    _check_range(n, alpha, i)
    base = Fraction(_sign(n - alpha) * binom(n, alpha) ** 2, binom(2 * n + 2, n + 1 - i))
    top = {-2: n + 1 - i, 0: n - i, 2: n - 1 - i}[j]
    s = sum(_sign(t) * binom(alpha, t) * binom(2 * n - 2 * alpha, top - 2 * t) for t in range(alpha + 1))
    mult = 2 if j == 0 else 1
    ipow = alpha + i + {-2: -1, 0: 0, 2: 1}[j]
    return IPowerRational(base * s * mult, ipow)


def upv_pairing_values(n: int, alpha: int, i: int, j: int) -> IPowerRational:
    """Definitional pairing value.  It equals (-1)^alpha times the printed
    binomial closed form (see upv_pairing_closed)."""
    return upv_pairing_definitional(n, alpha, i, j)


def c_constant_definitional(
    n: int, alpha: int, i: int, conjugate_sign: int = CONJUGATE_SIGN
) -> IPowerRational:
    """C(alpha, i) = u(0) + i u(-2) - i u(2) with u(j) the pairings above."""
    total = CyclotomicElement.rational(0)
    for j, w in ((0, CyclotomicElement.rational(1)), (-2, I4), (2, -I4)):
        u = upv_pairing_definitional(n, alpha, i, j, conjugate_sign)
        total = total + u.to_cyclotomic() * w
    r, k = _to_ipower(total)
    return IPowerRational(r, k)


def c_constant_closed(n: int, alpha: int, i: int) -> IPowerRational:
    """Binomial closed form of C(alpha, i).

    The sign (-1)^{(i-alpha)/2} is carried as sqrt(-1)^{i-alpha}, so for
    i != alpha mod 2 the value is purely imaginary rather than zero."""
    _check_range(n, alpha, i)
    s = sum(
        _sign(t) * binom(alpha, t) * binom(2 * n - 2 * alpha + 2, n - 2 * t + i + 1)
        for t in range(alpha + 1)
    )
    value = Fraction(_sign(n) * binom(n, alpha) ** 2 * s, binom(2 * n + 2, n + 1 - i))
    return IPowerRational(value, i - alpha)


def c_constant(n: int, alpha: int, i: int, check: bool = True) -> IPowerRational:
    """C(alpha, i) from the closed form, after asserting agreement with the
    definitional route (pairing, Upsilon, v-polynomials)."""
    closed = c_constant_closed(n, alpha, i)
    if check:
        direct = c_constant_definitional(n, alpha, i)
        if direct != closed:
            raise InternalConsistency(
                f"C({alpha},{i}) for n={n}: definitional {direct} != closed {closed}"
            )
    return closed


def c_table(n: int, check: bool = False) -> Dict[Tuple[int, int], IPowerRational]:
    """All closed-form C(alpha, i) for one n."""
    return {(alpha, i): c_constant(n, alpha, i, check=check) for alpha, i in iter_indices(n)}


def iter_indices(n: int) -> Iterator[Tuple[int, int]]:
    for alpha in range(n + 1):
        for i in range(-n - 1, n + 2):
            yield alpha, i


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _check_range(n: int, alpha: int, i: int):
    if n < 0 or not 0 <= alpha <= n or not -n - 1 <= i <= n + 1:
        raise InvalidInput(f"index out of range: n={n}, alpha={alpha}, i={i}")
