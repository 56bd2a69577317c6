"""Local Bruhat-Schwartz test functions and the Schwartz-level identities.

Finite places are modelled by exact functions on Q viewed inside Q_l: a
rational number is evaluated through its l-adic valuation, its unit part
mod l^k and its l-adic fractional part.  The additive character is
psi(x) = exp(-2 pi i {x}_l) and Haar measure gives O volume 1, so the
lattice O is self-dual.  The two-variable transform is the symplectic one,

    Phi^(x, y) = int int Phi(s, t) psi(s y - t x) ds dt,

so a separable f(x) g(y) transforms into (Fg)(-x) (Ff)(y) with
(Ff)(y) = int f(u) psi(u y) du.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from scipy import special

from . import kernels
from .characters import FiniteOrderCharacter, conductor, gauss_sum
from .errors import InvalidInput, PoleAtZero
from .exact_arith import CyclotomicElement, RootOfUnity
from .local_factors import gamma_C

Rational = Union[int, Fraction]
Cyc = CyclotomicElement

ZERO = Cyc.rational(0)
ONE = Cyc.rational(1)


# ---------------------------------------------------------------------------
# l-adic helpers on Q


def valuation(x: Rational, ell: int) -> float:
    x = Fraction(x)
    if x == 0:
        return math.inf
    v, a, b = 0, x.numerator, x.denominator
    while a % ell == 0:
        a //= ell
        v += 1
    while b % ell == 0:
        b //= ell
        v -= 1
    return v


def in_lattice(x: Rational, ell: int, k: int) -> bool:
    """x in l^k Z_l."""
    return valuation(x, ell) >= k


def fractional_part(x: Rational, ell: int) -> Fraction:
    """{x}_l in Z[1/l] cap [0, 1) with x - {x}_l in Z_l."""
    x = Fraction(x)
    v = valuation(x, ell)
    if v >= 0:
        return Fraction(0)
    e = -int(v)
    b = x.denominator // ell ** e
    m = ell ** e
    return Fraction(x.numerator * pow(b, -1, m) % m, m)


def psi(x: Rational, ell: int) -> Cyc:
    f = fractional_part(x, ell)
    return Cyc.root(f.denominator, -f.numerator)


def unit_residue(x: Rational, ell: int, r: int) -> int:
    """The unit part of x (x / l^{v(x)}) reduced mod l^r."""
    x = Fraction(x)
    v = int(valuation(x, ell))
    y = x / Fraction(ell) ** v
    m = ell ** max(r, 1)
    return y.numerator * pow(y.denominator, -1, m) % m


def character_value(chi: FiniteOrderCharacter, x: Rational) -> Cyc:
    """chi(x) for x in Q_l^x, with chi(l) = chi.uniformizer."""
    v = int(valuation(x, chi.p))
    return (chi(unit_residue(x, chi.p, chi.r)) * chi.uniformizer ** v).to_cyclotomic()


# ---------------------------------------------------------------------------
# one-variable local functions


class LocalFunction:
    """A locally constant compactly supported function on Q_l."""

    ell: int

    def __call__(self, x: Rational) -> Cyc:
        raise NotImplementedError

    def fourier(self) -> "LocalFunction":
        raise NotImplementedError

    def support_bound(self) -> int:
        """A with support inside l^{-A} O."""
        raise NotImplementedError

    def invariance(self) -> int:
        """B with invariance under translation by l^B O."""
        raise NotImplementedError

    def reflect(self) -> "LocalFunction":
        return Reflected(self)


@dataclass(frozen=True)
class PhasedCoset(LocalFunction):
    """x -> psi(a x) 1_{t + l^k O}(x)."""

    ell: int
    t: Fraction = Fraction(0)
    a: Fraction = Fraction(0)
    k: int = 0

    def __call__(self, x):
        if not in_lattice(Fraction(x) - self.t, self.ell, self.k):
            return ZERO
        return psi(self.a * Fraction(x), self.ell)

    def fourier(self):
        # int_{t + l^k O} psi(u (a + y)) du = q^{-k} psi(t(a + y)) 1_{-a + l^{-k} O}(y)
        c = psi(self.t * self.a, self.ell) * Fraction(self.ell) ** (-self.k)
        return Combination(((c, PhasedCoset(self.ell, -self.a, self.t, -self.k)),))

    def support_bound(self):
        return max(-self.k, -int(min(valuation(self.t, self.ell), self.k)))

    def invariance(self):
        va = valuation(self.a, self.ell)
        return max(self.k, 0 if va == math.inf else -int(va))


def lattice(ell: int, k: int = 0) -> PhasedCoset:
    return PhasedCoset(ell, Fraction(0), Fraction(0), k)


@dataclass(frozen=True)
class UnitCharacter(LocalFunction):
    """x -> chi(x) 1_{l^k O^x}(x)."""

    chi: FiniteOrderCharacter
    k: int = 0

    @property
    def ell(self):  # type: ignore[override]
        return self.chi.p

    def __call__(self, x):
        if Fraction(x) == 0 or valuation(x, self.ell) != self.k:
            return ZERO
        return character_value(self.chi, x)

    def fourier(self):
        ell, c = self.ell, conductor(self.chi)
        if c == 0:
            # chi is constant (= chi(l)^k) on l^k O^x
            val = (self.chi.uniformizer ** self.k).to_cyclotomic()
            pieces = (lattice(ell, self.k), lattice(ell, self.k + 1))
            return Combination(((val, pieces[0]), (-val, pieces[1]))).fourier()
        coeff = gauss_sum(self.chi) * Fraction(ell) ** (-self.k - c)
        return Combination(((coeff, UnitCharacter(self.chi.inverse(), -c - self.k)),))

    def support_bound(self):
        return max(-self.k, 0)

    def invariance(self):
        return self.k + max(conductor(self.chi), 1)


@dataclass(frozen=True)
class Reflected(LocalFunction):
    inner: LocalFunction

    @property
    def ell(self):  # type: ignore[override]
        return self.inner.ell

    def __call__(self, x):
        return self.inner(-Fraction(x))

    def fourier(self):
        return Reflected(self.inner.fourier())

    def support_bound(self):
        return self.inner.support_bound()

    def invariance(self):
        return self.inner.invariance()


@dataclass(frozen=True)
class Combination(LocalFunction):
    terms: Tuple[Tuple[Cyc, LocalFunction], ...]

    @property
    def ell(self):  # type: ignore[override]
        return self.terms[0][1].ell

    def __call__(self, x):
        out = ZERO
        for c, f in self.terms:
            v = f(x)
            if not v.is_zero():
                out = out + Cyc.coerce(c) * v
        return out

    def fourier(self):
        out = []
        for c, f in self.terms:
            g = f.fourier()
            if isinstance(g, Combination):
                out.extend((Cyc.coerce(c) * d, h) for d, h in g.terms)
            else:
                out.append((Cyc.coerce(c), g))
        return Combination(tuple(out))

    def support_bound(self):
        return max(f.support_bound() for _, f in self.terms)

    def invariance(self):
        return max(f.invariance() for _, f in self.terms)


def finite_fourier(f: LocalFunction, y: Rational) -> Cyc:
    """Oracle: (Ff)(y) by direct summation over l^{-A} O / l^B O."""
    ell, A, B = f.ell, f.support_bound(), f.invariance()
    vy = valuation(y, ell)
    if vy != math.inf:
        # psi(u y) must also be constant on the cells
        B = max(B, -int(vy))
    cell = Fraction(ell) ** (-B)
    base = Fraction(ell) ** (-A)
    total = ZERO
    for j in range(ell ** max(A + B, 0)):
        u = j * base
        v = f(u)
        if not v.is_zero():
            total = total + v * psi(u * Fraction(y), ell)
    return total * cell


# ---------------------------------------------------------------------------
# two-variable functions


@dataclass(frozen=True)
class SchwartzFunction:
    """Finite sum of coefficient * f(x) g(y) at one finite place."""

    terms: Tuple[Tuple[Cyc, LocalFunction, LocalFunction], ...]
    label: str = ""

    @property
    def ell(self) -> int:
        return self.terms[0][1].ell

    def __call__(self, x: Rational, y: Rational) -> Cyc:
        out = ZERO
        for c, f, g in self.terms:
            a = f(x)
            if a.is_zero():
                continue
            out = out + Cyc.coerce(c) * a * g(y)
        return out

    def fourier(self) -> "SchwartzFunction":
        return SchwartzFunction(
            tuple((c, Reflected(g.fourier()), f.fourier()) for c, f, g in self.terms),
            label=f"FT({self.label})" if self.label else "",
        )

    def model_values(self, M: int) -> Dict[Tuple[int, int], Cyc]:
        """Values on (Z/l^M)^2, i.e. on representatives of O^2 / l^M O^2."""
        n = self.ell ** M
        return {(m, k): self(m, k) for m in range(n) for k in range(n)}


def finite_fourier_2d(phi: SchwartzFunction, x: Rational, y: Rational) -> Cyc:
    """Oracle: symplectic transform by direct double summation."""
    total = ZERO
    for c, f, g in phi.terms:
        # int f(s) psi(s y) ds * int g(t) psi(-t x) dt
        total = total + Cyc.coerce(c) * finite_fourier(f, y) * finite_fourier(g, -Fraction(x))
    return total


# ---------------------------------------------------------------------------
# the distinguished classes


def padic_class(p: int, r: int) -> SchwartzFunction:
    """psi(x / p^r) 1_{O^2}(x, y); r = 0 is the ordinary class."""
    f = PhasedCoset(p, Fraction(0), Fraction(1, p ** r), 0)
    return SchwartzFunction(((ONE, f, lattice(p)),), label=f"padic(r={r})" if r else "ordinary")


def ordinary_class(p: int) -> SchwartzFunction:
    return padic_class(p, 0)


def tame_class(omega: FiniteOrderCharacter, level: int = 1) -> SchwartzFunction:
    """omega^{-1}(y) 1_{l^level O}(x) 1_{O^x}(y)."""
    if level < 1:
        raise InvalidInput("a tame place has positive level")
    return SchwartzFunction(
        ((ONE, lattice(omega.p, level), UnitCharacter(omega.inverse(), 0)),),
        label=f"tame(l={omega.p})",
    )


def auxiliary_class(q: int) -> SchwartzFunction:
    """1_{O^x}(x) 1_O(y)."""
    units = Combination(((ONE, lattice(q, 0)), (-ONE, lattice(q, 1))))
    return SchwartzFunction(((ONE, units, lattice(q, 0)),), label=f"auxiliary(l={q})")


@dataclass(frozen=True)
class ArchimedeanClass:
    """2^{-k} (x + iy)^k exp(-pi (x^2 + y^2)) on R^2."""

    k: int

    def __call__(self, x: float, y: float) -> complex:
        return 2.0 ** (-self.k) * complex(x, y) ** self.k * math.exp(-math.pi * (x * x + y * y))

    def fourier(self) -> "ArchimedeanClass":
        # with psi_infty(x) = exp(2 pi i x) the symplectic transform fixes it
        return self


SchwartzClass = Union[SchwartzFunction, ArchimedeanClass]


def fourier_transform(phi: SchwartzClass) -> SchwartzClass:
    return phi.fourier()


# ---------------------------------------------------------------------------
# identities on the truncation models


@dataclass(frozen=True)
class ModelReport:
    p: int
    r: int
    M: int
    points: int
    mismatches: int
    backend: str

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def unit_average(p: int, r: int, M: Optional[int] = None) -> ModelReport:
    """Exhaustive check on (Z/p^M)^2 of

        sum_{u in (O/p^r)^x} Phi^{(r)}(u m, u n) = q^r 1_{p^r O}(m) - q^{r-1} 1_{p^{r-1} O}(m)

    (the level-0 function is 1_{O^2}, so each term on the right is an
    indicator of m).
    """
    if r < 1:
        raise InvalidInput("unit average needs r >= 1")
    M = r + 2 if M is None else M
    if M < r + 1:
        raise InvalidInput("model too small", M=M, required=r + 1)
    bad = kernels.unit_average_mismatches(p, r, M)
    return ModelReport(p, r, M, p ** (2 * M), bad, kernels.BACKEND)


def unit_average_rhs(p: int, r: int, m: int) -> int:
    return (p ** r if m % p ** r == 0 else 0) - (p ** (r - 1) if m % p ** (r - 1) == 0 else 0)


def unit_average_at(p: int, r: int, m: int, n: int) -> Cyc:
    """Left side at a single point, summed exactly (slow path, for spot checks)."""
    phi = padic_class(p, r)
    total = ZERO
    for u in range(1, p ** r):
        if u % p:
            total = total + phi(u * m, u * n)
    return total


def section_distribution_check(p: int, r: int, M: Optional[int] = None) -> ModelReport:
    """Exhaustive check on (Z/p^M)^2 of

        sum_{x, y in O/p} Phi^{(r+1)}(m + m x p^r + n y p^r, n) = q^2 psi(m / p^{r+1}) 1_{pO^2}(m, n).
    """
    if r < 1:
        raise InvalidInput("distribution relation needs r >= 1")
    M = r + 2 if M is None else M
    if M < r + 1:
        raise InvalidInput("model does not cover level r + 1", M=M, required=r + 1)
    bad = kernels.distribution_mismatches(p, r, M)
    return ModelReport(p, r, M, p ** (2 * M), bad, kernels.BACKEND)


def section_distribution_sides(p: int, r: int, m: int, n: int) -> Tuple[Cyc, Cyc]:
    """Both sides at a single point, summed exactly."""
    phi = padic_class(p, r + 1)
    lhs = ZERO
    for x in range(p):
        for y in range(p):
            lhs = lhs + phi(m + m * x * p ** r + n * y * p ** r, n)
    rhs = ZERO
    if m % p == 0 and n % p == 0:
        rhs = psi(Fraction(m, p ** (r + 1)), p) * (p * p)
    return lhs, rhs


def eav_identity(p: int, r: int, M: Optional[int] = None) -> bool:
    """(1/q^{r-1}) sum over units of the level-r translate equals
    q (level 0 at a(p^r)) - (level 0 at a(p^{r-1})), read on Schwartz functions;
    dividing the unit average by q^{r-1} gives exactly this shape."""
    return unit_average(p, r, M).ok


@dataclass(frozen=True)
class DistributionConstant:
    r: int
    alpha: int
    n: int
    s: Union[int, Fraction, complex]
    omega_value: Union[Cyc, RootOfUnity, int, Fraction] = 1
    q_list: Tuple[int, ...] = ()

    def value(self):
        om = self.omega_value
        exact = isinstance(self.s, (int, Fraction)) and not isinstance(om, complex)
        if exact:
            base = Cyc.coerce(om) ** (-self.r)
            e = 2 * (self.s + self.n - self.alpha) * self.r
            scale = Fraction(1)
            for q in self.q_list:
                if Fraction(e).denominator != 1:
                    return complex(base) * math.prod(complex(q) ** complex(e) for q in self.q_list)
                scale *= Fraction(q) ** int(e)
            return base * scale
        z = complex(om) ** (-self.r)
        for q in self.q_list:
            z *= complex(q) ** (2 * (complex(self.s) + self.n - self.alpha) * self.r)
        return z


def distribution_constant(r: int, alpha: int, s, omega=1, q: Union[int, Sequence[int]] = (), n: int = 0):
    """c_{r, alpha, s} = omega(p^{-r}) prod_{v | p} q_v^{2(s + n - alpha) r}."""
    q_list = (q,) if isinstance(q, int) else tuple(q)
    return DistributionConstant(r, alpha, n, s, omega, q_list).value()


# ---------------------------------------------------------------------------
# induced sections and the constant term


IDENTITY = "identity"
W2 = "w2"
OTHER = "other"


@dataclass(frozen=True)
class SectionPoint:
    """Group element g = (a, *; 0, d) k with k described by an angle (real
    place) or by a Bruhat coset tag (finite place)."""

    a: float = 1.0
    d: float = 1.0
    theta: float = 0.0
    coset: str = IDENTITY


@dataclass(frozen=True)
class PlaceSection:
    """Data for one place of F = Q.

    kind: archimedean | unramified | tame | auxiliary.
    chi_value is phi_1 phi_2^{-1}(uniformizer) at an unramified place,
    omega_sign is omega_pi(-1) at a tame place.
    """

    kind: str
    q: int = 0
    chi_value: complex = 1.0
    omega_sign: int = 1
    level: int = 1
    k_alpha: int = 2
    n_alpha: int = 0


def local_section_value(place: PlaceSection, point: SectionPoint, s: complex) -> Tuple[complex, complex]:
    """(F_v(g, s), M F_v(g, s)) from the K-type description of the section.

    The Borel part contributes |a/d|^{s+1/2}; characters phi_1, phi_2 at a, d
    are taken trivial, which is all the constant-term assembly uses.
    """
    s = complex(s)
    bor = (abs(point.a) / abs(point.d)) ** (s + 0.5) if (point.a, point.d) != (1.0, 1.0) else 1.0
    kind = place.kind
    if kind == "archimedean":
        k, na = place.k_alpha, place.n_alpha
        rot = cmath.exp(1j * k * point.theta)
        f = 2 ** (s - 1) * 1j ** k * gamma_C(s + k)
        mf = -(2 ** (-(s + na + 1))) * gamma_C(1 + na + 2 * s) / gamma_C(s)
        return bor * rot * f, bor * rot.conjugate() * mf
    if kind == "unramified":
        x = complex(place.chi_value) * place.q ** (-(2 * s + 1))
        y = complex(place.chi_value) * place.q ** (-(2 * s))
        return bor / (1 - x), bor / (1 - y)
    if kind == "tame":
        vol = place.q ** (-place.level)
        f = 1.0 if point.coset == IDENTITY else 0.0
        mf = place.omega_sign * vol if point.coset == W2 else 0.0
        return bor * f, bor * mf
    if kind == "auxiliary":
        f = 1.0 if point.coset == W2 else 0.0
        mf = 1.0 if point.coset == IDENTITY else 0.0
        return bor * f, bor * mf
    raise InvalidInput(f"unknown place kind {kind!r}")


@dataclass(frozen=True)
class ConstantTermConfig:
    """F = Q, omega' trivial.

    ``bad`` lists the finite primes outside the product formula for the
    partial L-functions (tame places, the auxiliary prime); the first term
    removes infinity, v0 and the tame places, the second only infinity and v0,
    as printed.
    """

    n: int
    alpha: int
    auxiliary_q: Optional[int] = None
    tame: Tuple[PlaceSection, ...] = ()
    coset: str = IDENTITY

    @property
    def n_alpha(self) -> int:
        return 2 * (self.n - self.alpha)

    @property
    def k_alpha(self) -> int:
        return self.n_alpha + 2


def _partial_zeta(z: float, removed: Sequence[int]) -> float:
    val = float(special.zeta(z, 1))
    for q in removed:
        val *= 1 - q ** (-z)
    return val


@dataclass(frozen=True)
class ConstantTerm:
    first: complex
    second: complex


def constant_term(s: float, cfg: ConstantTermConfig) -> ConstantTerm:
    """Both summands of the constant term at real s > 0 (numeric).

    phi_1 phi_2^{-1} = |.|^{n_alpha + 1}, so the first L-value is
    zeta^{(S)}(2s + n_alpha + 2) and the second zeta^{(S')}(2s + n_alpha + 1).
    """
    _require_holomorphic(cfg)
    arch = PlaceSection("archimedean", k_alpha=cfg.k_alpha, n_alpha=cfg.n_alpha)
    pt = SectionPoint(coset=cfg.coset)
    f_inf, mf_inf = local_section_value(arch, SectionPoint(), s)
    first, second = f_inf, mf_inf
    removed1: List[int] = []
    removed2: List[int] = []
    for t in cfg.tame:
        f, mf = local_section_value(t, pt, s)
        first *= f
        second *= mf
        removed1.append(t.q)
    if cfg.auxiliary_q is not None:
        f, mf = local_section_value(PlaceSection("auxiliary", q=cfg.auxiliary_q), pt, s)
        first *= f
        second *= mf
        removed1.append(cfg.auxiliary_q)
        removed2.append(cfg.auxiliary_q)
    first *= _partial_zeta(2 * s + cfg.n_alpha + 2, removed1) if first != 0 else 0
    second *= _partial_zeta(2 * s + cfg.n_alpha + 1, removed2) if second != 0 else 0
    return ConstantTerm(complex(first), complex(second))


def _require_holomorphic(cfg: ConstantTermConfig):
    if cfg.auxiliary_q is None and not cfg.tame:
        raise PoleAtZero(
            "no tame or auxiliary place forces the vanishing at (0, 0); the series may have a pole",
        )


def constant_term_limit(cfg: ConstantTermConfig) -> ConstantTerm:
    """Value at s = 0, taking the second summand's limit analytically.

    With n_alpha = 0 the L-value zeta^{(v0)}(2s + 1) has a simple pole with
    residue (1/2) prod (1 - 1/q) while 1/Gamma_C(s) = s/2 + O(s^2); the product
    tends to prod(1 - 1/q) / 4.
    """
    _require_holomorphic(cfg)
    if cfg.n_alpha > 0:
        # 1/Gamma_C(0) = 0 and the L-value is finite
        second = 0.0
    else:
        na = cfg.n_alpha
        lead = -(2.0 ** (-(na + 1))) * gamma_C(1 + na)
        resid = 0.25
        if cfg.auxiliary_q is not None:
            resid *= 1 - 1 / cfg.auxiliary_q
        second = lead * resid
        pt = SectionPoint(coset=cfg.coset)
        for t in cfg.tame:
            second *= local_section_value(t, pt, 1.0)[1]
        if cfg.auxiliary_q is not None:
            second *= local_section_value(PlaceSection("auxiliary", q=cfg.auxiliary_q), pt, 1.0)[1]
    return ConstantTerm(complex(_first_at_zero(cfg)), complex(second))


def _first_at_zero(cfg: ConstantTermConfig) -> complex:
    val = 2 ** (-1) * 1j ** cfg.k_alpha * gamma_C(cfg.k_alpha)
    pt = SectionPoint(coset=cfg.coset)
    removed = []
    for t in cfg.tame:
        val *= local_section_value(t, pt, 0.0)[0]
        removed.append(t.q)
    if cfg.auxiliary_q is not None:
        val *= local_section_value(PlaceSection("auxiliary", q=cfg.auxiliary_q), pt, 0.0)[0]
        removed.append(cfg.auxiliary_q)
    return val * _partial_zeta(cfg.n_alpha + 2, removed)
