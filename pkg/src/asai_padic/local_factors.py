"""Satake data, Asai and Hecke local L-factors, gamma factors, modified Euler
factors at p and at infinity, archimedean Gamma products and the U_0-eigenvalue
constants.

Local Galois-side data is organised in Weil-Deligne blocks: a block
``(c, d, k)`` is the d-dimensional unramified induction (d in {1, 2}) with
Frobenius^d eigenvalue c, tensored with Sp(k). Its L-factor is
1 / (1 - c X^d) with X = q^{-s}, where c is the eigenvalue on the kernel of
the monodromy.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

from scipy import special

from .characters import FiniteOrderCharacter, HeckeCharacterModel, conductor, epsilon_factor, gauss_sum
from .errors import (
    IndeterminateValue,
    InternalConsistency,
    InvalidInput,
    NonCritical,
    NotNearlyOrdinary,
    PoleAtS,
    UnsupportedCase,
)
from .exact_arith import (
    CyclotomicElement,
    LaurentPoly,
    RationalFunctionInQs,
    RootOfUnity,
    eval_rational_function,
    sqrt_rational_power,
)

Value = Union[int, Fraction, CyclotomicElement, complex, float]


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction, CyclotomicElement))


def _coerce(x) -> Value:
    if isinstance(x, RootOfUnity):
        return x.to_cyclotomic()
    return x


def _inv(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def _pow(x, k: int):
    if k >= 0:
        return x ** k if not isinstance(x, int) else Fraction(x) ** k
    return _inv(x) ** (-k)


def _half_power(q: int, k: int) -> Value:
    """q^{k/2} exactly."""
    if k % 2 == 0:
        return Fraction(q) ** (k // 2)
    root = sqrt_rational_power(q)
    return root ** k if k > 0 else root.inverse() ** (-k)


# ---------------------------------------------------------------------------
# GL_2 local components and Satake data


@dataclass(frozen=True)
class UnramifiedPrincipal:
    """pi(mu, nu) with mu(w) = alpha, nu(w) = beta; beta is the nearly ordinary one."""

    alpha: Value
    beta: Value

    def blocks(self, q_w: int) -> List["WDBlock"]:
        return [WDBlock(_coerce(self.alpha)), WDBlock(_coerce(self.beta))]

    def satake(self, q_w: int) -> Tuple[Value, Value]:
        return _coerce(self.alpha), _coerce(self.beta)


@dataclass(frozen=True)
class Special:
    """Sp(eta) inside pi(eta|.|^{1/2}, eta|.|^{-1/2}); eta unramified, eta(w) = +-1."""

    eta: int = 1

    def __post_init__(self):
        if self.eta not in (1, -1):
            raise InvalidInput("eta must be an unramified quadratic character value +-1")

    def blocks(self, q_w: int) -> List["WDBlock"]:
        return [WDBlock(self.eta * _half_power(q_w, -1), 1, 2)]

    def satake(self, q_w: int) -> Tuple[Value, Value]:
        return self.eta * _half_power(q_w, 1), self.eta * _half_power(q_w, -1)


@dataclass(frozen=True)
class RamifiedPrincipal:
    """pi(mu, nu) with mu unramified (mu(w) = alpha) and nu ramified of conductor 1.

    Ramified characters are only tracked up to unramified twist: ``label``
    names the class, labels summing to zero multiply to an unramified
    character whose value at the uniformizer is the product of the
    ``ramified_value`` entries.
    """

    alpha: Value
    label: int = 1
    ramified_value: Value = 1

    def __post_init__(self):
        if self.label == 0:
            raise InvalidInput("label 0 is reserved for unramified characters")

    def blocks(self, q_w: int) -> List["WDBlock"]:
        return [WDBlock(_coerce(self.alpha)), WDBlock(_coerce(self.ramified_value), label=self.label)]

    def satake(self, q_w: int):
        raise NotNearlyOrdinary("ramified principal series has no unramified beta")


GL2Rep = Union[UnramifiedPrincipal, Special, RamifiedPrincipal]


@dataclass(frozen=True)
class SatakePlaceData:
    """Local data at a place v of F: split (w, w_c) or inert (w)."""

    kind: str
    q: int
    w: GL2Rep
    wc: Optional[GL2Rep] = None
    omega: Optional[Value] = None

    def __post_init__(self):
        if self.kind not in ("split", "inert"):
            raise InvalidInput("place kind must be 'split' or 'inert'")
        if self.kind == "split" and self.wc is None:
            raise InvalidInput("split place needs data for w and w_c")
        if self.kind == "inert" and self.wc is not None:
            raise InvalidInput("inert place carries a single GL_2 component")
        if self.q < 2:
            raise InvalidInput("residue cardinality must be at least 2")

    @property
    def q_w(self) -> int:
        return self.q if self.kind == "split" else self.q ** 2

    def components(self) -> List[GL2Rep]:
        return [self.w, self.wc] if self.kind == "split" else [self.w]

    @property
    def central_value(self) -> Value:
        """omega_{pi,v}(varpi_v); defaults to the product of Satake parameters."""
        if self.omega is not None:
            return _coerce(self.omega)
        out = 1
        for rep in self.components():
            if isinstance(rep, Special):
                continue
            if isinstance(rep, RamifiedPrincipal):
                raise UnsupportedCase("central character of a ramified principal series must be given")
            a, b = rep.satake(self.q_w)
            out = out * a * b
        return out

    @property
    def alpha_v(self) -> Value:
        out = 1
        for rep in self.components():
            out = out * rep.satake(self.q_w)[0]
        return out

    @property
    def beta_v(self) -> Value:
        out = 1
        for rep in self.components():
            out = out * rep.satake(self.q_w)[1]
        return out

    # serialization
    def to_dict(self) -> dict:
        out = {"kind": self.kind, "q": self.q, "w": _rep_to_dict(self.w)}
        if self.wc is not None:
            out["wc"] = _rep_to_dict(self.wc)
        if self.omega is not None:
            out["omega"] = encode_value(self.omega)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "SatakePlaceData":
        try:
            return cls(
                d["kind"],
                int(d["q"]),
                _rep_from_dict(d["w"]),
                _rep_from_dict(d["wc"]) if "wc" in d else None,
                decode_value(d["omega"]) if "omega" in d else None,
            )
        except KeyError as exc:
            raise InvalidInput(f"Satake descriptor is missing {exc}", pointer=f"/{exc.args[0]}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SatakePlaceData":
        return cls.from_dict(json.loads(text))


def encode_value(x) -> object:
    """JSON form of a parameter: int, "a/b", {"order","exponent","scale"}, {"re","im"}."""
    if isinstance(x, bool):
        raise InvalidInput("booleans are not parameters")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, RootOfUnity):
        return {"order": x.order, "exponent": x.exponent}
    if isinstance(x, CyclotomicElement):
        return {"cyclotomic_order": x.order, "coefficients": [str(c) for c in x.coeffs]}
    z = complex(x)
    return {"re": z.real, "im": z.imag}


def decode_value(v) -> Value:
    if isinstance(v, bool):
        raise InvalidInput("booleans are not parameters")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return complex(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, dict):
        if "order" in v:
            z = RootOfUnity(int(v["order"]), int(v.get("exponent", 0))).to_cyclotomic()
            return z * Fraction(v.get("scale", 1))
        if "cyclotomic_order" in v:
            return CyclotomicElement(int(v["cyclotomic_order"]), [Fraction(c) for c in v["coefficients"]])
        if "re" in v:
            return complex(float(v["re"]), float(v.get("im", 0.0)))
    raise InvalidInput(f"cannot decode parameter {v!r}")


def _rep_to_dict(rep: GL2Rep) -> dict:
    if isinstance(rep, UnramifiedPrincipal):
        return {"type": "unramified_principal", "alpha": encode_value(rep.alpha), "beta": encode_value(rep.beta)}
    if isinstance(rep, Special):
        return {"type": "special", "eta": rep.eta}
    return {
        "type": "ramified_principal",
        "alpha": encode_value(rep.alpha),
        "label": rep.label,
        "ramified_value": encode_value(rep.ramified_value),
    }


def _rep_from_dict(d: dict) -> GL2Rep:
    kind = d.get("type")
    if kind == "unramified_principal":
        return UnramifiedPrincipal(decode_value(d["alpha"]), decode_value(d["beta"]))
    if kind == "special":
        return Special(int(d.get("eta", 1)))
    if kind == "ramified_principal":
        return RamifiedPrincipal(decode_value(d["alpha"]), int(d.get("label", 1)), decode_value(d.get("ramified_value", 1)))
    raise InvalidInput(f"unknown representation type {kind!r}", pointer="/type")


# ---------------------------------------------------------------------------
# Weil-Deligne blocks


@dataclass(frozen=True)
class WDBlock:
    c: Value
    d: int = 1
    k: int = 1
    label: int = 0

    @property
    def dim(self) -> int:
        return self.d * self.k

    @property
    def ramified(self) -> bool:
        return self.label != 0

    def semisimple_eigenvalues(self, q: int) -> List[Value]:
        if self.d != 1:
            raise UnsupportedCase("eigenvalues of an induced block live over the quadratic extension")
        return [self.c * Fraction(q) ** j for j in range(self.k)]

    def det(self, q: int) -> Value:
        """det of Frobenius on the block."""
        if self.d == 2:
            return -self.c
        out = 1
        for x in self.semisimple_eigenvalues(q):
            out = out * x
        return out

    def dual(self, q: int) -> "WDBlock":
        if self.d == 2:
            return WDBlock(_inv(self.c), 2, self.k, -self.label)
        return WDBlock(_inv(self.c * Fraction(q) ** (self.k - 1)), 1, self.k, -self.label)


def tensor_blocks(a: WDBlock, b: WDBlock, q: int) -> List[WDBlock]:
    """Sp(k1) (x) Sp(k2) = sum_j Sp(k1 + k2 - 1 - 2j) with kernel eigenvalue c1 c2 q^j."""
    if a.d != 1 or b.d != 1:
        raise UnsupportedCase("tensor products of induced blocks are not needed")
    out = []
    for j in range(min(a.k, b.k)):
        out.append(WDBlock(a.c * b.c * Fraction(q) ** j, 1, a.k + b.k - 1 - 2 * j, a.label + b.label))
    return out


def asai_blocks(data: SatakePlaceData) -> List[WDBlock]:
    """Weil-Deligne blocks of As^+(pi_v) over F_v."""
    q = data.q
    if data.kind == "split":
        out = []
        for a in data.w.blocks(q):
            for b in data.wc.blocks(q):
                out.extend(tensor_blocks(a, b, q))
        return out
    rep = data.w
    if isinstance(rep, UnramifiedPrincipal):
        a, b = rep.satake(data.q_w)
        return [WDBlock(a), WDBlock(b), WDBlock(a * b, 2)]
    if isinstance(rep, Special):
        return [WDBlock(rep.eta * Fraction(1, q), 1, 3), WDBlock(-rep.eta)]
    # mu unramified, nu ramified: only mu|_F survives
    return [WDBlock(_coerce(rep.alpha)), WDBlock(_coerce(rep.ramified_value), label=rep.label),
            WDBlock(_coerce(rep.alpha) * _coerce(rep.ramified_value), 2, label=rep.label)]


def _twist_value(twist) -> Tuple[bool, Value]:
    """(ramified?, value at the uniformizer) for a local twist."""
    if twist is None:
        return False, 1
    if isinstance(twist, HeckeCharacterModel):
        twist = twist.finite_part
    if isinstance(twist, FiniteOrderCharacter):
        if conductor(twist) > 0:
            return True, 1
        return False, twist.uniformizer.to_cyclotomic()
    return False, _coerce(twist)


def blocks_L_factor(blocks: Sequence[WDBlock], q: int, twist=None) -> RationalFunctionInQs:
    ramified, y = _twist_value(twist)
    den = LaurentPoly.constant(1)
    for b in blocks:
        if b.ramified or ramified:
            continue
        den = den * LaurentPoly.one_minus(b.c * _pow(y, b.d), b.d)
    return RationalFunctionInQs(1, den, q)


def asai_L_factor(data: SatakePlaceData, twist=None) -> RationalFunctionInQs:
    """L(s, As^+(pi)_v (x) twist) as a rational function of X = q_v^{-s}."""
    return blocks_L_factor(asai_blocks(data), data.q, twist)


def hecke_L_factor(value, q: int) -> RationalFunctionInQs:
    """L(s, chi) = 1 / (1 - chi(varpi) X) for an unramified chi."""
    return RationalFunctionInQs.euler_factor([_coerce(value)], q)


def rankin_selberg_L_factor(data: SatakePlaceData, twist=None) -> RationalFunctionInQs:
    """Split places: 1 / prod (1 - x y chi(varpi) X) over the four Satake products.

    Valid for unramified principal series on both sides; used as an
    independent check of the block computation."""
    if data.kind != "split":
        raise UnsupportedCase("Rankin-Selberg product needs a split place")
    ramified, y = _twist_value(twist)
    if ramified:
        return RationalFunctionInQs(1, 1, data.q)
    a = data.w.satake(data.q_w)
    b = data.wc.satake(data.q_w)
    return RationalFunctionInQs.euler_factor([x * z * y for x in a for z in b], data.q)


# ---------------------------------------------------------------------------
# gamma factors


@dataclass
class GammaFactor:
    """gamma(s) = epsilon(s) L(1 - s, dual) / L(s)."""

    L: RationalFunctionInQs
    L_dual: RationalFunctionInQs
    epsilon: Union[Value, Callable[[complex], complex]] = 1

    def epsilon_at(self, s) -> complex:
        if callable(self.epsilon):
            return complex(self.epsilon(s))
        return complex(self.epsilon)

    def __call__(self, s) -> complex:
        try:
            top = eval_rational_function(self.L_dual, 1 - s)
        except PoleAtS as exc:
            try:
                eval_rational_function(self.L, s)
            except PoleAtS:
                raise IndeterminateValue("poles of L(s) and L(1-s) collide", s=str(s)) from exc
            raise
        try:
            bottom = eval_rational_function(self.L, s)
        except PoleAtS:
            return 0j
        return self.epsilon_at(s) * top / bottom


def gamma_factor(L_s: RationalFunctionInQs, L_dual_1ms: RationalFunctionInQs, epsilon=1) -> GammaFactor:
    if L_s.q != L_dual_1ms.q:
        raise InvalidInput("L-factors in different bases")
    return GammaFactor(L_s, L_dual_1ms, epsilon)


def gl1_gamma_factor(chi: FiniteOrderCharacter, q: Optional[int] = None) -> GammaFactor:
    """gamma(s, chi, psi) for a character of Q_p^x."""
    q = q or chi.p
    if conductor(chi) == 0:
        y = chi.uniformizer.to_cyclotomic()
        return GammaFactor(hecke_L_factor(y, q), hecke_L_factor(y.inverse(), q), 1)
    one = RationalFunctionInQs(1, 1, q)
    return GammaFactor(one, one, lambda s: complex(epsilon_factor(chi, s)))


def blocks_gamma_factor(blocks: Sequence[WDBlock], q: int, twist=None) -> GammaFactor:
    """gamma(s, rho (x) twist) from Weil-Deligne blocks with an unramified psi."""
    ramified, y = _twist_value(twist)
    L = blocks_L_factor(blocks, q, None if not ramified else twist)
    dual = [b.dual(q) for b in blocks]
    if ramified:
        chi = twist.finite_part if isinstance(twist, HeckeCharacterModel) else twist
        det = 1
        for b in blocks:
            det = det * b.det(q)
        dim = sum(b.dim for b in blocks)
        c = conductor(chi)

        def eps(s):
            return complex(det) ** c * complex(epsilon_factor(chi, s)) ** dim

        return GammaFactor(L, RationalFunctionInQs(1, 1, q), eps)
    L = blocks_L_factor(blocks, q, y)
    L_dual = blocks_L_factor(dual, q, _inv(y))

    def eps(s):
        x = complex(q) ** (-complex(s))
        out = 1 + 0j
        for b in blocks:
            if b.ramified:
                raise UnsupportedCase("epsilon factor of a ramified block is not implemented")
            for j in range(1, b.k):
                out *= -complex(b.c) * q ** j * complex(y) * x
        return out

    return GammaFactor(L, L_dual, eps)


# ---------------------------------------------------------------------------
# modified Euler factor at p


class FormalRatio:
    """numerator(y) / denominator(y), Laurent polynomials in the twist value y."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        self.num = num if isinstance(num, LaurentPoly) else LaurentPoly.constant(num)
        self.den = den if isinstance(den, LaurentPoly) else LaurentPoly.constant(den)

    def __mul__(self, other: "FormalRatio") -> "FormalRatio":
        return FormalRatio(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "FormalRatio") -> "FormalRatio":
        return FormalRatio(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def substitute(self, y):
        """Exact value at y; common zeros of numerator and denominator cancel."""
        num, den = self.num, self.den
        while True:
            a, b = num.substitute(y), den.substitute(y)
            if not _is_zero_value(b):
                return a / b
            if not _is_zero_value(a):
                raise PoleAtS("the ratio has a pole at this twist value")
            num, den = num.derivative(), den.derivative()

    def evaluate(self, y: complex) -> complex:
        return self.num.evaluate(y) / self.den.evaluate(y)

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


def _is_zero_value(v) -> bool:
    if isinstance(v, CyclotomicElement):
        return v.is_zero()
    return v == 0


def _one_minus(c, k: int) -> LaurentPoly:
    """1 - c y^k as a Laurent polynomial in y."""
    return LaurentPoly({0: 1, k: -c}) if k else LaurentPoly.constant(1 - c)


def _formal_gamma(blocks: Sequence[WDBlock], q: int, s: int) -> FormalRatio:
    """gamma(s, rho (x) chi_y) as a function of y, for integral s."""
    X = Fraction(q) ** (-s)
    Xd = Fraction(q) ** (s - 1)  # q^{-(1-s)}
    num = LaurentPoly.constant(1)
    den = LaurentPoly.constant(1)
    for b in blocks:
        den = den * _one_minus(b.dual(q).c * Xd ** b.d, -b.d)
        num = num * _one_minus(b.c * X ** b.d, b.d)
        for j in range(1, b.k):
            num = num * LaurentPoly({1: -b.c * Fraction(q) ** j * X})
    return FormalRatio(num, den)


@dataclass
class ModifiedEulerResult:
    """E_v * L_v(0) at a p-adic place by the gamma-ratio definition.

    For an unramified twist ``formal`` is the identity as a function of
    y = phi(varpi) and ``value`` its value at the actual y; for a ramified
    twist ``value`` is an exact cyclotomic number.
    """

    value: Value
    formal: Optional[FormalRatio]
    explicit: Union[FormalRatio, Value]
    conductor: int
    s: int


def _check_p_data(data: SatakePlaceData):
    for rep in data.components():
        if isinstance(rep, RamifiedPrincipal):
            raise InvalidInput("data is not nearly ordinary at p (no unramified beta)")


def modified_euler_definitional(data: SatakePlaceData, s: int, chi: Optional[FiniteOrderCharacter] = None):
    """gamma(s, chi_{alpha_v} phi) / gamma(s, As^+(pi_v) (x) phi)."""
    _check_p_data(data)
    q = data.q
    blocks = asai_blocks(data)
    top = [WDBlock(data.alpha_v)]
    c = conductor(chi) if chi is not None else 0
    if c == 0:
        return _formal_gamma(top, q, s) / _formal_gamma(blocks, q, s)
    # ramified twist: L-factors are 1, epsilon(rho (x) phi) = det(rho)(varpi)^c eps(phi)^dim
    eps = epsilon_factor(chi, s)
    det_top = data.alpha_v
    det_as = 1
    for b in blocks:
        det_as = det_as * b.det(q)
    dim = sum(b.dim for b in blocks)
    return (det_top ** c * eps) / (det_as ** c * eps ** dim)


def modified_euler_explicit(data: SatakePlaceData, s: int, chi: Optional[FiniteOrderCharacter] = None):
    """Closed-form E_v * L_v(0): product over the non-alpha parameters."""
    _check_p_data(data)
    q = Fraction(data.q)
    c = conductor(chi) if chi is not None else 0
    if data.kind == "split":
        aw, bw = data.w.satake(data.q_w)
        awc, bwc = data.wc.satake(data.q_w)
        if c == 0:
            pars = [awc * bw, aw * bwc, bw * bwc]
            num = LaurentPoly.constant(1)
            den = LaurentPoly.constant(1)
            for x in pars:
                num = num * _one_minus(_inv(x) * q ** (s - 1), -1)
                den = den * _one_minus(x * q ** (-s), 1)
            return FormalRatio(num, den)
        prod = aw * bw * awc * bwc * bw * bwc
    else:
        a, b = data.w.satake(data.q_w)
        if c == 0:
            # the product alpha*beta enters with phi^2 (norm from the quadratic extension)
            num = _one_minus(_inv(a * b) * q ** (2 * (s - 1)), -2) * _one_minus(_inv(b) * q ** (s - 1), -1)
            den = _one_minus(a * b * q ** (-2 * s), 2) * _one_minus(b * q ** (-s), 1)
            return FormalRatio(num, den)
        prod = -a * b * b
    tau = gauss_sum(chi.inverse())
    return q ** (3 * c * s) / (prod ** c * tau ** 3)


def modified_euler_p(data: SatakePlaceData, phi, n: int, alpha: int, check: bool = True) -> ModifiedEulerResult:
    """E_v(As(pi)(phi)) L_v(0, As(pi)(phi)) at s = n - alpha + 1, by both routes."""
    if not 0 <= alpha <= n:
        raise InvalidInput("need 0 <= alpha <= n")
    chi = phi.finite_part if isinstance(phi, HeckeCharacterModel) else phi
    s = n - alpha + 1
    definitional = modified_euler_definitional(data, s, chi)
    explicit = modified_euler_explicit(data, s, chi)
    if check and not _routes_agree(definitional, explicit):
        raise InternalConsistency(
            "gamma-ratio and explicit modified Euler factors disagree", kind_=data.kind, s=s
        )
    c = conductor(chi) if chi is not None else 0
    if c == 0:
        y = chi.uniformizer.to_cyclotomic() if chi is not None else CyclotomicElement.rational(1)
        exact = all(_exact(v) for v in _all_parameters(data))
        value = definitional.substitute(y) if exact else definitional.evaluate(complex(y))
        return ModifiedEulerResult(value, definitional, explicit, 0, s)
    return ModifiedEulerResult(definitional, None, explicit, c, s)


def _routes_agree(a, b, rel: float = 1e-9) -> bool:
    """Exact equality for exact data, a relative tolerance once floats are involved."""
    if isinstance(a, FormalRatio):
        lhs, rhs = a.num * b.den, b.num * a.den
        if all(_exact(v) for v in list(lhs.terms.values()) + list(rhs.terms.values())):
            return lhs == rhs
        keys = set(lhs.terms) | set(rhs.terms)
        scale = max([abs(complex(v)) for v in lhs.terms.values()] + [1e-300])
        return all(
            abs(complex(lhs.terms.get(k, 0)) - complex(rhs.terms.get(k, 0))) <= rel * scale for k in keys
        )
    if _exact(a) and _exact(b):
        return a == b
    return abs(complex(a) - complex(b)) <= rel * max(abs(complex(a)), 1e-300)


def _all_parameters(data: SatakePlaceData) -> List[Value]:
    out = []
    for rep in data.components():
        out.extend(rep.satake(data.q_w))
    return out


def modified_euler_factor_p(data: SatakePlaceData, phi, n: int, alpha: int) -> complex:
    """E_v alone: the gamma ratio divided by L_v(n - alpha + 1, As(pi) (x) phi)."""
    res = modified_euler_p(data, phi, n, alpha)
    chi = phi.finite_part if isinstance(phi, HeckeCharacterModel) else phi
    L = eval_rational_function(asai_L_factor(data, chi), n - alpha + 1)
    return complex(res.value) / L


# ---------------------------------------------------------------------------
# archimedean Gamma factors


def gamma_R(s) -> complex:
    return complex(_gamma_prefactor(s, "R"))


def gamma_C(s) -> complex:
    return complex(_gamma_prefactor(s, "C"))


def _check_pole(z: complex):
    if abs(z.imag) < 1e-14 and z.real <= 0 and abs(z.real - round(z.real)) < 1e-12:
        raise PoleAtS(f"Gamma has a pole at {z.real:g}", multiplicity=1)


def _gamma_prefactor(s, kind: str) -> complex:
    s = complex(s)
    if kind == "R":
        _check_pole(s / 2)
        return cmath.exp(-s / 2 * math.log(math.pi) + special.loggamma(s / 2))
    _check_pole(s)
    return 2 * cmath.exp(-s * math.log(2 * math.pi) + special.loggamma(s))


def log_gamma_R(s) -> complex:
    s = complex(s)
    _check_pole(s / 2)
    return -s / 2 * math.log(math.pi) + special.loggamma(s / 2)


def log_gamma_C(s) -> complex:
    s = complex(s)
    _check_pole(s)
    return math.log(2) - s * math.log(2 * math.pi) + special.loggamma(s)


@dataclass
class GammaProduct:
    """prefactor * 2^{two_power * s} * prod Gamma_kind(s + shift)^exponent."""

    factors: List[Tuple[str, Fraction, int]] = field(default_factory=list)
    prefactor: complex = 1
    two_power: Fraction = Fraction(0)

    def __call__(self, s) -> complex:
        s = complex(s)
        log = self.two_power * s * math.log(2) if self.two_power else 0j
        for kind, shift, e in self.factors:
            z = s + float(shift)
            log += e * (log_gamma_R(z) if kind == "R" else log_gamma_C(z))
        return complex(self.prefactor) * cmath.exp(log)

    def __mul__(self, other: "GammaProduct") -> "GammaProduct":
        return GammaProduct(self.factors + other.factors, self.prefactor * other.prefactor,
                            self.two_power + other.two_power)

    def poles(self, lo: int = -20, hi: int = 1) -> List[int]:
        """Integer points in [lo, hi] where some factor with positive exponent has a pole."""
        out = []
        for m in range(lo, hi + 1):
            for kind, shift, e in self.factors:
                z = m + shift
                if e > 0 and z.denominator == 1 and (z <= 0 and (kind == "C" or z % 2 == 0)):
                    out.append(m)
                    break
        return out


def _parity_ok(n: int, alpha: int, parity: int) -> bool:
    return parity == (1 if (n - alpha) % 2 == 0 else -1)


def L_infty_pair(n: int, alpha: int, parity: int, places: int = 1) -> Tuple[GammaProduct, int]:
    """(L_inf(s), exponent e with eps_inf = sqrt(-1)^e) for phi(-1) = parity at every place."""
    if not 0 <= alpha <= n:
        raise InvalidInput("need 0 <= alpha <= n")
    if not _parity_ok(n, alpha, parity):
        raise NonCritical("phi(-1) must equal (-1)^{n-alpha}", n=n, alpha=alpha, parity=parity)
    t = places
    if (n - alpha) % 2 == 0:
        factors = [("C", Fraction(2 * n - alpha + 2 * t), 1), ("R", Fraction(n - alpha + 2 * t), 2)]
        eps = (2 * n + 3 * t) + 2 * t
    else:
        factors = [("C", Fraction(2 * n - alpha + 2 * t), 1), ("R", Fraction(n - alpha + t), 2)]
        eps = 2 * n + 3 * t
    return GammaProduct(factors * places if places > 1 else factors), eps % 4


def modified_euler_infty(n: int, alpha: int, parity: int) -> Tuple[complex, complex]:
    """(E_inf, L_inf(0)) at one real place."""
    L, _ = L_infty_pair(n, alpha, parity)
    L0 = L(0)
    i_pow = 1j ** (-(2 * n - alpha + 2) % 4)
    if (n - alpha) % 2 == 0:
        EL = i_pow / (-gamma_R(1 - (n - alpha)) ** 2) * L0
    else:
        EL = i_pow / gamma_R(-(n - alpha)) ** 2 * L0
    return EL / L0, L0


# ---------------------------------------------------------------------------
# eigenvalue constants


@dataclass
class LambdaConstants:
    lambda_w: List[Value]
    lambda_p: Value
    lambda_p0: Value
    valuation: Fraction

    @property
    def nearly_ordinary(self) -> bool:
        return self.valuation == 0


def _beta_valuation(rep: GL2Rep, q_w: int, p: int, beta_valuation: Optional[Fraction]) -> Fraction:
    f = round(math.log(q_w, p))
    if isinstance(rep, Special):
        return Fraction(-f, 2)
    if isinstance(rep, RamifiedPrincipal):
        raise NotNearlyOrdinary("ramified principal series has no unramified beta")
    if beta_valuation is not None:
        return Fraction(beta_valuation)
    b = rep.beta
    if isinstance(b, (int, Fraction)):
        b = Fraction(b)
        v = 0
        for x, sgn in ((b.numerator, 1), (b.denominator, -1)):
            while x and x % p == 0:
                x //= p
                v += sgn
        return Fraction(v)
    if isinstance(b, CyclotomicElement):
        # valuation through the norm: exact when beta is a root of unity times a power of p
        norm = _cyclotomic_norm(b)
        v = 0
        for x, sgn in ((norm.numerator, 1), (norm.denominator, -1)):
            while x and x % p == 0:
                x //= p
                v += sgn
        from .exact_arith import euler_phi
        return Fraction(v, euler_phi(b.order))
    raise NotNearlyOrdinary("beta valuation unknown for a floating-point parameter; pass beta_valuation")


def _cyclotomic_norm(x: CyclotomicElement) -> Fraction:
    out = CyclotomicElement.rational(1)
    for a in range(1, x.order + 1):
        if math.gcd(a, x.order) == 1:
            out = out * x.galois(a)
    return out.to_fraction()


def lambda_constants(places: Sequence[Tuple[GL2Rep, int]], kappa_bracket: int, m: int, p: int,
                     beta_valuations: Optional[Sequence[Optional[Fraction]]] = None) -> LambdaConstants:
    """lambda_w = beta_w q_w^{([kappa]+1)/2}, lambda_p = prod lambda_w, lambda_{p,0} = p^{-m} lambda_p."""
    lam_w = []
    val = Fraction(-m)
    bvals = list(beta_valuations or [None] * len(places))
    for (rep, q_w), bv in zip(places, bvals):
        if isinstance(rep, RamifiedPrincipal):
            raise NotNearlyOrdinary("ramified principal series has no unramified beta")
        beta = rep.satake(q_w)[1]
        lam = beta * _half_power(q_w, kappa_bracket + 1)
        lam_w.append(lam)
        f = round(math.log(q_w, p))
        val += _beta_valuation(rep, q_w, p, bv) + Fraction(f * (kappa_bracket + 1), 2)
    lam_p = 1
    for x in lam_w:
        lam_p = lam_p * x
    lam_p0 = lam_p * Fraction(1, p ** m) if m >= 0 else lam_p * p ** (-m)
    return LambdaConstants(lam_w, lam_p, lam_p0, val)
