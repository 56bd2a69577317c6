"""Local zeta integrals of the Asai Rankin-Selberg integral, place by place.

Every finite-place integral is returned with two values: a closed form in
terms of L- and gamma-factors, and an oracle that sums the Whittaker model
directly.  The archimedean integral is likewise assembled two ways.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import mpmath
from scipy import integrate, special

from .characters import FiniteOrderCharacter, conductor, epsilon_factor, unit_group
from .errors import (
    IncreaseM,
    IndeterminateValue,
    InvalidInput,
    NonCritical,
    QuadratureFailure,
    UnsupportedCase,
)
from .exact_arith import binom, eval_rational_function
from .local_factors import (
    RamifiedPrincipal,
    SatakePlaceData,
    Special,
    UnramifiedPrincipal,
    asai_blocks,
    asai_L_factor,
    blocks_gamma_factor,
    gamma_C,
    modified_euler_infty,
)
from .poly_weights import c_constant


@dataclass(frozen=True)
class SpecialFunctionConfig:
    epsabs: float = 1e-13
    epsrel: float = 1e-12
    limit: int = 400


DEFAULT = SpecialFunctionConfig()


@dataclass
class LocalIntegralResult:
    value: complex
    route: str
    oracle: Optional[complex] = None
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def rel_error(self) -> float:
        if self.oracle is None:
            return 0.0
        scale = max(abs(self.value), abs(self.oracle), 1e-300)
        return abs(self.value - self.oracle) / scale


# ---------------------------------------------------------------------------
# K-Bessel


def _quad(f, a, b, cfg: SpecialFunctionConfig, what: str) -> float:
    val, err, info = integrate.quad(f, a, b, epsabs=cfg.epsabs, epsrel=cfg.epsrel,
                                    limit=cfg.limit, full_output=True)[:3]
    if err > max(cfg.epsabs, cfg.epsrel * abs(val)) * 1e3:
        raise QuadratureFailure(f"{what}: quadrature did not converge", estimate=val, error=err,
                                evaluations=info.get("neval"))
    return val


def kbessel(nu: float, x: float, cfg: SpecialFunctionConfig = DEFAULT) -> float:
    """K_nu(x) = (1/2) int_0^inf exp(-(x/2)(t + 1/t)) t^{nu-1} dt.

    Substituting t = e^u and folding u -> -u gives int_0^inf exp(-x cosh u) cosh(nu u) du;
    the range is cut where the integrand drops below e^{-745} of its size at 0.
    """
    if x <= 0:
        raise InvalidInput("K-Bessel needs x > 0", x=x)
    nu = abs(nu)
    # x (cosh U - 1) - nu U >= 745
    U = 1.0
    while x * (math.cosh(U) - 1) - nu * U < 745:
        U *= 1.5

    def f(u):
        return math.exp(-x * (math.cosh(u) - 1)) * math.cosh(nu * u)

    return math.exp(-x) * _quad(f, 0.0, U, cfg, f"K_{nu}({x})")


def kbessel_mellin(nu: float, mu: float, s: complex) -> complex:
    """int_0^inf K_nu(mu a) a^s da/a = 2^{s-2} mu^{-s} Gamma((s+nu)/2) Gamma((s-nu)/2)."""
    s = complex(s)
    if (s + nu).real <= 0 or (s - nu).real <= 0:
        raise InvalidInput("need Re(s +- nu) > 0", s=str(s), nu=nu)
    if mu <= 0:
        raise InvalidInput("need mu > 0")
    return cmath.exp((s - 2) * math.log(2) - s * math.log(mu)
                     + special.loggamma((s + nu) / 2) + special.loggamma((s - nu) / 2))


def kbessel_mellin_quadrature(nu: float, mu: float, s: float,
                              cfg: SpecialFunctionConfig = SpecialFunctionConfig(1e-14, 1e-11)) -> float:
    """The Mellin integral itself, by nested quadrature of kbessel."""
    if s - abs(nu) <= 0:
        raise InvalidInput("need Re(s +- nu) > 0")
    # K_nu(y) < 3 e^{-y} sqrt(pi / 2y) for y >= 1; cut where that is tiny relative to the bulk
    A = max(60.0, 2.0 * (s + abs(nu) + 40)) / mu

    def f(a):
        return kbessel(nu, mu * a) * a ** (s - 1)

    pts = [p / mu for p in (0.5, 2.0, 8.0) if p / mu < A]
    val, err = integrate.quad(f, 0.0, A, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit,
                              points=pts)
    return val


# ---------------------------------------------------------------------------
# archimedean integrals


def k_alpha(n: int, alpha: int) -> int:
    return 2 * (n - alpha) + 2


def arch_t_integral(s: complex, n: int, alpha: int) -> complex:
    """int_{R_+} t^{2s} Phi_inf(0, t) d^x t = (-1)^{n-a+1} 2^{s-n+a-3} Gamma_C(s+n-a+1)."""
    s = complex(s)
    if (s + n - alpha + 1).real <= 0:
        raise InvalidInput("need Re(s + n - alpha + 1) > 0")
    sign = -1 if (n - alpha + 1) % 2 else 1
    return sign * 2 ** (s - n + alpha - 3) * gamma_C(s + n - alpha + 1)


def arch_t_integral_quadrature(s: float, n: int, alpha: int) -> complex:
    """Same integral by quadrature of 2^{-k} (it)^k e^{-pi t^2} t^{2s} dt / t."""
    k = k_alpha(n, alpha)
    val = _quad(lambda t: t ** (2 * s + k - 1) * math.exp(-math.pi * t * t), 0.0, math.inf,
                DEFAULT, "t-integral")
    return 2.0 ** (-k) * (1j ** k) * val


def _gamma_pair(s: float, n: int, i: int) -> float:
    return special.gamma((s + n + 1 + i) / 2) * special.gamma((s + n + 1 - i) / 2)


def ghate_identity(n: int, alpha: int, s: float, dps: int = 40) -> Tuple[float, float]:
    """Both sides of the binomial-gamma identity behind the archimedean integral.

    The left side is an alternating sum with heavy cancellation, so both sides
    are evaluated in mpmath at ``dps`` digits and rounded at the end.
    """
    if not 0 <= alpha <= n:
        raise InvalidInput("need 0 <= alpha <= n")
    if s <= 0:
        raise IndeterminateValue("s must be positive", s=s)
    with mpmath.workdps(dps):
        S = mpmath.mpf(s)
        lhs = mpmath.mpf(0)
        for i in range(-n - 1, n + 2):
            if (i - alpha) % 2:
                continue
            c = c_constant(n, alpha, i, check=False).value
            lhs += (mpmath.mpf(c.numerator) / c.denominator * binom(2 * n + 2, n + 1 - i)
                    * mpmath.gamma((S + n + 1 + i) / 2) * mpmath.gamma((S + n + 1 - i) / 2))
        lhs *= mpmath.mpf((-1) ** n) / 2
        rhs = _ghate_rhs(n, alpha, S)
        return float(lhs), float(rhs)


def _ghate_rhs(n: int, alpha: int, S):
    return ((-1) ** alpha * mpmath.sqrt(mpmath.pi) * binom(n, alpha) ** 2 / mpmath.mpf(2) ** (S - n + alpha - 1)
               * mpmath.gamma((S + n - alpha + 1) / 2) * mpmath.rgamma((S - n + alpha) / 2)
            * mpmath.gamma(S) * mpmath.gamma(S + n + 1) * mpmath.rgamma(S + n - alpha + 1))


def ghate_residual(n: int, alpha: int, s: float, dps: int = 40) -> float:
    """|lhs - rhs| / max(|rhs|, largest summand of lhs).

    At points where the right side vanishes (1/Gamma at a pole) a plain
    relative error is undefined; the summand scale measures the cancellation.
    """
    if not 0 <= alpha <= n:
        raise InvalidInput("need 0 <= alpha <= n")
    with mpmath.workdps(dps):
        S = mpmath.mpf(s)
        terms = []
        for i in range(-n - 1, n + 2):
            if (i - alpha) % 2:
                continue
            c = c_constant(n, alpha, i, check=False).value
            terms.append(mpmath.mpf(c.numerator) / c.denominator * binom(2 * n + 2, n + 1 - i)
                         * mpmath.gamma((S + n + 1 + i) / 2) * mpmath.gamma((S + n + 1 - i) / 2) / 2)
        lhs = mpmath.fsum(terms) * (-1) ** n
        rhs = _ghate_rhs(n, alpha, S)
        scale = max([abs(rhs)] + [abs(t) for t in terms])
        return float(abs(lhs - rhs) / scale)


def arch_a_integral(s: float, n: int, alpha: int, i: int, D: int) -> float:
    """Closed form of int W^i(d a(a)) phi(a) |a|^s d^x a / |a| with phi(-1) = (-1)^{n-alpha}.

    The Whittaker weight is k = n + 2, so (-1)^{k-1} = (-1)^{n+1}.
    """
    parity = (1 + (-1) ** ((alpha - i) % 2)) / 2
    if parity == 0:
        return 0.0
    sign = (-1) ** (n + 1)
    return (sign * D ** (-(s - 1) / 2) * binom(2 * n + 2, n - i + 1) * parity
            * 4 * (2 * math.pi) ** (-(s + n + 1)) * _gamma_pair(s, n, i))


def arch_a_integral_mellin(s: float, n: int, alpha: int, i: int, D: int) -> float:
    """The same integral from the K-Bessel Whittaker function and the Mellin formula."""
    parity = 1 + (-1) ** ((alpha - i) % 2)
    if parity == 0:
        return 0.0
    sign = (-1) ** (n + 1)
    mel = kbessel_mellin(i, 4 * math.pi * math.sqrt(D), s + n + 1).real
    return 8 * sign * D ** (n / 2 + 1) * binom(2 * n + 2, n - i + 1) * parity * mel


def c_infty(n: int, alpha: int, D: int, r_F: int = 1) -> complex:
    """(-1)^n sqrt(-1)^alpha 2^{2 r_F} D^{-(n-alpha)/2} binom(n, alpha)^2 at one real place."""
    return (-1) ** n * (1j ** alpha) * 2 ** (2 * r_F) * D ** (-(n - alpha) / 2) * binom(n, alpha) ** 2


@dataclass(frozen=True)
class ArchIntegral:
    summation: complex
    product: complex

    @property
    def rel_error(self) -> float:
        return abs(self.summation - self.product) / max(abs(self.product), 1e-300)


def arch_zeta_integral(n: int, alpha: int, D: int, parity: int, r_F: int = 1,
                       use_mellin: bool = False) -> ArchIntegral:
    """I_inf(n - alpha + 1) by the weighted sum over i and by c_inf E_inf L_inf(0)."""
    if parity != (1 if (n - alpha) % 2 == 0 else -1):
        raise NonCritical("phi(-1) must equal (-1)^{n-alpha}", n=n, alpha=alpha, parity=parity)
    s = n - alpha + 1
    a_int = arch_a_integral_mellin if use_mellin else arch_a_integral
    total = 0j
    for i in range(-n - 1, n + 2):
        val = a_int(s, n, alpha, i, D)
        if val:
            total += complex(c_constant(n, alpha, i, check=False)) * val
    summation = 2 ** (2 * r_F) * arch_t_integral(s, n, alpha) * total
    E, L0 = modified_euler_infty(n, alpha, parity)
    product = c_infty(n, alpha, D, r_F) * E * L0
    return ArchIntegral(complex(summation), complex(product))


# ---------------------------------------------------------------------------
# unramified Whittaker values


def _complete_h(a: complex, b: complex, m: int) -> complex:
    """(a^{m+1} - b^{m+1}) / (a - b), with the limit (m+1) a^m when a = b."""
    if abs(a - b) < 1e-12 * max(1.0, abs(a)):
        return (m + 1) * a ** m
    return (a ** (m + 1) - b ** (m + 1)) / (a - b)


def whittaker_value(rep, q_w: int, m: int) -> complex:
    """W(diag(varpi^m, 1)) for the normalized newform of a GL_2 component."""
    if m < 0:
        return 0j
    if isinstance(rep, UnramifiedPrincipal):
        a, b = (complex(x) for x in rep.satake(q_w))
        return q_w ** (-m / 2) * _complete_h(a, b, m)
    if isinstance(rep, Special):
        return (rep.eta / q_w) ** m
    if isinstance(rep, RamifiedPrincipal):
        return q_w ** (-m / 2) * complex(rep.alpha) ** m
    raise InvalidInput(f"unknown representation {rep!r}")


def _restricted_whittaker(data: SatakePlaceData, m: int) -> complex:
    out = 1 + 0j
    for rep in data.components():
        out *= whittaker_value(rep, data.q_w, m)
    return out


def _twist_at(chi, q) -> complex:
    """Value at the uniformizer of an unramified local twist (None means trivial)."""
    if chi is None:
        return 1 + 0j
    if isinstance(chi, FiniteOrderCharacter):
        if conductor(chi) > 0:
            raise UnsupportedCase("twist must be unramified at this place")
        return complex(chi.uniformizer)
    return complex(chi)


def _whittaker_series(data: SatakePlaceData, X: complex, M: int) -> Tuple[complex, float]:
    """sum_{m=0}^M W(a(varpi^m)) q^m X^m and a bound for the dropped tail."""
    q = data.q
    total = 0j
    last = []
    for m in range(M + 1):
        term = _restricted_whittaker(data, m) * q ** m * X ** m
        total += term
        last.append(abs(term))
    tail = max(last[-3:]) * 4 if len(last) >= 3 else math.inf
    return total, tail


def unramified_local_integral(data: SatakePlaceData, chi, s: complex, M: int = 60,
                              tol: float = 1e-13) -> LocalIntegralResult:
    """I_v(s) at a place where pi, psi and the twist are unramified."""
    for rep in data.components():
        if not isinstance(rep, UnramifiedPrincipal):
            raise UnsupportedCase("unramified integral needs unramified principal series")
    y = _twist_at(chi, data.q)
    X = y * complex(data.q) ** (-complex(s))
    series, tail = _whittaker_series(data, X, M)
    omega = complex(data.central_value)
    t_factor = 1 / (1 - omega * y * y * complex(data.q) ** (-2 * complex(s)))
    oracle = series * t_factor
    if tail > tol * abs(oracle):
        raise IncreaseM("Whittaker series tail too large", M=M, tail=tail)
    closed = eval_rational_function(asai_L_factor(data, y), s)
    return LocalIntegralResult(closed, "closed-form", oracle, {"M": M, "tail": tail})


def _index_K0(q: int) -> int:
    return q + 1


def tame_correction(data: SatakePlaceData, y: complex, s: complex) -> complex:
    """The factor multiplying L(s, As (x) phi) in the tame integral."""
    X = y * complex(data.q) ** (-complex(s))
    comps = data.components()
    if data.kind == "split":
        w, wc = comps
        if all(isinstance(r, UnramifiedPrincipal) for r in comps):
            raise UnsupportedCase("both components unramified: not a tame place")
        if isinstance(w, Special) and isinstance(wc, Special):
            return 1 - w.eta * wc.eta * X
        if isinstance(w, Special) or isinstance(wc, Special):
            return 1 + 0j
        # both principal: nu_w nu_wc unramified exactly when the labels cancel
        if isinstance(w, RamifiedPrincipal) and isinstance(wc, RamifiedPrincipal) and w.label + wc.label == 0:
            return 1 - complex(w.ramified_value) * complex(wc.ramified_value) * X
        return 1 + 0j
    rep = comps[0]
    if isinstance(rep, UnramifiedPrincipal):
        raise UnsupportedCase("unramified inert component: not a tame place")
    if isinstance(rep, Special):
        # tau(varpi) = -1 for the unramified quadratic extension
        return 1 + rep.eta * X
    return 1 + 0j


def tame_local_integral(data: SatakePlaceData, chi, s: complex, M: int = 80) -> LocalIntegralResult:
    """(1 / [GL_2(O) : K_0(varpi)]) I~_v(s), with I~_v = L(s, As (x) phi) * correction."""
    y = _twist_at(chi, data.q)
    X = y * complex(data.q) ** (-complex(s))
    series, tail = _whittaker_series(data, X, M)
    L = eval_rational_function(asai_L_factor(data, y), s)
    idx = _index_K0(data.q)
    closed = L * tame_correction(data, y, s) / idx
    return LocalIntegralResult(closed, "closed-form", series / idx, {"index": idx, "tail": tail})


def check_auxiliary(q: int, p: int) -> None:
    if q % p == 0:
        raise InvalidInput("auxiliary prime must not lie over p")
    if (q * q - 1) % p == 0:
        raise InvalidInput("q^2 = 1 mod p: not an auxiliary prime", q=q, p=p)


def auxiliary_local_integral(q: int, p: int, data: SatakePlaceData, chi, s: complex,
                             M: int = 80) -> LocalIntegralResult:
    """q / [GL_2(O) : K_0(varpi)] * L(s, As (x) phi) / L(2s, omega phi^2)."""
    check_auxiliary(q, p)
    if data.q != q:
        raise InvalidInput("place data is for a different prime")
    for rep in data.components():
        if not isinstance(rep, UnramifiedPrincipal):
            raise InvalidInput("pi must be unramified at the auxiliary prime")
    y = _twist_at(chi, q)
    s = complex(s)
    omega = complex(data.central_value)
    L2 = 1 / (1 - omega * y * y * q ** (-2 * s))
    L = eval_rational_function(asai_L_factor(data, y), s)
    idx = _index_K0(q)
    closed = q / idx * L / L2
    series, tail = _whittaker_series(data, y * q ** (-s), M)
    zeta_ratio = (1 - 1 / q) / (1 - q ** -2.0)
    removable = q * (1 - omega * y * y * q ** (-2 * s))
    return LocalIntegralResult(closed, "closed-form", zeta_ratio * series,
                               {"index": idx, "removable_factor": removable})


# ---------------------------------------------------------------------------
# p-adic places


def _unit_average(f, p: int, K: int) -> complex:
    """int_{O^x} f(u) d^x u with vol(O^x) = 1, f a function of u mod p^K."""
    units = unit_group(p, K) if K else [1]
    return sum(f(u) for u in units) / len(units)


def _psi_p(a_num: int, k: int, p: int) -> complex:
    """psi(a_num / p^k) = exp(-2 pi i a_num / p^k)."""
    return cmath.exp(-2j * math.pi * (a_num % p ** k) / p ** k) if k > 0 else 1 + 0j


def index_K(q: int, r: int) -> float:
    """[GL_2(O) : K(p^r)] = q^{4r} / (zeta(1) zeta(2))."""
    return q ** (4 * r) * (1 - 1 / q) * (1 - q ** -2.0)


def _phi_unit(phi: FiniteOrderCharacter, u: int) -> complex:
    return complex(phi(u)) if phi.r else 1 + 0j


def gamma_chi_alpha_phi(alpha_v: complex, phi: FiniteOrderCharacter, s: complex) -> complex:
    """gamma(s, chi_alpha phi, psi) for chi_alpha unramified with chi_alpha(p) = alpha_v."""
    q = phi.p
    c = conductor(phi)
    if c == 0:
        y = complex(alpha_v) * complex(phi.uniformizer)
        return (1 - y * q ** (-complex(s))) / (1 - 1 / y * q ** (-(1 - complex(s))))
    return complex(alpha_v) ** c * complex(epsilon_factor(phi, s))


def gamma_RS(data: SatakePlaceData, phi: FiniteOrderCharacter, s: complex, xi_sq: int,
             lambda_EF: complex = 1, omega_xi: complex = 1, xi_sq_abs: float = 1.0) -> Tuple[complex, complex]:
    """(omega(xi) phi(xi^2) |xi^2|^{s-1/2} lambda^{-1} gamma, phi(xi^2) lambda^{-1} gamma)."""
    g = blocks_gamma_factor(asai_blocks(data), data.q, phi if conductor(phi) else complex(phi.uniformizer))(s)
    phx = _phi_unit(phi, xi_sq)
    full = complex(omega_xi) * phx * xi_sq_abs ** (complex(s) - 0.5) / complex(lambda_EF) * g
    short = phx / complex(lambda_EF) * g
    return full, short


def p_local_closed(data: SatakePlaceData, phi: FiniteOrderCharacter, s: complex, r: int,
                   xi_sq: int, lambda_EF: complex = 1) -> complex:
    _, grs = gamma_RS(data, phi, s, xi_sq, lambda_EF)
    return gamma_chi_alpha_phi(complex(data.alpha_v), phi, s) / (index_K(data.q, r) * grs)


def p_local_chain(data: SatakePlaceData, phi: FiniteOrderCharacter, s: float, r: int,
                  xi_sq: int, lambda_EF: complex = 1) -> complex:
    """The functional-equation reduction summed term by term.

    I(s) = (beta omega(p) q^{3-2s})^{-r} gamma_RS^{-1} (zeta(2)/zeta(1)) q^{-r} T_a T_t with
      T_a = int psi(a) W(a(a p^r)) omega^{-1} phi^{-1}(a) |a|^{1-s} d^x a / |a|,
      T_t = int_{p^{-r}(1 + p^r O)} omega^{-1} phi^{-2} |.|^{2-2s}(t) d^x t,
    and W(a(x)) = chi_beta(x) |x|_E^{1/2} 1_O(x) for the p-stabilized vector.
    """
    q = data.q
    beta = complex(data.beta_v)
    omega = complex(data.central_value)
    y = complex(phi.uniformizer)
    K = max(r, phi.r, 1)
    c = conductor(phi)
    if c > r:
        raise InvalidInput("conductor of phi exceeds p^r")
    s = float(s)

    def phi_inv(u):
        return 1 / _phi_unit(phi, u)

    # a = p^m u, m >= -r; |a|_E^{1/2} = |a|_F for a in F, and 1/|a| cancels it
    T_a = 0j
    for m in range(-r, 0):
        unit = _unit_average(lambda u: _psi_p(u, -m, q) * phi_inv(u), q, K)
        T_a += unit * beta ** (m + r) * q ** (-r) * (y * omega) ** (-m) * q ** (-m * (1 - s))
    # m >= 0: psi = 1, the unit integral is 1 or 0; geometric tail
    unit0 = _unit_average(phi_inv, q, K)
    if abs(unit0) > 1e-14:
        z = beta / (omega * y) * q ** (s - 1)
        T_a += unit0 * beta ** r * q ** (-r) / (1 - z)
    # t = p^{-r} v, v in 1 + p^r O
    ones = [1 + j * q ** r for j in range(q ** (K - r))] if K > r else [1]
    vol = len(ones) / (len(unit_group(q, K)))
    avg = sum(1 / _phi_unit(phi, v) ** 2 for v in ones) / len(ones)
    T_t = (omega * y * y) ** r * q ** (r * (2 - 2 * s)) * vol * avg
    zeta_ratio = (1 - 1 / q) / (1 - q ** -2.0)
    _, grs = gamma_RS(data, phi, s, xi_sq, lambda_EF)
    pref = (beta * omega * q ** (3 - 2 * s)) ** (-r)
    return pref / grs * zeta_ratio * q ** (-r) * T_a * T_t


def p_local_integral(data: SatakePlaceData, phi: FiniteOrderCharacter, n: int, alpha: int, r: int,
                     s: Optional[float] = None, xi_sq: int = 1, lambda_EF: complex = 1) -> LocalIntegralResult:
    """I_{r, phi}(s) at p by the closed form and by the proof chain; s defaults to n - alpha + 1."""
    if isinstance(data.w, RamifiedPrincipal) or isinstance(data.wc, RamifiedPrincipal):
        raise InvalidInput("pi must be nearly ordinary at p")
    if conductor(phi) > r:
        raise InvalidInput("conductor of phi must divide p^r")
    if not complex(phi.uniformizer) == 1:
        raise InvalidInput("the local twist must satisfy phi(p) = 1")
    s = n - alpha + 1 if s is None else s
    closed = p_local_closed(data, phi, s, r, xi_sq, lambda_EF)
    chain = p_local_chain(data, phi, s, r, xi_sq, lambda_EF)
    return LocalIntegralResult(closed, "closed-form", chain, {"r": r, "index": index_K(data.q, r)})
