"""Finite-level group rings over O/p^N and the projective systems built from them.

For F = Q the group at level r is (Z/p^r)^x, written by residues. A measure at
level r is a map residue -> p-adic coefficient; level r-1 is recovered by
summing over the fibers of reduction mod p^{r-1}.

Characters are p-adic avatars x -> x^w i_p(chi(x)). Only characters whose
finite part has order dividing p^f - 1 are realizable in the unramified
coefficient rings used here.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .characters import (
    FiniteOrderCharacter,
    HeckeCharacterModel,
    conductor,
    criticality_check,
    padic_avatar_eval,
    unit_group,
)
from .errors import InsufficientLevel, InvalidInput, NotAUnit, NotNearlyOrdinary
from .exact_arith import (
    PadicContext,
    PadicElement,
    RootOfUnity,
    _fp_poly_inverse,
    embed_root_of_unity,
    eval_rational_function,
    primitive_root,
)
from .local_factors import (
    RamifiedPrincipal,
    SatakePlaceData,
    UnramifiedPrincipal,
    asai_L_factor,
    modified_euler_infty,
    modified_euler_p,
)

ORIENTATIONS = ("geometric", "arithmetic")
Scalar = Union[int, Fraction, PadicElement, RootOfUnity]


# ---------------------------------------------------------------------------
# the groups


@dataclass(frozen=True)
class RayClassLevel:
    """(Z/p^r)^x with its projection to level r - 1.

    ``orientation`` fixes how a residue x is read as a Galois element:
    geometric means chi_hat(sigma_x) = chi_hat(x) and eps_cyc(sigma_x) = x,
    arithmetic replaces x by x^{-1} in both.
    """

    p: int
    r: int
    orientation: str = "geometric"

    def __post_init__(self):
        if self.r < 0:
            raise InvalidInput("level must be non-negative")
        if self.orientation not in ORIENTATIONS:
            raise InvalidInput(f"orientation must be one of {ORIENTATIONS}")
        PadicContext(self.p, 1)  # validates p

    @property
    def modulus(self) -> int:
        return self.p ** self.r

    @cached_property
    def elements(self) -> Tuple[int, ...]:
        return tuple(unit_group(self.p, self.r))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generator(self) -> int:
        return primitive_root(self.modulus) if self.r else 0

    def parent(self) -> "RayClassLevel":
        if self.r == 0:
            raise InvalidInput("level 0 has no parent")
        return RayClassLevel(self.p, self.r - 1, self.orientation)

    def child(self) -> "RayClassLevel":
        return RayClassLevel(self.p, self.r + 1, self.orientation)

    def project(self, x: int) -> int:
        """Image of x at level r - 1."""
        if self.r == 0:
            raise InvalidInput("level 0 has no parent")
        return x % self.p ** (self.r - 1) if self.r > 1 else 0

    def reduce(self, x: int) -> int:
        """Residue of an integer prime to p (0 at level 0)."""
        if x % self.p == 0:
            raise InvalidInput("not a unit at p", value=x)
        return x % self.modulus if self.r else 0

    def fiber(self, x: int) -> List[int]:
        """Elements of level r + 1 lying over x."""
        if self.r == 0:
            return list(unit_group(self.p, 1))
        step = self.modulus
        return [x + k * step for k in range(self.p)]

    def mul(self, x: int, y: int) -> int:
        return x * y % self.modulus if self.r else 0

    def inverse(self, x: int) -> int:
        return pow(x, -1, self.modulus) if self.r else 0

    def galois_element(self, value: int) -> int:
        """The residue x with chi_hat(sigma_x) = chi(value) for every finite-order chi."""
        x = self.reduce(value)
        return x if self.orientation == "geometric" or self.r == 0 else self.inverse(x)

    def read(self, x: int) -> int:
        """The residue a character is evaluated at, under the orientation."""
        return x if self.orientation == "geometric" or self.r == 0 else self.inverse(x)

    def cyclotomic(self, x: int, ctx: PadicContext) -> PadicElement:
        """eps_cyc(sigma_x), using the representative in [1, p^r) as the lift."""
        return ctx.element(self.read(x))


# ---------------------------------------------------------------------------
# finite-level group-ring elements


def _as_element(ctx: PadicContext, c: Scalar) -> PadicElement:
    if isinstance(c, RootOfUnity):
        return embed_root_of_unity(c, "padic", ctx)
    return PadicElement.from_value(ctx, c)


class FiniteLevelMeasure:
    """Element sum_x c_x sigma_x of (O/p^N)[(Z/p^r)^x]; immutable."""

    __slots__ = ("level", "ctx", "_coeffs")

    def __init__(self, level: RayClassLevel, ctx: PadicContext, coefficients: Mapping[int, Scalar] = ()):
        if ctx.p != level.p:
            raise InvalidInput("coefficient ring and group have different primes")
        self.level = level
        self.ctx = ctx
        zero = ctx.zero()
        coeffs = {x: zero for x in level.elements}
        for x, c in dict(coefficients).items():
            x = int(x)
            if x not in coeffs:
                raise InvalidInput("coefficient index is not a unit residue at this level", index=x, r=level.r)
            coeffs[x] = _as_element(ctx, c)
        self._coeffs = coeffs

    # constructors
    @classmethod
    def zero(cls, level: RayClassLevel, ctx: PadicContext) -> "FiniteLevelMeasure":
        return cls(level, ctx)

    @classmethod
    def delta(cls, level: RayClassLevel, ctx: PadicContext, x0: int, c: Scalar = 1) -> "FiniteLevelMeasure":
        return cls(level, ctx, {level.reduce(x0) if level.r else 0: c})

    # access
    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def r(self) -> int:
        return self.level.r

    def __getitem__(self, x: int) -> PadicElement:
        return self._coeffs[x]

    def items(self) -> Iterable[Tuple[int, PadicElement]]:
        return self._coeffs.items()

    def support(self) -> List[int]:
        return [x for x, c in self._coeffs.items() if any(c.coeffs)]

    def total_mass(self) -> PadicElement:
        out = self.ctx.zero()
        for c in self._coeffs.values():
            out = out + c
        return out

    def __eq__(self, other):
        if not isinstance(other, FiniteLevelMeasure):
            return NotImplemented
        return self.level == other.level and self.ctx == other.ctx and self._coeffs == other._coeffs

    __hash__ = None

    def __repr__(self):
        return f"FiniteLevelMeasure(p={self.p}, r={self.r}, N={self.ctx.N}, support={len(self.support())})"

    # module structure
    def _check(self, other: "FiniteLevelMeasure"):
        if self.level != other.level or self.ctx != other.ctx:
            raise InvalidInput("measures live at different levels or coefficient rings")

    def __add__(self, other: "FiniteLevelMeasure") -> "FiniteLevelMeasure":
        self._check(other)
        return FiniteLevelMeasure(self.level, self.ctx, {x: c + other[x] for x, c in self.items()})

    def __sub__(self, other: "FiniteLevelMeasure") -> "FiniteLevelMeasure":
        self._check(other)
        return FiniteLevelMeasure(self.level, self.ctx, {x: c - other[x] for x, c in self.items()})

    def scale(self, c: Scalar) -> "FiniteLevelMeasure":
        c = _as_element(self.ctx, c)
        return FiniteLevelMeasure(self.level, self.ctx, {x: c * v for x, v in self.items()})

    def translate(self, g: int) -> "FiniteLevelMeasure":
        """Multiplication by sigma_g."""
        g = self.level.reduce(g) if self.r else 0
        return FiniteLevelMeasure(self.level, self.ctx, {self.level.mul(g, x): v for x, v in self.items()})

    def __mul__(self, other: "FiniteLevelMeasure") -> "FiniteLevelMeasure":
        """Group-ring product (convolution)."""
        self._check(other)
        if self.ctx.f == 1 and self.r > 0:
            return _dense_product(self, other)
        out: Dict[int, PadicElement] = {x: self.ctx.zero() for x in self.level.elements}
        b_support = [(y, other[y]) for y in other.support()]
        for x in self.support():
            a = self[x]
            for y, b in b_support:
                z = self.level.mul(x, y)
                out[z] = out[z] + a * b
        return FiniteLevelMeasure(self.level, self.ctx, out)

    def pushforward(self) -> "FiniteLevelMeasure":
        """Image at level r - 1: fiber sums."""
        parent = self.level.parent()
        out = {x: self.ctx.zero() for x in parent.elements}
        for x, c in self.items():
            y = self.level.project(x)
            out[y] = out[y] + c
        return FiniteLevelMeasure(parent, self.ctx, out)

    def with_coefficients(self, coefficients: Mapping[int, Scalar]) -> "FiniteLevelMeasure":
        return FiniteLevelMeasure(self.level, self.ctx, coefficients)


# Dense products go through the cyclic structure: sigma_{g^i} <-> t^i in
# (Z/p^N)[t]/(t^n - 1), multiplied by packing coefficients into one integer.


@lru_cache(maxsize=None)
def _log_table(p: int, r: int) -> Tuple[Dict[int, int], Tuple[int, ...]]:
    m = p ** r
    g = primitive_root(m)
    n = (p - 1) * p ** (r - 1)
    powers = []
    x = 1
    for _ in range(n):
        powers.append(x)
        x = x * g % m
    return {v: i for i, v in enumerate(powers)}, tuple(powers)


def _to_cyclic(mu: FiniteLevelMeasure) -> List[int]:
    log, powers = _log_table(mu.p, mu.r)
    return [mu[x].coeffs[0] for x in powers]


def _from_cyclic(level: RayClassLevel, ctx: PadicContext, vec: Sequence[int]) -> FiniteLevelMeasure:
    _, powers = _log_table(level.p, level.r)
    return FiniteLevelMeasure(level, ctx, {x: int(v) for x, v in zip(powers, vec)})


def _cyclic_mul(a: Sequence[int], b: Sequence[int], mod: int) -> List[int]:
    n = len(a)
    width = 2 * mod.bit_length() + n.bit_length() + 1
    mask = (1 << width) - 1

    def pack(v):
        acc = 0
        for c in reversed(v):
            acc = (acc << width) | (c % mod)
        return acc

    prod = pack(a) * pack(b)
    out = [0] * n
    i = 0
    while prod:
        out[i % n] += prod & mask
        prod >>= width
        i += 1
    return [c % mod for c in out]


def _dense_product(a: FiniteLevelMeasure, b: FiniteLevelMeasure) -> FiniteLevelMeasure:
    vec = _cyclic_mul(_to_cyclic(a), _to_cyclic(b), a.ctx.modulus)
    return _from_cyclic(a.level, a.ctx, vec)


# ---------------------------------------------------------------------------
# projective systems


@dataclass(frozen=True)
class ProjectiveMeasure:
    """Levels r = 1..R, each the pushforward of the next.

    The represented element is p^{-denominator} times the stored one;
    ``symbols`` lists the formal constants (periods, Eisenstein denominators)
    that were normalized to 1.
    """

    levels: Tuple[FiniteLevelMeasure, ...]
    denominator: int = 0
    symbols: Tuple[str, ...] = ()
    meta: Dict[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if not self.levels:
            raise InvalidInput("a projective measure needs at least one level")
        first = self.levels[0]
        for k, mu in enumerate(self.levels):
            if mu.r != first.r + k or mu.ctx != first.ctx or mu.level.orientation != first.level.orientation:
                raise InvalidInput("levels must be consecutive over one coefficient ring")

    @classmethod
    def from_top(cls, top: FiniteLevelMeasure, lowest: int = 1, **kw) -> "ProjectiveMeasure":
        levels = [top]
        while levels[-1].r > lowest:
            levels.append(levels[-1].pushforward())
        return cls(tuple(reversed(levels)), **kw)

    @property
    def p(self) -> int:
        return self.levels[0].p

    @property
    def ctx(self) -> PadicContext:
        return self.levels[0].ctx

    @property
    def N(self) -> int:
        return self.ctx.N

    @property
    def orientation(self) -> str:
        return self.levels[0].level.orientation

    @property
    def depth(self) -> int:
        return self.levels[-1].r

    @property
    def top(self) -> FiniteLevelMeasure:
        return self.levels[-1]

    def level(self, r: int) -> FiniteLevelMeasure:
        k = r - self.levels[0].r
        if not 0 <= k < len(self.levels):
            raise InsufficientLevel(f"level {r} is not available", available=[m.r for m in self.levels])
        return self.levels[k]

    def replace(self, **kw) -> "ProjectiveMeasure":
        args = dict(levels=self.levels, denominator=self.denominator, symbols=self.symbols, meta=dict(self.meta))
        args.update(kw)
        return ProjectiveMeasure(**args)

    # serialization
    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "N": self.N,
            "levels": [
                {"r": mu.r, "coefficients": {str(x): encode_digits(c) for x, c in mu.items()}}
                for mu in self.levels
            ],
        }
        if self.ctx.f != 1:
            out["f"] = self.ctx.f
        if self.orientation != "geometric":
            out["orientation"] = self.orientation
        if self.denominator:
            out["denominator_exponent"] = self.denominator
        if self.symbols:
            out["symbols"] = list(self.symbols)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "ProjectiveMeasure":
        try:
            ctx = PadicContext(int(d["p"]), int(d["N"]), int(d.get("f", 1)))
            orientation = d.get("orientation", "geometric")
            levels = []
            for entry in d["levels"]:
                level = RayClassLevel(ctx.p, int(entry["r"]), orientation)
                coeffs = {int(x): decode_digits(ctx, v) for x, v in entry["coefficients"].items()}
                if set(coeffs) != set(level.elements):
                    raise InvalidInput("a level must list every unit residue", r=level.r)
                levels.append(FiniteLevelMeasure(level, ctx, coeffs))
        except KeyError as exc:
            raise InvalidInput(f"measure file is missing {exc}") from exc
        except (TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"malformed measure file: {exc}") from exc
        return cls(tuple(levels), int(d.get("denominator_exponent", 0)), tuple(d.get("symbols", ())))

    @classmethod
    def from_json(cls, text: str) -> "ProjectiveMeasure":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"measure file is not JSON: {exc}") from exc
        return cls.from_dict(data)


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _int_to_digits(c: int, p: int, N: int) -> str:
    out = []
    for _ in range(N):
        c, d = divmod(c, p)
        out.append(d)
    out.reverse()
    if p <= len(_DIGITS):
        return "".join(_DIGITS[d] for d in out)
    return ".".join(str(d) for d in out)


def _digits_to_int(s: str, p: int, N: int) -> int:
    if not isinstance(s, str):
        raise InvalidInput("p-adic digits must be a string")
    if p <= len(_DIGITS):
        digits = [_DIGITS.index(ch) if ch in _DIGITS else -1 for ch in s.lower()]
    else:
        digits = [int(t) for t in s.split(".")]
    if len(digits) != N or any(not 0 <= d < p for d in digits):
        raise InvalidInput(f"expected {N} base-{p} digits", got=s)
    v = 0
    for d in digits:
        v = v * p + d
    return v


def encode_digits(c: PadicElement) -> Union[str, List[str]]:
    """Base-p digits, most significant first; one string per coordinate when f > 1."""
    strs = [_int_to_digits(x, c.ctx.p, c.ctx.N) for x in c.coeffs]
    return strs[0] if c.ctx.f == 1 else strs


def decode_digits(ctx: PadicContext, v) -> PadicElement:
    strs = [v] if ctx.f == 1 else list(v)
    if len(strs) != ctx.f:
        raise InvalidInput("wrong number of coordinates for this residue degree")
    return PadicElement(ctx, [_digits_to_int(s, ctx.p, ctx.N) for s in strs])


# ---------------------------------------------------------------------------
# distribution property


@dataclass(frozen=True)
class DistributionReport:
    ok: bool
    failure: Optional[Tuple[int, int]] = None  # (r, x): the fiber over x at level r

    def __bool__(self) -> bool:
        return self.ok


def distribution_check(mu: ProjectiveMeasure) -> DistributionReport:
    """Exact fiber-sum compatibility between consecutive levels."""
    for lower, upper in zip(mu.levels, mu.levels[1:]):
        pushed = upper.pushforward()
        for x, c in lower.items():
            if pushed[x] != c:
                return DistributionReport(False, (lower.r, x))
    return DistributionReport(True)


def synth_distribution(seed: int, R: int, p: int, N: int, orientation: str = "geometric") -> ProjectiveMeasure:
    """Random top level R; lower levels by fiber sums."""
    if R < 1:
        raise InvalidInput("depth must be at least 1")
    ctx = PadicContext(p, N)
    rng = random.Random(seed)
    level = RayClassLevel(p, R, orientation)
    top = FiniteLevelMeasure(level, ctx, {x: rng.randrange(ctx.modulus) for x in level.elements})
    return ProjectiveMeasure.from_top(top)


# ---------------------------------------------------------------------------
# normalization of partial zeta integrals


def normalization_constant(r: int, n: int, alpha: int, lambda_p0: Scalar, ctx: PadicContext,
                           omega_p: Scalar = 1, s: int = 0) -> PadicElement:
    """c_{r,alpha,s} lambda_{p,0}^{-r} with c = omega(p)^{-r} p^{2(s+n-alpha)r} over Q."""
    lam = _as_element(ctx, lambda_p0)
    if not lam.is_unit():
        raise NotNearlyOrdinary("lambda_{p,0} is not a p-adic unit")
    om = _as_element(ctx, omega_p)
    if not om.is_unit():
        raise InvalidInput("omega(p) must be a unit")
    e = 2 * (s + n - alpha) * r
    if e < 0:
        raise InvalidInput("negative power of p in the normalization")
    return om ** (-r) * ctx.element(ctx.p ** e) * lam ** (-r)


def normalize_partial_zeta(raw: Union[FiniteLevelMeasure, ProjectiveMeasure], n: int, alpha: int,
                           lambda_p0: Scalar, omega_p: Scalar = 1, s: int = 0,
                           period_symbol: str = "Omega_pi_p"):
    """I -> c_{r,alpha,s} lambda^{-r} I / Omega, level by level; Omega is tracked, not evaluated."""
    if isinstance(raw, FiniteLevelMeasure):
        return raw.scale(normalization_constant(raw.r, n, alpha, lambda_p0, raw.ctx, omega_p, s))
    levels = tuple(
        mu.scale(normalization_constant(mu.r, n, alpha, lambda_p0, mu.ctx, omega_p, s)) for mu in raw.levels
    )
    symbols = raw.symbols + ((period_symbol,) if period_symbol not in raw.symbols else ())
    return raw.replace(levels=levels, symbols=symbols)


# ---------------------------------------------------------------------------
# characters, twists


def _as_avatar(chi) -> HeckeCharacterModel:
    if isinstance(chi, HeckeCharacterModel):
        return chi
    if isinstance(chi, FiniteOrderCharacter):
        return HeckeCharacterModel(chi, (0,) * max(len(chi.infinity_signs), 1))
    raise InvalidInput("expected a FiniteOrderCharacter or HeckeCharacterModel")


def character_table(level: RayClassLevel, ctx: PadicContext, chi) -> Dict[int, PadicElement]:
    """x -> chi_hat(sigma_x) on the level's residues."""
    avatar = _as_avatar(chi)
    if avatar.p != level.p:
        raise InvalidInput("character and group have different primes")
    c = conductor(avatar.finite_part)
    if c > level.r:
        raise InsufficientLevel(f"conductor p^{c} exceeds the level p^{level.r}", conductor=c, level=level.r)
    if level.r == 0:
        return {0: ctx.one()}
    return {x: padic_avatar_eval(avatar, level.read(x), ctx) for x in level.elements}


def evaluate_at_character(mu: Union[FiniteLevelMeasure, ProjectiveMeasure], chi,
                          level: Optional[int] = None) -> PadicElement:
    """sum_x chi_hat(sigma_x) mu(x).

    A projective measure is read at its top level unless ``level`` is given;
    for weight-0 characters every level at or above the conductor gives the
    same value. The result is the stored numerator: divide by
    p^{mu.denominator} for the represented value.
    """
    if isinstance(mu, ProjectiveMeasure):
        if level is None:
            fin = mu.top
            if conductor(_as_avatar(chi).finite_part) > fin.r:
                raise InsufficientLevel("conductor exceeds every available level", depth=mu.depth)
        else:
            fin = mu.level(level)
    else:
        fin = mu
        if level is not None and level != fin.r:
            raise InsufficientLevel("a finite-level measure can only be read at its own level")
    table = character_table(fin.level, fin.ctx, chi)
    out = fin.ctx.zero()
    for x, c in fin.items():
        if any(c.coeffs):
            out = out + table[x] * c
    return out


def tw_p(mu: Union[FiniteLevelMeasure, ProjectiveMeasure], k: int):
    """Coefficient at x multiplied by eps_cyc(sigma_x)^k.

    On a projective measure the top level is twisted and the lower levels are
    recomputed from it, so the result is again projective.
    """
    if isinstance(mu, ProjectiveMeasure):
        top = tw_p(mu.top, k)
        return mu.replace(levels=ProjectiveMeasure.from_top(top, mu.levels[0].r).levels)
    if k == 0:
        return mu
    lvl, ctx = mu.level, mu.ctx
    return mu.with_coefficients({x: c * lvl.cyclotomic(x, ctx) ** k for x, c in mu.items()})


def twist_exponent(n: int, alpha: int, m: int = 0) -> int:
    """[kappa] + alpha + 2m with [kappa] = n + 2m."""
    return (n + 2 * m) + alpha + 2 * m


# ---------------------------------------------------------------------------
# the auxiliary Euler factor


@dataclass(frozen=True)
class AuxiliaryInverse:
    """P = q(1 - omega q^{-2} sigma^2) and U with P U = p^e exactly.

    e = 0 means U is the group-ring inverse. ``blocking_character`` names a
    residue-field character that kills P when it is not a unit.
    """

    P: FiniteLevelMeasure
    U: FiniteLevelMeasure
    e: int
    sigma: int
    blocking_exponent: Optional[int] = None

    @property
    def is_unit(self) -> bool:
        return self.e == 0

    def verify(self) -> bool:
        ident = FiniteLevelMeasure.delta(self.P.level, self.P.ctx, 1, self.P.ctx.p ** self.e)
        return self.P * self.U == ident


def check_aux2(q: int, p: int) -> None:
    if q % p == 0:
        raise InvalidInput("the auxiliary prime must differ from p")
    if (q * q - 1) % p == 0:
        raise NotAUnit("q^2 = 1 mod p: the auxiliary factor is not a unit", q=q, p=p)


def aux_element(q: int, level: RayClassLevel, ctx: PadicContext, sigma: Optional[int] = None,
                omega: Scalar = 1) -> FiniteLevelMeasure:
    sigma = level.galois_element(q) if sigma is None else level.reduce(sigma)
    qe = ctx.element(q)
    om = _as_element(ctx, omega)
    P = FiniteLevelMeasure.delta(level, ctx, 1, qe)
    return P - FiniteLevelMeasure.delta(level, ctx, level.mul(sigma, sigma), om / qe)


def _element_order(x: int, level: RayClassLevel) -> int:
    d, y = 1, x
    while y != 1 % level.modulus:
        y = level.mul(y, x)
        d += 1
    return d


def p_v0_inverse(q: int, r: int, p: int, N: int, sigma: Optional[int] = None, omega: Scalar = 1,
                 orientation: str = "geometric") -> AuxiliaryInverse:
    """Invert P_{v0} in (Z/p^N)[(Z/p^r)^x] by xgcd mod p and Newton lifting.

    Raises NotAUnit for q^2 = 1 mod p and whenever P is not a unit of the
    group ring; use ``p_v0_fractional_inverse`` for the inverse with a p-power
    denominator. ``sigma`` defaults to the Frobenius class of q.
    """
    check_aux2(q, p)
    ctx = PadicContext(p, N)
    level = RayClassLevel(p, r, orientation)
    if r == 0:
        raise InvalidInput("level must be at least 1")
    sigma = level.galois_element(q) if sigma is None else level.reduce(sigma)
    P = aux_element(q, level, ctx, sigma, omega)
    a = _to_cyclic(P)
    n = len(a)
    modpoly = [-1] + [0] * (n - 1) + [1]
    try:
        b = _fp_poly_inverse([c % p for c in a], modpoly, p)
    except NotAUnit as exc:
        blocking = _blocking_exponent(P)
        raise NotAUnit(
            "P_{v0} is not a unit of the group ring: a residue-field character sends it to 0",
            q=q, p=p, r=r, sigma=sigma, teichmuller_power=blocking,
        ) from exc
    mod = ctx.modulus
    prec = 1
    b = [c % mod for c in b]
    while prec < N:
        ab = _cyclic_mul(a, b, mod)
        two_minus = [(-c) % mod for c in ab]
        two_minus[0] = (two_minus[0] + 2) % mod
        b = _cyclic_mul(b, two_minus, mod)
        prec *= 2
    U = _from_cyclic(level, ctx, b)
    return AuxiliaryInverse(P, U, 0, sigma)


def p_v0_fractional_inverse(q: int, r: int, p: int, N: int, sigma: Optional[int] = None,
                            omega: Scalar = 1, orientation: str = "geometric") -> AuxiliaryInverse:
    """Geometric-series inverse: with u = omega q^{-2}, h = sigma^2 of order d,
    P * q^{-1} sum_{i<d} u^i h^i = 1 - u^d = p^e w, w a unit."""
    check_aux2(q, p)
    ctx = PadicContext(p, N)
    level = RayClassLevel(p, r, orientation)
    sigma = level.galois_element(q) if sigma is None else level.reduce(sigma)
    P = aux_element(q, level, ctx, sigma, omega)
    h = level.mul(sigma, sigma)
    d = _element_order(h, level)
    u = _as_element(ctx, omega) / ctx.element(q * q)
    denom = ctx.one() - u ** d
    e = denom.valuation()
    if e >= N:
        raise NotAUnit("1 - u^d vanishes to the working precision", q=q, p=p, r=r)
    w = ctx.element(_unit_part(denom, e))
    coeffs: Dict[int, PadicElement] = {}
    g, ui = 1, ctx.one()
    scale = (ctx.element(q) * w).inverse()
    for _ in range(d):
        coeffs[g] = coeffs.get(g, ctx.zero()) + ui * scale
        g = level.mul(g, h)
        ui = ui * u
    U = FiniteLevelMeasure(level, ctx, coeffs)
    blocking = _blocking_exponent(P) if e else None
    return AuxiliaryInverse(P, U, e, sigma, blocking)


def _unit_part(x: PadicElement, e: int) -> int:
    """w with x = p^e w, w taken mod p^{N} (the top e digits of w are not determined and set to 0)."""
    return x.value // x.ctx.p ** e


def _blocking_exponent(P: FiniteLevelMeasure) -> Optional[int]:
    """Smallest j with omega^j(P) = 0 mod p, omega the Teichmuller character of level 1."""
    p = P.p
    g = primitive_root(p)
    table = {x: pow(g, i, p) for i, x in enumerate(_log_table(p, 1)[1])}
    for j in range(p - 1):
        acc = 0
        for x, c in P.items():
            acc += c.value * pow(table[x % p], j, p)
        if acc % p == 0:
            return j
    return None


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class LpConstants:
    """Inputs of the finite-level assembly.

    ``c_infty`` must be a p-adic unit; ``xi_sq`` is the integer xi^2 (prime to
    p) giving sigma_{xi^2}; ``lambda_EF`` is a fourth root of unity; the
    Eisenstein denominator is a formal symbol with value 1.
    """

    c_infty: Scalar = 1
    xi_sq: int = 1
    lambda_EF: RootOfUnity = RootOfUnity(1)
    denominator_symbol: str = "delta_K(Phi0)"


@dataclass(frozen=True)
class AuxiliaryData:
    q: int
    omega: Scalar = 1
    sigma: Optional[int] = None


def _scalar_constant(constants: LpConstants, ctx: PadicContext) -> PadicElement:
    cinf = _as_element(ctx, constants.c_infty)
    if not cinf.is_unit():
        raise NotAUnit("c_infty must be a p-adic unit")
    lam = embed_root_of_unity(constants.lambda_EF, "padic", ctx)
    return cinf.inverse() * lam.inverse()


def build_Lp(partial: ProjectiveMeasure, constants: LpConstants = LpConstants(), n: int = 0, alpha: int = 0,
             m: int = 0, aux: Optional[AuxiliaryData] = None) -> ProjectiveMeasure:
    """delta c_infty^{-1} sigma_{xi^2} lambda^{-1} sum_x I_x sigma_x, twisted by Tw_p^{[kappa]+alpha+2m},
    then multiplied by P_{v0}^{-1} when an auxiliary prime is given.

    Everything is applied at the top level and pushed down. When P_{v0} is not
    a unit the geometric-series inverse is used and its p-power denominator
    is recorded in the result.
    """
    check = distribution_check(partial)
    if not check:
        raise InvalidInput("partial data fails the distribution property", fiber=check.failure)
    top = partial.top
    ctx, level = top.ctx, top.level
    c = _scalar_constant(constants, ctx)
    xi = level.galois_element(constants.xi_sq)
    mu = top.translate(xi).scale(c)
    k = twist_exponent(n, alpha, m)
    mu = tw_p(mu, k)
    denominator = partial.denominator
    meta = {"twist_exponent": k, "sigma_xi_sq": xi}
    if aux is not None:
        inv = p_v0_fractional_inverse(aux.q, level.r, ctx.p, ctx.N, aux.sigma, aux.omega, level.orientation)
        mu = mu * inv.U
        denominator += inv.e
        meta.update({"aux_q": aux.q, "aux_denominator": inv.e, "aux_sigma": inv.sigma})
    symbols = partial.symbols + tuple(s for s in (constants.denominator_symbol,) if s not in partial.symbols)
    return ProjectiveMeasure.from_top(mu, partial.levels[0].r, denominator=denominator, symbols=symbols, meta=meta)


def lp_explicit_value(partial: ProjectiveMeasure, chi, constants: LpConstants = LpConstants(), n: int = 0,
                      alpha: int = 0, m: int = 0, aux: Optional[AuxiliaryData] = None) -> Tuple[PadicElement, int]:
    """The assembled value at chi written as one finite sum over the top level:

        c sum_y sum_g I_y U_g eps(xi^2 y)^k chi_hat(xi^2 y g),

    returned with its p-power denominator. Independent of the group-ring code path.
    """
    top = partial.top
    ctx, level = top.ctx, top.level
    c = _scalar_constant(constants, ctx)
    k = twist_exponent(n, alpha, m)
    xi = level.galois_element(constants.xi_sq)
    table = character_table(level, ctx, chi)
    if aux is not None:
        inv = p_v0_fractional_inverse(aux.q, level.r, ctx.p, ctx.N, aux.sigma, aux.omega, level.orientation)
        U = [(g, inv.U[g]) for g in inv.U.support()]
        e = inv.e
    else:
        U, e = [(1, ctx.one())], 0
    total = ctx.zero()
    for y, val in top.items():
        if not any(val.coeffs):
            continue
        z = level.mul(xi, y)
        weight = ctx.element(level.read(z)) ** k
        inner = ctx.zero()
        for g, u in U:
            inner = inner + u * table[level.mul(z, g)]
        total = total + val * weight * inner
    return total * c, partial.denominator + e


# ---------------------------------------------------------------------------
# the right-hand side of the interpolation formula


@dataclass
class InterpolationData:
    """Local inputs at one real place of F = Q.

    ``places`` are the finite places v != p, v0 entering the truncated
    L-value; ``tame`` the places dividing the conductor (hypothesis checks
    only); ``aux`` the auxiliary place.
    """

    n: int
    alpha: int
    p_place: SatakePlaceData
    phi: FiniteOrderCharacter
    places: Sequence[SatakePlaceData] = ()
    tame: Sequence[SatakePlaceData] = ()
    aux: Optional[SatakePlaceData] = None
    conjugate_self_dual: bool = False
    r: int = 1
    xi_sq: int = 1
    lambda_EF: complex = 1


@dataclass
class InterpolationResult:
    value: complex
    components: Dict[str, complex]
    aux_factor: Optional[complex]
    violations: List[str]
    p_cancellation_error: Optional[float]
    symbols: Tuple[str, ...] = ("Omega(As(pi))",)


def hypothesis_violations(data: InterpolationData) -> List[str]:
    out = []
    n, alpha, phi = data.n, data.alpha, data.phi
    if not 0 <= alpha <= n:
        out.append("alpha must satisfy 0 <= alpha <= n")
    elif not criticality_check(HeckeCharacterModel(phi, (0,)), n, alpha):
        out.append("not critical: (-1)^{n-alpha} phi(-1) != 1")
    for rep in data.p_place.components():
        if isinstance(rep, RamifiedPrincipal):
            out.append("omega_{pi,p} is ramified or pi is not nearly ordinary at p")
            break
    if data.conjugate_self_dual and alpha == n:
        out.append("pi is conjugate self-dual and alpha = n")
    for v in data.tame:
        reps = v.components()
        if any(isinstance(rep, UnramifiedPrincipal) for rep in reps) and all(
            isinstance(rep, UnramifiedPrincipal) for rep in reps
        ):
            out.append(f"place q={v.q} is listed as tame but pi is unramified there")
            continue
        # conductor exponents are 1 for every modelled representation, so square-freeness holds
        ramified_omega = _omega_ramified(v)
        if not ramified_omega:
            kinds = sorted(type(rep).__name__ for rep in reps)
            if not (v.kind == "split" and kinds == ["Special", "UnramifiedPrincipal"]):
                out.append(
                    f"place q={v.q}: omega unramified requires a split place with one unramified "
                    "principal and one special component"
                )
    if data.aux is not None:
        p = data.phi.p
        if (data.aux.q ** 2 - 1) % p == 0:
            out.append(f"auxiliary prime q={data.aux.q} has q^2 = 1 mod p")
    return out


def _omega_ramified(v: SatakePlaceData) -> bool:
    """omega_{pi,v} ramified: the ramified labels of the components do not cancel."""
    labels = [rep.label for rep in v.components() if isinstance(rep, RamifiedPrincipal)]
    if v.kind == "inert":
        return bool(labels)
    return sum(labels) != 0


def _local_twist(phi: FiniteOrderCharacter, q: int) -> complex:
    return complex(phi(q)) if phi.r else 1 + 0j


def interpolation_rhs(data: InterpolationData, strict: bool = True) -> InterpolationResult:
    """E_inf * (E_p L_p) * prod_{v in S} L_v at s = n - alpha + 1, over the formal period.

    The removable auxiliary factor q(1 - omega phi^2(varpi) q^{-2(n-alpha+1)})
    is reported separately. The p-adic local integral, corrected by its index,
    phi(xi^2) and lambda^{-1}, is compared with E_p L_p as a consistency check.
    """
    from .zeta_integrals import index_K, p_local_closed

    violations = hypothesis_violations(data)
    if violations and strict:
        raise InvalidInput("hypotheses of the interpolation formula fail", violations=violations)
    n, alpha, phi = data.n, data.alpha, data.phi
    s = n - alpha + 1
    parity = phi.infinity_signs[0] if phi.infinity_signs else 1
    E_inf, L_inf = modified_euler_infty(n, alpha, parity)
    Ep = modified_euler_p(data.p_place, phi, n, alpha)
    EpLp = complex(Ep.value)
    comps: Dict[str, complex] = {"E_inf": E_inf, "L_inf(0)": L_inf, "E_p*L_p": EpLp}
    finite = 1 + 0j
    for v in data.places:
        Lv = eval_rational_function(asai_L_factor(v, _local_twist(phi, v.q)), s)
        comps[f"L_{v.q}"] = Lv
        finite *= Lv
    value = E_inf * EpLp * finite
    aux = None
    if data.aux is not None:
        q = data.aux.q
        y = _local_twist(phi, q)
        aux = q * (1 - complex(data.aux.central_value) * y * y * q ** (-2.0 * s))
    err = None
    nearly_ordinary = not any(isinstance(rep, RamifiedPrincipal) for rep in data.p_place.components())
    if nearly_ordinary and phi.uniformizer.is_one() and conductor(phi) <= data.r:
        I_p = p_local_closed(data.p_place, phi, s, data.r, data.xi_sq, data.lambda_EF)
        corrected = I_p * index_K(phi.p, data.r) * _local_twist(phi, data.xi_sq) / complex(data.lambda_EF)
        comps["I_p corrected"] = corrected
        err = abs(corrected - EpLp) / max(abs(EpLp), 1e-300)
    return InterpolationResult(value, comps, aux, violations, err)


__all__ = [
    "RayClassLevel",
    "FiniteLevelMeasure",
    "ProjectiveMeasure",
    "DistributionReport",
    "distribution_check",
    "synth_distribution",
    "normalization_constant",
    "normalize_partial_zeta",
    "character_table",
    "evaluate_at_character",
    "tw_p",
    "twist_exponent",
    "AuxiliaryInverse",
    "check_aux2",
    "aux_element",
    "p_v0_inverse",
    "p_v0_fractional_inverse",
    "LpConstants",
    "AuxiliaryData",
    "build_Lp",
    "lp_explicit_value",
    "InterpolationData",
    "InterpolationResult",
    "hypothesis_violations",
    "interpolation_rhs",
    "encode_digits",
    "decode_digits",
]
