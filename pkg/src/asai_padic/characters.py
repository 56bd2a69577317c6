"""Finite-order characters of p-power conductor, Gauss sums, epsilon factors
and p-adic avatars of Hecke characters |.|^w * phi_fin over Q.

The additive character is psi(x) = exp(-2 pi i {x}_p), so psi(a / p^k) is
zeta_{p^k}^{-a}.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import InvalidInput
from .exact_arith import (
    CyclotomicElement,
    PadicContext,
    PadicElement,
    RootOfUnity,
    embed_root_of_unity,
    primitive_root,
)


@lru_cache(maxsize=None)
def discrete_log_table(p: int, r: int) -> Dict[int, int]:
    """u -> k with u = g^k mod p^r, g the fixed generator of (Z/p^r)^x."""
    n = p ** r
    g = primitive_root(n) if r >= 1 else 1
    table = {}
    x = 1
    for k in range(n // p * (p - 1) if r >= 1 else 1):
        table[x] = k
        x = x * g % n
    return table


def unit_group(p: int, r: int) -> List[int]:
    """Residues 1 <= u < p^r prime to p, in increasing order."""
    return [u for u in range(1, p ** r) if u % p] if r else [0]


@dataclass(frozen=True)
class FiniteOrderCharacter:
    """Character of (Z/p^r)^x given by the image of the fixed generator.

    ``uniformizer`` is the value at p, used when the character is read as a
    local character of Q_p^x. ``infinity_signs`` holds phi(-1) at each real
    place and must match the finite part for F = Q.
    """

    p: int
    r: int
    generator_images: Tuple[RootOfUnity, ...] = (RootOfUnity(1),)
    infinity_signs: Tuple[int, ...] = (1,)
    uniformizer: RootOfUnity = RootOfUnity(1)

    def __post_init__(self):
        if self.p < 3 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise InvalidInput("p must be an odd prime")
        if self.r < 0:
            raise InvalidInput("level must be non-negative")
        object.__setattr__(self, "generator_images", tuple(self.generator_images))
        object.__setattr__(self, "infinity_signs", tuple(int(s) for s in self.infinity_signs))
        if len(self.generator_images) != 1:
            raise InvalidInput("(Z/p^r)^x is cyclic; give exactly one generator image")
        if any(s not in (1, -1) for s in self.infinity_signs):
            raise InvalidInput("infinity signs must be +1 or -1")
        exponent = self.p ** max(self.r - 1, 0) * (self.p - 1) if self.r else 1
        if exponent % self.generator_images[0].order:
            raise InvalidInput(
                "generator image order does not divide the group exponent",
                order=self.generator_images[0].order,
                exponent=exponent,
            )
        if self.infinity_signs and self.infinity_signs[0] != self.sign_from_finite():
            raise InvalidInput("infinity sign disagrees with chi(-1)")

    # constructors
    @classmethod
    def trivial(cls, p: int, r: int = 0) -> "FiniteOrderCharacter":
        return cls(p, r)

    @classmethod
    def from_generator(cls, p: int, r: int, order: int, exponent: int = 1,
                       uniformizer: RootOfUnity = RootOfUnity(1)) -> "FiniteOrderCharacter":
        """Character sending the generator to exp(2 pi i exponent/order); sign filled in."""
        img = RootOfUnity(order, exponent)
        tmp = object.__new__(cls)
        object.__setattr__(tmp, "p", p)
        object.__setattr__(tmp, "r", r)
        object.__setattr__(tmp, "generator_images", (img,))
        sign = tmp.sign_from_finite()
        return cls(p, r, (img,), (sign,), uniformizer)

    @classmethod
    def all_characters(cls, p: int, r: int) -> List["FiniteOrderCharacter"]:
        n = p ** max(r - 1, 0) * (p - 1) if r else 1
        return [cls.from_generator(p, r, n, k) for k in range(n)]

    # evaluation
    @property
    def modulus(self) -> int:
        return self.p ** self.r

    @property
    def generator(self) -> int:
        return primitive_root(self.modulus) if self.r else 1

    @property
    def image(self) -> RootOfUnity:
        return self.generator_images[0]

    @property
    def order(self) -> int:
        return self.image.order

    def __call__(self, u: int) -> RootOfUnity:
        if self.r == 0:
            return RootOfUnity(1)
        u %= self.modulus
        if u % self.p == 0:
            raise InvalidInput("character evaluated at a non-unit", value=u)
        return self.image ** discrete_log_table(self.p, self.r)[u]

    def sign_from_finite(self) -> int:
        if self.r == 0:
            return 1
        v = self.image ** discrete_log_table(self.p, self.r)[self.p ** self.r - 1]
        return 1 if v.is_one() else -1

    @property
    def is_even(self) -> bool:
        return self.sign_from_finite() == 1

    def __mul__(self, other: "FiniteOrderCharacter") -> "FiniteOrderCharacter":
        if self.p != other.p:
            raise InvalidInput("characters at different primes")
        r = max(self.r, other.r)
        a, b = self.lift(r), other.lift(r)
        img = a.image * b.image
        signs = tuple(x * y for x, y in zip(a.infinity_signs, b.infinity_signs))
        return FiniteOrderCharacter(self.p, r, (img,), signs, a.uniformizer * b.uniformizer)

    def inverse(self) -> "FiniteOrderCharacter":
        return FiniteOrderCharacter(
            self.p, self.r, (self.image.inverse(),), self.infinity_signs, self.uniformizer.inverse()
        )

    def lift(self, r: int) -> "FiniteOrderCharacter":
        """The same character viewed modulo p^r for r >= self.r."""
        if r < self.r:
            raise InvalidInput("cannot lift to a smaller level")
        if r == self.r:
            return self
        g = primitive_root(self.p ** r)
        img = self(g % self.modulus) if self.r else RootOfUnity(1)
        return FiniteOrderCharacter(self.p, r, (img,), self.infinity_signs, self.uniformizer)

    def primitive(self) -> "FiniteOrderCharacter":
        """The character at its conductor level."""
        c = conductor(self)
        if c == self.r:
            return self
        if c == 0:
            return FiniteOrderCharacter(self.p, 0, (RootOfUnity(1),), self.infinity_signs, self.uniformizer)
        g = primitive_root(self.p ** c)
        # g is a unit mod p^r as well; its value depends only on g mod p^c
        return FiniteOrderCharacter(self.p, c, (self(g),), self.infinity_signs, self.uniformizer)

    def __eq__(self, other):
        if not isinstance(other, FiniteOrderCharacter) or other.p != self.p:
            return NotImplemented
        r = max(self.r, other.r)
        return (self.lift(r).image == other.lift(r).image
                and self.uniformizer == other.uniformizer)

    def __hash__(self):
        prim = self.primitive()
        return hash((self.p, prim.r, prim.image, self.uniformizer))

    # serialization
    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "r": self.r,
            "generator_images": [{"order": z.order, "exponent": z.exponent} for z in self.generator_images],
            "infinity_signs": list(self.infinity_signs),
        }
        if not self.uniformizer.is_one():
            out["uniformizer_value"] = {"order": self.uniformizer.order, "exponent": self.uniformizer.exponent}
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteOrderCharacter":
        try:
            imgs = tuple(RootOfUnity(int(z["order"]), int(z["exponent"])) for z in d["generator_images"])
            u = d.get("uniformizer_value", {"order": 1, "exponent": 0})
            return cls(
                int(d["p"]),
                int(d["r"]),
                imgs,
                tuple(d.get("infinity_signs", ())),
                RootOfUnity(int(u["order"]), int(u["exponent"])),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed character descriptor: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FiniteOrderCharacter":
        return cls.from_dict(json.loads(text))


def conductor(chi: FiniteOrderCharacter) -> int:
    """Smallest c <= r with chi trivial on 1 + p^c Z_p (c = 0: trivial on all units)."""
    if chi.r == 0 or chi.image.is_one():
        return 0
    p, n = chi.p, chi.modulus
    for c in range(1, chi.r + 1):
        step = p ** c
        if all(chi(1 + k * step).is_one() for k in range(n // step)):
            return c
    return chi.r  # pragma: no cover


def _as_exponent(z: RootOfUnity, m: int) -> int:
    return z.exponent * (m // z.order)


def gauss_sum(chi: FiniteOrderCharacter, psi_shift: int = 1) -> CyclotomicElement:
    """tau(chi, psi) = sum_{u mod p^c} chi(u p^{-c}) psi(psi_shift * u p^{-c}).

    c is the conductor of chi; unramified characters give 1. The sum is
    assembled directly in the power basis of Q(zeta_M), M = lcm of the
    value orders and p^c.
    """
    c = conductor(chi)
    if c == 0:
        return CyclotomicElement.rational(1)
    prim = chi.primitive()
    pc = chi.p ** c
    m = math.lcm(pc, prim.order, chi.uniformizer.order)
    coeffs = [0] * m
    shift_u = _as_exponent(chi.uniformizer, m) * (-c)
    for u in unit_group(chi.p, c):
        e = _as_exponent(prim(u), m) + shift_u - psi_shift * u * (m // pc)
        coeffs[e % m] += 1
    return CyclotomicElement(m, coeffs)


def epsilon_factor(chi: FiniteOrderCharacter, s) -> Union[CyclotomicElement, complex]:
    """epsilon(s, chi, psi) = q^{-s c} tau(chi^{-1}, psi).

    Exact (cyclotomic) when s is an integer, complex otherwise.
    """
    c = conductor(chi)
    if c == 0:
        return CyclotomicElement.rational(1) if isinstance(s, int) else 1 + 0j
    tau = gauss_sum(chi.inverse())
    if isinstance(s, int):
        return tau * Fraction(chi.p) ** (-s * c)
    return complex(tau) * complex(chi.p) ** (-complex(s) * c)


# ---------------------------------------------------------------------------
# Hecke characters and their p-adic avatars


@dataclass(frozen=True)
class IdeleClass:
    """Representative x = (sign at infinity, p^valuation * unit at p, 1 elsewhere)."""

    unit: int
    valuation: int = 0
    sign: int = 1


@dataclass(frozen=True)
class HeckeCharacterModel:
    """phi = |.|^w * phi_fin with w the infinity exponent at each real place."""

    finite_part: FiniteOrderCharacter
    infinity_exponent: Tuple[int, ...] = (0,)

    def __post_init__(self):
        object.__setattr__(self, "infinity_exponent", tuple(int(w) for w in self.infinity_exponent))
        if len(self.infinity_exponent) != len(self.finite_part.infinity_signs):
            raise InvalidInput("one infinity exponent per real place is required")

    @property
    def p(self) -> int:
        return self.finite_part.p

    def to_dict(self) -> dict:
        return {"finite_part": self.finite_part.to_dict(), "infinity_exponent": list(self.infinity_exponent)}

    @classmethod
    def from_dict(cls, d: dict) -> "HeckeCharacterModel":
        return cls(FiniteOrderCharacter.from_dict(d["finite_part"]), tuple(d.get("infinity_exponent", (0,))))


def padic_avatar_eval(phi: HeckeCharacterModel, x: Union[IdeleClass, int],
                      ctx: Optional[PadicContext] = None) -> PadicElement:
    """x_p^w * i_p(x_inf^{-w} phi(x)).

    On the representative (s, p^k u) the powers of p cancel against
    |x|^w, leaving u^w * i_p(s^w phi_inf(s) phi_fin(u) phi(p)^k).
    """
    if isinstance(x, int):
        x = IdeleClass(x)
    chi = phi.finite_part
    if ctx is None:
        ctx = PadicContext(chi.p)
    if ctx.p != chi.p:
        raise InvalidInput("context prime differs from the character's prime")
    if x.unit % chi.p == 0:
        raise InvalidInput("unit part must be prime to p", unit=x.unit)
    if x.sign not in (1, -1):
        raise InvalidInput("sign at infinity must be +1 or -1")
    w = phi.infinity_exponent[0]
    root = chi(x.unit) * chi.uniformizer ** x.valuation
    if x.sign == -1:
        root = root * RootOfUnity(2, w + (0 if chi.infinity_signs[0] == 1 else 1))
    unit = PadicElement.from_value(ctx, x.unit) ** w
    return unit * embed_root_of_unity(root, "padic", ctx)


def criticality_check(phi: HeckeCharacterModel, n: Union[int, Sequence[int]],
                      alpha: Union[int, Sequence[int]]) -> bool:
    """True iff (-1)^{n - alpha} phi(-1_sigma) = 1 at every real place."""
    signs = phi.finite_part.infinity_signs
    ns = [n] * len(signs) if isinstance(n, int) else list(n)
    als = [alpha] * len(signs) if isinstance(alpha, int) else list(alpha)
    if not (len(ns) == len(als) == len(signs)):
        raise InvalidInput("per-place data lengths differ")
    return all((-1) ** ((k - a) % 2) * s == 1 for k, a, s in zip(ns, als, signs))
