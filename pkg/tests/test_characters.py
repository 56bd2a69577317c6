import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import frozen
from asai_padic.errors import InvalidInput
from asai_padic.exact_arith import CyclotomicElement, PadicContext, RootOfUnity, teichmuller
from asai_padic.characters import (
    FiniteOrderCharacter,
    HeckeCharacterModel,
    IdeleClass,
    conductor,
    criticality_check,
    epsilon_factor,
    gauss_sum,
    padic_avatar_eval,
    unit_group,
)

levels = st.sampled_from([(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (11, 1)])


@st.composite
def characters(draw):
    p, r = draw(levels)
    n = p ** (r - 1) * (p - 1)
    return FiniteOrderCharacter.from_generator(p, r, n, draw(st.integers(0, n - 1)))


def test_gauss_sum_matches_oracle():
    chi = FiniteOrderCharacter.from_generator(5, 1, 4, 1)
    assert abs(complex(gauss_sum(chi)) - complex(*frozen.GAUSS_P5_ORDER4)) < 1e-14


def test_gauss_sum_by_direct_complex_sum():
    chi = FiniteOrderCharacter.from_generator(7, 2, 42, 5)
    c = conductor(chi)
    pc = 7 ** c
    direct = sum(complex(chi(u)) * cmath.exp(-2j * math.pi * u / pc) for u in unit_group(7, c))
    assert abs(complex(gauss_sum(chi)) - direct) < 1e-12


@given(characters())
def test_gauss_sum_absolute_value(chi):
    tau = gauss_sum(chi)
    c = conductor(chi)
    # |tau|^2 = p^c exactly, checked in the cyclotomic field
    assert tau * tau.conjugate() == CyclotomicElement.rational(chi.p ** c)


@given(characters())
def test_gauss_sum_of_inverse(chi):
    if conductor(chi) == 0:
        return
    lhs = gauss_sum(chi) * gauss_sum(chi.inverse())
    assert lhs == CyclotomicElement.rational(chi.sign_from_finite() * chi.p ** conductor(chi))


@given(characters(), characters())
def test_orthogonality(a, b):
    if (a.p, a.r) != (b.p, b.r):
        return
    total = sum(complex(a(u)) * complex(b(u)).conjugate() for u in unit_group(a.p, a.r))
    expected = len(unit_group(a.p, a.r)) if a == b else 0
    assert abs(total - expected) < 1e-9


@given(characters())
def test_character_is_multiplicative(chi):
    m = chi.modulus
    for u in unit_group(chi.p, chi.r)[:12]:
        for v in unit_group(chi.p, chi.r)[:12]:
            assert chi(u * v % m) == chi(u) * chi(v)


def test_conductor_and_primitive():
    chi = FiniteOrderCharacter.from_generator(5, 3, 4, 1)
    assert conductor(chi) == 1
    assert chi.primitive().r == 1
    assert conductor(FiniteOrderCharacter.trivial(5, 2)) == 0
    assert conductor(FiniteOrderCharacter.from_generator(5, 2, 5, 1)) == 2


def test_epsilon_factor_exact_and_complex_agree():
    chi = FiniteOrderCharacter.from_generator(5, 1, 4, 1)
    exact = epsilon_factor(chi, 2)
    approx = epsilon_factor(chi, 2.0)
    assert abs(complex(exact) - approx) < 1e-14
    assert abs(complex(exact) - complex(gauss_sum(chi.inverse())) / 25) < 1e-14


def test_sign_mismatch_rejected():
    with pytest.raises(InvalidInput):
        FiniteOrderCharacter(5, 1, (RootOfUnity(4, 1),), (1,))


def test_order_must_divide_group_exponent():
    with pytest.raises(InvalidInput):
        FiniteOrderCharacter.from_generator(5, 1, 3, 1)


@given(characters())
def test_json_round_trip(chi):
    assert FiniteOrderCharacter.from_json(chi.to_json()) == chi


def test_padic_avatar_is_teichmuller_power():
    chi = FiniteOrderCharacter.from_generator(5, 1, 4, 1)
    phi = HeckeCharacterModel(chi, (0,))
    ctx = PadicContext(5, 20)
    # chi(2) = i and the embedding sends i to the Teichmuller lift of 2
    assert padic_avatar_eval(phi, 2, ctx) == teichmuller(2, 5, 20)
    phi2 = HeckeCharacterModel(FiniteOrderCharacter.trivial(5, 1), (3,))
    assert padic_avatar_eval(phi2, IdeleClass(7), ctx) == ctx.element(343)


def test_padic_avatar_rejects_non_units():
    phi = HeckeCharacterModel(FiniteOrderCharacter.trivial(5, 1), (0,))
    with pytest.raises(InvalidInput):
        padic_avatar_eval(phi, 10)


def test_criticality_parity():
    even = HeckeCharacterModel(FiniteOrderCharacter.trivial(5, 1), (0,))
    odd = HeckeCharacterModel(FiniteOrderCharacter.from_generator(5, 1, 4, 1), (0,))
    assert criticality_check(even, 2, 0) and not criticality_check(even, 2, 1)
    assert criticality_check(odd, 2, 1) and not criticality_check(odd, 2, 2)
