import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import frozen
from asai_padic import _kernels_py, kernels
from asai_padic.characters import FiniteOrderCharacter
from asai_padic.errors import InvalidInput, PoleAtZero
from asai_padic.exact_arith import CyclotomicElement
from asai_padic.schwartz import (
    ArchimedeanClass,
    ConstantTermConfig,
    PhasedCoset,
    UnitCharacter,
    auxiliary_class,
    constant_term,
    constant_term_limit,
    distribution_constant,
    finite_fourier,
    finite_fourier_2d,
    padic_class,
    section_distribution_check,
    section_distribution_sides,
    tame_class,
    unit_average,
    unit_average_at,
    unit_average_rhs,
)

ells = st.sampled_from([3, 5])
rationals = st.builds(lambda a, b, ell: Fraction(a, ell ** b), st.integers(-30, 30), st.integers(0, 2), ells)


@st.composite
def cosets(draw):
    ell = draw(ells)
    t = Fraction(draw(st.integers(-10, 10)), ell ** draw(st.integers(0, 1)))
    a = Fraction(draw(st.integers(-10, 10)), ell ** draw(st.integers(0, 1)))
    return PhasedCoset(ell, t, a, draw(st.integers(-1, 1)))


@given(cosets(), st.integers(-20, 20), st.integers(0, 2))
def test_closed_fourier_matches_direct_sum(f, a, b):
    y = Fraction(a, f.ell ** b)
    assert f.fourier()(y) == finite_fourier(f, y)


@given(cosets(), st.integers(-20, 20))
def test_fourier_inversion(f, a):
    x = Fraction(a, f.ell)
    assert f.fourier().fourier()(x) == f(-x)


def test_unit_character_fourier_matches_direct_sum():
    chi = FiniteOrderCharacter.from_generator(5, 1, 4, 1)
    f = UnitCharacter(chi, 0)
    for a in range(-6, 7):
        y = Fraction(a, 5)
        assert f.fourier()(y) == finite_fourier(f, y)


@pytest.mark.parametrize("q", [2, 3, 7])
def test_auxiliary_transform_at_origin(q):
    phi = auxiliary_class(q)
    value = finite_fourier_2d(phi, 0, 0)
    assert value == CyclotomicElement.rational(1 - Fraction(1, q))
    assert phi.fourier()(0, 0) == value


@pytest.mark.parametrize("p,r", [(3, 1), (3, 2), (5, 1)])
def test_padic_class_transform_matches_direct_sum(p, r):
    phi = padic_class(p, r)
    ft = phi.fourier()
    for x in range(-3, 4):
        for y in range(-3, 4):
            X, Y = Fraction(x, p), Fraction(y, p ** r)
            assert ft(X, Y) == finite_fourier_2d(phi, X, Y)


def test_tame_class_transform_matches_direct_sum():
    phi = tame_class(FiniteOrderCharacter.from_generator(7, 1, 6, 1))
    ft = phi.fourier()
    for x in range(-4, 5):
        for y in range(-4, 5):
            X, Y = Fraction(x, 7), Fraction(y, 7)
            assert ft(X, Y) == finite_fourier_2d(phi, X, Y)


def test_archimedean_class_is_self_dual():
    t = np.linspace(-5, 5, 201)
    h = t[1] - t[0]
    S, T = np.meshgrid(t, t, indexing="ij")
    for k in (0, 1, 3):
        phi = ArchimedeanClass(k)
        vals = 2.0 ** (-k) * (S + 1j * T) ** k * np.exp(-np.pi * (S * S + T * T))
        for x, y in ((0.3, -0.2), (0.0, 0.7)):
            ft = np.sum(vals * np.exp(2j * np.pi * (S * y - T * x))) * h * h
            assert abs(ft - phi.fourier()(x, y)) < 1e-10


@pytest.mark.parametrize("p,r", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1)])
def test_unit_average_identity(p, r):
    assert unit_average(p, r).ok


@pytest.mark.parametrize("p,r", [(3, 1), (3, 2), (5, 1), (7, 1)])
def test_section_distribution_identity(p, r):
    assert section_distribution_check(p, r).ok


@given(st.sampled_from([(3, 1), (3, 2), (5, 1)]), st.integers(0, 200), st.integers(0, 200))
def test_single_point_sides_agree(pr, m, n):
    p, r = pr
    lhs, rhs = section_distribution_sides(p, r, m, n)
    assert lhs == rhs
    assert unit_average_at(p, r, m, n) == CyclotomicElement.rational(unit_average_rhs(p, r, m))


@pytest.mark.parametrize("coeff", [0, 1, 8])
def test_wrong_distribution_claim_is_detected(coeff):
    assert _kernels_py.distribution_mismatches(3, 1, 3, rhs_coeff=coeff) > 0
    assert kernels.distribution_mismatches(3, 1, 3, rhs_coeff=coeff) > 0


def test_model_too_small_rejected():
    with pytest.raises(InvalidInput):
        unit_average(5, 3, 3)


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
@pytest.mark.parametrize("p,r,M", [(3, 1, 3), (3, 2, 3), (5, 1, 2), (5, 1, 3)])
def test_backends_agree(p, r, M):
    from asai_padic import _kernels

    assert _kernels.unit_average_mismatches(p, r, M) == _kernels_py.unit_average_mismatches(p, r, M)
    for coeff in (-1, 0, p):
        assert (_kernels.distribution_mismatches(p, r, M, coeff)
                == _kernels_py.distribution_mismatches(p, r, M, coeff))


def test_distribution_constant():
    assert distribution_constant(2, 1, 3, omega=1, q=5, n=2) == CyclotomicElement.rational(5 ** 16)
    z = distribution_constant(1, 0, 0.5, omega=2.0, q=(3,), n=0)
    assert z == pytest.approx(0.5 * 3.0)


def test_constant_term_limit_matches_oracle():
    cfg = ConstantTermConfig(2, 2, auxiliary_q=2)
    limit = constant_term_limit(cfg).second
    assert limit.real == pytest.approx(frozen.CTERM_LIMIT_Q2, rel=1e-12)
    approach = constant_term(1e-7, cfg).second
    assert abs(approach - limit) < 1e-7


def test_constant_term_second_vanishes_off_the_diagonal():
    cfg = ConstantTermConfig(3, 1, auxiliary_q=2)
    assert constant_term_limit(cfg).second == 0
    assert abs(constant_term(1e-8, cfg).second) < 1e-6


def test_constant_term_needs_a_killing_place():
    with pytest.raises(PoleAtZero):
        constant_term(0.1, ConstantTermConfig(1, 1))


def test_pure_python_fallback_is_selectable():
    import os
    import subprocess
    import sys

    env = dict(os.environ, ASAI_PADIC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from asai_padic import kernels, schwartz; "
         "print(kernels.BACKEND, schwartz.unit_average(5, 2).ok)"],
        capture_output=True, text=True, env=env, check=True,
    ).stdout.split()
    assert out == ["python", "True"]
