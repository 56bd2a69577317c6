from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import frozen
from asai_padic.errors import InvalidInput
from asai_padic.poly_weights import (
    CONJUGATE_SIGN,
    IPowerRational,
    c_constant,
    c_constant_closed,
    c_constant_definitional,
    dual_element,
    gram_matrix,
    iter_indices,
    pairing_n,
    upv_pairing_closed,
    upv_pairing_definitional,
    v_polynomials,
    xy_monomial,
)


def _frozen(n, alpha, i):
    re, im = frozen.C_TABLE[n][(alpha, i)]
    return complex(float(Fraction(re)), float(Fraction(im)))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_c_constants_match_independent_oracle(n):
    for alpha, i in iter_indices(n):
        assert abs(complex(c_constant_closed(n, alpha, i)) - _frozen(n, alpha, i)) < 1e-15


@pytest.mark.parametrize("n", range(6))
def test_c_constant_dual_route(n):
    for alpha, i in iter_indices(n):
        assert c_constant_definitional(n, alpha, i) == c_constant_closed(n, alpha, i)


def test_literal_conjugation_differs_by_sign():
    for n in range(4):
        for alpha, i in iter_indices(n):
            literal = c_constant_definitional(n, alpha, i, conjugate_sign=1)
            closed = c_constant_closed(n, alpha, i)
            assert literal == IPowerRational(closed.value * (-1) ** (n - alpha), closed.ipow)
    assert CONJUGATE_SIGN == -1


def test_off_parity_constants_are_imaginary_and_cancel():
    # the archimedean weight (1 + (-1)^{alpha - i}) / 2 annihilates them
    for n in range(5):
        for alpha, i in iter_indices(n):
            c = c_constant_closed(n, alpha, i)
            if (i - alpha) % 2:
                assert c.ipow == 1 or c.value == 0
                assert (1 + (-1) ** (alpha - i)) // 2 == 0
            else:
                assert c.ipow == 0


def test_n0_example():
    assert c_constant(0, 0, 0) == IPowerRational(Fraction(1))
    assert complex(c_constant(0, 0, 1)) == 1j


def test_pairing_monomials():
    n = 4
    for i in range(n + 1):
        for j in range(n + 1):
            val = pairing_n(xy_monomial(i, n), xy_monomial(j, n), n)
            expected = Fraction((-1) ** i, __import__("math").comb(n, i)) if i + j == n else 0
            assert val == expected


@given(st.integers(0, 7))
def test_dual_basis_normalization(n):
    for i in range(n + 1):
        u = xy_monomial(i, n)
        assert pairing_n(dual_element(u), u, n) == 1


def test_dual_of_x_is_y():
    assert dual_element(xy_monomial(1, 1)).coeffs == xy_monomial(0, 1).coeffs


@given(st.integers(0, 6))
def test_pairing_is_graded_symmetric(n):
    G = gram_matrix(n)
    for i in range(n + 1):
        for j in range(n + 1):
            assert G[i][j] == (-1) ** n * G[j][i]


def test_v_polynomials_reexpand_to_p_polynomials():
    from asai_padic.poly_weights import p_polynomials

    for n in range(3):
        v = v_polynomials(n)
        P = p_polynomials(n)
        for j in (-2, 0, 2):
            assert (v.reexpand(j) - P[j]).is_zero()


def test_upv_pairing_relation():
    for n in range(4):
        for alpha, i in iter_indices(n):
            for j in (-2, 0, 2):
                d = upv_pairing_definitional(n, alpha, i, j)
                c = upv_pairing_closed(n, alpha, i, j)
                assert d.value == (-1) ** alpha * c.value
                assert d.value == 0 or d.ipow == c.ipow


@pytest.mark.parametrize("args", [(-1, 0, 0), (2, 3, 0), (2, 0, 4)])
def test_index_range_checked(args):
    with pytest.raises(InvalidInput):
        c_constant_closed(*args)
