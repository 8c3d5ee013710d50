from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from aidlab.fields import (ExactError, FieldSpec, QQ, field_mul, parse_monic_poly,
                           rational_to_string)


def ext(*coeffs):
    return FieldSpec.extension([Fraction(c) for c in coeffs])


GAUSS = ext(1, 0, 1)       # s^2 + 1
SQRT2 = ext(-2, 0, 1)      # s^2 - 2


def test_gauss_i_squared():
    s = GAUSS.gen()
    assert GAUSS.mul(s, s) == GAUSS.from_rational(-1)


def test_rational_product():
    assert field_mul(Fraction(2, 3), Fraction(9, 4), QQ) == Fraction(3, 2)


def test_sqrt2_expansion():
    # (1 + s)^2 = 3 + 2s when s^2 = 2
    one_plus = SQRT2.from_coeffs([1, 1])
    assert SQRT2.mul(one_plus, one_plus) == SQRT2.from_coeffs([3, 2])


def test_field_mismatch_rejected():
    with pytest.raises(ExactError):
        field_mul(GAUSS.one(), Fraction(1), QQ)
    with pytest.raises(ExactError):
        field_mul(Fraction(1), Fraction(1), GAUSS)


def test_inverse_and_norm():
    a = GAUSS.from_coeffs([3, 4])
    inv = GAUSS.inv(a)
    assert GAUSS.mul(a, inv) == GAUSS.one()
    assert GAUSS.norm(a) == Fraction(25)


def test_reducible_minpolys_rejected():
    with pytest.raises(ExactError):
        ext(-1, 0, 1)        # s^2 - 1 = (s-1)(s+1)
    with pytest.raises(ExactError):
        ext(-8, 0, 0, 1)     # s^3 - 8 has the root 2
    with pytest.raises(ExactError):
        ext(1, 0, 2, 0, 1)   # (s^2+1)^2
    with pytest.raises(ExactError):
        ext(4, 0, 0, 0, 1)   # s^4 + 4 = (s^2-2s+2)(s^2+2s+2)


def test_irreducible_quartic_accepted():
    ext(2, 0, 0, 0, 1)  # s^4 + 2 (Eisenstein)


def test_cubic_extension_arithmetic():
    k = ext(-2, 0, 0, 1)  # s^3 = 2
    s = k.gen()
    s2 = k.mul(s, s)
    assert k.mul(s2, s) == k.from_rational(2)
    a = k.from_coeffs([1, 1, 1])
    assert k.mul(a, k.inv(a)) == k.one()


rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10 ** 4)


@given(rationals, rationals, rationals)
def test_q_field_axioms(a, b, c):
    assert QQ.mul(QQ.add(a, b), c) == QQ.add(QQ.mul(a, c), QQ.mul(b, c))
    assert QQ.mul(a, b) == QQ.mul(b, a)


small = st.integers(min_value=-9, max_value=9)


@given(st.tuples(small, small), st.tuples(small, small), st.tuples(small, small))
def test_gauss_ring_axioms(a, b, c):
    fa = GAUSS.from_coeffs([Fraction(x) for x in a])
    fb = GAUSS.from_coeffs([Fraction(x) for x in b])
    fc = GAUSS.from_coeffs([Fraction(x) for x in c])
    assert GAUSS.mul(fa, GAUSS.mul(fb, fc)) == GAUSS.mul(GAUSS.mul(fa, fb), fc)
    assert GAUSS.mul(fa, GAUSS.add(fb, fc)) == GAUSS.add(GAUSS.mul(fa, fb), GAUSS.mul(fa, fc))
    if not GAUSS.is_zero(fa):
        assert GAUSS.mul(fa, GAUSS.inv(fa)) == GAUSS.one()


def test_serialization_roundtrip():
    assert rational_to_string(Fraction(-3, 7)) == "-3/7"
    assert rational_to_string(Fraction(5)) == "5"
    a = GAUSS.from_coeffs([Fraction(1, 2), Fraction(-3)])
    assert GAUSS.scalar_from_json(GAUSS.scalar_to_json(a)) == a
    assert FieldSpec.from_json(GAUSS.to_json()) == GAUSS
    assert FieldSpec.from_json(QQ.to_json()) == QQ


def test_parse_monic_poly():
    assert parse_monic_poly("x^2+1") == (Fraction(1), Fraction(0), Fraction(1))
    assert parse_monic_poly("x^3 - 2*x + 1/2") == (
        Fraction(1, 2), Fraction(-2), Fraction(0), Fraction(1))
    assert parse_monic_poly("x") == (Fraction(0), Fraction(1))
