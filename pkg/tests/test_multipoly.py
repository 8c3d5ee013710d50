from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from aidlab.fields import QQ
from aidlab.multipoly import (MultiPoly, RationalFn, poly_eval, poly_is_zero,
                              poly_substitute_zero)


def var(i, n=3):
    return MultiPoly.var(QQ, n, i)


def const(c, n=3):
    return MultiPoly.const(QQ, n, c)


def test_constant_eval():
    assert poly_eval(const(5), [Fraction(9), Fraction(-1), Fraction(0)]) == 5


def test_commutator_is_zero():
    p = var(0) * var(1) - var(1) * var(0)
    assert poly_is_zero(p)


def test_eval_sum_of_square_and_var():
    p = var(0) ** 2 + var(1)
    assert poly_eval(p, [Fraction(2), Fraction(3), Fraction(0)]) == 7


def test_substitute_zero():
    p = var(0) * var(1) + var(2)
    assert poly_substitute_zero(p, {0}) == var(2)
    assert poly_substitute_zero(var(2) ** 2, {0, 1}) == var(2) ** 2
    q = var(0) + var(0) * var(1) + const(1)
    assert poly_substitute_zero(q, {0}) == const(1)


def test_binomial_identity():
    x, y = var(0), var(1)
    p = (x + y) ** 2 - x ** 2 - x * y - x * y - y ** 2
    assert poly_is_zero(p)


def test_to_string_graded_lex():
    x1, x2 = var(0), var(1)
    p = x2 + x1 * x1 + const(3)
    assert p.to_string() == "1·x1^2 + 1·x2 + 3"


def test_parse_roundtrip():
    p = var(0) ** 2 * var(2) - var(1).scale(Fraction(3, 2)) + const(-7)
    q = MultiPoly.parse(QQ, 3, p.to_string())
    assert p == q


def test_divide_exact():
    x, y = var(0), var(1)
    prod = (x + y) * (x - y)
    assert prod.divide_exact(x + y) == x - y
    assert prod.divide_exact(x) is None


def test_rationalfn_equality_cross_multiplied():
    x, y = var(0), var(1)
    a = RationalFn(x * y, x)           # unreduced y
    b = RationalFn(y, const(1))
    assert a.eq(b)
    assert not a.eq(RationalFn(x, const(1)))


def test_rationalfn_den_guard():
    x = var(0)
    with pytest.raises(ZeroDivisionError):
        RationalFn(x, MultiPoly.zero(QQ, 3))
    f = RationalFn(var(1), x)
    with pytest.raises(ZeroDivisionError):
        f.substitute_zero({0})


polyvals = st.integers(min_value=-4, max_value=4)


def rand_poly(draw_terms):
    terms = {}
    for expo, coef in draw_terms:
        if coef:
            terms[tuple(expo)] = terms.get(tuple(expo), Fraction(0)) + coef
    return MultiPoly(QQ, 3, {e: c for e, c in terms.items() if c})


term_st = st.tuples(st.lists(st.integers(min_value=0, max_value=3), min_size=3, max_size=3),
                    st.fractions(min_value=-5, max_value=5, max_denominator=6))
poly_st = st.lists(term_st, min_size=0, max_size=5).map(rand_poly)
point_st = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4),
                    min_size=3, max_size=3)


@settings(max_examples=50)
@given(poly_st, poly_st, poly_st)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * (q * r) == (p * q) * r
    assert p + q == q + p


@settings(max_examples=50)
@given(poly_st, poly_st, point_st)
def test_eval_is_ring_homomorphism(p, q, pt):
    assert poly_eval(p * q, pt) == QQ.mul(poly_eval(p, pt), poly_eval(q, pt))
    assert poly_eval(p + q, pt) == QQ.add(poly_eval(p, pt), poly_eval(q, pt))


@settings(max_examples=50)
@given(poly_st, point_st)
def test_substitute_zero_matches_eval(p, pt):
    q = poly_substitute_zero(p, {1})
    pt_zeroed = [pt[0], Fraction(0), pt[2]]
    assert poly_eval(q, pt_zeroed) == poly_eval(p, pt_zeroed)
