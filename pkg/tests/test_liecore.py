from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from aidlab.fields import ExactError, QQ
from aidlab.linalg import Matrix, Subspace, span
from aidlab.liecore import (Element, JacobiError, LieAlgebra, bracket, direct_sum,
                            is_ideal, jacobi_check, quotient, semidirect)
from aidlab.families import family_L, family_W, heisenberg


def abelian(n):
    return LieAlgebra(QQ, n, {}, name="abelian%d" % n)


def elem(g, *coords):
    return g.element([Fraction(c) for c in coords])


def test_heisenberg_bracket():
    h = heisenberg()
    e1, e2 = h.basis_element(0), h.basis_element(1)
    assert bracket(e1, e2).coords == (0, 0, 1)
    x = elem(h, 2, 3, -1)
    assert bracket(x, x).is_zero()


def test_witt_bracket_value():
    w = family_W(9)
    v = bracket(w.basis_element(1), w.basis_element(4))
    assert v.coords[6] == Fraction(9, 10)
    assert sum(1 for c in v.coords if c != 0) == 1


def test_jacobi_detects_violation():
    # [e1,e2]=e2, [e1,e3]=e3 is a valid solvable table; dropping [e1,e3] while
    # adding [e2,e3]=e3 leaves J(1,2,3) = [e2,e3] = e3 != 0
    good = LieAlgebra(QQ, 3, {(0, 1): {1: Fraction(1)}, (0, 2): {2: Fraction(1)}})
    assert jacobi_check(good) is None
    with pytest.raises(JacobiError):
        LieAlgebra(QQ, 3, {(0, 1): {1: Fraction(1)}, (1, 2): {2: Fraction(1)}})
    bad = LieAlgebra(QQ, 3, {(0, 1): {1: Fraction(1)}, (1, 2): {2: Fraction(1)}},
                     check_jacobi=False)
    violation = jacobi_check(bad)
    assert violation is not None and violation[0] == (0, 1, 2)
    assert any(c != 0 for c in violation[1])


def test_center():
    assert abelian(3).center().dim == 3
    h = heisenberg()
    z = h.center()
    assert z.dim == 1 and z.contains([Fraction(0), Fraction(0), Fraction(1)])
    w = family_W(9)
    zw = w.center()
    e9 = [Fraction(0)] * 9
    e9[8] = Fraction(1)
    assert zw.dim == 1 and zw.contains(e9)


def test_lower_central_series():
    assert [s.dim for s in abelian(4).lower_central_series()] == [4, 0]
    assert [s.dim for s in heisenberg().lower_central_series()] == [3, 1, 0]
    assert [s.dim for s in family_L(5).lower_central_series()] == [5, 3, 2, 1, 0]


def test_quotient_by_zero_is_isomorphic_copy():
    h = heisenberg()
    q, proj = quotient(h, Subspace.zero(QQ, 3))
    assert q.dim == 3 and q.brackets == h.brackets
    assert proj == Matrix.identity(QQ, 3)


def test_quotient_heisenberg_center():
    h = heisenberg()
    q, _ = quotient(h, h.center())
    assert q.dim == 2 and not q.brackets


def test_quotient_L5_top():
    g = family_L(5)
    e5 = [Fraction(0)] * 5
    e5[4] = Fraction(1)
    q, _ = quotient(g, span(QQ, 5, [e5]))
    assert q.dim == 4
    assert q.brackets == family_L(4).brackets


def test_quotient_requires_ideal():
    h = heisenberg()
    e1 = [Fraction(1), Fraction(0), Fraction(0)]
    assert not is_ideal(h, span(QQ, 3, [e1]))
    with pytest.raises(ExactError):
        quotient(h, span(QQ, 3, [e1]))


def test_direct_sum():
    h = heisenberg()
    hh = direct_sum(h, h)
    assert hh.dim == 6
    assert hh.center().dim == 2
    assert direct_sum(abelian(2), abelian(3)).brackets == {}


def test_direct_sum_center_splits():
    g = family_L(4)
    h = heisenberg()
    gh = direct_sum(g, h)
    assert gh.center().dim == g.center().dim + h.center().dim


def test_semidirect_shift_is_L4():
    z, o = Fraction(0), Fraction(1)
    shift = Matrix(QQ, [[z, z, z], [o, z, z], [z, o, z]], cols=3)
    g = semidirect(abelian(3), [shift])
    assert g.dim == 4
    # basis e1,e2,e3,t with [t,e1]=e2, [t,e2]=e3: relabel to L4's adapted basis
    lcs = [s.dim for s in g.lower_central_series()]
    assert lcs == [4, 2, 1, 0]
    assert jacobi_check(g) is None


def test_semidirect_rejects_incompatible_actions():
    z, o = Fraction(0), Fraction(1)
    a = Matrix(QQ, [[z, o], [z, z]], cols=2)
    b = Matrix(QQ, [[z, z], [o, z]], cols=2)
    # [a, b] != 0 but the acting space is declared abelian
    with pytest.raises(ExactError):
        semidirect(abelian(2), [a, b])


def test_bracket_bilinearity_random():
    w = family_W(7)

    @settings(max_examples=25)
    @given(st.lists(st.integers(min_value=-4, max_value=4), min_size=7, max_size=7),
           st.lists(st.integers(min_value=-4, max_value=4), min_size=7, max_size=7),
           st.lists(st.integers(min_value=-4, max_value=4), min_size=7, max_size=7),
           st.integers(min_value=-3, max_value=3), st.integers(min_value=-3, max_value=3))
    def inner(xs, ys, zs, al, be):
        x, y, z = (elem(w, *xs), elem(w, *ys), elem(w, *zs))
        lhs = bracket(x.scale(Fraction(al)) + y.scale(Fraction(be)), z)
        rhs = bracket(x, z).scale(Fraction(al)) + bracket(y, z).scale(Fraction(be))
        assert lhs.coords == rhs.coords

    inner()


def test_json_roundtrip():
    w = family_W(6)
    again = LieAlgebra.from_json(w.to_json())
    assert again.dim == w.dim and again.brackets == w.brackets
    assert again.field == QQ


def test_center_is_ideal_and_lcs_descends():
    for g in (heisenberg(), family_L(6), family_W(7)):
        assert is_ideal(g, g.center())
        series = g.lower_central_series()
        for a, b in zip(series, series[1:]):
            assert b.is_subspace_of(a)
            assert is_ideal(g, b)
