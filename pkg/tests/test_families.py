from fractions import Fraction

import pytest

from aidlab.fields import ExactError, QQ
from aidlab.linalg import Matrix
from aidlab.liecore import jacobi_check
from aidlab.families import (FamilySpec, build_family, companion_matrix, example_3_2,
                             example_3_3, f_alpha, family_F, family_L, family_Q,
                             family_R, family_W, heisenberg, named_derivation,
                             parse_family, sl2_natural, witt_coefficient)
from aidlab.derive import is_derivation


def test_witt_coefficients():
    assert witt_coefficient(2, 5) == Fraction(9, 10)
    assert witt_coefficient(2, 3) == Fraction(1)  # 6*1/(3*2*1)
    w = family_W(9)
    assert w.bracket_basis(1, 4) == {6: Fraction(9, 10)}


def test_q6_bracket_signs():
    q = family_Q(6)
    assert q.bracket_basis(1, 4) == {5: Fraction(-1)}   # [e2,e5] = -e6
    assert q.bracket_basis(2, 3) == {5: Fraction(1)}    # [e3,e4] = +e6
    assert q.bracket_basis(0, 4) == {5: Fraction(1)}    # adapted chain


def test_alpha_table_values():
    assert f_alpha(13, 4, 13) == Fraction(22105, 15246)
    assert f_alpha(14, 4, 14) == 0
    assert f_alpha(13, 3, 9) == 1
    assert f_alpha(13, 2, 5) == Fraction(1)  # 3 / (binom(2,2) binom(3,1))
    assert f_alpha(13, 4, 11) == Fraction(43, 126)


def test_f13_has_witt_overlap_and_d_term():
    g = family_F(13)
    # [e2,e5] = (9/10) e7 - e_(n-4): the d-coefficient is -1 for every n >= 13
    vec = g.bracket_basis(1, 4)
    assert vec[6] == Fraction(9, 10)
    assert vec[8] == Fraction(-1)


@pytest.mark.parametrize("n", [14, 15, 16])
def test_f_simplified_form_cross_check(n):
    """For n >= 14 the brackets are c_(i,j) e_(i+j) + d e_(i+j+n-11) with the
    Witt coefficients and d supported on i+j <= 11 only."""
    g = family_F(n)
    for i in range(2, n):
        for j in range(i + 1, n + 1):
            vec = dict(g.bracket_basis(i - 1, j - 1))
            if i + j <= n:
                c = vec.pop(i + j - 1, Fraction(0))
                assert c == witt_coefficient(i, j)
            if i + j <= 11:
                vec.pop(i + j + n - 11 - 1, None)
            assert not vec, (i, j, vec)
    assert g.bracket_basis(1, 4)[n - 5] == Fraction(-1)  # d_(2,5) = -1


@pytest.mark.parametrize("spec,dim", [
    ("L:3", 3), ("L:12", 12), ("Q:6", 6), ("Q:12", 12), ("R:5", 5), ("R:12", 12),
    ("W:5", 5), ("W:12", 12), ("F:13", 13), ("F:16", 16), ("heis", 3),
    ("free:2,5", 14), ("free:3,3", 14), ("ex32:3", 5), ("ex32:6", 8),
    ("ex33", 7), ("sl2nat", 5),
])
def test_family_construction_and_jacobi(spec, dim):
    g = build_family(parse_family(spec))
    assert g.dim == dim
    assert jacobi_check(g) is None


def test_parameter_ranges():
    for bad in ("L:2", "Q:5", "Q:7", "R:4", "W:4", "F:12", "ex32:2"):
        with pytest.raises(ExactError):
            build_family(parse_family(bad))


def test_companion_matrix():
    m = companion_matrix([Fraction(0), Fraction(0), Fraction(1)])  # x^2
    assert m.entries == ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)))
    g = build_family(parse_family("aa:x^2"))
    assert g.dim == 3
    # single nilpotent 2x2 block: [t, e1] = e2
    assert g.bracket_basis(0, 2) == {1: Fraction(-1)}


def test_aa_multi_block():
    g = build_family(parse_family("aa:x^2,x^3+x+1"))
    assert g.dim == 6
    assert jacobi_check(g) is None


def test_named_derivations_pass_leibniz():
    w = family_W(9)
    for name in ("t1", "t2", "t3", "h"):
        d = named_derivation(w, name)
        assert is_derivation(w, d.matrix)
    h = named_derivation(w, "h")
    assert [h.matrix.entries[i][i] for i in range(9)] == [Fraction(k) for k in range(1, 10)]

    q = family_Q(6)
    for name in ("t0", "t1", "t2", "h_2"):
        assert is_derivation(q, named_derivation(q, name).matrix)

    f13 = family_F(13)
    for name in ("t1", "t2", "t3"):
        assert is_derivation(f13, named_derivation(f13, name).matrix)

    r = family_R(6)
    assert is_derivation(r, named_derivation(r, "E_n2").matrix)
    assert is_derivation(example_3_2(4), named_derivation(example_3_2(4), "D").matrix)
    assert is_derivation(example_3_3(), named_derivation(example_3_3(), "D").matrix)


def test_h_refused_for_F():
    f13 = family_F(13)
    with pytest.raises(ExactError):
        named_derivation(f13, "h")


def test_h_not_a_derivation_of_F():
    # the identity the refusal rests on: h([e2,e5]) != [h e2, e5] + [e2, h e5]
    f13 = family_F(13)
    n = 13
    h = [[QQ.zero()] * n for _ in range(n)]
    for i in range(n):
        h[i][i] = Fraction(i + 1)
    assert not is_derivation(f13, Matrix(QQ, h, cols=n))


def test_q_unknown_name():
    with pytest.raises(ExactError):
        named_derivation(family_Q(6), "t3")
    with pytest.raises(ExactError):
        named_derivation(family_Q(6), "h_9")


def test_sl2nat_structure():
    g = sl2_natural()
    # [h, e] = 2e with basis a1, a2, h, e, f
    assert g.bracket_basis(2, 3) == {3: Fraction(2)}
    assert g.bracket_basis(2, 4) == {4: Fraction(-2)}
    assert g.bracket_basis(3, 4) == {2: Fraction(1)}
    assert g.bracket_basis(2, 0) == {0: Fraction(1)}  # [h, a1] = a1


def test_ex33_seven_dimensional():
    g = example_3_3()
    assert g.dim == 7
    assert g.bracket_basis(0, 6) == {5: Fraction(-1)}  # [x1, t] = -y3
