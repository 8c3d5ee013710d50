from fractions import Fraction

import pytest

from aidlab.fields import ExactError, QQ
from aidlab.hall import build_free_nilpotent, hall_words, witt_dimension
from aidlab.linalg import span
from aidlab.liecore import jacobi_check, quotient


def test_witt_dimension_oracle():
    # necklace numbers: r=2 gives 2,1,2,3,6,9 per degree
    assert witt_dimension(2, 1) == 2
    assert witt_dimension(2, 2) == 3
    assert witt_dimension(2, 3) == 5
    assert witt_dimension(2, 4) == 8
    assert witt_dimension(2, 5) == 14
    assert witt_dimension(3, 2) == 6
    assert witt_dimension(3, 3) == 14


@pytest.mark.parametrize("r,c", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)])
def test_dimensions_match_witt_formula(r, c):
    fn = build_free_nilpotent(r, c)
    assert fn.algebra.dim == witt_dimension(r, c)
    assert jacobi_check(fn.algebra) is None


def test_f22_is_heisenberg():
    fn = build_free_nilpotent(2, 2)
    g = fn.algebra
    assert g.dim == 3
    assert g.bracket_basis(0, 1) in ({2: Fraction(1)}, {2: Fraction(-1)})


def test_f32_matches_paper_basis():
    fn = build_free_nilpotent(3, 2)
    g = fn.algebra
    assert g.dim == 6
    assert g.bracket_basis(0, 1) == {3: Fraction(1)}   # [x1,x2] = y1
    assert g.bracket_basis(0, 2) == {4: Fraction(1)}   # [x1,x3] = y2
    assert g.bracket_basis(1, 2) == {5: Fraction(1)}   # [x2,x3] = y3


def test_multidegree_components():
    fn = build_free_nilpotent(2, 3)
    assert fn.multidegree_component([1, 1]).dim == 1
    assert fn.multidegree_component([2, 1]).dim == 1
    assert fn.multidegree_component([1, 2]).dim == 1
    # graded piece of total degree 3 = sum of its multidegree components
    assert (fn.multidegree_component([2, 1]).dim + fn.multidegree_component([1, 2]).dim
            == witt_dimension(2, 3) - witt_dimension(2, 2))


def test_grading_multiplicative():
    # [g_(i,j), g_(p,q)] <= g_(i+p, j+q) on all basis pairs, r=2 up to class 5
    fn = build_free_nilpotent(2, 5)
    g = fn.algebra
    degs = [w.multidegree(2) for w in fn.words]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            target = tuple(a + b for a, b in zip(degs[i], degs[j]))
            for p, c in g.bracket_basis(i, j).items():
                assert degs[p] == target


def test_quotient_of_next_class_is_previous():
    for (r, c) in ((2, 2), (2, 3), (2, 4), (3, 2)):
        big = build_free_nilpotent(r, c + 1)
        small = build_free_nilpotent(r, c)
        top = [i for i, w in enumerate(big.words) if w.length == c + 1]
        basis = []
        for i in top:
            v = [Fraction(0)] * big.algebra.dim
            v[i] = Fraction(1)
            basis.append(v)
        q, _ = quotient(big.algebra, span(QQ, big.algebra.dim, basis))
        assert q.dim == small.algebra.dim
        assert q.brackets == small.algebra.brackets


def test_word_strings():
    fn = build_free_nilpotent(2, 3)
    strs = fn.word_strings()
    assert strs[0] == "x1" and strs[1] == "x2"
    assert "[x1,x2]" in strs
    assert "[x1,[x1,x2]]" in strs


def test_parameter_validation():
    with pytest.raises(ExactError):
        build_free_nilpotent(1, 3)
    with pytest.raises(ExactError):
        build_free_nilpotent(3, 9)  # dimension blows past the cap
