from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from aidlab.fields import ExactError, QQ
from aidlab.linalg import (Matrix, Subspace, kernel, kernel_sparse, rank, rref,
                           solve, span, subspace_contains, subspace_intersect)


def qm(rows):
    return Matrix(QQ, [[Fraction(x) for x in r] for r in rows], cols=len(rows[0]) if rows else 0)


def test_rref_identity():
    m = Matrix.identity(QQ, 3)
    r, rk = rref(m)
    assert r == m and rk == 3


def test_rref_proportional_rows():
    r, rk = rref(qm([[1, 2], [2, 4]]))
    assert rk == 1
    assert r.entries[0] == (Fraction(1), Fraction(2))
    assert all(x == 0 for x in r.entries[1])


def test_rref_idempotent():
    m = qm([[2, 4, 1], [3, 1, 0], [5, 5, 1]])
    r1, _ = rref(m)
    r2, _ = rref(r1)
    assert r1 == r2


def test_solve_identity():
    b = [Fraction(3), Fraction(-1), Fraction(2)]
    assert solve(Matrix.identity(QQ, 3), b) == tuple(b)


def test_solve_inconsistent():
    m = qm([[0, 0], [0, 0]])
    assert solve(m, [Fraction(1), Fraction(0)]) is None


def test_solve_heisenberg_ad():
    # ad(e1) maps e2 -> e3; solve ad(e1) y = e3 gives y with y2 = 1
    m = qm([[0, 0, 0], [0, 0, 0], [0, 1, 0]])
    sol = solve(m, [Fraction(0), Fraction(0), Fraction(1)])
    assert sol is not None and sol[1] == 1
    assert rank(m) == 1


def test_kernel_consistency():
    m = qm([[1, 2, 3], [2, 4, 6]])
    basis = kernel(m)
    assert len(basis) == 2
    for v in basis:
        assert all(x == 0 for x in m.mul_vec(v))


def test_kernel_sparse_matches_dense():
    rows_dense = [[1, 0, 2, 0], [0, 1, 0, -1], [1, 1, 2, -1]]
    m = qm(rows_dense)
    sparse = [{i: Fraction(v) for i, v in enumerate(r) if v} for r in rows_dense]
    dense_sp = span(QQ, 4, kernel(m))
    sparse_sp = span(QQ, 4, kernel_sparse(sparse, 4, QQ))
    assert dense_sp == sparse_sp


def test_subspace_basics():
    u = span(QQ, 2, [[Fraction(1), Fraction(0)]])
    v = span(QQ, 2, [[Fraction(0), Fraction(1)]])
    assert subspace_intersect(u, v).dim == 0
    assert subspace_intersect(u, u) == u
    assert subspace_contains(u, [Fraction(0), Fraction(0)])
    assert not subspace_contains(u, [Fraction(0), Fraction(1)])
    w = span(QQ, 2, [[Fraction(1), Fraction(1)]])
    assert subspace_contains(w, [Fraction(3), Fraction(3)])


def test_subspace_intersection_two_dimensional():
    u = span(QQ, 3, [[1, 1, 0], [0, 1, 0]])
    v = span(QQ, 3, [[1, 0, 0], [0, 1, 0]])
    both = subspace_intersect(u, v)
    assert both.dim == 2
    assert both == span(QQ, 3, [[1, 0, 0], [0, 1, 0]])


def test_ambient_mismatch():
    u = span(QQ, 2, [[1, 0]])
    v = span(QQ, 3, [[1, 0, 0]])
    with pytest.raises(ExactError):
        subspace_intersect(u, v)


entries = st.integers(min_value=-6, max_value=6)


@settings(max_examples=40)
@given(st.lists(st.lists(entries, min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_transpose_and_solve_exactness(rows):
    m = qm(rows)
    assert rank(m) == rank(m.transpose())
    b = m.mul_vec([Fraction(1), Fraction(2), Fraction(-1)])
    sol = solve(m, list(b))
    assert sol is not None
    assert m.mul_vec(sol) == tuple(b)


@settings(max_examples=40)
@given(st.lists(st.lists(entries, min_size=4, max_size=4), min_size=1, max_size=3),
       st.lists(st.lists(entries, min_size=4, max_size=4), min_size=1, max_size=3))
def test_intersection_commutative_and_bounded(rows_u, rows_v):
    u = span(QQ, 4, [[Fraction(x) for x in r] for r in rows_u])
    v = span(QQ, 4, [[Fraction(x) for x in r] for r in rows_v])
    uv = subspace_intersect(u, v)
    vu = subspace_intersect(v, u)
    assert uv == vu
    assert uv.dim <= min(u.dim, v.dim)
    assert uv.is_subspace_of(u) and uv.is_subspace_of(v)


@settings(max_examples=30)
@given(st.lists(st.lists(entries, min_size=3, max_size=3), min_size=2, max_size=3),
       st.lists(entries, min_size=3, max_size=3))
def test_solve_none_means_rank_jump(rows, b):
    m = qm(rows)
    bvec = [Fraction(x) for x in b[:len(rows)]] + [Fraction(0)] * max(0, len(rows) - 3)
    sol = solve(m, bvec)
    aug = Matrix(QQ, [list(r) + [x] for r, x in zip(m.entries, bvec)], cols=4)
    if sol is None:
        assert rank(aug) == rank(m) + 1
    else:
        assert m.mul_vec(sol) == tuple(bvec)
