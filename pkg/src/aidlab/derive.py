"""Derivation algebras: Der, Inn, the central-almost-inner condition, and the
decomposition Der(a x| s) = Inn + D_phi for abelian a.

Derivations are n x n matrices whose columns are the images of the basis
vectors.  For subspace arithmetic they are flattened column-major:
flat[c * n + r] = matrix[r][c].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .fields import ExactError, FieldSpec, Scalar
from .linalg import Matrix, Subspace, kernel_sparse
from .liecore import Element, LieAlgebra, semidirect, _matrix_is_derivation


class LeibnizError(ExactError):
    """Internal error: a map that must be a derivation is not."""


@dataclass(frozen=True)
class Derivation:
    algebra: LieAlgebra
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.rows != self.algebra.dim or self.matrix.cols != self.algebra.dim:
            raise ExactError("derivation matrix has the wrong shape")

    def flat(self) -> Tuple[Scalar, ...]:
        return flatten(self.matrix)

    def apply(self, x: Element) -> Element:
        return Element(self.algebra, self.matrix.mul_vec(x.coords))

    def to_json(self):
        return {
            "algebra": self.algebra.name,
            "basis": "columns are images; entry [r][c] = coefficient of e_(r+1) in D(e_(c+1))",
            "matrix": self.matrix.to_json(),
        }


def checked_derivation(g: LieAlgebra, m: Matrix) -> Derivation:
    if not is_derivation(g, m):
        raise LeibnizError("matrix fails the Leibniz identity on %s" % (g.name or "algebra"))
    return Derivation(g, m)


def is_derivation(g: LieAlgebra, m: Matrix) -> bool:
    """Exact Leibniz check on all basis pairs."""
    if m.rows != g.dim or m.cols != g.dim:
        return False
    return _matrix_is_derivation(g, m)


def flatten(m: Matrix) -> Tuple[Scalar, ...]:
    n = m.rows
    return tuple(m.entries[r][c] for c in range(m.cols) for r in range(n))


def unflatten(field: FieldSpec, n: int, flat: Sequence[Scalar]) -> Matrix:
    return Matrix(field, [[flat[c * n + r] for c in range(n)] for r in range(n)], cols=n)


def ad(x: Element) -> Derivation:
    return Derivation(x.algebra, x.algebra.ad_matrix(x.coords))


@dataclass(frozen=True)
class DerSpace:
    algebra: LieAlgebra
    der: Subspace
    inn: Subspace
    caid_condition: Subspace


def derivation_space(g: LieAlgebra) -> DerSpace:
    """Der as the kernel of the Leibniz system, Inn = span ad(e_i), and the
    linear central-almost-inner condition Inn + {D : D(g) <= Z(g)} inside Der.

    Cached per algebra.
    """
    return g._cached("derspace", lambda: _derivation_space(g))


def _derivation_space(g: LieAlgebra) -> DerSpace:
    f = g.field
    n = g.dim
    nn = n * n

    def idx(r: int, c: int) -> int:
        return c * n + r

    rows: List[Dict[int, Scalar]] = []
    for i in range(n):
        for j in range(i + 1, n):
            bij = g.bracket_basis(i, j)
            per_q: Dict[int, Dict[int, Scalar]] = {}
            for p, c in bij.items():
                for q in range(n):
                    per_q.setdefault(q, {})[idx(q, p)] = c
            for r in range(n):
                # -[D e_i, e_j]: subtract c(r,j)_q D[r,i]
                for q, c in g.bracket_basis(r, j).items():
                    row = per_q.setdefault(q, {})
                    key = idx(r, i)
                    row[key] = f.sub(row.get(key, f.zero()), c)
                # -[e_i, D e_j]: subtract c(i,r)_q D[r,j]
                for q, c in g.bracket_basis(i, r).items():
                    row = per_q.setdefault(q, {})
                    key = idx(r, j)
                    row[key] = f.sub(row.get(key, f.zero()), c)
            for q, row in per_q.items():
                clean = {k: v for k, v in row.items() if not f.is_zero(v)}
                if clean:
                    rows.append(clean)
    der = Subspace(f, nn, kernel_sparse(rows, nn, f))

    inn_vecs = []
    for i in range(n):
        e = [f.zero()] * n
        e[i] = f.one()
        inn_vecs.append(flatten(g.ad_matrix(e)))
    inn = Subspace(f, nn, inn_vecs)

    z = g.center()
    homz_vecs = []
    for c in range(n):
        for zrow in z.rows:
            vec = [f.zero()] * nn
            for r in range(n):
                vec[idx(r, c)] = zrow[r]
            homz_vecs.append(vec)
    homz = Subspace(f, nn, homz_vecs)
    caid = inn.sum(homz.intersect(der))
    return DerSpace(g, der, inn, caid)


def der_basis_derivations(g: LieAlgebra) -> List[Derivation]:
    ds = derivation_space(g)
    return [Derivation(g, unflatten(g.field, g.dim, row)) for row in ds.der.rows]


def killing_matrix(g: LieAlgebra) -> Matrix:
    f = g.field
    n = g.dim
    ads = []
    for i in range(n):
        e = [f.zero()] * n
        e[i] = f.one()
        ads.append(g.ad_matrix(e))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = ads[i].matmul(ads[j])
            tr = f.zero()
            for k in range(n):
                tr = f.add(tr, prod.entries[k][k])
            row.append(tr)
        rows.append(row)
    return Matrix(f, rows, cols=n)


def killing_nondegenerate(g: LieAlgebra) -> bool:
    from .linalg import rank
    k = killing_matrix(g)
    return rank(k) == g.dim


@dataclass
class DSDecomposition:
    product: LieAlgebra
    derspace: DerSpace
    dspace: Subspace
    end_dim: int
    holds: bool
    acting_semisimple: bool
    dphi_derivations: List[Derivation]


def ds_decomposition(a: LieAlgebra, actions: Sequence[Matrix],
                     acting: Optional[LieAlgebra] = None,
                     name: str = "") -> DSDecomposition:
    """Build a x| s, compute D = {D_phi : phi in End_s(a)}, and test
    Der = Inn (+) D exactly.  The acting algebra's semisimplicity is reported
    via the Killing determinant but not required."""
    f = a.field
    r = a.dim
    product = semidirect(a, actions, acting, name=name)
    m = product.dim - r

    # End_s(a): phi with phi rho_k = rho_k phi for all k
    def pidx(p: int, q: int) -> int:
        return q * r + p

    rows: List[Dict[int, Scalar]] = []
    for act in actions:
        for p in range(r):
            for q in range(r):
                row: Dict[int, Scalar] = {}
                for t in range(r):
                    c = act.entries[t][q]
                    if not f.is_zero(c):
                        key = pidx(p, t)
                        row[key] = f.add(row.get(key, f.zero()), c)
                    c2 = act.entries[p][t]
                    if not f.is_zero(c2):
                        key = pidx(t, q)
                        row[key] = f.sub(row.get(key, f.zero()), c2)
                clean = {k: v for k, v in row.items() if not f.is_zero(v)}
                if clean:
                    rows.append(clean)
    end_basis = kernel_sparse(rows, r * r, f)

    n = product.dim
    dphi_vecs = []
    dphi_derivs = []
    for vec in end_basis:
        mat = [[f.zero()] * n for _ in range(n)]
        for p in range(r):
            for q in range(r):
                mat[p][q] = vec[pidx(p, q)]
        mm = Matrix(f, mat, cols=n)
        if not is_derivation(product, mm):
            raise LeibnizError("D_phi failed the Leibniz identity")
        dphi_vecs.append(flatten(mm))
        dphi_derivs.append(Derivation(product, mm))
    dspace = Subspace(f, n * n, dphi_vecs)

    ds = derivation_space(product)
    trivial = ds.inn.intersect(dspace).dim == 0
    total = ds.inn.sum(dspace)
    holds = trivial and total == ds.der

    acting_alg = acting
    if acting_alg is None:
        acting_alg = LieAlgebra(f, m, {}, name="abelian")
    semi = killing_nondegenerate(acting_alg) if m else False
    return DSDecomposition(product, ds, dspace, len(end_basis), holds, semi, dphi_derivs)
