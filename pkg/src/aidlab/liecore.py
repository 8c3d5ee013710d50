"""Structure-constant Lie algebras and their basic constructions.

The bracket table stores only i < j entries (0-based internally, 1-based in
JSON); antisymmetry is by construction.  Jacobi is verified on every basis
triple at construction unless explicitly deferred.  Derived data (center,
lower central series) is cached once behind a lock; algebras are immutable
after construction.
"""

from __future__ import annotations

import threading
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .fields import ExactError, FieldSpec, QQ, Scalar
from .linalg import Matrix, Subspace, kernel_sparse

BracketTable = Dict[Tuple[int, int], Dict[int, Scalar]]


class JacobiError(ExactError):
    def __init__(self, triple, residual):
        self.triple = triple
        self.residual = residual
        super().__init__("Jacobi identity fails on basis triple %s" % (tuple(
            i + 1 for i in triple),))


class LieAlgebra:
    __slots__ = ("field", "dim", "brackets", "name", "meta", "_lock", "_cache")

    def __init__(self, field: FieldSpec, dim: int, brackets: BracketTable,
                 name: str = "", *, check_jacobi: bool = True, meta: Optional[dict] = None):
        self.field = field
        self.dim = dim
        table: BracketTable = {}
        for (i, j), vec in brackets.items():
            if not (0 <= i < j < dim):
                raise ExactError("bracket table keys must satisfy 0 <= i < j < dim")
            clean = {p: c for p, c in vec.items() if not field.is_zero(c)}
            for p in clean:
                if not 0 <= p < dim:
                    raise ExactError("bracket coefficient index out of range")
            if clean:
                table[(i, j)] = clean
        self.brackets = table
        self.name = name
        self.meta = dict(meta or {})
        self._lock = threading.Lock()
        self._cache: dict = {}
        if check_jacobi:
            bad = jacobi_check(self)
            if bad is not None:
                raise JacobiError(bad[0], bad[1])

    # -- bracket machinery ---------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> Dict[int, Scalar]:
        """Sparse coefficient vector of [e_i, e_j] (0-based, any i, j)."""
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        f = self.field
        return {p: f.neg(c) for p, c in self.brackets.get((j, i), {}).items()}

    def bracket_coords(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        f = self.field
        out = [f.zero()] * self.dim
        nz_x = [(i, a) for i, a in enumerate(x) if not f.is_zero(a)]
        nz_y = [(j, b) for j, b in enumerate(y) if not f.is_zero(b)]
        for i, a in nz_x:
            for j, b in nz_y:
                if i == j:
                    continue
                vec = self.bracket_basis(i, j)
                if not vec:
                    continue
                ab = f.mul(a, b)
                for p, c in vec.items():
                    out[p] = f.add(out[p], f.mul(ab, c))
        return tuple(out)

    def ad_matrix(self, x: Sequence[Scalar]) -> Matrix:
        """Matrix of y -> [x, y]; column j is [x, e_j]."""
        f = self.field
        cols = []
        for j in range(self.dim):
            col = [f.zero()] * self.dim
            for i, a in enumerate(x):
                if f.is_zero(a) or i == j:
                    continue
                for p, c in self.bracket_basis(i, j).items():
                    col[p] = f.add(col[p], f.mul(a, c))
            cols.append(col)
        return Matrix(f, [[cols[j][r] for j in range(self.dim)] for r in range(self.dim)],
                      cols=self.dim)

    def basis_element(self, i: int) -> "Element":
        f = self.field
        coords = [f.zero()] * self.dim
        coords[i] = f.one()
        return Element(self, tuple(coords))

    def element(self, coords: Sequence[Scalar]) -> "Element":
        if len(coords) != self.dim:
            raise ExactError("coordinate length mismatch")
        return Element(self, tuple(coords))

    def zero_element(self) -> "Element":
        return Element(self, (self.field.zero(),) * self.dim)

    # -- cached derived data ---------------------------------------------------

    def _cached(self, key: str, fn: Callable):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = fn()
            return self._cache[key]

    def center(self) -> Subspace:
        return self._cached("center", lambda: _center(self))

    def lower_central_series(self) -> List[Subspace]:
        return self._cached("lcs", lambda: _lower_central_series(self))

    def derived_subalgebra(self) -> Subspace:
        f = self.field
        vecs = []
        for (i, j), vec in self.brackets.items():
            dense = [f.zero()] * self.dim
            for p, c in vec.items():
                dense[p] = c
            vecs.append(dense)
        return Subspace(f, self.dim, vecs)

    # -- serialization -----------------------------------------------------------

    def to_json(self):
        f = self.field
        rows = []
        for (i, j) in sorted(self.brackets):
            vec = self.brackets[(i, j)]
            rows.append({
                "i": i + 1,
                "j": j + 1,
                "v": {str(p + 1): f.scalar_to_json(c) for p, c in sorted(vec.items())},
            })
        return {"name": self.name, "field": f.to_json(), "dim": self.dim, "brackets": rows}

    @staticmethod
    def from_json(obj, *, check_jacobi: bool = True) -> "LieAlgebra":
        field = FieldSpec.from_json(obj["field"])
        dim = obj["dim"]
        table: BracketTable = {}
        for row in obj.get("brackets", []):
            vec = {int(p) - 1: field.scalar_from_json(c) for p, c in row["v"].items()}
            table[(row["i"] - 1, row["j"] - 1)] = vec
        return LieAlgebra(field, dim, table, obj.get("name", ""),
                          check_jacobi=check_jacobi)

    def __repr__(self):
        return "LieAlgebra(%s, dim %d over %r)" % (self.name or "?", self.dim, self.field)


class Element:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: LieAlgebra, coords: Tuple[Scalar, ...]):
        self.algebra = algebra
        self.coords = coords

    def __add__(self, other: "Element") -> "Element":
        _same_algebra(self, other)
        f = self.algebra.field
        return Element(self.algebra, tuple(f.add(a, b) for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        _same_algebra(self, other)
        f = self.algebra.field
        return Element(self.algebra, tuple(f.sub(a, b) for a, b in zip(self.coords, other.coords)))

    def scale(self, c: Scalar) -> "Element":
        f = self.algebra.field
        return Element(self.algebra, tuple(f.mul(c, a) for a in self.coords))

    def is_zero(self) -> bool:
        f = self.algebra.field
        return all(f.is_zero(a) for a in self.coords)

    def __eq__(self, other):
        return (isinstance(other, Element) and self.algebra is other.algebra
                and self.coords == other.coords)

    def __repr__(self):
        f = self.algebra.field
        return "Element(%s)" % (", ".join(f.scalar_to_json(c) if isinstance(
            f.scalar_to_json(c), str) else str(f.scalar_to_json(c)) for c in self.coords))


def _same_algebra(x: Element, y: Element):
    if x.algebra is not y.algebra:
        raise ExactError("elements live in different algebras")


def bracket(x: Element, y: Element) -> Element:
    _same_algebra(x, y)
    return Element(x.algebra, x.algebra.bracket_coords(x.coords, y.coords))


def jacobi_check(g: LieAlgebra) -> Optional[Tuple[Tuple[int, int, int], Tuple[Scalar, ...]]]:
    """None when Jacobi holds on all basis triples, else the first violation."""
    f = g.field
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            bij = g.bracket_basis(i, j)
            for k in range(j + 1, n):
                acc = [f.zero()] * n
                ok = True
                # [[ei,ej],ek] + [[ej,ek],ei] + [[ek,ei],ej]
                for vec, other in ((bij, k), (g.bracket_basis(j, k), i),
                                   (g.bracket_basis(k, i), j)):
                    for p, c in vec.items():
                        for q, d in g.bracket_basis(p, other).items():
                            acc[q] = f.add(acc[q], f.mul(c, d))
                for q in range(n):
                    if not f.is_zero(acc[q]):
                        ok = False
                        break
                if not ok:
                    return ((i, j, k), tuple(acc))
    return None


def _center(g: LieAlgebra) -> Subspace:
    # x central iff [x, e_j] = 0 for all j: stack the sparse rows over (j, p)
    f = g.field
    rows = []
    for j in range(g.dim):
        per_coord: Dict[int, Dict[int, Scalar]] = {}
        for i in range(g.dim):
            if i == j:
                continue
            for p, c in g.bracket_basis(i, j).items():
                per_coord.setdefault(p, {})[i] = c
        rows.extend(per_coord.values())
    basis = kernel_sparse(rows, g.dim, f)
    return Subspace(f, g.dim, basis)


def _lower_central_series(g: LieAlgebra) -> List[Subspace]:
    f = g.field
    out = [Subspace.full(f, g.dim)]
    while True:
        cur = out[-1]
        vecs = []
        for i in range(g.dim):
            ei = [f.zero()] * g.dim
            ei[i] = f.one()
            for row in cur.rows:
                v = g.bracket_coords(ei, row)
                if any(not f.is_zero(a) for a in v):
                    vecs.append(v)
        nxt = Subspace(f, g.dim, vecs)
        if nxt == cur:
            break
        out.append(nxt)
    return out


def is_ideal(g: LieAlgebra, sub: Subspace) -> bool:
    f = g.field
    for i in range(g.dim):
        ei = [f.zero()] * g.dim
        ei[i] = f.one()
        for row in sub.rows:
            if not sub.contains(g.bracket_coords(ei, row)):
                return False
    return True


def quotient(g: LieAlgebra, ideal: Subspace) -> Tuple[LieAlgebra, Matrix]:
    """Quotient algebra on the lexicographically earliest complement basis.

    Returns (g/ideal, projection matrix).  The projection is verified to be
    a Lie morphism on basis pairs.
    """
    if ideal.ambient != g.dim or ideal.field != g.field:
        raise ExactError("ideal lives in the wrong space")
    if not is_ideal(g, ideal):
        raise ExactError("subspace is not an ideal")
    f = g.field
    pivots = [next(i for i, a in enumerate(row) if not f.is_zero(a)) for row in ideal.rows]
    pivot_set = set(pivots)
    comp = [i for i in range(g.dim) if i not in pivot_set]
    qdim = len(comp)
    pos = {c: k for k, c in enumerate(comp)}

    def project(vec: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        reduced = ideal.reduce(vec)
        return tuple(reduced[c] for c in comp)

    table: BracketTable = {}
    for a in range(qdim):
        for b in range(a + 1, qdim):
            v = g.bracket_basis(comp[a], comp[b])
            dense = [f.zero()] * g.dim
            for p, c in v.items():
                dense[p] = c
            proj = project(dense)
            vec = {k: c for k, c in enumerate(proj) if not f.is_zero(c)}
            if vec:
                table[(a, b)] = vec
    q = LieAlgebra(f, qdim, table, name="%s/ideal" % (g.name or "g"))
    proj_cols = []
    for i in range(g.dim):
        e = [f.zero()] * g.dim
        e[i] = f.one()
        proj_cols.append(project(e))
    proj = Matrix(f, [[proj_cols[i][r] for i in range(g.dim)] for r in range(qdim)],
                  cols=g.dim)
    # morphism check on basis pairs: pi[x, y] = [pi x, pi y]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            v = g.bracket_basis(i, j)
            dense = [f.zero()] * g.dim
            for p, c in v.items():
                dense[p] = c
            lhs = project(dense)
            rhs = q.bracket_coords(proj.column(i), proj.column(j))
            if any(not f.is_zero(f.sub(a, b)) for a, b in zip(lhs, rhs)):
                raise ExactError("quotient projection failed the morphism check")
    return q, proj


def direct_sum(g: LieAlgebra, h: LieAlgebra) -> LieAlgebra:
    if g.field != h.field:
        raise ExactError("direct sum needs a common field")
    table: BracketTable = {}
    for (i, j), vec in g.brackets.items():
        table[(i, j)] = dict(vec)
    off = g.dim
    for (i, j), vec in h.brackets.items():
        table[(i + off, j + off)] = {p + off: c for p, c in vec.items()}
    return LieAlgebra(g.field, g.dim + h.dim, table,
                      name="%s(+)%s" % (g.name or "g", h.name or "h"))


def semidirect(a: LieAlgebra, actions: Sequence[Matrix],
               acting: Optional[LieAlgebra] = None, name: str = "") -> LieAlgebra:
    """Semidirect product a x| s: basis of ``a`` first, acting basis last.

    ``actions[k]`` is the matrix of s_k acting on ``a``; each must be a
    derivation of ``a`` and the family must satisfy
    [rho(s_k), rho(s_l)] = rho([s_k, s_l]) exactly.  ``acting=None`` means an
    abelian acting space of dimension len(actions).
    """
    f = a.field
    m = len(actions)
    if acting is None:
        acting = LieAlgebra(f, m, {}, name="abelian")
    if acting.dim != m:
        raise ExactError("need one action per acting basis vector")
    for k, act in enumerate(actions):
        if act.rows != a.dim or act.cols != a.dim:
            raise ExactError("action %d has the wrong shape" % k)
        if not _matrix_is_derivation(a, act):
            raise ExactError("action %d is not a derivation of the ideal" % k)
    for k in range(m):
        for l in range(k + 1, m):
            comm = actions[k].commutator(actions[l])
            expect = Matrix.zero(f, a.dim, a.dim)
            for p, c in acting.bracket_basis(k, l).items():
                expect = expect.add(actions[p].scale(c))
            if not comm.sub(expect).is_zero():
                raise ExactError(
                    "actions are incompatible with the acting bracket at (%d, %d)" % (k + 1, l + 1))
    n = a.dim + m
    table: BracketTable = {}
    for (i, j), vec in a.brackets.items():
        table[(i, j)] = dict(vec)
    for k in range(m):
        col_mat = actions[k]
        for i in range(a.dim):
            col = [col_mat.entries[r][i] for r in range(a.dim)]
            vec = {r: f.neg(c) for r, c in enumerate(col) if not f.is_zero(c)}
            if vec:
                # [e_i, s_k] = -rho(s_k) e_i
                table[(i, a.dim + k)] = vec
    for (k, l), vec in acting.brackets.items():
        table[(a.dim + k, a.dim + l)] = {a.dim + p: c for p, c in vec.items()}
    # JacobiError from the constructor names the violating triple
    return LieAlgebra(f, n, table, name=name or "%s|x" % (a.name or "a"))


def _matrix_is_derivation(g: LieAlgebra, m: Matrix) -> bool:
    f = g.field
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = [f.zero()] * g.dim
            for p, c in g.bracket_basis(i, j).items():
                col = m.column(p)
                for r in range(g.dim):
                    lhs[r] = f.add(lhs[r], f.mul(c, col[r]))
            rhs = g.bracket_coords(m.column(i), _unit(f, g.dim, j))
            rhs2 = g.bracket_coords(_unit(f, g.dim, i), m.column(j))
            for r in range(g.dim):
                if not f.is_zero(f.sub(lhs[r], f.add(rhs[r], rhs2[r]))):
                    return False
    return True


def _unit(f: FieldSpec, n: int, i: int) -> List[Scalar]:
    v = [f.zero()] * n
    v[i] = f.one()
    return v
